#include <iostream>

#include "apeq/cli.hpp"

int main(int argc, char** argv) {
  return apeq::cli::run(argc, argv, std::cout, std::cerr);
}
