#pragma once

#include <string>
#include <vector>

#include "apeq/sums.hpp"

namespace apeq {

/// Bundled example pair; both sums share one symbol table.
struct CorpusEntry {
  std::string name;
  std::string description;
  ExponentialSum f1, f2;
};

/// The curated pairs shipped with the tool, built once on first use.
const std::vector<CorpusEntry>& corpus();

/// Entry by name, nullptr when absent.
const CorpusEntry* corpus_find(const std::string& name);

}  // namespace apeq
