#include "apeq/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdio>
#include <map>

namespace apeq {

const ExponentialSum* Workspace::find(const std::string& name) const {
  for (const auto& s : sums)
    if (s.name() == name) return &s;
  return nullptr;
}

namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind = End;
  std::string text;  // punct: single character
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
    tok_ = Token{Token::End, "", line_, col_};
    if (pos_ >= src_.size()) return;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::Ident;
      tok_.text = src_.substr(start, pos_ - start);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      bool dot = false;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              (src_[pos_] == '.' && !dot))) {
        if (src_[pos_] == '.') dot = true;
        ++pos_;
      }
      tok_.kind = Token::Number;
      tok_.text = src_.substr(start, pos_ - start);
    } else if (std::string("()<>,;=+-*/").find(c) != std::string::npos) {
      tok_.kind = Token::Punct;
      tok_.text = std::string(1, c);
      ++pos_;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_,
                       col_);
    }
    col_ = tok_.column + static_cast<int>(tok_.text.size());
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

[[noreturn]] void fail(const Token& t, const std::string& what) {
  throw ParseError(what + (t.kind == Token::End
                               ? " (at end of input)"
                               : " (got '" + t.text + "')"),
                   t.line, t.column);
}

struct Parser {
  Lexer lex;
  explicit Parser(const std::string& src) : lex(src) {}

  Token expect_punct(const std::string& p, const std::string& ctx) {
    Token t = lex.take();
    if (t.kind != Token::Punct || t.text != p)
      fail(t, "expected '" + p + "' " + ctx);
    return t;
  }
  Token expect_ident(const std::string& ctx) {
    Token t = lex.take();
    if (t.kind != Token::Ident) fail(t, "expected identifier " + ctx);
    return t;
  }
  bool at_punct(const std::string& p) const {
    return lex.peek().kind == Token::Punct && lex.peek().text == p;
  }

  // RAT := ("+"|"-")? INT ("/" INT)?
  Rat parse_rat() {
    bool neg = false;
    if (at_punct("-") || at_punct("+")) neg = lex.take().text == "-";
    Token num = lex.take();
    if (num.kind != Token::Number || num.text.find('.') != std::string::npos)
      fail(num, "expected integer in rational");
    Int n(num.text);
    Int d(1);
    if (at_punct("/")) {
      lex.take();
      Token den = lex.take();
      if (den.kind != Token::Number || den.text.find('.') != std::string::npos)
        fail(den, "expected integer denominator");
      d = Int(den.text);
      if (d == 0) fail(den, "zero denominator");
    }
    Rat q = make_rat(n, d);
    return neg ? Rat(-q) : q;
  }

  // DECIMAL := ("+"|"-")? digits ("." digits)?   (returned as written)
  std::pair<std::string, Token> parse_decimal() {
    std::string sign;
    Token first = lex.peek();
    if (at_punct("-") || at_punct("+")) sign = lex.take().text == "-" ? "-" : "";
    Token t = lex.take();
    if (t.kind != Token::Number) fail(t, "expected decimal literal");
    return {sign + t.text, first};
  }
};

struct SumDecl {
  std::string name;
  Token name_tok;
  bool exact_mode = true;
  struct TermDecl {
    ExactCoefficient exact;
    std::complex<double> numeric;
    // linear form: (symbol index in declared-name list, -1 for unit) -> coeff
    std::vector<std::pair<int, Rat>> parts;
    Token pos;
  };
  std::vector<TermDecl> terms;
};

int count_digits(const std::string& decimal) {
  int n = 0;
  for (char c : decimal)
    if (std::isdigit(static_cast<unsigned char>(c))) ++n;
  return n;
}

}  // namespace

Workspace parse(const std::string& source) {
  Parser p(source);
  Workspace ws;

  std::vector<std::pair<std::string, std::string>> symbols;  // name, decimal
  std::vector<SumDecl> decls;
  auto symbol_index = [&](const std::string& name) {
    for (size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].first == name) return static_cast<int>(i);
    return -1;
  };

  while (p.lex.peek().kind != Token::End) {
    Token kw = p.expect_ident("at start of statement");
    if (kw.text == "symbol") {
      Token name = p.expect_ident("after 'symbol'");
      if (name.text == "s" || name.text == "1")
        fail(name, "reserved symbol name");
      if (symbol_index(name.text) >= 0)
        fail(name, "duplicate symbol '" + name.text + "'");
      p.expect_punct("=", "in symbol declaration");
      auto [decimal, dtok] = p.parse_decimal();
      p.expect_punct(";", "after symbol declaration");
      if (count_digits(decimal) < 30)
        ws.warnings.push_back(
            {name.line, "symbol '" + name.text + "' has fewer than 30 digits"});
      symbols.emplace_back(name.text, decimal);
    } else if (kw.text == "sum") {
      SumDecl decl;
      decl.name_tok = p.expect_ident("after 'sum'");
      decl.name = decl.name_tok.text;
      for (const auto& d : decls)
        if (d.name == decl.name)
          fail(decl.name_tok, "duplicate sum name '" + decl.name + "'");
      p.expect_punct("=", "in sum declaration");
      for (;;) {
        SumDecl::TermDecl term;
        term.pos = p.lex.peek();
        bool exact;
        if (p.at_punct("(")) {
          exact = true;
          p.lex.take();
          Rat mod = p.parse_rat();
          p.expect_punct(",", "between modulus and phase");
          Rat turns = p.parse_rat();
          p.expect_punct(")", "after exact coefficient");
          if (mod < 0) fail(term.pos, "negative modulus");
          term.exact = ExactCoefficient(mod, turns);
        } else if (p.at_punct("<")) {
          exact = false;
          p.lex.take();
          auto [re, rtok] = p.parse_decimal();
          p.expect_punct(",", "between real and imaginary part");
          auto [im, itok] = p.parse_decimal();
          p.expect_punct(">", "after numeric coefficient");
          term.numeric = {std::stod(re), std::stod(im)};
        } else {
          fail(p.lex.peek(), "expected coefficient '(' or '<'");
        }
        if (decl.terms.empty())
          decl.exact_mode = exact;
        else if (decl.exact_mode != exact)
          fail(term.pos, "mixed coefficient modes within sum '" + decl.name + "'");
        p.expect_punct("*", "after coefficient");
        Token ek = p.expect_ident("'exp'");
        if (ek.text != "exp") fail(ek, "expected 'exp'");
        p.expect_punct("(", "after 'exp'");
        // lin := part (("+"|"-") part)*, closed by "*" "s" ")"
        bool first_part = true;
        for (;;) {
          int sign = 1;
          if (!first_part) {
            if (p.at_punct("+")) {
              p.lex.take();
            } else if (p.at_punct("-")) {
              p.lex.take();
              sign = -1;
            } else {
              fail(p.lex.peek(), "expected '+', '-' or '*s)' in exponent");
            }
          }
          first_part = false;
          Rat coeff = p.parse_rat() * sign;
          if (p.at_punct("+") || p.at_punct("-")) {
            term.parts.emplace_back(-1, coeff);  // unit part, more follow
            continue;
          }
          if (!p.at_punct("*")) fail(p.lex.peek(), "expected '*' in exponent");
          // lookahead: '*' binds a symbol name unless the next token is 's'
          p.lex.take();
          Token nm = p.lex.peek();
          if (nm.kind == Token::Ident && nm.text == "s") {
            p.lex.take();
            p.expect_punct(")", "after '*s'");
            term.parts.emplace_back(-1, coeff);
            break;
          }
          if (nm.kind != Token::Ident) fail(nm, "expected symbol name or 's'");
          p.lex.take();
          int idx = symbol_index(nm.text);
          if (idx < 0) fail(nm, "undeclared symbol '" + nm.text + "'");
          term.parts.emplace_back(idx, coeff);
          if (p.at_punct("*")) {
            p.lex.take();
            Token st = p.expect_ident("'s'");
            if (st.text != "s") fail(st, "expected 's'");
            p.expect_punct(")", "after '*s'");
            break;
          }
          // otherwise a '+'/'-' continues the linear form
        }
        decl.terms.push_back(std::move(term));
        if (p.at_punct("+")) {
          p.lex.take();
          continue;
        }
        p.expect_punct(";", "after sum declaration");
        break;
      }
      decls.push_back(std::move(decl));
    } else {
      fail(kw, "expected 'symbol' or 'sum'");
    }
  }

  // materialize: full table first so all coordinate vectors share one size
  auto table = std::make_shared<SymbolTable>();
  for (const auto& [name, decimal] : symbols) {
    try {
      table->declare(name, decimal);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), 1, 1);
    }
  }
  ws.table = table;
  const Eigen::Index K = table->size();

  for (const auto& decl : decls) {
    std::vector<Exponent> exps;
    std::vector<std::pair<Exponent, ExactCoefficient>> exact_terms;
    std::vector<std::pair<Exponent, std::complex<double>>> numeric_terms;
    for (const auto& term : decl.terms) {
      RatVector coords = RatVector::Zero(K);
      for (const auto& [idx, coeff] : term.parts)
        coords(idx + 1) += coeff;  // table slot 0 is the implicit unit
      Exponent e(ws.table, std::move(coords));
      if (std::find(exps.begin(), exps.end(), e) != exps.end())
        throw ParseError("duplicate exponent in sum '" + decl.name + "'",
                         term.pos.line, term.pos.column);
      exps.push_back(e);
      if (decl.exact_mode)
        exact_terms.emplace_back(std::move(e), term.exact);
      else
        numeric_terms.emplace_back(std::move(e), term.numeric);
    }
    ws.sums.push_back(decl.exact_mode
                          ? ExponentialSum::exact(decl.name, ws.table,
                                                  std::move(exact_terms))
                          : ExponentialSum::numeric(decl.name, ws.table,
                                                    std::move(numeric_terms)));
  }
  return ws;
}

namespace {

std::string lin_to_string(const SymbolTable& table, const RatVector& coords) {
  std::string out;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    if (coords(i) == 0) continue;
    Rat c = coords(i);
    if (out.empty()) {
      if (c < 0) {
        out += "-";
        c = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    out += rat_to_string(c);
    if (i > 0) out += "*" + table.name(i);
  }
  return out.empty() ? "0" : out;
}

std::string double_to_string(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  // the grammar has no exponent notation or bare '.'; fall back to a long
  // fixed form when the shortest form would not re-parse
  if (s.find('e') != std::string::npos || s.find('E') != std::string::npos ||
      s.find("inf") != std::string::npos || s.find("nan") != std::string::npos) {
    std::snprintf(buf, sizeof(buf), "%.40f", v);
    s = buf;
  }
  return s;
}

}  // namespace

std::string pretty_print(const Workspace& ws) {
  std::string out;
  const SymbolTable& table = *ws.table;
  for (Eigen::Index i = 1; i < table.size(); ++i)
    out += "symbol " + table.name(i) + " = " + table.value_text(i) + ";\n";
  for (const auto& f : ws.sums) {
    out += "sum " + f.name() + " =";
    bool first = true;
    for (const auto& t : f.terms()) {
      out += first ? " " : " + ";
      first = false;
      if (f.mode() == CoeffMode::Exact)
        out += "(" + rat_to_string(t.exact.modulus) + "," +
               rat_to_string(t.exact.phase_turns) + ")";
      else
        out += "<" + double_to_string(t.numeric.real()) + "," +
               double_to_string(t.numeric.imag()) + ">";
      out += "*exp(" + lin_to_string(table, t.exponent.coords()) + "*s)";
    }
    out += ";\n";
  }
  return out;
}

}  // namespace apeq
