#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dpnppl/rat.hpp"

namespace dpnppl {

// Shared tokenizer for expression text, scheduler entries, and program text.
// Identifiers may carry one trailing apostrophe (primed variables). Rational
// literals are a single token: integer, decimal, or p/q with no spaces.
// Line comments start with //.
struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  Rat number;
  std::size_t offset = 0;
};

class Scanner {
 public:
  explicit Scanner(std::string_view src);

  const Token& peek(std::size_t lookahead = 0) const;
  Token next();
  bool atEnd() const;

  bool tryPunct(std::string_view p);
  void expectPunct(std::string_view p);
  bool peekIdent(std::string_view word) const;
  bool tryIdent(std::string_view word);
  std::string expectIdent(const char* what = "identifier");

  std::size_t save() const { return pos_; }
  void restore(std::size_t pos) { pos_ = pos; }

  [[noreturn]] void error(const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace dpnppl
