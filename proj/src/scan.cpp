#include "dpnppl/scan.hpp"

#include <cctype>

#include "dpnppl/error.hpp"

namespace dpnppl {

namespace {

bool identStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool identBody(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool isDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

Scanner::Scanner(std::string_view src) {
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      i++;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') i++;
      continue;
    }
    Token tok;
    tok.offset = i;
    if (identStart(c)) {
      std::size_t start = i;
      while (i < n && identBody(src[i])) i++;
      if (i < n && src[i] == '\'') i++;
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(src.substr(start, i - start));
    } else if (isDigit(c)) {
      std::size_t start = i;
      while (i < n && isDigit(src[i])) i++;
      if (i < n && src[i] == '.' && i + 1 < n && isDigit(src[i + 1])) {
        i++;
        while (i < n && isDigit(src[i])) i++;
      } else if (i < n && src[i] == '/' && i + 1 < n && isDigit(src[i + 1])) {
        i++;
        while (i < n && isDigit(src[i])) i++;
      }
      tok.kind = Token::Kind::Number;
      tok.text = std::string(src.substr(start, i - start));
      tok.number = Rat::parse(tok.text);
    } else {
      static const char* two[] = {"&&", "||", "<=", ">=", "!=", "==",
                                  "->", ":=", "[]"};
      tok.kind = Token::Kind::Punct;
      tok.text = std::string(1, c);
      if (i + 1 < n) {
        std::string pair{c, src[i + 1]};
        for (const char* p : two) {
          if (pair == p) {
            tok.text = pair;
            break;
          }
        }
      }
      i += tok.text.size();
      static const std::string singles = "()[]{},;:=<>+-*/!#";
      if (tok.text.size() == 1 && singles.find(c) == std::string::npos) {
        throw Error(ErrorKind::ParseError,
                    "unexpected character '" + tok.text + "' at offset " +
                        std::to_string(tok.offset));
      }
    }
    tokens_.push_back(std::move(tok));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.offset = n;
  tokens_.push_back(std::move(end));
}

const Token& Scanner::peek(std::size_t lookahead) const {
  std::size_t i = pos_ + lookahead;
  if (i >= tokens_.size()) i = tokens_.size() - 1;
  return tokens_[i];
}

Token Scanner::next() {
  Token t = peek();
  if (pos_ + 1 < tokens_.size()) pos_++;
  return t;
}

bool Scanner::atEnd() const { return peek().kind == Token::Kind::End; }

bool Scanner::tryPunct(std::string_view p) {
  if (peek().kind == Token::Kind::Punct && peek().text == p) {
    next();
    return true;
  }
  return false;
}

void Scanner::expectPunct(std::string_view p) {
  if (!tryPunct(p)) error("expected '" + std::string(p) + "'");
}

bool Scanner::peekIdent(std::string_view word) const {
  return peek().kind == Token::Kind::Ident && peek().text == word;
}

bool Scanner::tryIdent(std::string_view word) {
  if (peekIdent(word)) {
    next();
    return true;
  }
  return false;
}

std::string Scanner::expectIdent(const char* what) {
  if (peek().kind != Token::Kind::Ident) error(std::string("expected ") + what);
  return next().text;
}

void Scanner::error(const std::string& message) const {
  const Token& t = peek();
  std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
  throw Error(ErrorKind::ParseError, message + " at offset " +
                                         std::to_string(t.offset) + ", got " + got);
}

}  // namespace dpnppl
