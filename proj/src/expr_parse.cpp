#include "dpnppl/error.hpp"
#include "dpnppl/expr.hpp"

namespace dpnppl {

namespace {

ArithPtr parseFactor(Scanner& sc) {
  if (sc.tryPunct("-")) return aNeg(parseFactor(sc));
  if (sc.tryPunct("(")) {
    ArithPtr inner = parseArith(sc);
    sc.expectPunct(")");
    return inner;
  }
  if (sc.tryPunct("#")) return aCounter(sc.expectIdent("transition name"));
  const Token& t = sc.peek();
  if (t.kind == Token::Kind::Number) return aConst(sc.next().number);
  if (t.kind == Token::Kind::Ident) {
    if (t.text == "marking" && sc.peek(1).kind == Token::Kind::Punct &&
        sc.peek(1).text == "(") {
      sc.next();
      sc.next();
      std::string place = sc.expectIdent("place name");
      sc.expectPunct(")");
      return aMarking(place);
    }
    if (t.text == "true" || t.text == "false")
      sc.error("expected arithmetic expression");
    return aVar(sc.next().text);
  }
  sc.error("expected arithmetic expression");
}

ArithPtr parseTerm(Scanner& sc) {
  ArithPtr e = parseFactor(sc);
  while (sc.tryPunct("*")) e = aBin(ArithOp::Mul, e, parseFactor(sc));
  return e;
}

bool peekCmpOp(Scanner& sc, CmpOp& op) {
  const Token& t = sc.peek();
  if (t.kind != Token::Kind::Punct) return false;
  if (t.text == "<") op = CmpOp::Lt;
  else if (t.text == "<=") op = CmpOp::Le;
  else if (t.text == "=" || t.text == "==") op = CmpOp::Eq;
  else if (t.text == "!=") op = CmpOp::Ne;
  else if (t.text == ">=") op = CmpOp::Ge;
  else if (t.text == ">") op = CmpOp::Gt;
  else return false;
  return true;
}

BoolPtr parseComparison(Scanner& sc) {
  ArithPtr lhs = parseArith(sc);
  CmpOp op;
  if (!peekCmpOp(sc, op)) sc.error("expected comparison operator");
  sc.next();
  ArithPtr rhs = parseArith(sc);
  return bCmp(op, lhs, rhs);
}

BoolPtr parseBoolAtom(Scanner& sc) {
  if (sc.tryPunct("!")) return bNot(parseBoolAtom(sc));
  if (sc.peekIdent("true")) {
    sc.next();
    return bConst(true);
  }
  if (sc.peekIdent("false")) {
    sc.next();
    return bConst(false);
  }
  // A '(' may open either a boolean group or the left operand of a
  // comparison; try the boolean reading first and backtrack.
  if (sc.peek().kind == Token::Kind::Punct && sc.peek().text == "(") {
    std::size_t mark = sc.save();
    sc.next();
    try {
      BoolPtr inner = parseBool(sc);
      sc.expectPunct(")");
      CmpOp op;
      if (peekCmpOp(sc, op)) sc.error("comparison of boolean value");
      return inner;
    } catch (const Error&) {
      sc.restore(mark);
    }
  }
  return parseComparison(sc);
}

BoolPtr parseAnd(Scanner& sc) {
  BoolPtr e = parseBoolAtom(sc);
  while (sc.tryPunct("&&")) e = bAnd(e, parseBoolAtom(sc));
  return e;
}

}  // namespace

ArithPtr parseArith(Scanner& sc) {
  ArithPtr e = parseTerm(sc);
  while (true) {
    if (sc.tryPunct("+")) e = aBin(ArithOp::Add, e, parseTerm(sc));
    else if (sc.tryPunct("-")) e = aBin(ArithOp::Sub, e, parseTerm(sc));
    else return e;
  }
}

BoolPtr parseBool(Scanner& sc) {
  BoolPtr e = parseAnd(sc);
  while (sc.tryPunct("||")) e = bOr(e, parseAnd(sc));
  return e;
}

DistExpr parseDist(Scanner& sc) {
  auto args = [&](int n) {
    std::vector<ArithPtr> out;
    sc.expectPunct("(");
    for (int i = 0; i < n; i++) {
      if (i > 0) sc.expectPunct(",");
      out.push_back(parseArith(sc));
    }
    sc.expectPunct(")");
    return out;
  };
  if (sc.peekIdent("uniformInt") || sc.peekIdent("uniform")) {
    sc.next();
    auto a = args(2);
    return dUniformInt(a[0], a[1]);
  }
  if (sc.tryIdent("bernoulli")) {
    auto a = args(3);
    return dBernoulli(a[0], a[1], a[2]);
  }
  if (sc.tryIdent("dirac")) {
    auto a = args(1);
    return dDirac(a[0]);
  }
  if (sc.tryIdent("categorical")) {
    std::vector<std::pair<ArithPtr, ArithPtr>> entries;
    sc.expectPunct("(");
    do {
      ArithPtr value = parseArith(sc);
      sc.expectPunct(":");
      ArithPtr weight = parseArith(sc);
      entries.emplace_back(value, weight);
    } while (sc.tryPunct(","));
    sc.expectPunct(")");
    return dCategorical(std::move(entries));
  }
  return dDirac(parseArith(sc));
}

namespace {

template <typename T, typename F>
T parseAll(std::string_view text, F parse) {
  Scanner sc(text);
  T result = parse(sc);
  if (!sc.atEnd()) sc.error("trailing input");
  return result;
}

}  // namespace

ArithPtr parseArithText(std::string_view text) {
  return parseAll<ArithPtr>(text, [](Scanner& sc) { return parseArith(sc); });
}

BoolPtr parseBoolText(std::string_view text) {
  return parseAll<BoolPtr>(text, [](Scanner& sc) { return parseBool(sc); });
}

DistExpr parseDistText(std::string_view text) {
  return parseAll<DistExpr>(text, [](Scanner& sc) { return parseDist(sc); });
}

}  // namespace dpnppl
