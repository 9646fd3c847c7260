#include <sstream>

#include "dpnppl/expr.hpp"

namespace dpnppl {

namespace {

// Precedence levels used for minimal parenthesization. Arithmetic: additive 1,
// multiplicative 2, atoms 3. Boolean: or 1, and 2, atoms 3. Left-associative
// operators parenthesize a same-level right child so reparsing rebuilds the
// identical tree.
int arithLevel(const ArithPtr& e) {
  if (const auto* bin = std::get_if<ArithExpr::Bin>(&e->node))
    return bin->op == ArithOp::Mul ? 2 : 1;
  return 3;
}

void printArith(std::ostream& os, const ArithPtr& e);

void printWrapped(std::ostream& os, const ArithPtr& e, int minLevel) {
  if (arithLevel(e) < minLevel) {
    os << "(";
    printArith(os, e);
    os << ")";
  } else {
    printArith(os, e);
  }
}

void printArith(std::ostream& os, const ArithPtr& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ArithExpr::Const>) {
          os << x.value.str();
        } else if constexpr (std::is_same_v<T, ArithExpr::Var>) {
          os << x.name;
        } else if constexpr (std::is_same_v<T, ArithExpr::Marking>) {
          os << "marking(" << x.place << ")";
        } else if constexpr (std::is_same_v<T, ArithExpr::Counter>) {
          os << "#" << x.transition;
        } else if constexpr (std::is_same_v<T, ArithExpr::Neg>) {
          os << "-";
          printWrapped(os, x.arg, 3);
        } else {
          int level = x.op == ArithOp::Mul ? 2 : 1;
          printWrapped(os, x.lhs, level);
          switch (x.op) {
            case ArithOp::Add: os << " + "; break;
            case ArithOp::Sub: os << " - "; break;
            case ArithOp::Mul: os << " * "; break;
          }
          printWrapped(os, x.rhs, level + 1);
        }
      },
      e->node);
}

int boolLevel(const BoolPtr& e) {
  if (const auto* bin = std::get_if<BoolExpr::Bin>(&e->node))
    return bin->conj ? 2 : 1;
  return 3;
}

void printBool(std::ostream& os, const BoolPtr& e);

void printBoolWrapped(std::ostream& os, const BoolPtr& e, int minLevel) {
  if (boolLevel(e) < minLevel) {
    os << "(";
    printBool(os, e);
    os << ")";
  } else {
    printBool(os, e);
  }
}

const char* cmpOpText(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

void printBool(std::ostream& os, const BoolPtr& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Const>) {
          os << (x.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          printWrapped(os, x.lhs, 1);
          os << " " << cmpOpText(x.op) << " ";
          printWrapped(os, x.rhs, 1);
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          os << "!";
          printBoolWrapped(os, x.arg, 3);
        } else {
          int level = x.conj ? 2 : 1;
          printBoolWrapped(os, x.lhs, level);
          os << (x.conj ? " && " : " || ");
          printBoolWrapped(os, x.rhs, level + 1);
        }
      },
      e->node);
}

}  // namespace

std::string arithToString(const ArithPtr& e) {
  std::ostringstream os;
  printArith(os, e);
  return os.str();
}

std::string boolToString(const BoolPtr& e) {
  std::ostringstream os;
  printBool(os, e);
  return os.str();
}

std::string distToString(const DistExpr& d) {
  std::ostringstream os;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DistExpr::Dirac>) {
          os << arithToString(x.value);
        } else if constexpr (std::is_same_v<T, DistExpr::UniformInt>) {
          os << "uniformInt(" << arithToString(x.lo) << ", "
             << arithToString(x.hi) << ")";
        } else if constexpr (std::is_same_v<T, DistExpr::Bernoulli>) {
          os << "bernoulli(" << arithToString(x.p) << ", " << arithToString(x.a)
             << ", " << arithToString(x.b) << ")";
        } else {
          os << "categorical(";
          bool first = true;
          for (const auto& [value, weight] : x.entries) {
            if (!first) os << ", ";
            first = false;
            os << arithToString(value) << ": " << arithToString(weight);
          }
          os << ")";
        }
      },
      d.node);
  return os.str();
}

}  // namespace dpnppl
