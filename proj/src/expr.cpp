#include "dpnppl/expr.hpp"

#include "dpnppl/error.hpp"

namespace dpnppl {

ArithPtr aConst(Rat value) {
  return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::Const{std::move(value)}});
}
ArithPtr aVar(std::string name) {
  return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::Var{std::move(name)}});
}
ArithPtr aMarking(std::string place) {
  return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::Marking{std::move(place)}});
}
ArithPtr aCounter(std::string transition) {
  return std::make_shared<ArithExpr>(
      ArithExpr{ArithExpr::Counter{std::move(transition)}});
}
ArithPtr aNeg(ArithPtr arg) {
  return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::Neg{std::move(arg)}});
}
ArithPtr aBin(ArithOp op, ArithPtr lhs, ArithPtr rhs) {
  return std::make_shared<ArithExpr>(
      ArithExpr{ArithExpr::Bin{op, std::move(lhs), std::move(rhs)}});
}

BoolPtr bConst(bool value) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Const{value}});
}
BoolPtr bCmp(CmpOp op, ArithPtr lhs, ArithPtr rhs) {
  return std::make_shared<BoolExpr>(
      BoolExpr{BoolExpr::Cmp{op, std::move(lhs), std::move(rhs)}});
}
BoolPtr bNot(BoolPtr arg) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Not{std::move(arg)}});
}
BoolPtr bAnd(BoolPtr lhs, BoolPtr rhs) {
  return std::make_shared<BoolExpr>(
      BoolExpr{BoolExpr::Bin{true, std::move(lhs), std::move(rhs)}});
}
BoolPtr bOr(BoolPtr lhs, BoolPtr rhs) {
  return std::make_shared<BoolExpr>(
      BoolExpr{BoolExpr::Bin{false, std::move(lhs), std::move(rhs)}});
}

BoolPtr bAndAll(const std::vector<BoolPtr>& conjuncts) {
  if (conjuncts.empty()) return bConst(true);
  BoolPtr acc = conjuncts.front();
  for (std::size_t i = 1; i < conjuncts.size(); i++) acc = bAnd(acc, conjuncts[i]);
  return acc;
}

DistExpr dDirac(ArithPtr value) { return DistExpr{DistExpr::Dirac{std::move(value)}}; }
DistExpr dUniformInt(ArithPtr lo, ArithPtr hi) {
  return DistExpr{DistExpr::UniformInt{std::move(lo), std::move(hi)}};
}
DistExpr dBernoulli(ArithPtr p, ArithPtr a, ArithPtr b) {
  return DistExpr{DistExpr::Bernoulli{std::move(p), std::move(a), std::move(b)}};
}
DistExpr dCategorical(std::vector<std::pair<ArithPtr, ArithPtr>> entries) {
  return DistExpr{DistExpr::Categorical{std::move(entries)}};
}

bool isPrimedName(const std::string& name) {
  return !name.empty() && name.back() == '\'';
}

std::string baseName(const std::string& name) {
  return isPrimedName(name) ? name.substr(0, name.size() - 1) : name;
}

bool exprEq(const ArithPtr& a, const ArithPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, ArithExpr::Const>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ArithExpr::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, ArithExpr::Marking>) {
          return x.place == y.place;
        } else if constexpr (std::is_same_v<T, ArithExpr::Counter>) {
          return x.transition == y.transition;
        } else if constexpr (std::is_same_v<T, ArithExpr::Neg>) {
          return exprEq(x.arg, y.arg);
        } else {
          return x.op == y.op && exprEq(x.lhs, y.lhs) && exprEq(x.rhs, y.rhs);
        }
      },
      a->node);
}

bool exprEq(const BoolPtr& a, const BoolPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, BoolExpr::Const>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          return x.op == y.op && exprEq(x.lhs, y.lhs) && exprEq(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          return exprEq(x.arg, y.arg);
        } else {
          return x.conj == y.conj && exprEq(x.lhs, y.lhs) && exprEq(x.rhs, y.rhs);
        }
      },
      a->node);
}

bool exprEq(const DistExpr& a, const DistExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, DistExpr::Dirac>) {
          return exprEq(x.value, y.value);
        } else if constexpr (std::is_same_v<T, DistExpr::UniformInt>) {
          return exprEq(x.lo, y.lo) && exprEq(x.hi, y.hi);
        } else if constexpr (std::is_same_v<T, DistExpr::Bernoulli>) {
          return exprEq(x.p, y.p) && exprEq(x.a, y.a) && exprEq(x.b, y.b);
        } else {
          if (x.entries.size() != y.entries.size()) return false;
          for (std::size_t i = 0; i < x.entries.size(); i++) {
            if (!exprEq(x.entries[i].first, y.entries[i].first) ||
                !exprEq(x.entries[i].second, y.entries[i].second))
              return false;
          }
          return true;
        }
      },
      a.node);
}

void collectRefs(const ArithPtr& e, NameRefs& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ArithExpr::Var>) {
          out.vars.insert(x.name);
        } else if constexpr (std::is_same_v<T, ArithExpr::Marking>) {
          out.markings.insert(x.place);
        } else if constexpr (std::is_same_v<T, ArithExpr::Counter>) {
          out.counters.insert(x.transition);
        } else if constexpr (std::is_same_v<T, ArithExpr::Neg>) {
          collectRefs(x.arg, out);
        } else if constexpr (std::is_same_v<T, ArithExpr::Bin>) {
          collectRefs(x.lhs, out);
          collectRefs(x.rhs, out);
        }
      },
      e->node);
}

void collectRefs(const BoolPtr& e, NameRefs& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          collectRefs(x.lhs, out);
          collectRefs(x.rhs, out);
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          collectRefs(x.arg, out);
        } else if constexpr (std::is_same_v<T, BoolExpr::Bin>) {
          collectRefs(x.lhs, out);
          collectRefs(x.rhs, out);
        }
      },
      e->node);
}

void collectRefs(const DistExpr& d, NameRefs& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DistExpr::Dirac>) {
          collectRefs(x.value, out);
        } else if constexpr (std::is_same_v<T, DistExpr::UniformInt>) {
          collectRefs(x.lo, out);
          collectRefs(x.hi, out);
        } else if constexpr (std::is_same_v<T, DistExpr::Bernoulli>) {
          collectRefs(x.p, out);
          collectRefs(x.a, out);
          collectRefs(x.b, out);
        } else {
          for (const auto& [value, weight] : x.entries) {
            collectRefs(value, out);
            collectRefs(weight, out);
          }
        }
      },
      d.node);
}

const Rat& Env::get(const std::string& name) const {
  auto it = vars_.find(name);
  if (it == vars_.end())
    fail(ErrorKind::UnboundVariable, "variable '" + name + "' is not bound");
  return it->second;
}

const Rat& Env::getMarking(const std::string& place) const {
  auto it = markings_.find(place);
  if (it == markings_.end())
    fail(ErrorKind::UnboundVariable,
         "marking reference to unknown place '" + place + "'");
  return it->second;
}

void Distribution::add(const Rat& value, const Rat& mass) {
  if (mass.sign() < 0)
    fail(ErrorKind::MalformedDistribution, "negative mass " + mass.str());
  if (mass.isZero()) return;
  entries_[value] += mass;
}

Rat Distribution::massAt(const Rat& value) const {
  auto it = entries_.find(value);
  return it == entries_.end() ? Rat(0) : it->second;
}

Rat Distribution::totalMass() const {
  Rat total(0);
  for (const auto& [value, mass] : entries_) total += mass;
  return total;
}

Distribution Distribution::normalized() const {
  Rat total = totalMass();
  if (total.isZero()) return *this;
  Distribution out;
  for (const auto& [value, mass] : entries_) out.add(value, mass / total);
  return out;
}

Rat evalArith(const ArithPtr& e, const Env& env) {
  return std::visit(
      [&](const auto& x) -> Rat {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ArithExpr::Const>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, ArithExpr::Var>) {
          return env.get(x.name);
        } else if constexpr (std::is_same_v<T, ArithExpr::Marking>) {
          return env.getMarking(x.place);
        } else if constexpr (std::is_same_v<T, ArithExpr::Counter>) {
          fail(ErrorKind::UnboundVariable,
               "transition counter #" + x.transition +
                   " is only available after counter injection");
        } else if constexpr (std::is_same_v<T, ArithExpr::Neg>) {
          return -evalArith(x.arg, env);
        } else {
          Rat l = evalArith(x.lhs, env);
          Rat r = evalArith(x.rhs, env);
          switch (x.op) {
            case ArithOp::Add: return l + r;
            case ArithOp::Sub: return l - r;
            case ArithOp::Mul: return l * r;
          }
          return Rat(0);
        }
      },
      e->node);
}

bool evalBool(const BoolPtr& e, const Env& env) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Const>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          Rat l = evalArith(x.lhs, env);
          Rat r = evalArith(x.rhs, env);
          switch (x.op) {
            case CmpOp::Lt: return l < r;
            case CmpOp::Le: return l <= r;
            case CmpOp::Eq: return l == r;
            case CmpOp::Ne: return l != r;
            case CmpOp::Ge: return l >= r;
            case CmpOp::Gt: return l > r;
          }
          return false;
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          return !evalBool(x.arg, env);
        } else {
          if (x.conj) return evalBool(x.lhs, env) && evalBool(x.rhs, env);
          return evalBool(x.lhs, env) || evalBool(x.rhs, env);
        }
      },
      e->node);
}

Rat iverson(const BoolPtr& e, const Env& env) {
  return evalBool(e, env) ? Rat(1) : Rat(0);
}

Rat evalProb(const ArithPtr& e, const Env& env) {
  Rat p = evalArith(e, env);
  if (p.sign() < 0 || p > Rat(1))
    fail(ErrorKind::MalformedDistribution,
         "probability " + p.str() + " outside [0,1]");
  return p;
}

Distribution evalDist(const DistExpr& d, const Env& env) {
  Distribution out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DistExpr::Dirac>) {
          out.add(evalArith(x.value, env), Rat(1));
        } else if constexpr (std::is_same_v<T, DistExpr::UniformInt>) {
          Rat lo = evalArith(x.lo, env);
          Rat hi = evalArith(x.hi, env);
          if (!lo.isInteger() || !hi.isInteger())
            fail(ErrorKind::MalformedDistribution,
                 "uniformInt bounds must be integers, got " + lo.str() + ".." +
                     hi.str());
          long long a = lo.asInt();
          long long b = hi.asInt();
          if (a > b)
            fail(ErrorKind::MalformedDistribution,
                 "uniformInt bounds inverted: " + lo.str() + " > " + hi.str());
          // Exact enumeration needs the whole support in memory.
          if (b - a >= 1000000)
            fail(ErrorKind::InfiniteSupport,
                 "uniformInt support too large: " + lo.str() + ".." + hi.str());
          Rat each(1, b - a + 1);
          for (long long v = a; v <= b; v++) out.add(Rat(v), each);
        } else if constexpr (std::is_same_v<T, DistExpr::Bernoulli>) {
          Rat p = evalProb(x.p, env);
          out.add(evalArith(x.a, env), p);
          out.add(evalArith(x.b, env), Rat(1) - p);
        } else {
          Rat total(0);
          for (const auto& [value, weight] : x.entries) {
            Rat w = evalProb(weight, env);
            out.add(evalArith(value, env), w);
            total += w;
          }
          if (total != Rat(1))
            fail(ErrorKind::MalformedDistribution,
                 "categorical weights sum to " + total.str() + ", expected 1");
        }
      },
      d.node);
  return out;
}

}  // namespace dpnppl
