#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dpnppl/rat.hpp"
#include "dpnppl/scan.hpp"

namespace dpnppl {

struct ArithExpr;
struct BoolExpr;
using ArithPtr = std::shared_ptr<const ArithExpr>;
using BoolPtr = std::shared_ptr<const BoolExpr>;

enum class ArithOp { Add, Sub, Mul };
enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };

// Arithmetic over exact rationals. Variable names may carry a trailing
// apostrophe (next-state copies in guards). marking(p) and #t references are
// resolved either against a net state or by rewriting to program variables.
struct ArithExpr {
  struct Const { Rat value; };
  struct Var { std::string name; };
  struct Marking { std::string place; };
  struct Counter { std::string transition; };
  struct Neg { ArithPtr arg; };
  struct Bin { ArithOp op; ArithPtr lhs, rhs; };
  std::variant<Const, Var, Marking, Counter, Neg, Bin> node;
};

struct BoolExpr {
  struct Const { bool value; };
  struct Cmp { CmpOp op; ArithPtr lhs, rhs; };
  struct Not { BoolPtr arg; };
  struct Bin { bool conj; BoolPtr lhs, rhs; };
  std::variant<Const, Cmp, Not, Bin> node;
};

ArithPtr aConst(Rat value);
ArithPtr aVar(std::string name);
ArithPtr aMarking(std::string place);
ArithPtr aCounter(std::string transition);
ArithPtr aNeg(ArithPtr arg);
ArithPtr aBin(ArithOp op, ArithPtr lhs, ArithPtr rhs);

BoolPtr bConst(bool value);
BoolPtr bCmp(CmpOp op, ArithPtr lhs, ArithPtr rhs);
BoolPtr bNot(BoolPtr arg);
BoolPtr bAnd(BoolPtr lhs, BoolPtr rhs);
BoolPtr bOr(BoolPtr lhs, BoolPtr rhs);
// Conjunction of a possibly empty list; empty list is the constant true.
BoolPtr bAndAll(const std::vector<BoolPtr>& conjuncts);

struct DistExpr {
  struct Dirac { ArithPtr value; };
  struct UniformInt { ArithPtr lo, hi; };
  struct Bernoulli { ArithPtr p, a, b; };
  struct Categorical { std::vector<std::pair<ArithPtr, ArithPtr>> entries; };
  std::variant<Dirac, UniformInt, Bernoulli, Categorical> node;
};

DistExpr dDirac(ArithPtr value);
DistExpr dUniformInt(ArithPtr lo, ArithPtr hi);
DistExpr dBernoulli(ArithPtr p, ArithPtr a, ArithPtr b);
DistExpr dCategorical(std::vector<std::pair<ArithPtr, ArithPtr>> entries);

bool exprEq(const ArithPtr& a, const ArithPtr& b);
bool exprEq(const BoolPtr& a, const BoolPtr& b);
bool exprEq(const DistExpr& a, const DistExpr& b);

// Names referenced by an expression, split by reference form.
struct NameRefs {
  std::set<std::string> vars;
  std::set<std::string> markings;
  std::set<std::string> counters;
};

void collectRefs(const ArithPtr& e, NameRefs& out);
void collectRefs(const BoolPtr& e, NameRefs& out);
void collectRefs(const DistExpr& d, NameRefs& out);

bool isPrimedName(const std::string& name);
std::string baseName(const std::string& name);

// Variable environment. Lookup of an unbound name is an error, never a
// default. Markings live in a separate namespace so that place and variable
// names cannot shadow each other.
class Env {
 public:
  void set(const std::string& name, Rat value) { vars_[name] = std::move(value); }
  const Rat& get(const std::string& name) const;
  bool has(const std::string& name) const { return vars_.count(name) != 0; }
  void setMarking(const std::string& place, Rat count) {
    markings_[place] = std::move(count);
  }
  const Rat& getMarking(const std::string& place) const;
  const std::map<std::string, Rat>& vars() const { return vars_; }

  friend bool operator==(const Env& a, const Env& b) {
    return a.vars_ == b.vars_ && a.markings_ == b.markings_;
  }
  friend bool operator<(const Env& a, const Env& b) {
    if (a.vars_ != b.vars_) return a.vars_ < b.vars_;
    return a.markings_ < b.markings_;
  }

 private:
  std::map<std::string, Rat> vars_;
  std::map<std::string, Rat> markings_;
};

// Finite-support map from value to mass. Zero-mass points are not stored, so
// the all-zero subdistribution is the empty map. The kind flag distinguishes
// full distributions (mass exactly 1) from subdistributions (mass <= 1).
class Distribution {
 public:
  void add(const Rat& value, const Rat& mass);
  Rat massAt(const Rat& value) const;
  Rat totalMass() const;
  const std::map<Rat, Rat>& entries() const { return entries_; }
  bool isDistribution() const { return totalMass() == Rat(1); }
  // Divides by total mass; all-zero input normalizes to itself.
  Distribution normalized() const;

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::map<Rat, Rat> entries_;
};

Rat evalArith(const ArithPtr& e, const Env& env);
bool evalBool(const BoolPtr& e, const Env& env);
Rat iverson(const BoolPtr& e, const Env& env);
// Evaluates and checks the result lies in [0,1].
Rat evalProb(const ArithPtr& e, const Env& env);
// Always yields a full distribution (mass exactly 1) or fails.
Distribution evalDist(const DistExpr& d, const Env& env);

// Parsers over a shared scanner, so larger grammars can embed expressions.
// The *Text forms require the whole input to be consumed.
ArithPtr parseArith(Scanner& sc);
BoolPtr parseBool(Scanner& sc);
DistExpr parseDist(Scanner& sc);
ArithPtr parseArithText(std::string_view text);
BoolPtr parseBoolText(std::string_view text);
DistExpr parseDistText(std::string_view text);

std::string arithToString(const ArithPtr& e);
std::string boolToString(const BoolPtr& e);
std::string distToString(const DistExpr& d);

}  // namespace dpnppl
