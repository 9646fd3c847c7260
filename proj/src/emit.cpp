#include <string>
#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/translate.hpp"

namespace dpnppl {

namespace {

// The webppl flavor is write-only. Programs mutate nothing: every command
// maps an immutable record {s, logs} to a new one, loops recurse, and fully
// parenthesized expressions keep the emitter trivial; goldens keep it honest.
std::string wArith(const ArithPtr& e, const std::string& rec) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ArithExpr::Const>) {
          return "(" + x.value.str() + ")";
        } else if constexpr (std::is_same_v<T, ArithExpr::Var>) {
          return rec + ".s." + x.name;
        } else if constexpr (std::is_same_v<T, ArithExpr::Marking> ||
                             std::is_same_v<T, ArithExpr::Counter>) {
          fail(ErrorKind::InvalidProgram,
               "net-level reference survived into an emitted program");
        } else if constexpr (std::is_same_v<T, ArithExpr::Neg>) {
          return "(-" + wArith(x.arg, rec) + ")";
        } else {
          const char* op = x.op == ArithOp::Add ? " + "
                           : x.op == ArithOp::Sub ? " - "
                                                  : " * ";
          return "(" + wArith(x.lhs, rec) + op + wArith(x.rhs, rec) + ")";
        }
      },
      e->node);
}

std::string wBool(const BoolPtr& e, const std::string& rec) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Const>) {
          return x.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          const char* op = nullptr;
          switch (x.op) {
            case CmpOp::Lt: op = " < "; break;
            case CmpOp::Le: op = " <= "; break;
            case CmpOp::Eq: op = " == "; break;
            case CmpOp::Ne: op = " != "; break;
            case CmpOp::Ge: op = " >= "; break;
            case CmpOp::Gt: op = " > "; break;
          }
          return "(" + wArith(x.lhs, rec) + op + wArith(x.rhs, rec) + ")";
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          return "!" + wBool(x.arg, rec);
        } else {
          return "(" + wBool(x.lhs, rec) + (x.conj ? " && " : " || ") +
                 wBool(x.rhs, rec) + ")";
        }
      },
      e->node);
}

std::string wDist(const DistExpr& d, const std::string& rec) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DistExpr::Dirac>) {
          return wArith(x.value, rec);
        } else if constexpr (std::is_same_v<T, DistExpr::UniformInt>) {
          return "(" + wArith(x.lo, rec) + " + sample(RandomInteger({n: " +
                 wArith(x.hi, rec) + " - " + wArith(x.lo, rec) + " + 1})))";
        } else if constexpr (std::is_same_v<T, DistExpr::Bernoulli>) {
          return "(flip(" + wArith(x.p, rec) + ") ? " + wArith(x.a, rec) +
                 " : " + wArith(x.b, rec) + ")";
        } else {
          std::string vs, ps;
          for (std::size_t i = 0; i < x.entries.size(); i++) {
            if (i) {
              vs += ", ";
              ps += ", ";
            }
            vs += wArith(x.entries[i].first, rec);
            ps += wArith(x.entries[i].second, rec);
          }
          return "sample(Categorical({vs: [" + vs + "], ps: [" + ps + "]}))";
        }
      },
      d.node);
}

struct Emitter {
  std::string out;
  int fresh = 0;

  std::string name(const char* prefix) {
    return prefix + std::to_string(fresh++);
  }
  void line(int depth, const std::string& text) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += text;
    out += '\n';
  }
};

std::string emitCmd(Emitter& em, const CommandPtr& c, std::string rec,
                    int depth);

// Branch bodies become named functions so both the one-shot choice and the
// recursive loop dispatch over the same shape.
std::vector<std::string> emitBodies(Emitter& em, const GuardedPtr& gc,
                                    const std::string& tag, int depth) {
  std::vector<const GuardedCommand::Branch*> branches = branchesOf(*gc);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < branches.size(); i++) {
    names.push_back(tag + "_" + std::to_string(i));
    em.line(depth, "var " + names.back() + " = function(r) {");
    std::string end = emitCmd(em, branches[i]->body, "r", depth + 1);
    em.line(depth + 1, "return " + end + ";");
    em.line(depth, "};");
  }
  return names;
}

void emitSelection(Emitter& em, const GuardedPtr& gc, int depth) {
  std::vector<const GuardedCommand::Branch*> branches = branchesOf(*gc);
  std::string guards, weights;
  for (std::size_t i = 0; i < branches.size(); i++) {
    if (i) {
      guards += ", ";
      weights += ", ";
    }
    guards += wBool(branches[i]->guard, "r");
    weights += wArith(branches[i]->weight, "r");
  }
  em.line(depth, "var guards = [" + guards + "];");
  em.line(depth, "var held = filter(function(i) { return guards[i]; }, "
                 "_.range(" + std::to_string(branches.size()) + "));");
}

std::string dispatchExpr(const std::vector<std::string>& bodies) {
  std::string e;
  for (std::size_t i = 0; i + 1 < bodies.size(); i++)
    e += "(k == " + std::to_string(i) + ") ? " + bodies[i] + "(r) : ";
  return e + bodies.back() + "(r)";
}

void emitPick(Emitter& em, const GuardedPtr& gc, int depth) {
  std::vector<const GuardedCommand::Branch*> branches = branchesOf(*gc);
  std::string weights;
  for (std::size_t i = 0; i < branches.size(); i++) {
    if (i) weights += ", ";
    weights += wArith(branches[i]->weight, "r");
  }
  em.line(depth, "var weights = [" + weights + "];");
  em.line(depth,
          "var k = pickWeighted(held, map(function(i) { return weights[i]; "
          "}, held));");
}

std::string emitCmd(Emitter& em, const CommandPtr& c, std::string rec,
                    int depth) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Command::Skip>) {
          return rec;
        } else if constexpr (std::is_same_v<T, Command::Assign>) {
          std::string next = em.name("r");
          em.line(depth, "var " + next + " = {s: _.extend({}, " + rec +
                             ".s, {" + x.var + ": " + wDist(x.dist, rec) +
                             "}), logs: " + rec + ".logs};");
          return next;
        } else if constexpr (std::is_same_v<T, Command::Observe>) {
          em.line(depth, "condition(" + wBool(x.cond, rec) + ");");
          return rec;
        } else if constexpr (std::is_same_v<T, Command::Log>) {
          std::string entry = "{activity: \"" + x.msg.label + "\"";
          for (const auto& [key, var] : x.msg.fields)
            entry += ", \"" + key + "\": " + rec + ".s." + var;
          entry += "}";
          std::string next = em.name("r");
          em.line(depth, "var " + next + " = {s: " + rec + ".s, logs: " + rec +
                             ".logs.concat([" + entry + "])};");
          return next;
        } else if constexpr (std::is_same_v<T, Command::Seq>) {
          std::string mid = emitCmd(em, x.first, rec, depth);
          return emitCmd(em, x.second, mid, depth);
        } else if constexpr (std::is_same_v<T, Command::Cond>) {
          std::string tag = em.name("branch");
          std::vector<std::string> bodies =
              emitBodies(em, x.branches, tag, depth);
          std::string pick = em.name("pick");
          em.line(depth, "var " + pick + " = function(r) {");
          emitSelection(em, x.branches, depth + 1);
          em.line(depth + 1, "condition(held.length > 0);");
          emitPick(em, x.branches, depth + 1);
          em.line(depth + 1, "return " + dispatchExpr(bodies) + ";");
          em.line(depth, "};");
          std::string next = em.name("r");
          em.line(depth, "var " + next + " = " + pick + "(" + rec + ");");
          return next;
        } else {
          std::string tag = em.name("branch");
          std::vector<std::string> bodies =
              emitBodies(em, x.branches, tag, depth);
          std::string loop = em.name("loop");
          em.line(depth, "var " + loop + " = function(r) {");
          emitSelection(em, x.branches, depth + 1);
          em.line(depth + 1, "if (held.length == 0) { return r; }");
          emitPick(em, x.branches, depth + 1);
          em.line(depth + 1, "return " + loop + "(" + dispatchExpr(bodies) +
                                 ");");
          em.line(depth, "};");
          std::string next = em.name("r");
          em.line(depth, "var " + next + " = " + loop + "(" + rec + ");");
          return next;
        }
      },
      c->node);
}

std::string emitWebppl(const Program& prog) {
  Emitter em;
  em.out +=
      "var pickWeighted = function(held, weights) {\n"
      "  var total = sum(weights);\n"
      "  var idx = sample(Discrete({ps: map(function(w) { return w / total; },"
      " weights)}));\n"
      "  return held[idx];\n"
      "};\n\n";
  em.out += "var model = function() {\n";
  em.line(1, "var r0 = {s: {}, logs: []};");
  em.fresh = 1;
  std::string end = emitCmd(em, prog.body, "r0", 1);
  em.line(1, "return {state: " + end + ".s, logs: " + end + ".logs};");
  em.out += "};\n";
  return em.out;
}

}  // namespace

std::string emitText(const Program& prog, Dialect dialect) {
  if (dialect == Dialect::Native) return printProgram(prog);
  return emitWebppl(prog);
}

}  // namespace dpnppl
