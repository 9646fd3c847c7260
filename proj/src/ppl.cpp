#include "dpnppl/ppl.hpp"

#include <set>

#include "dpnppl/error.hpp"

namespace dpnppl {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> words{
      "var", "observe", "log", "do", "od", "if",
      "fi",  "skip",    "true", "false", "marking"};
  return words;
}

}  // namespace

std::string msgToString(const Msg& m) {
  std::string out = m.label;
  if (m.payload.empty()) return out;
  out += "{";
  bool first = true;
  for (const auto& [key, value] : m.payload) {
    if (!first) out += ", ";
    first = false;
    out += key + ": " + value.str();
  }
  out += "}";
  return out;
}

std::string progLogToString(const ProgLog& log) {
  std::string out = "[";
  for (std::size_t i = 0; i < log.size(); i++) {
    if (i) out += "; ";
    out += msgToString(log[i]);
  }
  return out + "]";
}

Msg evalMsg(const MsgExpr& m, const Env& env) {
  Msg out;
  out.label = m.label;
  for (const auto& [key, var] : m.fields) out.payload[key] = env.get(var);
  return out;
}

CommandPtr cSkip() { return std::make_shared<Command>(Command{Command::Skip{}}); }

CommandPtr cAssign(std::string var, DistExpr dist) {
  return std::make_shared<Command>(
      Command{Command::Assign{std::move(var), std::move(dist)}});
}

CommandPtr cObserve(BoolPtr cond) {
  return std::make_shared<Command>(Command{Command::Observe{std::move(cond)}});
}

CommandPtr cLog(MsgExpr msg) {
  return std::make_shared<Command>(Command{Command::Log{std::move(msg)}});
}

CommandPtr cSeq(CommandPtr first, CommandPtr second) {
  return std::make_shared<Command>(
      Command{Command::Seq{std::move(first), std::move(second)}});
}

CommandPtr seqOf(const std::vector<CommandPtr>& cmds) {
  if (cmds.empty()) return cSkip();
  CommandPtr out = cmds.back();
  for (std::size_t i = cmds.size() - 1; i-- > 0;) out = cSeq(cmds[i], out);
  return out;
}

CommandPtr cCond(GuardedPtr branches) {
  return std::make_shared<Command>(Command{Command::Cond{std::move(branches)}});
}

CommandPtr cLoop(GuardedPtr branches) {
  return std::make_shared<Command>(Command{Command::Loop{std::move(branches)}});
}

GuardedPtr gBranch(BoolPtr guard, ArithPtr weight, CommandPtr body) {
  return std::make_shared<GuardedCommand>(GuardedCommand{
      GuardedCommand::Branch{std::move(guard), std::move(weight), std::move(body)}});
}

GuardedPtr gChoice(GuardedPtr left, GuardedPtr right) {
  return std::make_shared<GuardedCommand>(
      GuardedCommand{GuardedCommand::Choice{std::move(left), std::move(right)}});
}

GuardedPtr choiceOf(const std::vector<GuardedPtr>& branches) {
  if (branches.empty())
    fail(ErrorKind::InvalidProgram, "a guarded command needs at least one branch");
  GuardedPtr out = branches.back();
  for (std::size_t i = branches.size() - 1; i-- > 0;)
    out = gChoice(branches[i], out);
  return out;
}

bool exprEq(const CommandPtr& a, const CommandPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  using C = Command;
  if (std::holds_alternative<C::Skip>(a->node)) return true;
  if (auto* x = std::get_if<C::Assign>(&a->node)) {
    const auto& y = std::get<C::Assign>(b->node);
    return x->var == y.var && exprEq(x->dist, y.dist);
  }
  if (auto* x = std::get_if<C::Observe>(&a->node))
    return exprEq(x->cond, std::get<C::Observe>(b->node).cond);
  if (auto* x = std::get_if<C::Log>(&a->node)) {
    const auto& y = std::get<C::Log>(b->node);
    return x->msg.label == y.msg.label && x->msg.fields == y.msg.fields;
  }
  if (auto* x = std::get_if<C::Seq>(&a->node)) {
    const auto& y = std::get<C::Seq>(b->node);
    return exprEq(x->first, y.first) && exprEq(x->second, y.second);
  }
  if (auto* x = std::get_if<C::Cond>(&a->node))
    return exprEq(x->branches, std::get<C::Cond>(b->node).branches);
  const auto& x = std::get<C::Loop>(a->node);
  return exprEq(x.branches, std::get<C::Loop>(b->node).branches);
}

bool exprEq(const GuardedPtr& a, const GuardedPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* x = std::get_if<GuardedCommand::Branch>(&a->node)) {
    const auto& y = std::get<GuardedCommand::Branch>(b->node);
    return exprEq(x->guard, y.guard) && exprEq(x->weight, y.weight) &&
           exprEq(x->body, y.body);
  }
  const auto& x = std::get<GuardedCommand::Choice>(a->node);
  const auto& y = std::get<GuardedCommand::Choice>(b->node);
  return exprEq(x.left, y.left) && exprEq(x.right, y.right);
}

void collectRefs(const CommandPtr& c, NameRefs& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Command::Assign>) {
          out.vars.insert(x.var);
          collectRefs(x.dist, out);
        } else if constexpr (std::is_same_v<T, Command::Observe>) {
          collectRefs(x.cond, out);
        } else if constexpr (std::is_same_v<T, Command::Log>) {
          for (const auto& [key, var] : x.msg.fields) out.vars.insert(var);
        } else if constexpr (std::is_same_v<T, Command::Seq>) {
          collectRefs(x.first, out);
          collectRefs(x.second, out);
        } else if constexpr (std::is_same_v<T, Command::Cond> ||
                             std::is_same_v<T, Command::Loop>) {
          collectRefs(x.branches, out);
        }
      },
      c->node);
}

void collectRefs(const GuardedPtr& g, NameRefs& out) {
  if (auto* b = std::get_if<GuardedCommand::Branch>(&g->node)) {
    collectRefs(b->guard, out);
    collectRefs(b->weight, out);
    collectRefs(b->body, out);
    return;
  }
  const auto& c = std::get<GuardedCommand::Choice>(g->node);
  collectRefs(c.left, out);
  collectRefs(c.right, out);
}

std::vector<const GuardedCommand::Branch*> branchesOf(const GuardedCommand& gc) {
  std::vector<const GuardedCommand::Branch*> out;
  std::vector<const GuardedCommand*> stack{&gc};
  while (!stack.empty()) {
    const GuardedCommand* g = stack.back();
    stack.pop_back();
    if (auto* b = std::get_if<GuardedCommand::Branch>(&g->node)) {
      out.push_back(b);
      continue;
    }
    const auto& c = std::get<GuardedCommand::Choice>(g->node);
    stack.push_back(c.right.get());
    stack.push_back(c.left.get());
  }
  return out;
}

void validateProgram(const Program& p) {
  if (!p.body) fail(ErrorKind::InvalidProgram, "program has no body");
  std::set<std::string> declared;
  for (const std::string& name : p.vars) {
    if (name.empty() || isPrimedName(name))
      fail(ErrorKind::InvalidProgram, "bad program variable name '" + name + "'");
    if (keywords().count(name))
      fail(ErrorKind::InvalidProgram,
           "program variable '" + name + "' is a reserved word");
    if (!declared.insert(name).second)
      fail(ErrorKind::InvalidProgram, "duplicate program variable '" + name + "'");
  }
  NameRefs refs;
  collectRefs(p.body, refs);
  if (!refs.markings.empty())
    fail(ErrorKind::InvalidProgram,
         "marking(" + *refs.markings.begin() + ") is not valid in a program");
  if (!refs.counters.empty())
    fail(ErrorKind::InvalidProgram,
         "#" + *refs.counters.begin() + " is not valid in a program");
  for (const std::string& v : refs.vars)
    if (!declared.count(v))
      fail(ErrorKind::InvalidProgram, "undeclared variable '" + v + "'");
}

bool programEq(const Program& a, const Program& b) {
  return a.vars == b.vars && exprEq(a.body, b.body);
}

Rat totalMass(const SubDist& d) {
  Rat total(0);
  for (const auto& [config, mass] : d) total += mass;
  return total;
}

SubDist normalizeDist(const SubDist& d) {
  Rat total = totalMass(d);
  if (total.isZero()) return d;
  SubDist out;
  for (const auto& [config, mass] : d) out[config] = mass / total;
  return out;
}

std::map<ProgLog, Rat> marginalizeLogs(const SubDist& d) {
  std::map<ProgLog, Rat> out;
  for (const auto& [config, mass] : d) out[config.log] += mass;
  return out;
}

}  // namespace dpnppl
