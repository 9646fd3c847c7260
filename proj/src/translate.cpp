#include "dpnppl/translate.hpp"

#include <vector>

#include "dpnppl/error.hpp"

namespace dpnppl {

namespace {

bool isLiteralTrue(const BoolPtr& b) {
  auto* c = std::get_if<BoolExpr::Const>(&b->node);
  return c != nullptr && c->value;
}

std::vector<CommandPtr> flattenSeq(const CommandPtr& c) {
  if (auto* s = std::get_if<Command::Seq>(&c->node)) {
    std::vector<CommandPtr> out = flattenSeq(s->first);
    for (CommandPtr& cmd : flattenSeq(s->second)) out.push_back(std::move(cmd));
    return out;
  }
  return {c};
}

std::vector<CommandPtr> initCommands(const Dpn& net, const NetState& st) {
  if (st.marking.size() != net.places().size() ||
      st.valuation.size() != net.variables().size())
    fail(ErrorKind::InvalidNet, "initial state does not match the net");
  std::vector<CommandPtr> cmds;
  for (std::size_t i = 0; i < net.places().size(); i++)
    cmds.push_back(cAssign(placeVarName(net.places()[i]),
                           dDirac(aConst(Rat(st.marking[i])))));
  for (std::size_t j = 0; j < net.variables().size(); j++)
    cmds.push_back(cAssign(caseVarName(net.variables()[j]),
                           dDirac(aConst(st.valuation[j]))));
  for (std::size_t j = 0; j < net.variables().size(); j++)
    cmds.push_back(cAssign(primedVarName(net.variables()[j]),
                           dDirac(aConst(st.valuation[j]))));
  return cmds;
}

std::vector<CommandPtr> fireCommands(const Dpn& net, const Scheduler& sched,
                                     int t) {
  const Transition& tr = net.transitions()[t];
  std::vector<CommandPtr> cmds;
  for (int p : net.prePlaces(t)) {
    std::string name = placeVarName(net.places()[p]);
    cmds.push_back(cAssign(
        name, dDirac(aBin(ArithOp::Sub, aVar(name), aConst(Rat(1))))));
  }
  for (int p : net.postPlaces(t)) {
    std::string name = placeVarName(net.places()[p]);
    cmds.push_back(cAssign(
        name, dDirac(aBin(ArithOp::Add, aVar(name), aConst(Rat(1))))));
  }
  for (const std::string& primed : net.primedVars(t)) {
    auto it = sched.valueDists.find(primed);
    if (it == sched.valueDists.end())
      fail(ErrorKind::MissingValueDist,
           "no value distribution for " + primed + " (needed by '" + tr.name +
               "')");
    cmds.push_back(
        cAssign(primedVarName(baseName(primed)), encodeDist(it->second)));
  }
  if (!isLiteralTrue(tr.post)) cmds.push_back(cObserve(encodeBool(tr.post)));
  MsgExpr msg;
  msg.label = tr.name;
  for (const std::string& name : net.bindingDomain(t))
    msg.fields.emplace_back(name, isPrimedName(name)
                                      ? primedVarName(baseName(name))
                                      : caseVarName(name));
  cmds.push_back(cLog(std::move(msg)));
  for (const std::string& primed : net.primedVars(t))
    cmds.push_back(cAssign(caseVarName(baseName(primed)),
                           dDirac(aVar(primedVarName(baseName(primed))))));
  return cmds;
}

// The Log command inside a branch body names the transition it encodes.
const Command::Log* logOf(const CommandPtr& body) {
  for (const CommandPtr& c : flattenSeq(body))
    if (auto* l = std::get_if<Command::Log>(&c->node)) return l;
  return nullptr;
}

}  // namespace

std::string placeVarName(const std::string& place) { return "P_" + place; }
std::string caseVarName(const std::string& variable) { return "V_" + variable; }
std::string primedVarName(const std::string& variable) {
  return "Vp_" + variable;
}
std::string counterVarName(const std::string& transition) {
  return "CNT_" + transition;
}

EncodingMap encodingFor(const Dpn& net) {
  EncodingMap map;
  for (const std::string& p : net.places()) map.places[p] = placeVarName(p);
  for (const std::string& v : net.variables())
    map.variables[v] = {caseVarName(v), primedVarName(v)};
  return map;
}

ArithPtr encodeArith(const ArithPtr& e) {
  return std::visit(
      [&](const auto& x) -> ArithPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ArithExpr::Const>) {
          return e;
        } else if constexpr (std::is_same_v<T, ArithExpr::Var>) {
          if (isPrimedName(x.name)) return aVar(primedVarName(baseName(x.name)));
          return aVar(caseVarName(x.name));
        } else if constexpr (std::is_same_v<T, ArithExpr::Marking>) {
          return aVar(placeVarName(x.place));
        } else if constexpr (std::is_same_v<T, ArithExpr::Counter>) {
          return aVar(counterVarName(x.transition));
        } else if constexpr (std::is_same_v<T, ArithExpr::Neg>) {
          return aNeg(encodeArith(x.arg));
        } else {
          return aBin(x.op, encodeArith(x.lhs), encodeArith(x.rhs));
        }
      },
      e->node);
}

BoolPtr encodeBool(const BoolPtr& e) {
  return std::visit(
      [&](const auto& x) -> BoolPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolExpr::Const>) {
          return e;
        } else if constexpr (std::is_same_v<T, BoolExpr::Cmp>) {
          return bCmp(x.op, encodeArith(x.lhs), encodeArith(x.rhs));
        } else if constexpr (std::is_same_v<T, BoolExpr::Not>) {
          return bNot(encodeBool(x.arg));
        } else {
          BoolPtr lhs = encodeBool(x.lhs);
          BoolPtr rhs = encodeBool(x.rhs);
          return x.conj ? bAnd(lhs, rhs) : bOr(lhs, rhs);
        }
      },
      e->node);
}

DistExpr encodeDist(const DistExpr& d) {
  return std::visit(
      [&](const auto& x) -> DistExpr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, DistExpr::Dirac>) {
          return dDirac(encodeArith(x.value));
        } else if constexpr (std::is_same_v<T, DistExpr::UniformInt>) {
          return dUniformInt(encodeArith(x.lo), encodeArith(x.hi));
        } else if constexpr (std::is_same_v<T, DistExpr::Bernoulli>) {
          return dBernoulli(encodeArith(x.p), encodeArith(x.a),
                            encodeArith(x.b));
        } else {
          std::vector<std::pair<ArithPtr, ArithPtr>> entries;
          entries.reserve(x.entries.size());
          for (const auto& [value, weight] : x.entries)
            entries.emplace_back(encodeArith(value), encodeArith(weight));
          return dCategorical(std::move(entries));
        }
      },
      d.node);
}

CommandPtr buildInit(const Dpn& net, const NetState& initialState) {
  return seqOf(initCommands(net, initialState));
}

BoolPtr buildEnabledGuard(const Dpn& net, const std::string& transition) {
  int t = net.transitionIndex(transition);
  std::vector<BoolPtr> conjuncts;
  const BoolPtr& pre = net.transitions()[t].pre;
  if (!isLiteralTrue(pre)) conjuncts.push_back(encodeBool(pre));
  for (int p : net.prePlaces(t))
    conjuncts.push_back(bCmp(CmpOp::Ge, aVar(placeVarName(net.places()[p])),
                             aConst(Rat(1))));
  return bAndAll(conjuncts);
}

CommandPtr buildFire(const Dpn& net, const Scheduler& sched,
                     const std::string& transition) {
  return seqOf(fireCommands(net, sched, net.transitionIndex(transition)));
}

Program buildProgram(const Dpn& net, const Scheduler& sched,
                     const GoalSpec& goal, const NetState& initialState) {
  validateScheduler(net, sched);
  validateGoal(net, goal);
  Program prog;
  for (const std::string& p : net.places())
    prog.vars.push_back(placeVarName(p));
  for (const std::string& v : net.variables())
    prog.vars.push_back(caseVarName(v));
  for (const std::string& v : net.variables())
    prog.vars.push_back(primedVarName(v));

  std::vector<GuardedPtr> branches;
  for (std::size_t t = 0; t < net.transitions().size(); t++) {
    const Transition& tr = net.transitions()[t];
    BoolPtr guard = buildEnabledGuard(net, tr.name);
    if (goal.expr) guard = bAnd(bNot(encodeBool(goal.expr)), guard);
    branches.push_back(gBranch(std::move(guard), encodeArith(sched.weights[t]),
                               seqOf(fireCommands(net, sched, t))));
  }

  std::vector<CommandPtr> cmds = initCommands(net, initialState);
  if (!branches.empty()) cmds.push_back(cLoop(choiceOf(branches)));
  prog.body = seqOf(cmds);
  validateProgram(prog);
  return prog;
}

Program injectCounters(const Program& prog,
                       const std::set<std::string>& transitions) {
  if (transitions.empty()) return prog;
  std::vector<CommandPtr> chain = flattenSeq(prog.body);
  if (chain.empty() || !std::holds_alternative<Command::Loop>(chain.back()->node))
    fail(ErrorKind::InvalidProgram,
         "counters can only be added to a translated simulation program");
  const auto& loop = std::get<Command::Loop>(chain.back()->node);

  std::set<std::string> pending = transitions;
  std::vector<std::string> counterNames;
  std::vector<GuardedPtr> branches;
  for (const auto* b : branchesOf(*loop.branches)) {
    const Command::Log* log = logOf(b->body);
    if (log == nullptr || !transitions.count(log->msg.label)) {
      branches.push_back(gBranch(b->guard, b->weight, b->body));
      continue;
    }
    pending.erase(log->msg.label);
    std::string counter = counterVarName(log->msg.label);
    counterNames.push_back(counter);
    std::vector<CommandPtr> body;
    for (const CommandPtr& c : flattenSeq(b->body)) {
      if (std::get_if<Command::Log>(&c->node))
        body.push_back(cAssign(
            counter, dDirac(aBin(ArithOp::Add, aVar(counter), aConst(Rat(1))))));
      body.push_back(c);
    }
    branches.push_back(gBranch(b->guard, b->weight, seqOf(body)));
  }
  if (!pending.empty())
    fail(ErrorKind::UnknownTransition,
         "no transition '" + *pending.begin() + "' in the program");

  Program out;
  out.vars = prog.vars;
  std::vector<CommandPtr> cmds(chain.begin(), chain.end() - 1);
  for (const std::string& counter : counterNames) {
    out.vars.push_back(counter);
    cmds.push_back(cAssign(counter, dDirac(aConst(Rat(0)))));
  }
  cmds.push_back(cLoop(choiceOf(branches)));
  out.body = seqOf(cmds);
  validateProgram(out);
  return out;
}

Program injectObserve(const Program& prog, const BoolPtr& cond) {
  Program out;
  out.vars = prog.vars;
  std::vector<CommandPtr> cmds = flattenSeq(prog.body);
  cmds.push_back(cObserve(encodeBool(cond)));
  out.body = seqOf(cmds);
  validateProgram(out);
  return out;
}

NetState decodeNetState(const Dpn& net, const Env& env) {
  NetState st;
  for (const std::string& p : net.places()) {
    long long tokens = env.get(placeVarName(p)).asInt();
    if (tokens < 0)
      fail(ErrorKind::IllegalRun,
           "negative token count on '" + p + "' while decoding");
    st.marking.push_back(tokens);
  }
  for (const std::string& v : net.variables())
    st.valuation.push_back(env.get(caseVarName(v)));
  return st;
}

Run logToRun(const ProgLog& log) {
  Run run;
  run.reserve(log.size());
  for (const Msg& m : log) run.push_back(Step{m.label, m.payload});
  return run;
}

}  // namespace dpnppl
