#include "dpnppl/dpn.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dpnppl/error.hpp"

namespace dpnppl {

namespace {

const char* kReservedPrefixes[] = {"P_", "V_", "Vp_", "CNT_"};

bool hasReservedPrefix(const std::string& name) {
  for (const char* prefix : kReservedPrefixes) {
    if (name.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

void checkName(const std::string& name, const char* what) {
  if (name.empty()) fail(ErrorKind::InvalidNet, std::string(what) + " with empty name");
  if (isPrimedName(name))
    fail(ErrorKind::InvalidNet, std::string(what) + " name '" + name + "' is primed");
  if (hasReservedPrefix(name))
    fail(ErrorKind::InvalidNet, std::string(what) + " name '" + name +
                                    "' uses a reserved prefix (P_, V_, Vp_, CNT_)");
}

}  // namespace

Dpn::Dpn(std::vector<std::string> places, std::vector<Transition> transitions,
         std::vector<std::string> variables, std::vector<Arc> arcs)
    : places_(std::move(places)),
      transitions_(std::move(transitions)),
      variables_(std::move(variables)),
      arcs_(std::move(arcs)) {
  for (std::size_t i = 0; i < places_.size(); i++) {
    checkName(places_[i], "place");
    if (!placeIndex_.emplace(places_[i], static_cast<int>(i)).second)
      fail(ErrorKind::InvalidNet, "duplicate place '" + places_[i] + "'");
  }
  for (std::size_t i = 0; i < variables_.size(); i++) {
    checkName(variables_[i], "variable");
    if (!variableIndex_.emplace(variables_[i], static_cast<int>(i)).second)
      fail(ErrorKind::InvalidNet, "duplicate variable '" + variables_[i] + "'");
  }
  for (std::size_t i = 0; i < transitions_.size(); i++) {
    Transition& t = transitions_[i];
    checkName(t.name, "transition");
    if (placeIndex_.count(t.name))
      fail(ErrorKind::InvalidNet,
           "name '" + t.name + "' used for both a place and a transition");
    if (!transitionIndex_.emplace(t.name, static_cast<int>(i)).second)
      fail(ErrorKind::InvalidNet, "duplicate transition '" + t.name + "'");
    if (t.label.empty()) t.label = t.name;
    if (t.label == "tau")
      fail(ErrorKind::UnsupportedFeature,
           "transition '" + t.name + "' is labeled as silent (tau)");
    if (!t.pre) t.pre = bConst(true);
    if (!t.post) t.post = bConst(true);
  }

  prePlaces_.resize(transitions_.size());
  postPlaces_.resize(transitions_.size());
  std::set<std::pair<std::string, std::string>> seenArcs;
  for (const Arc& arc : arcs_) {
    if (!seenArcs.emplace(arc.source, arc.target).second)
      fail(ErrorKind::UnsupportedFeature,
           "duplicate arc " + arc.source + " -> " + arc.target +
               " (multiplicities above 1 are not supported)");
    auto p = placeIndex_.find(arc.source);
    auto t = transitionIndex_.find(arc.target);
    if (p != placeIndex_.end() && t != transitionIndex_.end()) {
      prePlaces_[t->second].push_back(p->second);
      continue;
    }
    p = placeIndex_.find(arc.target);
    t = transitionIndex_.find(arc.source);
    if (p != placeIndex_.end() && t != transitionIndex_.end()) {
      postPlaces_[t->second].push_back(p->second);
      continue;
    }
    fail(ErrorKind::InvalidNet,
         "arc " + arc.source + " -> " + arc.target +
             " must connect a place and a transition");
  }
  for (auto& v : prePlaces_) std::sort(v.begin(), v.end());
  for (auto& v : postPlaces_) std::sort(v.begin(), v.end());

  bindingDomain_.resize(transitions_.size());
  primedVars_.resize(transitions_.size());
  for (std::size_t i = 0; i < transitions_.size(); i++) {
    const Transition& t = transitions_[i];
    NameRefs preRefs;
    collectRefs(t.pre, preRefs);
    if (!preRefs.markings.empty() || !preRefs.counters.empty())
      fail(ErrorKind::InvalidNet,
           "precondition of '" + t.name + "' must only use case variables");
    for (const std::string& v : preRefs.vars) {
      if (isPrimedName(v))
        fail(ErrorKind::InvalidNet, "precondition of '" + t.name +
                                        "' references primed variable " + v);
      if (!variableIndex_.count(v))
        fail(ErrorKind::InvalidNet, "precondition of '" + t.name +
                                        "' references unknown variable " + v);
    }
    NameRefs postRefs;
    collectRefs(t.post, postRefs);
    if (!postRefs.markings.empty() || !postRefs.counters.empty())
      fail(ErrorKind::InvalidNet,
           "postcondition of '" + t.name + "' must only use case variables");
    for (const std::string& v : postRefs.vars) {
      if (!variableIndex_.count(baseName(v)))
        fail(ErrorKind::InvalidNet, "postcondition of '" + t.name +
                                        "' references unknown variable " + v);
    }
    std::set<std::string> all = preRefs.vars;
    all.insert(postRefs.vars.begin(), postRefs.vars.end());
    for (const std::string& v : variables_) {
      if (all.count(v)) bindingDomain_[i].push_back(v);
    }
    for (const std::string& v : variables_) {
      std::string primed = v + "'";
      if (all.count(primed)) {
        bindingDomain_[i].push_back(primed);
        primedVars_[i].push_back(primed);
      }
    }
  }
}

int Dpn::placeIndex(const std::string& name) const {
  auto it = placeIndex_.find(name);
  if (it == placeIndex_.end())
    fail(ErrorKind::UnknownPlace, "no place named '" + name + "'");
  return it->second;
}

int Dpn::transitionIndex(const std::string& name) const {
  auto it = transitionIndex_.find(name);
  if (it == transitionIndex_.end())
    fail(ErrorKind::UnknownTransition, "no transition named '" + name + "'");
  return it->second;
}

int Dpn::variableIndex(const std::string& name) const {
  auto it = variableIndex_.find(name);
  if (it == variableIndex_.end())
    fail(ErrorKind::UnknownVariable, "no variable named '" + name + "'");
  return it->second;
}

bool operator==(const Dpn& a, const Dpn& b) {
  if (a.places_ != b.places_ || a.variables_ != b.variables_) return false;
  if (a.transitions_.size() != b.transitions_.size()) return false;
  for (std::size_t i = 0; i < a.transitions_.size(); i++) {
    const Transition& x = a.transitions_[i];
    const Transition& y = b.transitions_[i];
    if (x.name != y.name || x.label != y.label || !exprEq(x.pre, y.pre) ||
        !exprEq(x.post, y.post))
      return false;
  }
  auto arcKey = [](const Arc& arc) { return std::pair(arc.source, arc.target); };
  std::set<std::pair<std::string, std::string>> arcsA, arcsB;
  for (const Arc& arc : a.arcs_) arcsA.insert(arcKey(arc));
  for (const Arc& arc : b.arcs_) arcsB.insert(arcKey(arc));
  return arcsA == arcsB;
}

NetState makeNetState(const Dpn& net,
                      const std::map<std::string, long long>& marking,
                      const std::map<std::string, Rat>& valuation) {
  NetState st;
  st.marking.assign(net.places().size(), 0);
  st.valuation.assign(net.variables().size(), Rat(0));
  for (const auto& [place, tokens] : marking) {
    if (tokens < 0)
      fail(ErrorKind::InvalidNet, "negative marking for place '" + place + "'");
    st.marking[net.placeIndex(place)] = tokens;
  }
  for (const auto& [var, value] : valuation)
    st.valuation[net.variableIndex(var)] = value;
  return st;
}

std::string netStateToString(const Dpn& net, const NetState& st) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (std::size_t i = 0; i < net.places().size(); i++) {
    if (st.marking[i] == 0) continue;
    if (!first) os << ", ";
    first = false;
    os << net.places()[i] << ":" << st.marking[i];
  }
  os << " | ";
  first = true;
  for (std::size_t i = 0; i < net.variables().size(); i++) {
    if (!first) os << ", ";
    first = false;
    os << net.variables()[i] << "=" << st.valuation[i].str();
  }
  os << "}";
  return os.str();
}

Env netEnv(const Dpn& net, const NetState& st) {
  Env env;
  for (std::size_t i = 0; i < net.variables().size(); i++)
    env.set(net.variables()[i], st.valuation[i]);
  for (std::size_t i = 0; i < net.places().size(); i++)
    env.setMarking(net.places()[i], Rat(st.marking[i]));
  return env;
}

std::string stepToString(const Step& step) {
  std::ostringstream os;
  os << "(" << step.transition << ", {";
  bool first = true;
  for (const auto& [name, value] : step.binding) {
    if (!first) os << ", ";
    first = false;
    os << name << "=" << value.str();
  }
  os << "})";
  return os.str();
}

std::string runToString(const Run& run) {
  if (run.empty()) return "<empty run>";
  std::string out;
  for (const Step& step : run) out += stepToString(step);
  return out;
}

Scheduler uniformScheduler(const Dpn& net,
                           std::map<std::string, DistExpr> valueDists) {
  Scheduler sched;
  std::size_t n = net.transitions().size();
  if (n == 0) fail(ErrorKind::InvalidScheduler, "net has no transitions");
  sched.weights.assign(n, aConst(Rat(1, static_cast<long long>(n))));
  sched.valueDists = std::move(valueDists);
  return sched;
}

namespace {

// Shared reference discipline for scheduler and goal expressions: only
// declared unprimed case variables, optionally markings of declared places,
// never counters.
void checkRefs(const Dpn& net, const NameRefs& refs, bool allowMarkings,
               const std::string& what) {
  if (!refs.counters.empty())
    fail(ErrorKind::InvalidScheduler,
         what + " references counter #" + *refs.counters.begin());
  for (const std::string& v : refs.vars) {
    if (isPrimedName(v))
      fail(ErrorKind::InvalidScheduler,
           what + " references primed variable " + v);
    net.variableIndex(v);
  }
  for (const std::string& p : refs.markings) {
    if (!allowMarkings)
      fail(ErrorKind::InvalidScheduler,
           what + " references marking(" + p + ")");
    net.placeIndex(p);
  }
}

}  // namespace

void validateScheduler(const Dpn& net, const Scheduler& sched) {
  if (sched.weights.size() != net.transitions().size())
    fail(ErrorKind::InvalidScheduler,
         "scheduler has " + std::to_string(sched.weights.size()) +
             " weights for " + std::to_string(net.transitions().size()) +
             " transitions");
  for (std::size_t i = 0; i < sched.weights.size(); i++) {
    NameRefs refs;
    collectRefs(sched.weights[i], refs);
    checkRefs(net, refs, true,
              "weight of '" + net.transitions()[i].name + "'");
  }
  for (const auto& [primed, dist] : sched.valueDists) {
    if (!isPrimedName(primed))
      fail(ErrorKind::InvalidScheduler,
           "value distribution key '" + primed + "' is not a primed name");
    net.variableIndex(baseName(primed));
    NameRefs refs;
    collectRefs(dist, refs);
    checkRefs(net, refs, false, "value distribution for " + primed);
  }
}

void validateGoal(const Dpn& net, const GoalSpec& goal) {
  if (!goal.expr) return;
  NameRefs refs;
  collectRefs(goal.expr, refs);
  checkRefs(net, refs, true, "goal expression");
}

std::vector<Rat> schedulerWeights(const Dpn& net, const Scheduler& sched,
                                  const NetState& st) {
  if (sched.weights.size() != net.transitions().size())
    fail(ErrorKind::InvalidScheduler,
         "scheduler has " + std::to_string(sched.weights.size()) +
             " weights for " + std::to_string(net.transitions().size()) +
             " transitions");
  Env env = netEnv(net, st);
  std::vector<Rat> out;
  out.reserve(sched.weights.size());
  Rat total(0);
  for (std::size_t i = 0; i < sched.weights.size(); i++) {
    Rat w = evalProb(sched.weights[i], env);
    total += w;
    out.push_back(std::move(w));
  }
  if (total != Rat(1))
    fail(ErrorKind::InvalidScheduler,
         "transition weights sum to " + total.str() + " in state " +
             netStateToString(net, st));
  return out;
}

bool preEnabled(const Dpn& net, const NetState& st, int t) {
  for (int p : net.prePlaces(t)) {
    if (st.marking[p] < 1) return false;
  }
  return evalBool(net.transitions()[t].pre, netEnv(net, st));
}

namespace {

const DistExpr& valueDistFor(const Scheduler& sched, const std::string& primed,
                             const std::string& transition) {
  auto it = sched.valueDists.find(primed);
  if (it == sched.valueDists.end())
    fail(ErrorKind::MissingValueDist,
         "no value distribution for " + primed + " (needed by '" + transition +
             "')");
  return it->second;
}

// Joint supports of the primed variables of t, as bindings layered over the
// forced unprimed part. Calls visit for each candidate; stops early when
// visit returns false.
template <typename Visit>
void forEachCandidateBinding(const Dpn& net, const NetState& st,
                             const Scheduler& sched, int t, Visit visit) {
  const Transition& tr = net.transitions()[t];
  Env env = netEnv(net, st);
  Binding base;
  for (const std::string& name : net.bindingDomain(t)) {
    if (!isPrimedName(name)) base[name] = st.valuation[net.variableIndex(name)];
  }
  const std::vector<std::string>& primed = net.primedVars(t);
  std::vector<std::vector<Rat>> supports;
  supports.reserve(primed.size());
  for (const std::string& name : primed) {
    Distribution d = evalDist(valueDistFor(sched, name, tr.name), env);
    std::vector<Rat> values;
    values.reserve(d.entries().size());
    for (const auto& [value, mass] : d.entries()) values.push_back(value);
    supports.push_back(std::move(values));
  }
  std::vector<std::size_t> index(primed.size(), 0);
  while (true) {
    Binding candidate = base;
    bool viable = true;
    for (std::size_t i = 0; i < primed.size(); i++) {
      if (supports[i].empty()) {
        viable = false;
        break;
      }
      candidate[primed[i]] = supports[i][index[i]];
    }
    if (!viable) return;
    if (!visit(candidate)) return;
    std::size_t k = primed.size();
    while (k > 0) {
      k--;
      index[k]++;
      if (index[k] < supports[k].size()) break;
      index[k] = 0;
      if (k == 0) return;
    }
    if (primed.empty()) return;
  }
}

Env bindingEnv(const Binding& binding) {
  Env env;
  for (const auto& [name, value] : binding) env.set(name, value);
  return env;
}

bool guardsHold(const Transition& tr, const Binding& binding) {
  Env env = bindingEnv(binding);
  return evalBool(tr.pre, env) && evalBool(tr.post, env);
}

}  // namespace

bool isEnabledStep(const Dpn& net, const NetState& st, const Step& step) {
  int t = net.transitionIndex(step.transition);
  const std::vector<std::string>& domain = net.bindingDomain(t);
  if (step.binding.size() != domain.size()) return false;
  for (const std::string& name : domain) {
    if (!step.binding.count(name)) return false;
  }
  for (const std::string& name : domain) {
    if (!isPrimedName(name) &&
        step.binding.at(name) != st.valuation[net.variableIndex(name)])
      return false;
  }
  for (int p : net.prePlaces(t)) {
    if (st.marking[p] < 1) return false;
  }
  return guardsHold(net.transitions()[t], step.binding);
}

std::vector<int> enabledTransitions(const Dpn& net, const NetState& st,
                                    const Scheduler& sched) {
  std::vector<int> out;
  for (std::size_t t = 0; t < net.transitions().size(); t++) {
    int ti = static_cast<int>(t);
    if (!preEnabled(net, st, ti)) continue;
    bool found = false;
    forEachCandidateBinding(net, st, sched, ti, [&](const Binding& candidate) {
      if (guardsHold(net.transitions()[t], candidate)) {
        found = true;
        return false;
      }
      return true;
    });
    if (found) out.push_back(ti);
  }
  return out;
}

std::vector<int> schedulerSupportGap(const Dpn& net, const NetState& st,
                                     const Scheduler& sched) {
  std::vector<int> enabled = enabledTransitions(net, st, sched);
  std::vector<int> out;
  for (std::size_t t = 0; t < net.transitions().size(); t++) {
    int ti = static_cast<int>(t);
    if (preEnabled(net, st, ti) &&
        std::find(enabled.begin(), enabled.end(), ti) == enabled.end())
      out.push_back(ti);
  }
  return out;
}

NetState fire(const Dpn& net, const NetState& st, const Step& step) {
  if (!isEnabledStep(net, st, step))
    fail(ErrorKind::StepNotEnabled,
         "step " + stepToString(step) + " is not enabled in " +
             netStateToString(net, st));
  int t = net.transitionIndex(step.transition);
  NetState next = st;
  for (int p : net.prePlaces(t)) next.marking[p] -= 1;
  for (int p : net.postPlaces(t)) next.marking[p] += 1;
  for (const std::string& primed : net.primedVars(t))
    next.valuation[net.variableIndex(baseName(primed))] = step.binding.at(primed);
  return next;
}

std::vector<Binding> enumerateBindings(const Dpn& net, const NetState& st,
                                       const Scheduler& sched, int t) {
  std::vector<Binding> out;
  if (!preEnabled(net, st, t)) return out;
  forEachCandidateBinding(net, st, sched, t, [&](const Binding& candidate) {
    if (guardsHold(net.transitions()[t], candidate)) out.push_back(candidate);
    return true;
  });
  return out;
}

bool isGoalState(const Dpn& net, const NetState& st, const Scheduler& sched,
                 const GoalSpec& goal) {
  if (goal.expr && evalBool(goal.expr, netEnv(net, st))) return true;
  return enabledTransitions(net, st, sched).empty();
}

Rat stepLikelihood(const Dpn& net, const Scheduler& sched, const NetState& st,
                   const Step& step) {
  int t = net.transitionIndex(step.transition);
  if (!isEnabledStep(net, st, step)) return Rat(0);

  std::vector<int> enabled = enabledTransitions(net, st, sched);
  if (std::find(enabled.begin(), enabled.end(), t) == enabled.end())
    return Rat(0);
  std::vector<Rat> weights = schedulerWeights(net, sched, st);
  Rat enabledTotal(0);
  for (int e : enabled) enabledTotal += weights[e];
  if (enabledTotal.isZero()) return Rat(0);
  Rat likelihood = weights[t] / enabledTotal;

  Env env = netEnv(net, st);
  for (const std::string& primed : net.primedVars(t)) {
    Distribution d =
        evalDist(valueDistFor(sched, primed, step.transition), env);
    likelihood *= d.massAt(step.binding.at(primed));
    if (likelihood.isZero()) return likelihood;
  }
  return likelihood;
}

Rat runLikelihood(const Dpn& net, const Scheduler& sched, const NetState& st,
                  const GoalSpec& goal, const Run& run) {
  if (isGoalState(net, st, sched, goal)) return Rat(1);
  if (run.empty()) return Rat(0);
  Rat head = stepLikelihood(net, sched, st, run.front());
  if (head.isZero()) return Rat(0);
  NetState next = fire(net, st, run.front());
  Run tail(run.begin() + 1, run.end());
  return head * runLikelihood(net, sched, next, goal, tail);
}

namespace {

void enumerateFrom(const Dpn& net, const Scheduler& sched, const NetState& st,
                   const GoalSpec& goal, int remaining, Run& prefix,
                   const Rat& mass, RunEnumeration& out) {
  if (isGoalState(net, st, sched, goal)) {
    out.runs.emplace_back(prefix, mass);
    return;
  }
  if (remaining == 0) {
    out.residual += mass;
    return;
  }
  for (std::size_t t = 0; t < net.transitions().size(); t++) {
    int ti = static_cast<int>(t);
    for (const Binding& binding : enumerateBindings(net, st, sched, ti)) {
      Step step{net.transitions()[t].name, binding};
      Rat ell = stepLikelihood(net, sched, st, step);
      if (ell.isZero()) continue;
      NetState next = fire(net, st, step);
      prefix.push_back(step);
      enumerateFrom(net, sched, next, goal, remaining - 1, prefix, mass * ell,
                    out);
      prefix.pop_back();
    }
  }
}

}  // namespace

RunEnumeration enumerateRuns(const Dpn& net, const Scheduler& sched,
                             const NetState& st, const GoalSpec& goal,
                             int maxLen) {
  if (maxLen < 0) fail(ErrorKind::InvalidNet, "negative run length bound");
  RunEnumeration out;
  out.residual = Rat(0);
  Run prefix;
  enumerateFrom(net, sched, st, goal, maxLen, prefix, Rat(1), out);
  return out;
}

Rat runProbability(const Dpn& net, const Scheduler& sched, const NetState& st,
                   const GoalSpec& goal, const Run& run, int maxLen) {
  Rat ell = runLikelihood(net, sched, st, goal, run);
  if (ell.isZero()) return ell;
  RunEnumeration all = enumerateRuns(net, sched, st, goal, maxLen);
  Rat total(0);
  for (const auto& [r, mass] : all.runs) total += mass;
  if (total.isZero()) return Rat(0);
  return ell / total;
}

}  // namespace dpnppl
