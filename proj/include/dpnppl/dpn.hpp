#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dpnppl/expr.hpp"

namespace dpnppl {

struct Transition {
  std::string name;
  std::string label;  // activity name; defaults to the transition name
  BoolPtr pre;        // over unprimed case variables
  BoolPtr post;       // over case variables and their primed copies
};

struct Arc {
  std::string source;
  std::string target;
};

// Data Petri net. Construction validates the structure and precomputes the
// per-transition data used by the execution semantics. Immutable afterwards.
class Dpn {
 public:
  Dpn(std::vector<std::string> places, std::vector<Transition> transitions,
      std::vector<std::string> variables, std::vector<Arc> arcs);

  const std::vector<std::string>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  int placeIndex(const std::string& name) const;
  int transitionIndex(const std::string& name) const;
  int variableIndex(const std::string& name) const;

  const std::vector<int>& prePlaces(int t) const { return prePlaces_[t]; }
  const std::vector<int>& postPlaces(int t) const { return postPlaces_[t]; }
  // Exactly the variables of pre(t) && post(t): unprimed names first, then
  // primed, each group in variable declaration order.
  const std::vector<std::string>& bindingDomain(int t) const {
    return bindingDomain_[t];
  }
  // Primed variables written by post(t), in declaration order of their bases.
  const std::vector<std::string>& primedVars(int t) const {
    return primedVars_[t];
  }

  friend bool operator==(const Dpn& a, const Dpn& b);

 private:
  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
  std::vector<std::string> variables_;
  std::vector<Arc> arcs_;
  std::map<std::string, int> placeIndex_;
  std::map<std::string, int> transitionIndex_;
  std::map<std::string, int> variableIndex_;
  std::vector<std::vector<int>> prePlaces_;
  std::vector<std::vector<int>> postPlaces_;
  std::vector<std::vector<std::string>> bindingDomain_;
  std::vector<std::vector<std::string>> primedVars_;
};

struct NetState {
  std::vector<long long> marking;  // aligned with Dpn::places()
  std::vector<Rat> valuation;      // aligned with Dpn::variables()

  friend bool operator==(const NetState& a, const NetState& b) {
    return a.marking == b.marking && a.valuation == b.valuation;
  }
  friend bool operator<(const NetState& a, const NetState& b) {
    if (a.marking != b.marking) return a.marking < b.marking;
    return a.valuation < b.valuation;
  }
};

NetState makeNetState(const Dpn& net,
                      const std::map<std::string, long long>& marking,
                      const std::map<std::string, Rat>& valuation);

std::string netStateToString(const Dpn& net, const NetState& st);

// Evaluation environment for net-level expressions: case variables by name
// plus marking(p) references.
Env netEnv(const Dpn& net, const NetState& st);

// Keys may be primed ("o'") or unprimed ("o").
using Binding = std::map<std::string, Rat>;

struct Step {
  std::string transition;
  Binding binding;

  friend bool operator==(const Step& a, const Step& b) {
    return a.transition == b.transition && a.binding == b.binding;
  }
  friend bool operator<(const Step& a, const Step& b) {
    if (a.transition != b.transition) return a.transition < b.transition;
    return a.binding < b.binding;
  }
};

using Run = std::vector<Step>;

std::string stepToString(const Step& step);
std::string runToString(const Run& run);

// Resolves all nondeterminism: a state-dependent weight per transition and a
// value distribution per primed variable. Weights must form a distribution
// over all transitions in every evaluated state.
struct Scheduler {
  std::vector<ArithPtr> weights;  // aligned with Dpn::transitions()
  std::map<std::string, DistExpr> valueDists;  // keyed by primed name
};

Scheduler uniformScheduler(const Dpn& net,
                           std::map<std::string, DistExpr> valueDists);

struct GoalSpec {
  BoolPtr expr;  // over case variables and marking(p) references
};

// Static reference checks. Weight expressions may read unprimed case
// variables and markings; value distributions only unprimed case variables,
// so their evaluation cannot depend on where a firing updates tokens.
// Counters and primed names are never evaluable at scheduling time.
void validateScheduler(const Dpn& net, const Scheduler& sched);
// Goal expressions may read unprimed case variables and markings.
void validateGoal(const Dpn& net, const GoalSpec& goal);

// Evaluated transition weights; enforces each in [0,1] and total exactly 1.
std::vector<Rat> schedulerWeights(const Dpn& net, const Scheduler& sched,
                                  const NetState& st);

bool isEnabledStep(const Dpn& net, const NetState& st, const Step& step);

// Transitions with tokens on all pre-places and a satisfied precondition.
bool preEnabled(const Dpn& net, const NetState& st, int t);

// Def-3 enabledness decided over the scheduler's finite value supports.
std::vector<int> enabledTransitions(const Dpn& net, const NetState& st,
                                    const Scheduler& sched);

// Pre-enabled transitions whose postcondition no support value satisfies;
// nonempty means pre-guard filtering and support enabledness disagree here.
std::vector<int> schedulerSupportGap(const Dpn& net, const NetState& st,
                                     const Scheduler& sched);

NetState fire(const Dpn& net, const NetState& st, const Step& step);

// All step bindings for t with positive likelihood potential, in canonical
// order (support values ascending, primed variables in declaration order).
std::vector<Binding> enumerateBindings(const Dpn& net, const NetState& st,
                                       const Scheduler& sched, int t);

// Goal membership; deadlocked states count as goal states.
bool isGoalState(const Dpn& net, const NetState& st, const Scheduler& sched,
                 const GoalSpec& goal);

Rat stepLikelihood(const Dpn& net, const Scheduler& sched, const NetState& st,
                   const Step& step);

Rat runLikelihood(const Dpn& net, const Scheduler& sched, const NetState& st,
                  const GoalSpec& goal, const Run& run);

struct RunEnumeration {
  std::vector<std::pair<Run, Rat>> runs;
  // Likelihood mass of length-maxLen prefixes that never reached a goal.
  Rat residual;
};

// Exhaustive oracle: every goal-reaching run of length <= maxLen whose
// intermediate states avoid the goal set, with its exact likelihood, in
// depth-first order (transition declaration order, then binding order).
RunEnumeration enumerateRuns(const Dpn& net, const Scheduler& sched,
                             const NetState& st, const GoalSpec& goal,
                             int maxLen);

Rat runProbability(const Dpn& net, const Scheduler& sched, const NetState& st,
                   const GoalSpec& goal, const Run& run, int maxLen);

}  // namespace dpnppl
