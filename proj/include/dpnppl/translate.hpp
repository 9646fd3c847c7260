#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "dpnppl/dpn.hpp"
#include "dpnppl/ppl.hpp"

namespace dpnppl {

// Net-name to program-name mapping. The prefixes are reserved and rejected
// in input nets, so decoding a program state back to a net state is total.
struct EncodingMap {
  std::map<std::string, std::string> places;  // place -> P_<place>
  std::map<std::string, std::pair<std::string, std::string>>
      variables;                              // var -> (V_<var>, Vp_<var>)
  std::map<std::string, std::string> counters;  // transition -> CNT_<name>
};

std::string placeVarName(const std::string& place);
std::string caseVarName(const std::string& variable);
std::string primedVarName(const std::string& variable);
std::string counterVarName(const std::string& transition);

EncodingMap encodingFor(const Dpn& net);

// Rewrites net-level references to program variables: x -> V_x, x' -> Vp_x,
// marking(p) -> P_p, #t -> CNT_t.
ArithPtr encodeArith(const ArithPtr& e);
BoolPtr encodeBool(const BoolPtr& e);
DistExpr encodeDist(const DistExpr& d);

// Dirac assignments fixing every place count, variable, and primed copy.
CommandPtr buildInit(const Dpn& net, const NetState& initialState);

// Encoded precondition plus a token check per consumed place.
BoolPtr buildEnabledGuard(const Dpn& net, const std::string& transition);

// One firing: token decrements, increments, sampling of the primed
// variables, the postcondition observation, the log entry, and copy-back.
CommandPtr buildFire(const Dpn& net, const Scheduler& sched,
                     const std::string& transition);

// The full simulation program: the initial assignments, then a loop with one
// branch per transition guarded by "not yet at the goal and enabled".
Program buildProgram(const Dpn& net, const Scheduler& sched,
                     const GoalSpec& goal, const NetState& initialState);

// Adds a zero-initialized counter per named transition, incremented just
// before that transition's log entry. Only accepts programs in the shape
// buildProgram emits.
Program injectCounters(const Program& prog,
                       const std::set<std::string>& transitions);

// Appends observe(cond) after the main loop; cond uses net-level references.
Program injectObserve(const Program& prog, const BoolPtr& cond);

enum class Dialect { Native, Webppl };

// Native text round-trips through parseProgramText; the webppl flavor is
// write-only and pinned by golden files.
std::string emitText(const Program& prog, Dialect dialect);

// Reads the encoded P_/V_ values back into a net state.
NetState decodeNetState(const Dpn& net, const Env& env);

// Each log entry names the fired transition and carries its binding.
Run logToRun(const ProgLog& log);

// A conditional question about the final program state: condition to observe
// (net-level references, counters allowed), and what to report.
struct Query {
  BoolPtr condition;  // may be null for "no conditioning"
  enum class Target { Distribution, Probability };
  Target target = Target::Distribution;
  BoolPtr event;  // required when target == Probability
};

}  // namespace dpnppl
