#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dpnppl/expr.hpp"

namespace dpnppl {

// One log message: an activity label plus the variable values snapshotted
// when the log command ran.
struct Msg {
  std::string label;
  std::map<std::string, Rat> payload;

  friend bool operator==(const Msg& a, const Msg& b) {
    return a.label == b.label && a.payload == b.payload;
  }
  friend bool operator<(const Msg& a, const Msg& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.payload < b.payload;
  }
};

using ProgLog = std::vector<Msg>;

std::string msgToString(const Msg& m);
std::string progLogToString(const ProgLog& log);

// Template for a log command: each field pairs a payload key with the
// program variable whose current value fills it.
struct MsgExpr {
  std::string label;
  std::vector<std::pair<std::string, std::string>> fields;
};

Msg evalMsg(const MsgExpr& m, const Env& env);

struct Command;
struct GuardedCommand;
using CommandPtr = std::shared_ptr<const Command>;
using GuardedPtr = std::shared_ptr<const GuardedCommand>;

struct Command {
  struct Skip {};
  struct Assign {
    std::string var;
    DistExpr dist;
  };
  struct Observe {
    BoolPtr cond;
  };
  struct Log {
    MsgExpr msg;
  };
  struct Seq {
    CommandPtr first, second;
  };
  struct Cond {
    GuardedPtr branches;
  };
  struct Loop {
    GuardedPtr branches;
  };
  std::variant<Skip, Assign, Observe, Log, Seq, Cond, Loop> node;
};

struct GuardedCommand {
  struct Branch {
    BoolPtr guard;
    ArithPtr weight;
    CommandPtr body;
  };
  struct Choice {
    GuardedPtr left, right;
  };
  std::variant<Branch, Choice> node;
};

CommandPtr cSkip();
CommandPtr cAssign(std::string var, DistExpr dist);
CommandPtr cObserve(BoolPtr cond);
CommandPtr cLog(MsgExpr msg);
CommandPtr cSeq(CommandPtr first, CommandPtr second);
// Right-nested sequence; the empty list is skip.
CommandPtr seqOf(const std::vector<CommandPtr>& cmds);
CommandPtr cCond(GuardedPtr branches);
CommandPtr cLoop(GuardedPtr branches);
GuardedPtr gBranch(BoolPtr guard, ArithPtr weight, CommandPtr body);
GuardedPtr gChoice(GuardedPtr left, GuardedPtr right);
// Right-nested choice over a non-empty list.
GuardedPtr choiceOf(const std::vector<GuardedPtr>& branches);

bool exprEq(const CommandPtr& a, const CommandPtr& b);
bool exprEq(const GuardedPtr& a, const GuardedPtr& b);

void collectRefs(const CommandPtr& c, NameRefs& out);
void collectRefs(const GuardedPtr& g, NameRefs& out);

// Branches of a choice tree, left to right.
std::vector<const GuardedCommand::Branch*> branchesOf(const GuardedCommand& gc);

struct Program {
  std::vector<std::string> vars;
  CommandPtr body;
};

// Rejects duplicate, reserved, or primed variable names, references to
// undeclared variables, and marking or counter references, which have no
// meaning inside a program.
void validateProgram(const Program& p);

bool programEq(const Program& a, const Program& b);

// One point of program state: the environment plus the log emitted so far.
struct Config {
  Env env;
  ProgLog log;

  friend bool operator==(const Config& a, const Config& b) {
    return a.env == b.env && a.log == b.log;
  }
  friend bool operator<(const Config& a, const Config& b) {
    if (!(a.env == b.env)) return a.env < b.env;
    return a.log < b.log;
  }
};

using SubDist = std::map<Config, Rat>;

Rat totalMass(const SubDist& d);
// Divides by total mass; the all-zero subdistribution stays all-zero.
SubDist normalizeDist(const SubDist& d);
std::map<ProgLog, Rat> marginalizeLogs(const SubDist& d);

// Number of guards that hold in env.
Rat doneCount(const GuardedPtr& gc, const Env& env);
// Total weight of the guards that hold in env.
Rat branchProb(const GuardedPtr& gc, const Env& env);

struct InterpretResult {
  SubDist dist;
  // Mass still inside some loop when its fuel ran out.
  Rat residual;
};

// Exact subdistribution over (env, log) outcomes. Each loop may evaluate its
// guards at most `fuel` times per entry, so a terminating execution with k
// iterations needs fuel >= k + 1; the cut-off mass is reported as residual.
InterpretResult interpretExact(const CommandPtr& c, const Env& env,
                               const ProgLog& log, long long fuel);
SubDist interpretNormalized(const CommandPtr& c, const Env& env,
                            const ProgLog& log, long long fuel);

// Deterministic splittable RNG. Substreams are derived from the seed and an
// index, so batch sampling is reproducible and order-independent.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed);

  SplitRng substream(std::uint64_t index) const;
  std::uint64_t nextU64();
  // Dyadic rational in [0, 1).
  Rat nextUnit();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Draws a value with probability proportional to its mass.
Rat drawFrom(const Distribution& dist, SplitRng& rng);

struct SampleBudgets {
  long long maxRejections = 1000000;
  long long maxSteps = 1000000;
};

struct SampleOutcome {
  Env env;
  ProgLog log;
  long long rejections = 0;
};

// One accepted execution; failed observes restart from scratch and are
// counted as rejections.
SampleOutcome sampleRun(const CommandPtr& c, const Env& env, SplitRng& rng,
                        const SampleBudgets& budgets);
SampleOutcome sampleRun(const CommandPtr& c, const Env& env,
                        std::uint64_t seed, const SampleBudgets& budgets);

struct SampleStats {
  long long accepted = 0;
  long long rejections = 0;
  Rat acceptRate{0};
};

struct SampleSet {
  std::vector<Config> records;
  SampleStats stats;
};

// n accepted executions, sample i drawn from substream(i) of the seed.
SampleSet sampleMany(const CommandPtr& c, const Env& env, long long n,
                     std::uint64_t seed, const SampleBudgets& budgets);

Program parseProgram(Scanner& sc);
Program parseProgramText(std::string_view text);
std::string printCommand(const CommandPtr& c, int indent = 0);
std::string printProgram(const Program& p);

}  // namespace dpnppl
