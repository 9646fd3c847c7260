#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/formats.hpp"
#include "dpnppl/mining.hpp"
#include "dpnppl/translate.hpp"

using namespace dpnppl;
using nlohmann::ordered_json;

namespace {

// Validation problems (bad flags, malformed files, unknown names) exit with
// 1; errors that only show up while executing (budgets, fuel, evaluation)
// exit with 2.
int exitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RejectionBudgetExhausted:
    case ErrorKind::StepBudgetExhausted:
    case ErrorKind::InfiniteSupport:
    case ErrorKind::UnboundVariable:
    case ErrorKind::InvalidBranchWeights:
    case ErrorKind::StepNotEnabled:
    case ErrorKind::IllegalRun:
      return 2;
    default:
      return 1;
  }
}

std::string messageOf(const Error& e) {
  std::string prefix = std::string(errorKindName(e.kind())) + ": ";
  std::string all = e.what();
  return all.rfind(prefix, 0) == 0 ? all.substr(prefix.size()) : all;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void writeFile(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, path + ": cannot open for writing");
  out << bytes;
  if (!out) fail(ErrorKind::IoError, path + ": write failed");
}

// Net files are JSON unless they look like XML.
NetDocument loadNet(const std::string& path) {
  std::string bytes = readFile(path);
  std::size_t i = bytes.find_first_not_of(" \t\r\n");
  try {
    if (i != std::string::npos && bytes[i] == '<') return parsePnml(bytes);
    return parseNetJson(bytes);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + messageOf(e));
  }
}

Scheduler loadScheduler(const Dpn& net, const std::string& path) {
  std::string bytes = readFile(path);
  try {
    return parseScheduler(net, bytes);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + messageOf(e));
  }
}

GoalSpec parseGoal(const Dpn& net, const std::string& text) {
  GoalSpec goal{parseBoolText(text)};
  validateGoal(net, goal);
  return goal;
}

// Shared inputs of every subcommand.
struct Inputs {
  std::string netPath;
  std::string schedulerPath;
  std::string goalText;
  bool json = false;
};

void addInputFlags(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--net", in.netPath, "net file (native JSON or PNML)")
      ->required();
  cmd->add_option("--scheduler", in.schedulerPath, "scheduler file")
      ->required();
  cmd->add_option("--goal", in.goalText,
                  "goal expression over case variables and marking(p)")
      ->required();
  cmd->add_flag("--json", in.json, "machine-readable report on stdout");
}

struct LoadedInputs {
  NetDocument doc;
  NetState initial;
  Scheduler sched;
  GoalSpec goal;
};

LoadedInputs loadInputs(const Inputs& in) {
  LoadedInputs loaded{loadNet(in.netPath), NetState{}, Scheduler{}, GoalSpec{}};
  loaded.initial = documentState(loaded.doc);
  loaded.sched = loadScheduler(loaded.doc.net, in.schedulerPath);
  loaded.goal = parseGoal(loaded.doc.net, in.goalText);
  return loaded;
}

constexpr const char* kDeadlockNote = "deadlocked states also count as goals";

ordered_json ratValue(const Rat& value) {
  if (value.isInteger()) return ordered_json(value.asInt());
  return ordered_json(value.str());
}

ordered_json probabilityJson(const Rat& p) {
  return ordered_json{{"exact", p.str()}, {"approx", p.approx()}};
}

ordered_json runJson(const Run& run) {
  ordered_json steps = ordered_json::array();
  for (const Step& step : run) {
    ordered_json binding = ordered_json::object();
    for (const auto& [name, value] : step.binding)
      binding[name] = ratValue(value);
    steps.push_back(
        ordered_json{{"transition", step.transition}, {"binding", binding}});
  }
  return steps;
}

std::string probabilityText(const Rat& p) {
  std::ostringstream out;
  out << p.str() << " (" << p.approx() << ")";
  return out.str();
}

void emitReport(const ordered_json& report) {
  std::cout << report.dump(2) << "\n";
}

long long stepCount(const Run& run, const std::string& transition) {
  long long n = 0;
  for (const Step& step : run)
    if (step.transition == transition) ++n;
  return n;
}

// translate ----------------------------------------------------------------

struct TranslateArgs {
  Inputs in;
  std::string emit = "native";
  std::string outPath;
};

int runTranslate(const TranslateArgs& args) {
  LoadedInputs loaded = loadInputs(args.in);
  Program prog = buildProgram(loaded.doc.net, loaded.sched, loaded.goal,
                              loaded.initial);
  Dialect dialect =
      args.emit == "webppl" ? Dialect::Webppl : Dialect::Native;
  std::string text = emitText(prog, dialect);
  writeFile(args.outPath, text);

  if (args.in.json) {
    emitReport(ordered_json{{"subcommand", "translate"},
                            {"net", args.in.netPath},
                            {"scheduler", args.in.schedulerPath},
                            {"goal", args.in.goalText},
                            {"deadlockAsGoal", true},
                            {"dialect", args.emit},
                            {"output", args.outPath},
                            {"bytes", text.size()}});
  } else {
    std::cout << "goal: " << args.in.goalText << " (" << kDeadlockNote << ")\n"
              << "wrote " << args.emit << " program to " << args.outPath
              << " (" << text.size() << " bytes)\n";
  }
  return 0;
}

// simulate -------------------------------------------------------------------

struct SimulateArgs {
  Inputs in;
  long long runs = 0;
  std::uint64_t seed = 0;
  std::string format = "jsonl";
  std::string outPath;
  SampleBudgets budgets;
};

int runSimulate(const SimulateArgs& args) {
  LoadedInputs loaded = loadInputs(args.in);

  auto started = std::chrono::steady_clock::now();
  EventLog log = generateLog(loaded.doc.net, loaded.sched, loaded.goal,
                             loaded.initial, args.runs, args.seed,
                             args.budgets, args.in.schedulerPath);
  LogFormat format =
      args.format == "xes" ? LogFormat::XesXml : LogFormat::Jsonl;
  writeFile(args.outPath, writeLog(log, format));
  std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - started;

  if (args.in.json) {
    emitReport(ordered_json{{"subcommand", "simulate"},
                            {"net", args.in.netPath},
                            {"scheduler", args.in.schedulerPath},
                            {"goal", args.in.goalText},
                            {"deadlockAsGoal", true},
                            {"runs", args.runs},
                            {"seed", args.seed},
                            {"acceptRate", log.meta.acceptRate.str()},
                            {"acceptRateApprox", log.meta.acceptRate.approx()},
                            {"runtimeSeconds", elapsed.count()},
                            {"format", args.format},
                            {"output", args.outPath}});
  } else {
    std::cout << "goal: " << args.in.goalText << " (" << kDeadlockNote << ")\n"
              << "sampled " << args.runs << " accepted runs (seed "
              << args.seed << ")\n"
              << "accept rate: " << probabilityText(log.meta.acceptRate)
              << "\n"
              << "runtime: " << elapsed.count() << " s\n"
              << "wrote " << args.format << " log to " << args.outPath << "\n";
  }
  return 0;
}

// infer ----------------------------------------------------------------------

struct InferArgs {
  Inputs in;
  long long maxDepth = 0;
  std::string observe;
  std::vector<std::string> countTransitions;
};

void printRunLine(std::ostream& out, const Rat& p, const Run& run,
                  const std::vector<std::string>& counts) {
  out << "  " << probabilityText(p) << "  " << runToString(run);
  for (const std::string& t : counts)
    out << "  #" << t << "=" << stepCount(run, t);
  out << "\n";
}

int runInfer(const InferArgs& args) {
  LoadedInputs loaded = loadInputs(args.in);
  for (const std::string& t : args.countTransitions)
    loaded.doc.net.transitionIndex(t);

  Query q;
  if (!args.observe.empty()) q.condition = parseBoolText(args.observe);
  DistributionReport report =
      queryDistribution(loaded.doc.net, loaded.sched, loaded.goal,
                        loaded.initial, q, args.maxDepth + 1);

  if (args.in.json) {
    ordered_json runs = ordered_json::array();
    for (const auto& [run, p] : report.runs) {
      ordered_json entry{{"probability", probabilityJson(p)},
                         {"run", runJson(run)}};
      if (!args.countTransitions.empty()) {
        ordered_json counts = ordered_json::object();
        for (const std::string& t : args.countTransitions)
          counts[t] = stepCount(run, t);
        entry["counts"] = counts;
      }
      runs.push_back(entry);
    }
    emitReport(ordered_json{
        {"subcommand", "infer"},
        {"net", args.in.netPath},
        {"scheduler", args.in.schedulerPath},
        {"goal", args.in.goalText},
        {"deadlockAsGoal", true},
        {"observe", args.observe},
        {"maxDepth", args.maxDepth},
        {"noFeasibleExecution", report.noFeasibleExecution},
        {"runs", runs},
        {"residual", report.residual.str()}});
    return 0;
  }

  std::cout << "goal: " << args.in.goalText << " (" << kDeadlockNote << ")\n";
  if (!args.observe.empty()) std::cout << "observe: " << args.observe << "\n";
  std::cout << "max depth: " << args.maxDepth << "\n";
  if (report.noFeasibleExecution) {
    std::cout << "no feasible execution: the observation has probability 0\n"
              << "residual mass: " << report.residual.str() << "\n";
    return 0;
  }
  std::cout << "runs: " << report.runs.size() << "\n";
  for (const auto& [run, p] : report.runs)
    printRunLine(std::cout, p, run, args.countTransitions);
  std::cout << "residual mass: " << report.residual.str() << "\n";
  return 0;
}

// whatif ---------------------------------------------------------------------

struct WhatIfArgs {
  Inputs in;
  std::string altSchedulerPath;
  long long maxDepth = 0;
  std::string observe;
};

int runWhatIf(const WhatIfArgs& args) {
  LoadedInputs loaded = loadInputs(args.in);
  Scheduler alt = loadScheduler(loaded.doc.net, args.altSchedulerPath);

  Query q;
  if (!args.observe.empty()) q.condition = parseBoolText(args.observe);
  WhatIfReport report = whatIf(loaded.doc.net, loaded.sched, alt, loaded.goal,
                               loaded.initial, q, args.maxDepth + 1);

  std::map<Run, std::pair<Rat, Rat>> merged;
  for (const auto& [run, p] : report.base.runs) merged[run].first = p;
  for (const auto& [run, p] : report.alt.runs) merged[run].second = p;

  if (args.in.json) {
    ordered_json runs = ordered_json::array();
    for (const auto& [run, pair] : merged)
      runs.push_back(ordered_json{{"base", probabilityJson(pair.first)},
                                  {"alt", probabilityJson(pair.second)},
                                  {"run", runJson(run)}});
    emitReport(ordered_json{
        {"subcommand", "whatif"},
        {"net", args.in.netPath},
        {"scheduler", args.in.schedulerPath},
        {"altScheduler", args.altSchedulerPath},
        {"goal", args.in.goalText},
        {"deadlockAsGoal", true},
        {"observe", args.observe},
        {"maxDepth", args.maxDepth},
        {"noFeasibleExecution",
         report.base.noFeasibleExecution || report.alt.noFeasibleExecution},
        {"runs", runs},
        {"baseResidual", report.base.residual.str()},
        {"altResidual", report.alt.residual.str()},
        {"tvDistance", probabilityJson(report.tvDistance)}});
    return 0;
  }

  std::cout << "goal: " << args.in.goalText << " (" << kDeadlockNote << ")\n"
            << "base scheduler: " << args.in.schedulerPath << "\n"
            << "alt scheduler: " << args.altSchedulerPath << "\n";
  if (!args.observe.empty()) std::cout << "observe: " << args.observe << "\n";
  std::cout << "max depth: " << args.maxDepth << "\n"
            << "runs (base | alt): " << merged.size() << "\n";
  for (const auto& [run, pair] : merged)
    std::cout << "  " << probabilityText(pair.first) << " | "
              << probabilityText(pair.second) << "  " << runToString(run)
              << "\n";
  std::cout << "total variation distance: "
            << probabilityText(report.tvDistance) << "\n";
  return 0;
}

// verify ---------------------------------------------------------------------

struct VerifyArgs {
  Inputs in;
  long long maxDepth = 0;
};

struct VerifyOutcome {
  bool pass = true;
  std::string mismatch;
  std::size_t oracleRuns = 0;
  std::size_t programRuns = 0;
  Rat oracleResidual{0};
  Rat programResidual{0};
  std::set<std::string> supportGaps;
};

// Replays the oracle's runs and records every transition that is enabled by
// tokens and precondition in some visited state while no scheduler value
// satisfies its postcondition. Such nets normalize transition selection
// differently in the oracle and in the program, so equality cannot hold.
void scanSupportGaps(const Dpn& net, const Scheduler& sched,
                     const NetState& initial, const RunEnumeration& oracle,
                     std::set<std::string>& out) {
  auto note = [&](const NetState& st) {
    for (int t : schedulerSupportGap(net, st, sched))
      out.insert(net.transitions()[t].name);
  };
  note(initial);
  for (const auto& [run, p] : oracle.runs) {
    NetState st = initial;
    for (const Step& step : run) {
      st = fire(net, st, step);
      note(st);
    }
  }
}

VerifyOutcome verifyEquivalence(const Dpn& net, const Scheduler& sched,
                                const GoalSpec& goal, const NetState& initial,
                                long long maxDepth) {
  VerifyOutcome outcome;

  RunEnumeration oracle =
      enumerateRuns(net, sched, initial, goal, static_cast<int>(maxDepth));
  outcome.oracleResidual = oracle.residual;
  outcome.oracleRuns = oracle.runs.size();
  scanSupportGaps(net, sched, initial, oracle, outcome.supportGaps);

  Program prog = buildProgram(net, sched, goal, initial);
  InterpretResult exact =
      interpretExact(prog.body, Env{}, {}, maxDepth + 1);
  outcome.programResidual = exact.residual;

  if (oracle.residual != Rat(0) || exact.residual != Rat(0)) {
    outcome.pass = false;
    outcome.mismatch = "unaccounted mass at max depth " +
                       std::to_string(maxDepth) + " (oracle residual " +
                       oracle.residual.str() + ", program residual " +
                       exact.residual.str() + "); raise --max-depth";
    return outcome;
  }

  Rat total(0);
  for (const auto& [run, p] : oracle.runs) total += p;
  std::map<Run, Rat> oracleDist;
  if (total > Rat(0))
    for (const auto& [run, p] : oracle.runs) oracleDist[run] += p / total;

  SubDist norm = normalizeDist(exact.dist);
  std::map<Run, Rat> programDist;
  for (const auto& [config, mass] : norm)
    programDist[logToRun(config.log)] += mass;
  outcome.programRuns = programDist.size();

  for (const auto& [run, p] : oracleDist) {
    auto it = programDist.find(run);
    Rat q = it == programDist.end() ? Rat(0) : it->second;
    if (q != p) {
      outcome.pass = false;
      outcome.mismatch = "run " + runToString(run) +
                         " has oracle probability " + p.str() +
                         " but program probability " + q.str();
      return outcome;
    }
  }
  for (const auto& [run, q] : programDist) {
    if (!oracleDist.count(run)) {
      outcome.pass = false;
      outcome.mismatch = "run " + runToString(run) +
                         " has program probability " + q.str() +
                         " but the oracle never produces it";
      return outcome;
    }
  }

  for (const auto& [config, mass] : norm) {
    if (mass == Rat(0)) continue;
    NetState replayed = initial;
    for (const Step& step : logToRun(config.log))
      replayed = fire(net, replayed, step);
    if (!(decodeNetState(net, config.env) == replayed)) {
      outcome.pass = false;
      outcome.mismatch = "final state of run " +
                         runToString(logToRun(config.log)) +
                         " does not decode to the replayed net state";
      return outcome;
    }
  }
  return outcome;
}

int runVerify(const VerifyArgs& args) {
  LoadedInputs loaded = loadInputs(args.in);
  VerifyOutcome outcome =
      verifyEquivalence(loaded.doc.net, loaded.sched, loaded.goal,
                        loaded.initial, args.maxDepth);

  for (const std::string& t : outcome.supportGaps)
    std::cerr << "warning: support gap: transition " << t
              << " is pre-enabled in a reachable state where no scheduler "
                 "value satisfies its postcondition\n";

  if (args.in.json) {
    emitReport(ordered_json{
        {"subcommand", "verify"},
        {"net", args.in.netPath},
        {"scheduler", args.in.schedulerPath},
        {"goal", args.in.goalText},
        {"deadlockAsGoal", true},
        {"maxDepth", args.maxDepth},
        {"oracleRuns", outcome.oracleRuns},
        {"programRuns", outcome.programRuns},
        {"oracleResidual", outcome.oracleResidual.str()},
        {"programResidual", outcome.programResidual.str()},
        {"supportGapWarnings",
         std::vector<std::string>(outcome.supportGaps.begin(),
                                  outcome.supportGaps.end())},
        {"pass", outcome.pass},
        {"mismatch", outcome.mismatch}});
  } else {
    std::cout << "goal: " << args.in.goalText << " (" << kDeadlockNote
              << ")\n"
              << "max depth: " << args.maxDepth << "\n"
              << "oracle: " << outcome.oracleRuns << " runs, residual "
              << outcome.oracleResidual.str() << "\n";
    if (outcome.pass) {
      std::cout << "PASS: exact distribution equality over "
                << outcome.programRuns
                << " runs; final states decode to the replayed net states\n";
    } else {
      std::cout << "FAIL: " << outcome.mismatch << "\n";
    }
  }
  return outcome.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Translates data Petri nets with probabilistic schedulers into "
      "probabilistic programs; simulates, analyzes, and cross-checks them"};
  app.require_subcommand(1);

  TranslateArgs translateArgs;
  CLI::App* translate =
      app.add_subcommand("translate", "emit the translated program");
  addInputFlags(translate, translateArgs.in);
  translate->add_option("--emit", translateArgs.emit, "output dialect")
      ->check(CLI::IsMember({"native", "webppl"}));
  translate->add_option("-o,--output", translateArgs.outPath, "output file")
      ->required();

  SimulateArgs simulateArgs;
  CLI::App* simulate =
      app.add_subcommand("simulate", "sample an event log by rejection");
  addInputFlags(simulate, simulateArgs.in);
  simulate->add_option("--runs", simulateArgs.runs, "accepted runs to sample")
      ->required()
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", simulateArgs.seed, "rng seed");
  simulate->add_option("--format", simulateArgs.format, "log format")
      ->check(CLI::IsMember({"jsonl", "xes"}));
  simulate->add_option("-o,--output", simulateArgs.outPath, "output file")
      ->required();
  simulate->add_option("--max-rejections", simulateArgs.budgets.maxRejections,
                       "rejection budget per accepted sample");
  simulate->add_option("--max-steps", simulateArgs.budgets.maxSteps,
                       "command budget per attempt");

  InferArgs inferArgs;
  CLI::App* infer =
      app.add_subcommand("infer", "exact conditional run distribution");
  addInputFlags(infer, inferArgs.in);
  infer->add_option("--max-depth", inferArgs.maxDepth, "run length bound")
      ->required()
      ->check(CLI::NonNegativeNumber);
  infer->add_option("--observe", inferArgs.observe,
                    "condition over final variables, markings, and #t "
                    "transition counters");
  infer->add_option("--count-transition", inferArgs.countTransitions,
                    "report per-run firing counts for this transition "
                    "(repeatable)");

  WhatIfArgs whatIfArgs;
  CLI::App* whatif =
      app.add_subcommand("whatif", "compare two schedulers on one query");
  addInputFlags(whatif, whatIfArgs.in);
  whatif
      ->add_option("--alt-scheduler", whatIfArgs.altSchedulerPath,
                   "alternative scheduler file")
      ->required();
  whatif->add_option("--max-depth", whatIfArgs.maxDepth, "run length bound")
      ->required()
      ->check(CLI::NonNegativeNumber);
  whatif->add_option("--observe", whatIfArgs.observe,
                     "condition applied under both schedulers");

  VerifyArgs verifyArgs;
  CLI::App* verify = app.add_subcommand(
      "verify", "cross-check the program against the net semantics");
  addInputFlags(verify, verifyArgs.in);
  verify->add_option("--max-depth", verifyArgs.maxDepth, "run length bound")
      ->required()
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
    if (*translate) return runTranslate(translateArgs);
    if (*simulate) return runSimulate(simulateArgs);
    if (*infer) return runInfer(inferArgs);
    if (*whatif) return runWhatIf(whatIfArgs);
    if (*verify) return runVerify(verifyArgs);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exitCodeFor(e.kind());
  }
  return 0;
}
