#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/mining.hpp"

namespace dpnppl {

Trace runToTrace(const Dpn& net, const NetState& initialState, const Run& run,
                 std::string id) {
  Trace trace;
  trace.id = std::move(id);
  for (std::size_t p = 0; p < net.places().size(); p++)
    if (initialState.marking[p] != 0)
      trace.initialMarking[net.places()[p]] = initialState.marking[p];
  for (std::size_t v = 0; v < net.variables().size(); v++)
    trace.initialValuation[net.variables()[v]] = initialState.valuation[v];

  NetState st = initialState;
  for (std::size_t i = 0; i < run.size(); i++) {
    const Step& step = run[i];
    try {
      if (!isEnabledStep(net, st, step))
        fail(ErrorKind::IllegalRun, "step is not enabled");
      Event ev;
      ev.activity =
          net.transitions()[net.transitionIndex(step.transition)].label;
      for (const auto& [key, value] : step.binding)
        if (!isPrimedName(key)) ev.payload[key] = value;
      for (const auto& [key, value] : step.binding)
        if (isPrimedName(key)) ev.payload[baseName(key)] = value;
      trace.events.push_back(std::move(ev));
      st = fire(net, st, step);
    } catch (const Error& e) {
      fail(ErrorKind::IllegalRun, "step " + std::to_string(i) + " (" +
                                      step.transition + "): " + e.what());
    }
  }
  return trace;
}

EventLog generateLog(const Dpn& net, const Scheduler& sched,
                     const GoalSpec& goal, const NetState& initialState,
                     long long n, std::uint64_t seed,
                     const SampleBudgets& budgets,
                     const std::string& schedulerId) {
  Program prog = buildProgram(net, sched, goal, initialState);
  SampleSet set = sampleMany(prog.body, Env{}, n, seed, budgets);

  EventLog log;
  log.meta.seed = seed;
  log.meta.schedulerId = schedulerId;
  log.meta.goal = goal.expr ? boolToString(goal.expr) : "";
  log.meta.samples = n;
  log.meta.acceptRate = set.stats.acceptRate;
  for (std::size_t i = 0; i < set.records.size(); i++)
    log.traces.push_back(runToTrace(net, initialState,
                                    logToRun(set.records[i].log),
                                    std::to_string(i)));
  return log;
}

namespace {

std::set<std::string> counterRefs(const BoolPtr& e) {
  std::set<std::string> out;
  if (!e) return out;
  NameRefs refs;
  collectRefs(e, refs);
  return refs.counters;
}

}  // namespace

DistributionReport queryDistribution(const Dpn& net, const Scheduler& sched,
                                     const GoalSpec& goal,
                                     const NetState& initialState,
                                     const Query& q, long long fuel) {
  if (q.target == Query::Target::Probability && !q.event)
    fail(ErrorKind::InvalidProgram,
         "a probability query needs an event expression");

  std::set<std::string> counters = counterRefs(q.condition);
  for (const std::string& t : counterRefs(q.event)) counters.insert(t);

  Program prog =
      injectCounters(buildProgram(net, sched, goal, initialState), counters);
  if (q.condition) prog = injectObserve(prog, q.condition);

  InterpretResult exact = interpretExact(prog.body, Env{}, {}, fuel);
  DistributionReport report;
  report.residual = exact.residual;
  if (totalMass(exact.dist) == Rat(0)) {
    report.noFeasibleExecution = true;
    return report;
  }

  SubDist norm = normalizeDist(exact.dist);
  std::map<Run, Rat> byRun;
  for (const auto& [config, mass] : norm)
    byRun[logToRun(config.log)] += mass;
  report.runs.assign(byRun.begin(), byRun.end());

  if (q.target == Query::Target::Probability) {
    BoolPtr encoded = encodeBool(q.event);
    for (const auto& [config, mass] : norm)
      if (evalBool(encoded, config.env)) report.eventProbability += mass;
  }
  return report;
}

WhatIfReport whatIf(const Dpn& net, const Scheduler& baseSched,
                    const Scheduler& altSched, const GoalSpec& goal,
                    const NetState& initialState, const Query& q,
                    long long fuel) {
  WhatIfReport report;
  report.base = queryDistribution(net, baseSched, goal, initialState, q, fuel);
  report.alt = queryDistribution(net, altSched, goal, initialState, q, fuel);

  std::map<Run, Rat> delta;
  for (const auto& [run, p] : report.base.runs) delta[run] += p;
  for (const auto& [run, p] : report.alt.runs) delta[run] -= p;
  Rat total(0);
  for (const auto& [run, d] : delta) total += d < Rat(0) ? -d : d;
  report.tvDistance = total / Rat(2);
  return report;
}

}  // namespace dpnppl
