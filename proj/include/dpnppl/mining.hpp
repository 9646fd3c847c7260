#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dpnppl/translate.hpp"

namespace dpnppl {

// One observed activity: the fired transition's label plus the case-variable
// values it read, overlaid with the values it wrote.
struct Event {
  std::string activity;
  std::map<std::string, Rat> payload;

  friend bool operator==(const Event& a, const Event& b) {
    return a.activity == b.activity && a.payload == b.payload;
  }
};

// The initial snapshot is stored by name so a serialized trace stands on
// its own; zero markings are dropped, variable values are all kept.
struct Trace {
  std::string id;
  std::map<std::string, long long> initialMarking;
  std::map<std::string, Rat> initialValuation;
  std::vector<Event> events;

  friend bool operator==(const Trace& a, const Trace& b) {
    return a.id == b.id && a.initialMarking == b.initialMarking &&
           a.initialValuation == b.initialValuation && a.events == b.events;
  }
};

struct LogMetadata {
  std::uint64_t seed = 0;
  std::string schedulerId;
  std::string goal;
  long long samples = 0;
  Rat acceptRate{0};

  friend bool operator==(const LogMetadata& a, const LogMetadata& b) {
    return a.seed == b.seed && a.schedulerId == b.schedulerId &&
           a.goal == b.goal && a.samples == b.samples &&
           a.acceptRate == b.acceptRate;
  }
};

struct EventLog {
  LogMetadata meta;
  std::vector<Trace> traces;

  friend bool operator==(const EventLog& a, const EventLog& b) {
    return a.meta == b.meta && a.traces == b.traces;
  }
};

// Projects a legal run to its trace: one event per step, payload from the
// binding's unprimed entries overlaid with the written primed values.
Trace runToTrace(const Dpn& net, const NetState& initialState, const Run& run,
                 std::string id = "");

// n sampled goal-reaching runs of the translated program, projected to
// traces. Pure function of its arguments; sample i uses substream i.
EventLog generateLog(const Dpn& net, const Scheduler& sched,
                     const GoalSpec& goal, const NetState& initialState,
                     long long n, std::uint64_t seed,
                     const SampleBudgets& budgets,
                     const std::string& schedulerId = "");

struct DistributionReport {
  // Goal-reaching runs with their conditional probabilities; empty together
  // with noFeasibleExecution when the condition cuts everything.
  std::vector<std::pair<Run, Rat>> runs;
  Rat residual{0};
  bool noFeasibleExecution = false;
  // Set only for probability queries.
  Rat eventProbability{0};
};

// Exact conditional semantics of the translated program: counters for every
// #t the query mentions, observation appended, loop capped at `fuel`.
DistributionReport queryDistribution(const Dpn& net, const Scheduler& sched,
                                     const GoalSpec& goal,
                                     const NetState& initialState,
                                     const Query& q, long long fuel);

struct WhatIfReport {
  DistributionReport base;
  DistributionReport alt;
  Rat tvDistance{0};
};

// The same query under two schedulers, plus the total-variation distance
// between the two conditional run distributions.
WhatIfReport whatIf(const Dpn& net, const Scheduler& baseSched,
                    const Scheduler& altSched, const GoalSpec& goal,
                    const NetState& initialState, const Query& q,
                    long long fuel);

}  // namespace dpnppl
