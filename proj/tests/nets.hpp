#pragma once

#include "dpnppl/dpn.hpp"

// Nets shared across the test suites.

namespace testnets {

using namespace dpnppl;

// Auction process: init spawns the bidding and timing loops, hammer closes
// the auction once the timer ran out and an offer exists.
inline Dpn auctionNet() {
  std::vector<Transition> ts;
  ts.push_back({"init", "", parseBoolText("true"), parseBoolText("t' > 0")});
  ts.push_back({"bid", "", parseBoolText("t > 0"), parseBoolText("o' > o")});
  ts.push_back({"timer", "", parseBoolText("t > 0"), parseBoolText("t' < t")});
  ts.push_back({"hammer", "", parseBoolText("t <= 0 && o > 0"),
                parseBoolText("true")});
  ts.push_back({"reset", "", parseBoolText("o = 0"), parseBoolText("true")});
  return Dpn({"p0", "p1", "p2", "p3"}, std::move(ts), {"t", "o"},
             {{"p0", "init"},
              {"init", "p1"},
              {"init", "p2"},
              {"p1", "bid"},
              {"bid", "p1"},
              {"p2", "timer"},
              {"timer", "p2"},
              {"p1", "hammer"},
              {"p2", "hammer"},
              {"hammer", "p3"},
              {"p3", "reset"},
              {"reset", "p0"}});
}

inline Scheduler auctionScheduler(const Dpn& net) {
  return uniformScheduler(net, {{"t'", parseDistText("uniformInt(0, 99)")},
                                {"o'", parseDistText("uniformInt(1, 30)")}});
}

// Tiny value domains keep exhaustive run enumeration affordable.
inline Scheduler shrunkenScheduler(const Dpn& net) {
  return uniformScheduler(net, {{"t'", parseDistText("uniformInt(0, 3)")},
                                {"o'", parseDistText("uniformInt(1, 2)")}});
}

inline GoalSpec auctionGoal() {
  return GoalSpec{parseBoolText("marking(p3) = 1")};
}

inline NetState auctionInitial(const Dpn& net) {
  return makeNetState(net, {{"p0", 1}}, {{"t", Rat(0)}, {"o", Rat(0)}});
}

// Mid-auction state used by the step likelihood walkthrough.
inline NetState midAuctionState(const Dpn& net) {
  return makeNetState(net, {{"p1", 1}, {"p2", 1}},
                      {{"t", Rat(20)}, {"o", Rat(5)}});
}

// Auction variant whose bid stops at the offer cap, so under the shrunken
// scheduler every pre-enabled transition also has a satisfiable
// postcondition. Exact-equivalence tests need that property; the plain
// auction loses bid mass at o = 2 where no support value exceeds the offer.
inline Dpn cappedAuctionNet() {
  std::vector<Transition> ts;
  ts.push_back({"init", "", parseBoolText("true"), parseBoolText("t' > 0")});
  ts.push_back({"bid", "", parseBoolText("t > 0 && o < 2"),
                parseBoolText("o' > o")});
  ts.push_back({"timer", "", parseBoolText("t > 0"), parseBoolText("t' < t")});
  ts.push_back({"hammer", "", parseBoolText("t <= 0 && o > 0"),
                parseBoolText("true")});
  ts.push_back({"reset", "", parseBoolText("o = 0"), parseBoolText("true")});
  return Dpn({"p0", "p1", "p2", "p3"}, std::move(ts), {"t", "o"},
             {{"p0", "init"},
              {"init", "p1"},
              {"init", "p2"},
              {"p1", "bid"},
              {"bid", "p1"},
              {"p2", "timer"},
              {"timer", "p2"},
              {"p1", "hammer"},
              {"p2", "hammer"},
              {"hammer", "p3"},
              {"p3", "reset"},
              {"reset", "p0"}});
}

inline Run exampleRun() {
  return {
      {"init", {{"t'", Rat(10)}}},
      {"bid", {{"t", Rat(10)}, {"o", Rat(0)}, {"o'", Rat(5)}}},
      {"timer", {{"t", Rat(10)}, {"t'", Rat(0)}}},
      {"hammer", {{"t", Rat(0)}, {"o", Rat(5)}}},
  };
}

// One transition, one shot: moves the token and samples d once.
inline Dpn singleStepNet() {
  std::vector<Transition> ts;
  ts.push_back({"go", "", parseBoolText("true"), parseBoolText("d' >= 0")});
  return Dpn({"a", "b"}, std::move(ts), {"d"}, {{"a", "go"}, {"go", "b"}});
}

inline Scheduler singleStepScheduler(const Dpn& net) {
  return uniformScheduler(net, {{"d'", parseDistText("uniformInt(0, 2)")}});
}

inline NetState singleStepInitial(const Dpn& net) {
  return makeNetState(net, {{"a", 1}}, {{"d", Rat(0)}});
}

// Two competing transitions with asymmetric weights; both deadlock after one
// firing, so every goal is a deadlock goal.
inline Dpn twoBranchNet() {
  std::vector<Transition> ts;
  ts.push_back({"ta", "", parseBoolText("true"), parseBoolText("x' = 1")});
  ts.push_back({"tb", "", parseBoolText("true"), parseBoolText("x' = 2")});
  return Dpn({"s", "da", "db"}, std::move(ts), {"x"},
             {{"s", "ta"}, {"ta", "da"}, {"s", "tb"}, {"tb", "db"}});
}

inline Scheduler twoBranchScheduler(const Dpn& net) {
  Scheduler sched;
  sched.weights = {parseArithText("3/4"), parseArithText("1/4")};
  (void)net;
  sched.valueDists = {{"x'", parseDistText("uniformInt(1, 2)")}};
  return sched;
}

inline NetState twoBranchInitial(const Dpn& net) {
  return makeNetState(net, {{"s", 1}}, {{"x", Rat(0)}});
}

}  // namespace testnets
