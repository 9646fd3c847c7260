#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/ppl.hpp"

using namespace dpnppl;

namespace {

Env envOf(const std::vector<std::pair<std::string, Rat>>& vars) {
  Env env;
  for (const auto& [name, value] : vars) env.set(name, value);
  return env;
}

Config cfg(const std::vector<std::pair<std::string, Rat>>& vars,
           ProgLog log = {}) {
  return Config{envOf(vars), std::move(log)};
}

// Three-way choice on a uniform draw from {1,2,3}: two branches write y := 4
// (guards x = 1 and x = 2), one writes y := 5 (guard x > 1). At x = 2 two
// guards hold at once.
GuardedPtr threeWayChoice() {
  return choiceOf({
      gBranch(bCmp(CmpOp::Eq, aVar("x"), aConst(Rat(1))), aConst(Rat(1, 3)),
              cAssign("y", dDirac(aConst(Rat(4))))),
      gBranch(bCmp(CmpOp::Eq, aVar("x"), aConst(Rat(2))), aConst(Rat(1, 3)),
              cAssign("y", dDirac(aConst(Rat(4))))),
      gBranch(bCmp(CmpOp::Gt, aVar("x"), aConst(Rat(1))), aConst(Rat(1, 3)),
              cAssign("y", dDirac(aConst(Rat(5))))),
  });
}

CommandPtr drawThenChoose() {
  return cSeq(cAssign("x", dUniformInt(aConst(Rat(1)), aConst(Rat(3)))),
              cCond(threeWayChoice()));
}

CommandPtr withObserve(const char* cond) {
  return cSeq(drawThenChoose(), cObserve(parseBoolText(cond)));
}

Rat massWhere(const SubDist& d, const std::string& var, const Rat& value) {
  Rat total(0);
  for (const auto& [config, mass] : d)
    if (config.env.get(var) == value) total += mass;
  return total;
}

bool pointwiseLeq(const SubDist& lo, const SubDist& hi) {
  for (const auto& [config, mass] : lo) {
    auto it = hi.find(config);
    if (it == hi.end() || mass > it->second) return false;
  }
  return true;
}

// do n > 0 -> (1): n := n - 1 od
CommandPtr countdownLoop() {
  return cLoop(choiceOf({gBranch(
      bCmp(CmpOp::Gt, aVar("n"), aConst(Rat(0))), aConst(Rat(1)),
      cAssign("n", dDirac(aBin(ArithOp::Sub, aVar("n"), aConst(Rat(1))))))}));
}

}  // namespace

TEST_CASE("log messages snapshot variable values") {
  Env env = envOf({{"V_o", Rat(5)}, {"Vp_o", Rat(7)}});
  MsgExpr tmpl{"bid", {{"o", "V_o"}, {"o'", "Vp_o"}}};
  Msg m = evalMsg(tmpl, env);
  CHECK(m.label == "bid");
  CHECK(m.payload == std::map<std::string, Rat>{{"o", Rat(5)}, {"o'", Rat(7)}});
  CHECK(msgToString(m) == "bid{o: 5, o': 7}");
  CHECK(progLogToString({m, Msg{"hammer", {}}}) == "[bid{o: 5, o': 7}; hammer]");
  CHECK_THROWS_AS(evalMsg(MsgExpr{"bid", {{"o", "missing"}}}, env), Error);
}

TEST_CASE("done count and branch probability") {
  GuardedPtr gc = threeWayChoice();
  CHECK(doneCount(gc, envOf({{"x", Rat(1)}})) == Rat(1));
  CHECK(doneCount(gc, envOf({{"x", Rat(2)}})) == Rat(2));
  CHECK(doneCount(gc, envOf({{"x", Rat(3)}})) == Rat(1));
  CHECK(doneCount(gc, envOf({{"x", Rat(0)}})) == Rat(0));
  CHECK(branchProb(gc, envOf({{"x", Rat(1)}})) == Rat(1, 3));
  CHECK(branchProb(gc, envOf({{"x", Rat(2)}})) == Rat(2, 3));
  CHECK(branchProb(gc, envOf({{"x", Rat(0)}})) == Rat(0));
}

TEST_CASE("straight-line exact semantics") {
  Env empty;

  SUBCASE("observe false wipes out all mass") {
    InterpretResult r = interpretExact(cObserve(bConst(false)), empty, {}, 1);
    CHECK(r.dist.empty());
    CHECK(r.residual == Rat(0));
  }

  SUBCASE("point assignment followed by a log is a single outcome") {
    CommandPtr c = cSeq(cAssign("x", dDirac(aConst(Rat(5)))),
                        cLog(MsgExpr{"step", {{"x", "x"}}}));
    InterpretResult r = interpretExact(c, empty, {}, 1);
    SubDist expected{
        {cfg({{"x", Rat(5)}}, {Msg{"step", {{"x", Rat(5)}}}}), Rat(1)}};
    CHECK(r.dist == expected);
  }

  SUBCASE("deterministic assignment equals substitution") {
    CommandPtr tail = cSeq(
        cAssign("y", dUniformInt(aConst(Rat(1)), aVar("x"))),
        cObserve(bCmp(CmpOp::Ge, aVar("y"), aConst(Rat(2)))));
    CommandPtr assigned =
        cSeq(cAssign("x", dDirac(aConst(Rat(3)))), tail);
    InterpretResult viaAssign = interpretExact(assigned, empty, {}, 1);
    InterpretResult viaEnv =
        interpretExact(tail, envOf({{"x", Rat(3)}}), {}, 1);
    CHECK(viaAssign.dist == viaEnv.dist);
    CHECK(totalMass(viaAssign.dist) == Rat(2, 3));
  }

  SUBCASE("sequence composition is associative") {
    CommandPtr a = cAssign("x", dUniformInt(aConst(Rat(0)), aConst(Rat(1))));
    CommandPtr b = cAssign("y", dBernoulli(aConst(Rat(1, 4)), aVar("x"),
                                           aConst(Rat(9))));
    CommandPtr c = cObserve(bCmp(CmpOp::Ne, aVar("y"), aConst(Rat(0))));
    InterpretResult left = interpretExact(cSeq(cSeq(a, b), c), empty, {}, 1);
    InterpretResult right = interpretExact(cSeq(a, cSeq(b, c)), empty, {}, 1);
    CHECK(left.dist == right.dist);
  }
}

TEST_CASE("weighted choice splits mass over held branches") {
  InterpretResult r = interpretExact(drawThenChoose(), Env{}, {}, 1);
  SubDist expected{
      {cfg({{"x", Rat(1)}, {"y", Rat(4)}}), Rat(1, 3)},
      {cfg({{"x", Rat(2)}, {"y", Rat(4)}}), Rat(1, 6)},
      {cfg({{"x", Rat(2)}, {"y", Rat(5)}}), Rat(1, 6)},
      {cfg({{"x", Rat(3)}, {"y", Rat(5)}}), Rat(1, 3)},
  };
  CHECK(r.dist == expected);
  CHECK(r.residual == Rat(0));
  CHECK(totalMass(r.dist) == Rat(1));
  CHECK(massWhere(r.dist, "y", Rat(4)) == Rat(1, 2));
  CHECK(massWhere(r.dist, "y", Rat(5)) == Rat(1, 2));
}

TEST_CASE("conditioning renormalizes the surviving mass") {
  SUBCASE("observing y = 5 makes it certain") {
    SubDist d = interpretNormalized(withObserve("y = 5"), Env{}, {}, 1);
    SubDist expected{
        {cfg({{"x", Rat(2)}, {"y", Rat(5)}}), Rat(1, 3)},
        {cfg({{"x", Rat(3)}, {"y", Rat(5)}}), Rat(2, 3)},
    };
    CHECK(d == expected);
    CHECK(massWhere(d, "y", Rat(5)) == Rat(1));
  }

  SUBCASE("observing x > 1 shifts the odds") {
    SubDist d = interpretNormalized(withObserve("x > 1"), Env{}, {}, 1);
    CHECK(massWhere(d, "y", Rat(4)) == Rat(1, 4));
    CHECK(massWhere(d, "y", Rat(5)) == Rat(3, 4));
  }

  SUBCASE("an infeasible observation leaves the zero subdistribution") {
    SubDist d = interpretNormalized(withObserve("x = 1 && y = 5"), Env{}, {}, 1);
    CHECK(d.empty());
  }
}

TEST_CASE("conditional with no held guard drops the mass") {
  CommandPtr c = cSeq(
      cAssign("x", dUniformInt(aConst(Rat(1)), aConst(Rat(2)))),
      cCond(choiceOf({gBranch(bCmp(CmpOp::Eq, aVar("x"), aConst(Rat(1))),
                              aConst(Rat(1, 2)), cSkip())})));
  InterpretResult r = interpretExact(c, Env{}, {}, 1);
  CHECK(r.dist == SubDist{{cfg({{"x", Rat(1)}}), Rat(1, 2)}});
  CHECK(interpretNormalized(c, Env{}, {}, 1) ==
        SubDist{{cfg({{"x", Rat(1)}}), Rat(1)}});
}

TEST_CASE("loop fuel bounds guard evaluations") {
  Env start = envOf({{"n", Rat(3)}});

  SUBCASE("a 3-step countdown needs four guard looks") {
    InterpretResult r = interpretExact(countdownLoop(), start, {}, 4);
    CHECK(r.dist == SubDist{{cfg({{"n", Rat(0)}}), Rat(1)}});
    CHECK(r.residual == Rat(0));

    InterpretResult cut = interpretExact(countdownLoop(), start, {}, 3);
    CHECK(cut.dist.empty());
    CHECK(cut.residual == Rat(1));
  }

  SUBCASE("fuel zero leaves everything residual") {
    InterpretResult r = interpretExact(countdownLoop(), start, {}, 0);
    CHECK(r.dist.empty());
    CHECK(r.residual == Rat(1));
  }

  SUBCASE("mass grows pointwise with fuel") {
    SubDist prev;
    for (long long fuel = 0; fuel <= 6; fuel++) {
      InterpretResult r = interpretExact(countdownLoop(), start, {}, fuel);
      CHECK(pointwiseLeq(prev, r.dist));
      CHECK(totalMass(r.dist) + r.residual == Rat(1));
      prev = r.dist;
    }
  }

  SUBCASE("one log entry per iteration") {
    CommandPtr logged = cLoop(choiceOf({gBranch(
        bCmp(CmpOp::Gt, aVar("n"), aConst(Rat(0))), aConst(Rat(1)),
        cSeq(cLog(MsgExpr{"tick", {}}),
             cAssign("n",
                     dDirac(aBin(ArithOp::Sub, aVar("n"), aConst(Rat(1)))))))}));
    InterpretResult r = interpretExact(logged, start, {}, 4);
    ProgLog ticks{Msg{"tick", {}}, Msg{"tick", {}}, Msg{"tick", {}}};
    CHECK(r.dist == SubDist{{cfg({{"n", Rat(0)}}, ticks), Rat(1)}});
  }
}

TEST_CASE("geometric loop leaves the tail as residual") {
  // Keep flipping until the coin lands 1; exits at different rounds merge
  // into one outcome.
  CommandPtr flip = cSeq(
      cAssign("stop", dDirac(aConst(Rat(0)))),
      cLoop(choiceOf({gBranch(
          bCmp(CmpOp::Eq, aVar("stop"), aConst(Rat(0))), aConst(Rat(1)),
          cAssign("stop", dBernoulli(aConst(Rat(1, 2)), aConst(Rat(0)),
                                     aConst(Rat(1)))))})));
  InterpretResult r = interpretExact(flip, Env{}, {}, 5);
  CHECK(r.dist == SubDist{{cfg({{"stop", Rat(1)}}), Rat(15, 16)}});
  CHECK(r.residual == Rat(1, 16));
  CHECK(interpretNormalized(flip, Env{}, {}, 5) ==
        SubDist{{cfg({{"stop", Rat(1)}}), Rat(1)}});
}

TEST_CASE("nested loops each get the full fuel") {
  // Outer loop runs twice; the inner countdown needs three guard looks of
  // its own on every outer iteration.
  GuardedPtr inner = choiceOf({gBranch(
      bCmp(CmpOp::Gt, aVar("b"), aConst(Rat(0))), aConst(Rat(1)),
      cAssign("b", dDirac(aBin(ArithOp::Sub, aVar("b"), aConst(Rat(1))))))});
  CommandPtr outerBody =
      cSeq(cLoop(inner),
           cSeq(cAssign("a", dDirac(aBin(ArithOp::Sub, aVar("a"), aConst(Rat(1))))),
                cAssign("b", dDirac(aConst(Rat(2))))));
  CommandPtr program = cLoop(choiceOf({gBranch(
      bCmp(CmpOp::Gt, aVar("a"), aConst(Rat(0))), aConst(Rat(1)), outerBody)}));
  Env start = envOf({{"a", Rat(2)}, {"b", Rat(2)}});

  InterpretResult enough = interpretExact(program, start, {}, 3);
  CHECK(enough.dist ==
        SubDist{{cfg({{"a", Rat(0)}, {"b", Rat(2)}}), Rat(1)}});
  CHECK(enough.residual == Rat(0));

  InterpretResult starved = interpretExact(program, start, {}, 2);
  CHECK(starved.dist.empty());
  CHECK(starved.residual == Rat(1));
}

TEST_CASE("invalid branch weights are reported") {
  Env at2 = envOf({{"x", Rat(2)}});

  SUBCASE("weights summing past one") {
    GuardedPtr gc = choiceOf({
        gBranch(bConst(true), aConst(Rat(2, 3)), cSkip()),
        gBranch(bConst(false), aConst(Rat(2, 3)), cSkip()),
    });
    CHECK_THROWS_AS(interpretExact(cCond(gc), at2, {}, 1), Error);
    SplitRng rng(7);
    CHECK_THROWS_AS(sampleRun(cCond(gc), at2, rng, {}), Error);
  }

  SUBCASE("a weight outside the unit interval") {
    GuardedPtr gc = choiceOf({gBranch(bConst(true), aConst(Rat(3, 2)), cSkip())});
    CHECK_THROWS_AS(interpretExact(cCond(gc), at2, {}, 1), Error);
  }

  SUBCASE("held guards whose weights sum to zero") {
    GuardedPtr gc = choiceOf({gBranch(bConst(true), aConst(Rat(0)), cSkip())});
    CHECK_THROWS_AS(interpretExact(cCond(gc), at2, {}, 1), Error);
  }

  SUBCASE("state-dependent weight failing only when reached") {
    GuardedPtr gc = choiceOf({gBranch(bConst(true), aVar("x"), cSkip())});
    CHECK_NOTHROW(interpretExact(cCond(gc), envOf({{"x", Rat(1, 2)}}), {}, 1));
    CHECK_THROWS_AS(interpretExact(cCond(gc), at2, {}, 1), Error);
  }
}

TEST_CASE("output logs extend the input log") {
  ProgLog start{Msg{"seen", {{"k", Rat(9)}}}};
  InterpretResult r = interpretExact(
      cSeq(drawThenChoose(), cLog(MsgExpr{"chose", {{"y", "y"}}})), Env{},
      start, 1);
  REQUIRE(!r.dist.empty());
  for (const auto& [config, mass] : r.dist) {
    REQUIRE(config.log.size() == 2);
    CHECK(config.log[0] == start[0]);
    CHECK(config.log[1].label == "chose");
  }
  std::map<ProgLog, Rat> byLog = marginalizeLogs(r.dist);
  CHECK(byLog.size() == 2);
  Rat sum(0);
  for (const auto& [log, mass] : byLog) sum += mass;
  CHECK(sum == Rat(1));
}

TEST_CASE("program text parses back to the same tree") {
  const char* text =
      "var x, y;\n"
      "x := uniformInt(1, 3);\n"
      "if\n"
      "  x = 1 -> (1/3):\n"
      "    y := 4\n"
      "  [] x = 2 -> (1/3):\n"
      "    y := 4\n"
      "  [] x > 1 -> (1/3):\n"
      "    y := 5\n"
      "fi\n";
  Program parsed = parseProgramText(text);
  Program built{{"x", "y"}, drawThenChoose()};
  CHECK(programEq(parsed, built));
  CHECK(programEq(parseProgramText(printProgram(parsed)), built));
}

TEST_CASE("printer round-trips richer programs") {
  const char* text =
      "var P_p0, P_p1, V_t, Vp_t, CNT_init;\n"
      "P_p0 := 1; P_p1 := 0; V_t := 0; CNT_init := 0;\n"
      "do\n"
      "  P_p0 >= 1 && !(P_p1 = 1) -> (1/2):\n"
      "    P_p0 := P_p0 - 1;\n"
      "    P_p1 := P_p1 + 1;\n"
      "    Vp_t := uniformInt(0, 3);\n"
      "    observe(Vp_t > 0);\n"
      "    CNT_init := CNT_init + 1;\n"
      "    log(init, {t': Vp_t});\n"
      "    V_t := Vp_t\n"
      "  [] P_p1 >= 1 -> (1/2):\n"
      "    if\n"
      "      V_t > 1 -> (1): skip\n"
      "    fi\n"
      "od;\n"
      "observe(true)\n";
  Program p = parseProgramText(text);
  CHECK(programEq(parseProgramText(printProgram(p)), p));
  CHECK(printProgram(parseProgramText(printProgram(p))) == printProgram(p));
}

TEST_CASE("program validation rejects bad input") {
  CHECK_THROWS_AS(parseProgramText("var x, x; x := 1"), Error);
  CHECK_THROWS_AS(parseProgramText("var if; if := 1"), Error);
  CHECK_THROWS_AS(parseProgramText("var x; y := 1"), Error);
  CHECK_THROWS_AS(parseProgramText("var x; x := marking(p)"), Error);
  CHECK_THROWS_AS(parseProgramText("var x; x := #init"), Error);
  CHECK_THROWS_AS(parseProgramText("var x; do x > 0 -> (1): skip"), Error);
  CHECK_THROWS_AS(parseProgramText("var x; x := 1 extra"), Error);
  CHECK_THROWS_AS(parseProgramText("var x'; x' := 1"), Error);
  CHECK_NOTHROW(parseProgramText("observe(true)"));
}

TEST_CASE("sampling a deterministic program matches the exact outcome") {
  CommandPtr c = cSeq(cAssign("x", dDirac(aConst(Rat(5)))),
                      cLog(MsgExpr{"step", {{"x", "x"}}}));
  InterpretResult exact = interpretExact(c, Env{}, {}, 1);
  REQUIRE(exact.dist.size() == 1);
  const Config& only = exact.dist.begin()->first;
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    SampleOutcome s = sampleRun(c, Env{}, seed, {});
    CHECK(s.env == only.env);
    CHECK(s.log == only.log);
    CHECK(s.rejections == 0);
  }
}

TEST_CASE("sampler respects observations and budgets") {
  SUBCASE("accepted samples satisfy the observation") {
    CommandPtr c = withObserve("y = 5");
    SampleSet set = sampleMany(c, Env{}, 300, 11, {});
    REQUIRE(set.records.size() == 300);
    for (const Config& r : set.records) CHECK(r.env.get("y") == Rat(5));
    CHECK(set.stats.accepted == 300);
    CHECK(set.stats.acceptRate > Rat(0));
    CHECK(set.stats.acceptRate <= Rat(1));
  }

  SUBCASE("an unsatisfiable observation exhausts the rejection budget") {
    SampleBudgets tight;
    tight.maxRejections = 50;
    CHECK_THROWS_AS(sampleRun(cObserve(bConst(false)), Env{}, 3, tight), Error);
  }

  SUBCASE("a spinning loop exhausts the step budget") {
    CommandPtr spin =
        cLoop(choiceOf({gBranch(bConst(true), aConst(Rat(1)), cSkip())}));
    SampleBudgets tight;
    tight.maxSteps = 1000;
    CHECK_THROWS_AS(sampleRun(spin, Env{}, 3, tight), Error);
  }
}

TEST_CASE("batch sampling is reproducible and order-independent") {
  CommandPtr c = drawThenChoose();
  SampleSet a = sampleMany(c, Env{}, 25, 42, {});
  SampleSet b = sampleMany(c, Env{}, 25, 42, {});
  CHECK(a.records == b.records);
  CHECK(a.stats.rejections == b.stats.rejections);

  SplitRng base(42);
  for (std::size_t i : {0u, 7u, 24u}) {
    SplitRng sub = base.substream(i);
    SampleOutcome s = sampleRun(c, Env{}, sub, {});
    CHECK(Config{s.env, s.log} == a.records[i]);
  }
}

TEST_CASE("accepted samples stay inside the exact support") {
  CommandPtr c = withObserve("x > 1");
  SubDist support = interpretNormalized(c, Env{}, {}, 1);
  SampleSet set = sampleMany(c, Env{}, 200, 5, {});
  for (const Config& r : set.records) CHECK(support.count(r) == 1);
}

TEST_CASE("sampled frequencies approach the exact distribution") {
  CommandPtr c = drawThenChoose();
  const long long n = 100000;
  SampleSet set = sampleMany(c, Env{}, n, 2024, {});
  long long fours = 0;
  for (const Config& r : set.records)
    if (r.env.get("y") == Rat(4)) fours++;
  // Exact probability is 1/2; at n = 100000 three sigmas are under 0.005.
  Rat freq(fours, n);
  CHECK(freq > Rat(49, 100));
  CHECK(freq < Rat(51, 100));
  CHECK(set.stats.rejections == 0);
}
