#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/ppl.hpp"

namespace dpnppl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void spendStep(long long& steps, long long maxSteps) {
  if (++steps > maxSteps)
    fail(ErrorKind::StepBudgetExhausted,
         "execution exceeded " + std::to_string(maxSteps) + " steps");
}

struct HeldBranch {
  const GuardedCommand::Branch* branch;
  Rat weight;
};

// Guards and weights of one guarded command, with the same weight checks the
// exact interpreter performs.
std::vector<HeldBranch> heldBranches(const GuardedPtr& gc, const Env& env) {
  std::vector<HeldBranch> held;
  Rat sum(0);
  for (const auto* b : branchesOf(*gc)) {
    Rat w = evalArith(b->weight, env);
    if (w.sign() < 0 || w > Rat(1))
      fail(ErrorKind::InvalidBranchWeights,
           "branch weight " + w.str() + " is not a probability");
    sum += w;
    if (evalBool(b->guard, env)) held.push_back({b, w});
  }
  if (sum > Rat(1))
    fail(ErrorKind::InvalidBranchWeights,
         "branch weights sum to " + sum.str() + " > 1");
  return held;
}

// Picks a held branch with probability weight / total held weight.
const GuardedCommand::Branch* pickBranch(const std::vector<HeldBranch>& held,
                                         SplitRng& rng) {
  Rat total(0);
  for (const auto& h : held) total += h.weight;
  if (total.isZero())
    fail(ErrorKind::InvalidBranchWeights,
         "guards hold but their weights sum to zero");
  Rat threshold = rng.nextUnit() * total;
  Rat cumulative(0);
  for (const auto& h : held) {
    cumulative += h.weight;
    if (cumulative > threshold) return h.branch;
  }
  return held.back().branch;
}

// One operational attempt. Returns false when the attempt must be rejected:
// a failed observe, or a conditional with no held guard.
bool execCmd(const CommandPtr& c, Env& env, ProgLog& log, SplitRng& rng,
             long long& steps, long long maxSteps) {
  using C = Command;
  spendStep(steps, maxSteps);
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, C::Skip>) {
          return true;
        } else if constexpr (std::is_same_v<T, C::Assign>) {
          env.set(x.var, drawFrom(evalDist(x.dist, env), rng));
          return true;
        } else if constexpr (std::is_same_v<T, C::Observe>) {
          return evalBool(x.cond, env);
        } else if constexpr (std::is_same_v<T, C::Log>) {
          log.push_back(evalMsg(x.msg, env));
          return true;
        } else if constexpr (std::is_same_v<T, C::Seq>) {
          return execCmd(x.first, env, log, rng, steps, maxSteps) &&
                 execCmd(x.second, env, log, rng, steps, maxSteps);
        } else if constexpr (std::is_same_v<T, C::Cond>) {
          std::vector<HeldBranch> held = heldBranches(x.branches, env);
          if (held.empty()) return false;
          return execCmd(pickBranch(held, rng)->body, env, log, rng, steps,
                         maxSteps);
        } else {
          while (true) {
            spendStep(steps, maxSteps);
            std::vector<HeldBranch> held = heldBranches(x.branches, env);
            if (held.empty()) return true;
            if (!execCmd(pickBranch(held, rng)->body, env, log, rng, steps,
                         maxSteps))
              return false;
          }
        }
      },
      c->node);
}

}  // namespace

SplitRng::SplitRng(std::uint64_t seed)
    : seed_(seed), engine_(splitmix64(seed ^ 0xA02B8C5E9340AC11ull)) {}

SplitRng SplitRng::substream(std::uint64_t index) const {
  return SplitRng(splitmix64(seed_ + splitmix64(index)));
}

std::uint64_t SplitRng::nextU64() { return engine_(); }

Rat SplitRng::nextUnit() {
  return Rat::fromUnsigned(nextU64()) * Rat::unitPow2(64);
}

Rat drawFrom(const Distribution& dist, SplitRng& rng) {
  Rat total = dist.totalMass();
  if (total.isZero())
    fail(ErrorKind::MalformedDistribution, "drawing from an empty distribution");
  Rat threshold = rng.nextUnit() * total;
  Rat cumulative(0);
  for (const auto& [value, mass] : dist.entries()) {
    cumulative += mass;
    if (cumulative > threshold) return value;
  }
  return dist.entries().rbegin()->first;
}

SampleOutcome sampleRun(const CommandPtr& c, const Env& env, SplitRng& rng,
                        const SampleBudgets& budgets) {
  SampleOutcome out;
  while (true) {
    Env attemptEnv = env;
    ProgLog attemptLog;
    long long steps = 0;
    if (execCmd(c, attemptEnv, attemptLog, rng, steps, budgets.maxSteps)) {
      out.env = std::move(attemptEnv);
      out.log = std::move(attemptLog);
      return out;
    }
    if (++out.rejections > budgets.maxRejections)
      fail(ErrorKind::RejectionBudgetExhausted,
           "no accepted execution within " +
               std::to_string(budgets.maxRejections) + " rejections");
  }
}

SampleOutcome sampleRun(const CommandPtr& c, const Env& env,
                        std::uint64_t seed, const SampleBudgets& budgets) {
  SplitRng rng(seed);
  return sampleRun(c, env, rng, budgets);
}

SampleSet sampleMany(const CommandPtr& c, const Env& env, long long n,
                     std::uint64_t seed, const SampleBudgets& budgets) {
  SampleSet out;
  SplitRng base(seed);
  for (long long i = 0; i < n; i++) {
    SplitRng rng = base.substream(static_cast<std::uint64_t>(i));
    SampleOutcome sample = sampleRun(c, env, rng, budgets);
    out.stats.rejections += sample.rejections;
    out.records.push_back(Config{std::move(sample.env), std::move(sample.log)});
  }
  out.stats.accepted = n;
  long long attempts = n + out.stats.rejections;
  out.stats.acceptRate = attempts == 0 ? Rat(1) : Rat(n) / Rat(attempts);
  return out;
}

}  // namespace dpnppl
