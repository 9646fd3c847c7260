#include <vector>

#include "dpnppl/error.hpp"
#include "dpnppl/ppl.hpp"

namespace dpnppl {

namespace {

struct BranchState {
  const GuardedCommand::Branch* branch;
  bool held;
  Rat weight;
};

// Evaluates every branch in env. Weight sanity is checked here, once per
// reached state: each weight must be a probability and together they must
// not exceed 1.
std::vector<BranchState> evalBranches(const GuardedPtr& gc, const Env& env) {
  std::vector<BranchState> out;
  Rat sum(0);
  for (const auto* b : branchesOf(*gc)) {
    Rat w = evalArith(b->weight, env);
    if (w.sign() < 0 || w > Rat(1))
      fail(ErrorKind::InvalidBranchWeights,
           "branch weight " + w.str() + " is not a probability");
    sum += w;
    out.push_back({b, evalBool(b->guard, env), w});
  }
  if (sum > Rat(1))
    fail(ErrorKind::InvalidBranchWeights,
         "branch weights sum to " + sum.str() + " > 1");
  return out;
}

Rat heldWeight(const std::vector<BranchState>& branches) {
  Rat total(0);
  for (const auto& b : branches)
    if (b.held) total += b.weight;
  return total;
}

SubDist applyCmd(const CommandPtr& c, const SubDist& in, long long fuel,
                 Rat& residual);

// One conditional step from a single configuration: splits the mass over the
// held branches, scaled by weight / total held weight, and runs their bodies.
// No held guard drops the mass entirely.
SubDist applyCond(const GuardedPtr& gc, const Config& config, const Rat& mass,
                  long long fuel, Rat& residual) {
  SubDist out;
  std::vector<BranchState> branches = evalBranches(gc, config.env);
  Rat total = heldWeight(branches);
  bool anyHeld = false;
  for (const auto& b : branches) anyHeld = anyHeld || b.held;
  if (!anyHeld) return out;
  if (total.isZero())
    fail(ErrorKind::InvalidBranchWeights,
         "guards hold but their weights sum to zero");
  for (const auto& b : branches) {
    if (!b.held || b.weight.isZero()) continue;
    SubDist seed{{config, mass * b.weight / total}};
    for (auto& [cfg, m] : applyCmd(b.branch->body, seed, fuel, residual))
      out[cfg] += m;
  }
  return out;
}

SubDist applyCmd(const CommandPtr& c, const SubDist& in, long long fuel,
                 Rat& residual) {
  using C = Command;
  return std::visit(
      [&](const auto& x) -> SubDist {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, C::Skip>) {
          return in;
        } else if constexpr (std::is_same_v<T, C::Assign>) {
          SubDist out;
          for (const auto& [config, mass] : in) {
            Distribution d = evalDist(x.dist, config.env);
            for (const auto& [value, p] : d.entries()) {
              Config next = config;
              next.env.set(x.var, value);
              out[next] += mass * p;
            }
          }
          return out;
        } else if constexpr (std::is_same_v<T, C::Observe>) {
          SubDist out;
          for (const auto& [config, mass] : in)
            if (evalBool(x.cond, config.env)) out[config] += mass;
          return out;
        } else if constexpr (std::is_same_v<T, C::Log>) {
          SubDist out;
          for (const auto& [config, mass] : in) {
            Config next = config;
            next.log.push_back(evalMsg(x.msg, config.env));
            out[next] += mass;
          }
          return out;
        } else if constexpr (std::is_same_v<T, C::Seq>) {
          return applyCmd(x.second, applyCmd(x.first, in, fuel, residual),
                          fuel, residual);
        } else if constexpr (std::is_same_v<T, C::Cond>) {
          SubDist out;
          for (const auto& [config, mass] : in)
            for (auto& [cfg, m] :
                 applyCond(x.branches, config, mass, fuel, residual))
              out[cfg] += m;
          return out;
        } else {
          // Loop: each round evaluates the guards on the whole frontier.
          // Configurations with no held guard exit; the rest take one
          // conditional step. Whatever survives all rounds is residual.
          SubDist out;
          SubDist frontier = in;
          for (long long round = 0; round < fuel && !frontier.empty(); round++) {
            SubDist next;
            for (const auto& [config, mass] : frontier) {
              if (doneCount(x.branches, config.env).isZero()) {
                out[config] += mass;
                continue;
              }
              for (auto& [cfg, m] :
                   applyCond(x.branches, config, mass, fuel, residual))
                next[cfg] += m;
            }
            frontier = std::move(next);
          }
          residual += totalMass(frontier);
          return out;
        }
      },
      c->node);
}

}  // namespace

Rat doneCount(const GuardedPtr& gc, const Env& env) {
  Rat count(0);
  for (const auto* b : branchesOf(*gc)) count += iverson(b->guard, env);
  return count;
}

Rat branchProb(const GuardedPtr& gc, const Env& env) {
  return heldWeight(evalBranches(gc, env));
}

InterpretResult interpretExact(const CommandPtr& c, const Env& env,
                               const ProgLog& log, long long fuel) {
  InterpretResult result;
  SubDist start{{Config{env, log}, Rat(1)}};
  result.dist = applyCmd(c, start, fuel, result.residual);
  return result;
}

SubDist interpretNormalized(const CommandPtr& c, const Env& env,
                            const ProgLog& log, long long fuel) {
  return normalizeDist(interpretExact(c, env, log, fuel).dist);
}

}  // namespace dpnppl
