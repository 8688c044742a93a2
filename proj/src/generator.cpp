#include "hf/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hf/binom.hpp"

namespace hf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile

// Drop the positions of g and close the gaps.
Subset compress(Subset s, Subset g) {
  Subset out = 0;
  int shift = 0;
  for (int i = 1; s >> (i - 1); ++i) {
    if (contains(g, i)) {
      ++shift;
      continue;
    }
    if (contains(s, i)) out |= singleton(i - shift);
  }
  return out;
}

std::vector<Subset> members_over(const SetFamily& u, Subset g) {
  std::vector<Subset> out;
  for (Subset s : u.sets)
    if (subset_of(g, s)) out.push_back(s);
  return out;
}

}  // namespace

SetFamily restrict_family(const SetFamily& u, Subset g) {
  if (!subset_of(g, full_set(u.n))) throw PreconditionError("restrict: g not in [n]");
  int gs = popcount(g);
  if (gs > u.m) throw PreconditionError("restrict: |g| > m");
  std::vector<Subset> out;
  for (Subset s : members_over(u, g)) out.push_back(compress(s & ~g, g));
  return make_family(u.n - gs, u.m - gs, std::move(out));
}

double restricted_sparsity(const SetFamily& u, Subset g) {
  int gs = popcount(g);
  long long count = static_cast<long long>(members_over(u, g).size());
  if (count == 0) return kInf;
  return ln_binom(u.n - gs, u.m - gs) - std::log(static_cast<double>(count));
}

GeneratorResult phase1_find_generator(const SetFamily& u, int l0) {
  if (u.empty()) throw EmptyFamilyError();
  if (!(l0 > u.m * u.m)) throw PreconditionError("phase1: need l0 > m^2");
  if (l0 > u.n) throw PreconditionError("phase1: need l0 <= n");
  double kappa = sparsity(u);
  double r = std::log(static_cast<double>(l0) / (u.m * static_cast<double>(u.m)));
  GeneratorResult res;
  res.l0 = l0;
  res.r = r;
  res.kappa_u = kappa;

  Subset g = 0;
  auto admissible = [&](Subset cand) {
    return restricted_sparsity(u, cand) <=
           kappa - r * popcount(cand) + 1e-12;
  };
  for (;;) {
    int best = 0;
    long long best_count = -1;
    for (int x = 1; x <= u.n; ++x) {
      if (contains(g, x)) continue;
      Subset cand = g | singleton(x);
      long long cnt = static_cast<long long>(members_over(u, cand).size());
      if (cnt > best_count && admissible(cand)) {
        best = x;
        best_count = cnt;
      }
    }
    if (best == 0) break;
    g |= singleton(best);
  }
  res.g = g;
  res.kappa_hat = restricted_sparsity(u, g);
  res.size_bound = kappa / r;
  res.maximal = true;
  for (int x = 1; x <= u.n; ++x)
    if (!contains(g, x) && admissible(g | singleton(x))) res.maximal = false;
  return res;
}

namespace {

ValidityReport validity_core(const SetFamily& u, Subset g, int l, Subset space,
                             int y_size, double lambda_target, ValidityMode mode,
                             long long budget, std::uint64_t seed, long long cap) {
  if (!subset_of(g, full_set(u.n))) throw PreconditionError("validity: g not in [n]");
  if (y_size < 0 || y_size > popcount(space))
    throw PreconditionError("validity: bad length");
  std::vector<Subset> needed;  // s\g for members over g
  for (Subset s : members_over(u, g)) needed.push_back(s & ~g);
  auto is_valid = [&](Subset y) {
    for (Subset w : needed)
      if (subset_of(w, y)) return true;
    return false;
  };

  ValidityReport rep;
  rep.g = g;
  rep.l = l;
  rep.lambda_target = lambda_target;
  rep.mode = mode;
  rep.seed = seed;
  rep.total_count = exact_binom(popcount(space), y_size);
  if (mode == ValidityMode::exact) {
    if (rep.total_count > static_cast<long>(cap))
      throw TooLargeError("validity: population exceeds cap; use sampled mode");
    long long valid = 0, total = 0;
    for (Subset y : combinations(space, y_size, cap)) {
      ++total;
      if (is_valid(y)) ++valid;
    }
    rep.valid_count = valid;
    rep.sample_size = total;
    rep.fraction = total ? static_cast<double>(valid) / total : 0.0;
    rep.ci_low = rep.ci_high = rep.fraction;
  } else {
    if (budget <= 0) throw PreconditionError("validity: sampled mode needs budget");
    Rng rng(seed);
    std::vector<int> pool = elements(space);
    long long valid = 0;
    for (long long t = 0; t < budget; ++t) {
      // partial Fisher-Yates draw of a uniform y_size-subset
      for (int i = 0; i < y_size; ++i) {
        std::uniform_int_distribution<std::size_t> d(i, pool.size() - 1);
        std::swap(pool[i], pool[d(rng)]);
      }
      Subset y = 0;
      for (int i = 0; i < y_size; ++i) y |= singleton(pool[i]);
      if (is_valid(y)) ++valid;
    }
    rep.valid_count = valid;
    rep.sample_size = budget;
    rep.fraction = static_cast<double>(valid) / budget;
    double half = kZ99 * std::sqrt(rep.fraction * (1 - rep.fraction) / budget);
    rep.ci_low = std::max(0.0, rep.fraction - half);
    rep.ci_high = std::min(1.0, rep.fraction + half);
  }
  rep.complement_sparsity =
      rep.fraction >= 1.0 ? kInf : -std::log1p(-rep.fraction);
  rep.success = rep.complement_sparsity >= lambda_target;
  return rep;
}

}  // namespace

ValidityReport validity_report(const SetFamily& u, Subset g, int l,
                               double lambda_target, ValidityMode mode,
                               long long budget, std::uint64_t seed,
                               long long cap) {
  int gs = popcount(g);
  if (l < gs || l > u.n) throw PreconditionError("validity: need |g| <= l <= n");
  return validity_core(u, g, l, full_set(u.n) & ~g, l - gs, lambda_target, mode,
                       budget, seed, cap);
}

ValidityReport validity_report_full(const SetFamily& u, Subset g, int l,
                                    double lambda_target, ValidityMode mode,
                                    long long budget, std::uint64_t seed,
                                    long long cap) {
  if (l < 0 || l > u.n) throw PreconditionError("validity: bad l");
  return validity_core(u, g, l, full_set(u.n), l, lambda_target, mode, budget,
                       seed, cap);
}

ValidityReport phase2_boost(const SetFamily& u, Subset g, int l0, int i,
                            double lambda_target, ValidityMode mode,
                            long long budget, std::uint64_t seed, long long cap) {
  int gs = popcount(g);
  if (i < 1) throw PreconditionError("phase2: i >= 1");
  if (l0 <= gs) throw PreconditionError("phase2: l0 <= |g|");
  long long len = static_cast<long long>(gs) + static_cast<long long>(i) * (l0 - gs);
  if (len > u.n) throw PreconditionError("phase2: boosted length exceeds n");
  return validity_report(u, g, static_cast<int>(len), lambda_target, mode,
                         budget, seed, cap);
}

std::optional<Subset> valid_witness(const SetFamily& u, Subset g, Subset y) {
  for (Subset s : u.sets)  // sets are in lex order already
    if (subset_of(g, s) && subset_of(s & ~g, y)) return s;
  return std::nullopt;
}

FindGeneratorResult find_generator(const SetFamily& u, int l,
                                   double lambda_target,
                                   const FindGeneratorConfig& cfg) {
  if (l < u.m || l > u.n) throw PreconditionError("find_generator: need m <= l <= n");
  if (!(lambda_target > 0)) throw PreconditionError("find_generator: lambda <= 0");
  long long by_lambda =
      static_cast<long long>(std::floor(cfg.eps_prime * l / lambda_target));
  long long l0 = std::min<long long>(
      l, std::max<long long>(static_cast<long long>(u.m) * u.m + 1, by_lambda));
  FindGeneratorResult out;
  if (l0 > u.m * u.m && l0 <= u.n) {
    out.gen = phase1_find_generator(u, static_cast<int>(l0));
  } else {
    // Short-length regime: the greedy core search has no admissible radius, so
    // the empty core is the only sound choice.
    out.gen.g = 0;
    out.gen.l0 = static_cast<int>(std::min<long long>(l0, u.n));
    out.gen.r = 0;
    out.gen.kappa_u = sparsity(u);
    out.gen.kappa_hat = out.gen.kappa_u;
    out.gen.size_bound = kInf;
    out.gen.maximal = false;
    out.gen.degenerate = true;
  }
  out.validity = validity_report_full(u, out.gen.g, l, lambda_target, cfg.mode,
                                      cfg.budget, cfg.seed, cfg.cap);
  out.success = out.validity.success;
  return out;
}

}  // namespace hf
