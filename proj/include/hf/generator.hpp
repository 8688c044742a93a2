#ifndef HF_GENERATOR_HPP
#define HF_GENERATOR_HPP

#include <optional>

#include "hf/family.hpp"
#include "hf/util.hpp"

namespace hf {

// Members containing g, with g stripped and the ground set relabeled to
// {1,..,n-|g|} preserving element order.
SetFamily restrict_family(const SetFamily& u, Subset g);

// kappa of restrict_family(u,g): ln C(n-|g|, m-|g|) - ln |U_g|; +inf if U_g
// is empty.
double restricted_sparsity(const SetFamily& u, Subset g);

struct GeneratorResult {
  Subset g = 0;
  int l0 = 0;
  double r = 0;           // ln(l0/m^2)
  double kappa_u = 0;     // kappa(U)
  double kappa_hat = 0;   // kappa of the g-restriction
  double size_bound = 0;  // kappa(U)/r
  bool maximal = false;   // no single element can be added admissibly
  bool degenerate = false;  // l0 <= m^2: greedy skipped, g forced empty
};

// Greedy core search: repeatedly add the element that keeps the restriction
// as large as possible while its sparsity stays <= kappa(U) - r*|g|.
// Requires m^2 < l0 <= n.
GeneratorResult phase1_find_generator(const SetFamily& u, int l0);

enum class ValidityMode { exact, sampled };

struct ValidityReport {
  Subset g = 0;
  int l = 0;                   // size of g union y
  double lambda_target = 0;
  long long valid_count = 0;
  mpz_class total_count;       // population of candidate y
  long long sample_size = 0;   // draws inspected (== population in exact mode)
  double fraction = 0;
  double ci_low = 0, ci_high = 0;  // 99% normal-approximation binomial CI
  double complement_sparsity = 0;  // -ln(1 - fraction); +inf when fraction = 1
  ValidityMode mode = ValidityMode::exact;
  std::uint64_t seed = 0;
  bool success = false;  // complement_sparsity >= lambda_target
};

// y ranges over (l-|g|)-subsets of [n] \ g; y is valid when some member s of U
// satisfies g subset of s subset of g union y.
ValidityReport validity_report(const SetFamily& u, Subset g, int l,
                               double lambda_target,
                               ValidityMode mode = ValidityMode::exact,
                               long long budget = 0, std::uint64_t seed = 0,
                               long long cap = kDefaultEnumCap);

// Same validity predicate but y ranges over l-subsets of the whole ground set
// (y may meet g), matching the padded-space reading used downstream.
ValidityReport validity_report_full(const SetFamily& u, Subset g, int l,
                                    double lambda_target,
                                    ValidityMode mode = ValidityMode::exact,
                                    long long budget = 0, std::uint64_t seed = 0,
                                    long long cap = kDefaultEnumCap);

// Validity at the boosted length |g| + i*(l0-|g|): i disjoint batches of fresh
// elements; complement sparsity should scale roughly linearly in i.
ValidityReport phase2_boost(const SetFamily& u, Subset g, int l0, int i,
                            double lambda_target,
                            ValidityMode mode = ValidityMode::exact,
                            long long budget = 0, std::uint64_t seed = 0,
                            long long cap = kDefaultEnumCap);

// Lexicographically least witness s in U with g subset of s and s\g subset of
// y (y given over [n] \ g or the full ground set; both work).
std::optional<Subset> valid_witness(const SetFamily& u, Subset g, Subset y);

struct FindGeneratorConfig {
  double eps_prime = 0.25;  // length fraction handed to the core search
  ValidityMode mode = ValidityMode::exact;
  long long budget = 100000;  // draws in sampled mode
  std::uint64_t seed = 0;
  long long cap = kDefaultEnumCap;
};

struct FindGeneratorResult {
  GeneratorResult gen;
  ValidityReport validity;  // full-length report
  bool success = false;
};

// Core search at length l0 = min(l, max(m^2+1, eps'*l/lambda)), then validity
// at full length l.  Failure is a legitimate outcome, never an exception.
FindGeneratorResult find_generator(const SetFamily& u, int l,
                                   double lambda_target,
                                   const FindGeneratorConfig& cfg = {});

}  // namespace hf

#endif
