#ifndef HF_FAMILY_HPP
#define HF_FAMILY_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "hf/util.hpp"

namespace hf {

// Family of m-subsets of {1,..,n}, kept sorted (element-list order) and unique.
struct SetFamily {
  int n = 0;
  int m = 0;
  std::vector<Subset> sets;

  std::size_t size() const { return sets.size(); }
  bool empty() const { return sets.empty(); }
};

// Validates cardinalities/range, sorts, rejects duplicates.
SetFamily make_family(int n, int m, std::vector<Subset> sets);

SetFamily family_from_json_text(const std::string& text);
std::string family_to_json_text(const SetFamily& u);

// kappa(U) = ln C(n,m) - ln |U|
double sparsity(const SetFamily& u);

// kappa of the complementary fraction: -ln(1 - e^{-kappa}); +inf when the
// family fills its whole slice.
double complement_sparsity_of(double kappa);
double complement_sparsity(const SetFamily& u);

// Ext(U,l): all l-sets containing some member.
SetFamily extend(const SetFamily& u, int l, long long cap = kDefaultEnumCap);

struct MarkStats {
  mpz_class mark_count;         // pairs (t,d), t in U, t subset of d, |d| = l
  mpz_class double_mark_count;  // ordered triples (t,t',d) with t,t' subset of d
  double kappa_marks;           // vs C(n,l)*C(l,m); equals kappa(U)
  double kappa_double_total;    // vs C(n,l)*C(l,m)^2
  double kappa_double_proper;   // kappa_double_total - kappa(U)
};

MarkStats mark_stats(const SetFamily& u, int l, long long cap = kDefaultEnumCap);

// kappa(U) <= kappa(double marks) <= 2*kappa(U) - kappa(Ext(U,l))
bool check_lemma1(const SetFamily& u, int l, double tol = 1e-9,
                  long long cap = kDefaultEnumCap);

// Members at swap distance j from t: {t' in U : |t' \ t| = j}.
SetFamily sphere_subfamily(const SetFamily& u, Subset t, int j);

// Sparsity of the sphere against its own slice size C(n-m,j)*C(m,m-j).
double sphere_sparsity(const SetFamily& u, Subset t, int j);

// The proper double-mark sparsity equals the weighted average sphere sparsity.
bool check_kappaS_equals_kappaD(const SetFamily& u, int l, double tol = 1e-9,
                                long long cap = kDefaultEnumCap);
double average_sphere_sparsity(const SetFamily& u, int l);

// Extension into {1,..,n+extra}: all (m+extra)-sets containing some member.
SetFamily augment_space(const SetFamily& u, int extra,
                        long long cap = kDefaultEnumCap);

// Ordered division of one member into parts of prescribed sizes.
using Split = std::vector<Subset>;

// All splits of all members; sum(cards) must equal m.
std::vector<Split> all_splits(const SetFamily& u, const std::vector<int>& cards,
                              long long cap = kDefaultEnumCap);

// ln N - ln |W| for the full split family, N per the nested-binomial product;
// equals kappa(U).
double split_sparsity(const SetFamily& u, const std::vector<int>& cards,
                      long long cap = kDefaultEnumCap);

// Uniform sample of `count` distinct members of the (n,m) slice.
SetFamily sample_family(int n, int m, long long count, Rng& rng,
                        long long cap = kDefaultEnumCap);

}  // namespace hf

#endif
