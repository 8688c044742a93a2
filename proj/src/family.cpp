#include "hf/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hf/binom.hpp"
#include "json.hpp"

namespace hf {

SetFamily make_family(int n, int m, std::vector<Subset> sets) {
  if (n < 0 || n > kMaxGround || m < 0 || m > n)
    throw PreconditionError("make_family: bad (n,m)");
  for (Subset s : sets) {
    if (!subset_of(s, full_set(n)))
      throw PreconditionError("make_family: element out of range");
    if (popcount(s) != m) throw PreconditionError("make_family: wrong cardinality");
  }
  std::sort(sets.begin(), sets.end(), lex_less);
  if (std::adjacent_find(sets.begin(), sets.end()) != sets.end())
    throw PreconditionError("make_family: duplicate member");
  return SetFamily{n, m, std::move(sets)};
}

SetFamily family_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int n = j.at("n").get<int>();
  int m = j.at("m").get<int>();
  std::vector<Subset> sets;
  for (const auto& arr : j.at("sets")) {
    Subset s = 0;
    for (const auto& e : arr) {
      int v = e.get<int>();
      if (v < 1 || v > n) throw PreconditionError("family json: element out of range");
      if (contains(s, v)) throw PreconditionError("family json: repeated element");
      s |= singleton(v);
    }
    sets.push_back(s);
  }
  return make_family(n, m, std::move(sets));
}

std::string family_to_json_text(const SetFamily& u) {
  nlohmann::ordered_json j;
  j["n"] = u.n;
  j["m"] = u.m;
  auto& arr = j["sets"] = nlohmann::ordered_json::array();
  for (Subset s : u.sets) arr.push_back(elements(s));
  return j.dump();
}

double sparsity(const SetFamily& u) {
  if (u.empty()) throw EmptyFamilyError();
  return ln_binom(u.n, u.m) - std::log(static_cast<double>(u.size()));
}

double complement_sparsity_of(double kappa) {
  if (kappa < 0) throw PreconditionError("complement_sparsity: kappa < 0");
  if (kappa == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-std::exp(-kappa));
}

double complement_sparsity(const SetFamily& u) {
  return complement_sparsity_of(sparsity(u));
}

SetFamily extend(const SetFamily& u, int l, long long cap) {
  if (l < u.m || l > u.n) throw PreconditionError("extend: need m <= l <= n");
  if (u.empty()) throw EmptyFamilyError();
  if (exact_binom(u.n, l) > static_cast<long>(cap)) throw TooLargeError("extend: C(n,l) exceeds cap");
  std::vector<Subset> out;
  for (Subset t : combinations(full_set(u.n), l, cap)) {
    for (Subset s : u.sets)
      if (subset_of(s, t)) {
        out.push_back(t);
        break;
      }
  }
  return make_family(u.n, l, std::move(out));
}

MarkStats mark_stats(const SetFamily& u, int l, long long cap) {
  SetFamily ext = extend(u, l, cap);
  MarkStats st;
  st.mark_count = 0;
  st.double_mark_count = 0;
  for (Subset d : ext.sets) {
    long long c = 0;
    for (Subset s : u.sets)
      if (subset_of(s, d)) ++c;
    st.mark_count += static_cast<long>(c);
    st.double_mark_count += mpz_class(static_cast<long>(c)) * static_cast<long>(c);
  }
  double ln_slice = ln_binom(u.n, l) + ln_binom(l, u.m);
  st.kappa_marks = ln_slice - ln_exact(st.mark_count);
  st.kappa_double_total =
      ln_slice + ln_binom(l, u.m) - ln_exact(st.double_mark_count);
  st.kappa_double_proper = st.kappa_double_total - sparsity(u);
  return st;
}

bool check_lemma1(const SetFamily& u, int l, double tol, long long cap) {
  MarkStats st = mark_stats(u, l, cap);
  double k = sparsity(u);
  double k_ext = sparsity(extend(u, l, cap));
  return k <= st.kappa_double_total + tol &&
         st.kappa_double_total <= 2 * k - k_ext + tol;
}

SetFamily sphere_subfamily(const SetFamily& u, Subset t, int j) {
  if (popcount(t) != u.m || !subset_of(t, full_set(u.n)))
    throw PreconditionError("sphere_subfamily: t not an m-set over [n]");
  if (j < 0 || j > u.m) throw PreconditionError("sphere_subfamily: bad j");
  std::vector<Subset> out;
  for (Subset s : u.sets)
    if (popcount(s & ~t) == j) out.push_back(s);
  return SetFamily{u.n, u.m, std::move(out)};  // already sorted
}

double sphere_sparsity(const SetFamily& u, Subset t, int j) {
  SetFamily s = sphere_subfamily(u, t, j);
  if (s.empty()) return std::numeric_limits<double>::infinity();
  return ln_binom(u.n - u.m, j) + ln_binom(u.m, u.m - j) -
         std::log(static_cast<double>(s.size()));
}

double average_sphere_sparsity(const SetFamily& u, int l) {
  if (u.empty()) throw EmptyFamilyError();
  if (l < u.m || l > u.n) throw PreconditionError("average_sphere_sparsity: bad l");
  // sum over t in U, 0<=j<=m of C(l-m,m-j)C(m,j)|S(t,m-j)| / (C(n-m,m-j)C(m,j))
  // done in exact rationals, then
  //   kappa_S = ln(|U| C(l,m)) - ln(sum).
  mpq_class sum = 0;
  for (Subset t : u.sets)
    for (int j = 0; j <= u.m; ++j) {
      int rad = u.m - j;
      mpz_class w = exact_binom(l - u.m, rad);
      if (w == 0) continue;
      std::size_t sphere = sphere_subfamily(u, t, rad).size();
      if (sphere == 0) continue;
      mpq_class term(w * mpz_class(static_cast<unsigned long>(sphere)),
                     exact_binom(u.n - u.m, rad));
      term.canonicalize();
      sum += term;
    }
  double ln_sum = ln_exact(sum.get_num()) - ln_exact(sum.get_den());
  return std::log(static_cast<double>(u.size())) + ln_binom(l, u.m) - ln_sum;
}

bool check_kappaS_equals_kappaD(const SetFamily& u, int l, double tol,
                                long long cap) {
  return std::fabs(average_sphere_sparsity(u, l) -
                   mark_stats(u, l, cap).kappa_double_proper) <= tol;
}

SetFamily augment_space(const SetFamily& u, int extra, long long cap) {
  if (extra < 0 || u.n + extra > kMaxGround)
    throw PreconditionError("augment_space: bad extra");
  SetFamily wide{u.n + extra, u.m, u.sets};
  return extend(wide, u.m + extra, cap);
}

std::vector<Split> all_splits(const SetFamily& u, const std::vector<int>& cards,
                              long long cap) {
  long long total_cards = 0;
  for (int c : cards) {
    if (c < 0) throw PreconditionError("all_splits: negative part size");
    total_cards += c;
  }
  if (total_cards != u.m) throw PreconditionError("all_splits: sizes must sum to m");
  std::vector<Split> out;
  std::vector<Subset> parts;
  auto rec = [&](auto&& self, Subset rest, std::size_t idx) -> void {
    if (idx == cards.size()) {
      if (static_cast<long long>(out.size()) >= cap)
        throw TooLargeError("all_splits: exceeds cap");
      out.push_back(parts);
      return;
    }
    for (Subset part : combinations(rest, cards[idx], cap)) {
      parts.push_back(part);
      self(self, rest & ~part, idx + 1);
      parts.pop_back();
    }
  };
  for (Subset s : u.sets) rec(rec, s, 0);
  return out;
}

double split_sparsity(const SetFamily& u, const std::vector<int>& cards,
                      long long cap) {
  std::size_t count = all_splits(u, cards, cap).size();
  if (count == 0) throw EmptyFamilyError();
  double ln_n_cap = 0;
  long long used = 0;
  for (int c : cards) {
    ln_n_cap += ln_binom(u.n - used, c);
    used += c;
  }
  return ln_n_cap - std::log(static_cast<double>(count));
}

SetFamily sample_family(int n, int m, long long count, Rng& rng, long long cap) {
  if (exact_binom(n, m) > static_cast<long>(cap)) throw TooLargeError("sample_family: slice exceeds cap");
  std::vector<Subset> slice = combinations(full_set(n), m, cap);
  if (count < 1 || count > static_cast<long long>(slice.size()))
    throw PreconditionError("sample_family: bad count");
  // partial Fisher-Yates
  for (long long i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, slice.size() - 1);
    std::swap(slice[i], slice[d(rng)]);
  }
  slice.resize(count);
  return make_family(n, m, std::move(slice));
}

}  // namespace hf
