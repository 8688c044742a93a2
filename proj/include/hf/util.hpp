#ifndef HF_UTIL_HPP
#define HF_UTIL_HPP

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hf {

// Subsets of a ground set {1,..,n}, n <= 64.  Element i occupies bit i-1.
using Subset = std::uint64_t;

constexpr int kMaxGround = 64;
constexpr long long kDefaultEnumCap = 10'000'000;

inline Subset full_set(int n) { return n == 0 ? 0 : (~Subset{0} >> (64 - n)); }
inline Subset singleton(int i) { return Subset{1} << (i - 1); }
inline bool contains(Subset s, int i) { return (s >> (i - 1)) & 1; }
inline int popcount(Subset s) { return std::popcount(s); }
inline bool subset_of(Subset a, Subset b) { return (a & ~b) == 0; }

inline std::vector<int> elements(Subset s) {
  std::vector<int> out;
  while (s) {
    out.push_back(std::countr_zero(s) + 1);
    s &= s - 1;
  }
  return out;
}

inline Subset from_elements(const std::vector<int>& v) {
  Subset s = 0;
  for (int e : v) s |= singleton(e);
  return s;
}

// Order used for every "lexicographically smallest" tie-break: compare sets as
// their increasing element lists.
inline bool lex_less(Subset a, Subset b) {
  if (a == b) return false;
  Subset d = a ^ b;
  Subset low = d & -d;                  // first differing element
  Subset above = ~((low << 1) - 1);     // elements strictly beyond it
  if (low & a) return (b & above) != 0;  // a owns it; smaller unless b is a prefix
  return (a & above) == 0;               // b owns it; a smaller only as a prefix
}

// Smallest mask with k low bits set; next_comb steps through all k-subsets of
// a fixed-size ground set in increasing numeric (colex) order via Gosper's hack.
inline Subset first_comb(int k) { return k == 0 ? 0 : full_set(k); }

inline bool next_comb(Subset& s, int n) {
  if (s == 0) return false;
  Subset c = s & -s;
  Subset r = s + c;
  s = (((r ^ s) >> 2) / c) | r;
  return s <= full_set(n) && s != 0;
}

// All k-subsets of the ground mask `space`, increasing numeric order.
inline std::vector<Subset> combinations(Subset space, int k, long long cap = kDefaultEnumCap);

struct EmptyFamilyError : std::runtime_error {
  EmptyFamilyError() : std::runtime_error("family is empty") {}
};
struct FullFamilyError : std::runtime_error {
  FullFamilyError() : std::runtime_error("family covers the whole slice") {}
};
struct TooLargeError : std::runtime_error {
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};
struct PreconditionError : std::invalid_argument {
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Single PRNG for every sampled mode in the project; the algorithm name is
// part of each report so runs are reproducible elsewhere.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

inline std::vector<Subset> combinations(Subset space, int k, long long cap) {
  std::vector<int> elems = elements(space);
  int n = static_cast<int>(elems.size());
  if (k < 0 || k > n) return {};
  std::vector<Subset> out;
  Subset pattern = first_comb(k);
  do {
    if (static_cast<long long>(out.size()) >= cap)
      throw TooLargeError("combination enumeration exceeds cap");
    Subset s = 0;
    Subset p = pattern;
    while (p) {
      int idx = std::countr_zero(p);
      s |= singleton(elems[idx]);
      p &= p - 1;
    }
    out.push_back(s);
    if (k == 0) break;
  } while (next_comb(pattern, n));
  return out;
}

}  // namespace hf

#endif
