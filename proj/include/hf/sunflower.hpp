#ifndef HF_SUNFLOWER_HPP
#define HF_SUNFLOWER_HPP

#include <optional>
#include <string>
#include <vector>

#include "hf/family.hpp"
#include "hf/generator.hpp"

namespace hf {

struct Sunflower {
  Subset core = 0;
  std::vector<Subset> petals;  // nonempty, pairwise disjoint, disjoint from core
};

std::string sunflower_to_json_text(const Sunflower& s);
Sunflower sunflower_from_json_text(const std::string& text);

// Every core+petal must be a member of u; at least two petals.
bool verify_sunflower(const SetFamily& u, const Sunflower& s);

// Recursive search: a maximal pairwise-disjoint subcollection either already
// gives `delta` disjoint members (empty core), or some element lies in many
// members and we recurse into its link.  Guaranteed to find one when
// |U| > (delta-1)^m * m!.
std::optional<Sunflower> find_sunflower_er(const SetFamily& u, int delta);

struct SmallCoreResult {
  std::optional<Sunflower> sunflower;
  FindGeneratorResult gen;       // the core candidate and its validity
  long long nodes_visited = 0;   // backtracking effort
  bool budget_exhausted = false;
};

// Core = generator of u; petals carved out of pairwise-disjoint valid sets,
// found by lexicographic backtracking over the valid (l-|g|)-sets.
SmallCoreResult find_sunflower_small_core(const SetFamily& u, int delta, int l,
                                          double lambda_target,
                                          long long node_budget = 100000,
                                          long long cap = kDefaultEnumCap);

}  // namespace hf

#endif
