#include "hf/sunflower.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace hf {

std::string sunflower_to_json_text(const Sunflower& s) {
  nlohmann::ordered_json j;
  j["core"] = elements(s.core);
  auto& arr = j["petals"] = nlohmann::ordered_json::array();
  for (Subset p : s.petals) arr.push_back(elements(p));
  return j.dump();
}

Sunflower sunflower_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Sunflower s;
  s.core = from_elements(j.at("core").get<std::vector<int>>());
  for (const auto& p : j.at("petals"))
    s.petals.push_back(from_elements(p.get<std::vector<int>>()));
  return s;
}

bool verify_sunflower(const SetFamily& u, const Sunflower& s) {
  if (s.petals.size() < 2) return false;
  Subset seen = s.core;
  for (Subset p : s.petals) {
    if (p == 0) return false;
    if (p & seen) return false;  // hits the core or an earlier petal
    seen |= p;
    Subset member = s.core | p;
    if (!std::binary_search(u.sets.begin(), u.sets.end(), member, lex_less))
      return false;
  }
  return true;
}

namespace {

// Search over member lists (m-sets as masks).  Tries the greedy disjoint
// collection first, then every pivot element by descending frequency.
std::optional<Sunflower> er_search(const std::vector<Subset>& members, int m,
                                   int delta) {
  if (members.size() < 2 || m == 0) return std::nullopt;
  std::vector<Subset> disjoint;
  Subset used = 0;
  for (Subset s : members)
    if (!(s & used)) {
      disjoint.push_back(s);
      used |= s;
    }
  if (static_cast<int>(disjoint.size()) >= delta) {
    disjoint.resize(delta);
    return Sunflower{0, disjoint};
  }
  if (m == 1) return std::nullopt;
  std::map<int, long long> freq;
  for (Subset s : members)
    for (int e : elements(s)) ++freq[e];
  std::vector<int> pivots;
  for (auto& [e, c] : freq)
    if (c >= 2) pivots.push_back(e);
  std::stable_sort(pivots.begin(), pivots.end(),
                   [&](int a, int b) { return freq[a] > freq[b]; });
  for (int x : pivots) {
    std::vector<Subset> link;
    for (Subset s : members)
      if (contains(s, x)) link.push_back(s & ~singleton(x));
    auto sub = er_search(link, m - 1, delta);
    if (sub) {
      sub->core |= singleton(x);
      return sub;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Sunflower> find_sunflower_er(const SetFamily& u, int delta) {
  if (delta < 2) throw PreconditionError("find_sunflower_er: delta >= 2");
  return er_search(u.sets, u.m, delta);
}

SmallCoreResult find_sunflower_small_core(const SetFamily& u, int delta, int l,
                                          double lambda_target,
                                          long long node_budget, long long cap) {
  if (delta < 2) throw PreconditionError("small_core: delta >= 2");
  SmallCoreResult res;
  res.gen = find_generator(u, l, lambda_target, FindGeneratorConfig{.cap = cap});
  Subset g = res.gen.gen.g;
  int gs = popcount(g);
  if (gs >= u.m) return res;  // petals would be empty
  int y_size = l - gs;
  if (static_cast<long long>(delta) * y_size > u.n - gs) return res;

  std::vector<Subset> needed;
  for (Subset s : u.sets)
    if (subset_of(g, s)) needed.push_back(s & ~g);
  auto is_valid = [&](Subset y) {
    for (Subset w : needed)
      if (subset_of(w, y)) return true;
    return false;
  };
  std::vector<Subset> valid;
  for (Subset y : combinations(full_set(u.n) & ~g, y_size, cap))
    if (is_valid(y)) valid.push_back(y);
  std::sort(valid.begin(), valid.end(), lex_less);

  std::vector<Subset> chosen;
  auto rec = [&](auto&& self, std::size_t from, Subset used) -> bool {
    if (static_cast<int>(chosen.size()) == delta) return true;
    for (std::size_t i = from; i < valid.size(); ++i) {
      if (valid[i] & used) continue;
      if (++res.nodes_visited > node_budget) {
        res.budget_exhausted = true;
        return false;
      }
      chosen.push_back(valid[i]);
      if (self(self, i + 1, used | valid[i])) return true;
      chosen.pop_back();
      if (res.budget_exhausted) return false;
    }
    return false;
  };
  if (!rec(rec, 0, 0)) return res;

  Sunflower s;
  s.core = g;
  for (Subset y : chosen) {
    auto w = valid_witness(u, g, y);
    if (!w) return res;  // cannot happen for a valid y
    s.petals.push_back(*w & ~g);
  }
  res.sunflower = s;
  return res;
}

}  // namespace hf
