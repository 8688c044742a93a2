#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hf/binom.hpp"
#include "hf/sunflower.hpp"

using namespace hf;

TEST_CASE("sunflower verification accepts and rejects correctly") {
  SetFamily u = make_family(
      9, 3,
      {from_elements({1, 2, 3}), from_elements({1, 2, 4}),
       from_elements({1, 2, 5}), from_elements({3, 4, 5})});
  Sunflower good{from_elements({1, 2}),
                 {singleton(3), singleton(4), singleton(5)}};
  CHECK(verify_sunflower(u, good));
  // fewer than two petals
  CHECK_FALSE(verify_sunflower(u, {from_elements({1, 2}), {singleton(3)}}));
  // petal hits the core
  CHECK_FALSE(verify_sunflower(
      u, {from_elements({1, 2}), {singleton(1), singleton(4)}}));
  // petals overlap
  CHECK_FALSE(verify_sunflower(
      u, {from_elements({1, 2}), {singleton(3), singleton(3)}}));
  // empty petal
  CHECK_FALSE(verify_sunflower(u, {from_elements({1, 2}), {singleton(3), 0}}));
  // core+petal not a member
  CHECK_FALSE(verify_sunflower(
      u, {from_elements({1, 2}), {singleton(6), singleton(3)}}));
}

TEST_CASE("json round trip") {
  Sunflower s{from_elements({2, 5}), {singleton(1), from_elements({3, 4})}};
  Sunflower t = sunflower_from_json_text(sunflower_to_json_text(s));
  CHECK(t.core == s.core);
  CHECK(t.petals == s.petals);
}

TEST_CASE("recursive finder: disjoint members give an empty core") {
  SetFamily u = make_family(9, 3,
                            {from_elements({1, 2, 3}), from_elements({4, 5, 6}),
                             from_elements({7, 8, 9})});
  auto s = find_sunflower_er(u, 3);
  REQUIRE(s.has_value());
  CHECK(s->core == 0);
  CHECK(s->petals.size() == 3);
  CHECK(verify_sunflower(u, *s));
}

TEST_CASE("recursive finder: shared pair becomes the core") {
  SetFamily u = make_family(
      8, 3,
      {from_elements({1, 2, 3}), from_elements({1, 2, 4}),
       from_elements({1, 2, 5}), from_elements({1, 2, 6})});
  auto s = find_sunflower_er(u, 3);
  REQUIRE(s.has_value());
  CHECK(s->core == from_elements({1, 2}));
  CHECK(s->petals.size() == 3);
  CHECK(verify_sunflower(u, *s));
  CHECK_THROWS_AS(find_sunflower_er(u, 1), PreconditionError);
}

TEST_CASE("recursive finder honors the counting guarantee") {
  // |U| > (delta-1)^m * m!  forces a sunflower with delta petals
  Rng rng(17);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int m = 2 + static_cast<int>(rng() % 2);   // 2..3
    int delta = 2 + static_cast<int>(rng() % 2);  // 2..3
    int n = 10 + static_cast<int>(rng() % 3);  // 10..12
    long long need = 1;
    for (int i = 0; i < m; ++i) need *= (delta - 1);
    for (int i = 2; i <= m; ++i) need *= i;
    long long slice = exact_binom(n, m).get_si();
    if (need + 1 > slice) continue;
    long long count =
        need + 1 + static_cast<long long>(rng() % (slice - need));
    SetFamily u = sample_family(n, m, count, rng);
    auto s = find_sunflower_er(u, delta);
    REQUIRE(s.has_value());
    CHECK(static_cast<int>(s->petals.size()) == delta);
    CHECK(verify_sunflower(u, *s));
    ++found;
  }
  CHECK(found >= 60);
}

namespace {

// All 11 pairs through element 1 plus the first 37 pairs inside {2..12}:
// dense enough that the greedy core stops at {1} (a second element would
// overshoot the admissible sparsity), yet element 1 still has the top count.
SetFamily pair_rooted_family() {
  std::vector<Subset> sets;
  for (int x = 2; x <= 12; ++x) sets.push_back(from_elements({1, x}));
  std::vector<Subset> others = combinations(full_set(12) & ~singleton(1), 2);
  std::sort(others.begin(), others.end(), lex_less);
  sets.insert(sets.end(), others.begin(), others.begin() + 37);
  return make_family(12, 2, sets);  // 48 of the 66 pairs
}

}  // namespace

TEST_CASE("small-core search builds petals over a nonempty generator core") {
  SetFamily u = pair_rooted_family();
  SmallCoreResult r = find_sunflower_small_core(u, 2, 5, 0.3);
  CHECK(r.gen.gen.g == singleton(1));
  REQUIRE(r.sunflower.has_value());
  CHECK(r.sunflower->core == singleton(1));
  CHECK(verify_sunflower(u, *r.sunflower));
  CHECK(popcount(r.sunflower->core) <= r.gen.gen.size_bound + 1e-9);
  CHECK_FALSE(r.budget_exhausted);
}

TEST_CASE("small-core search with a degenerate empty core") {
  SetFamily u = make_family(12, 2,
                            {from_elements({1, 2}), from_elements({5, 6}),
                             from_elements({9, 10})});
  SmallCoreResult r = find_sunflower_small_core(u, 3, 4, 0.25);
  CHECK(r.gen.gen.degenerate);
  REQUIRE(r.sunflower.has_value());
  CHECK(r.sunflower->core == 0);
  CHECK(r.sunflower->petals.size() == 3);
  CHECK(verify_sunflower(u, *r.sunflower));
}

TEST_CASE("small-core search reports an exhausted budget") {
  SetFamily u = make_family(12, 2,
                            {from_elements({1, 2}), from_elements({5, 6}),
                             from_elements({9, 10})});
  SmallCoreResult r = find_sunflower_small_core(u, 3, 4, 0.25, 1);
  CHECK((r.budget_exhausted || r.sunflower.has_value()));
  if (r.budget_exhausted) CHECK_FALSE(r.sunflower.has_value());
}
