#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hf/binom.hpp"
#include "hf/family.hpp"

using namespace hf;

namespace {

SetFamily example1() {
  return make_family(7, 3, {from_elements({1, 2, 3}), from_elements({1, 4, 6})});
}

}  // namespace

TEST_CASE("family construction validates and sorts") {
  SetFamily u = make_family(5, 2, {from_elements({3, 4}), from_elements({1, 5})});
  CHECK(u.sets.front() == from_elements({1, 5}));
  CHECK_THROWS_AS(make_family(5, 2, {from_elements({1, 2, 3})}),
                  PreconditionError);
  CHECK_THROWS_AS(make_family(5, 2, {from_elements({5, 6})}), PreconditionError);
  CHECK_THROWS_AS(
      make_family(5, 2, {from_elements({1, 2}), from_elements({1, 2})}),
      PreconditionError);
}

TEST_CASE("json round trip and rejection of malformed families") {
  SetFamily u = example1();
  SetFamily v = family_from_json_text(family_to_json_text(u));
  CHECK(v.n == u.n);
  CHECK(v.m == u.m);
  CHECK(v.sets == u.sets);
  CHECK_THROWS(family_from_json_text("{\"n\":3,\"m\":2,\"sets\":[[1,1]]}"));
  CHECK_THROWS(family_from_json_text("{\"n\":3,\"m\":2,\"sets\":[[1,4]]}"));
  CHECK_THROWS(family_from_json_text("{\"n\":3,\"m\":2,\"sets\":[[1]]}"));
}

TEST_CASE("sparsity of the two-member reference family") {
  SetFamily u = example1();
  CHECK(sparsity(u) == doctest::Approx(std::log(17.5)).epsilon(1e-12));
  CHECK_THROWS_AS(sparsity(make_family(4, 2, {})), EmptyFamilyError);
  // full slice: kappa = 0, complementary sparsity diverges
  std::vector<Subset> all = combinations(full_set(4), 2);
  SetFamily full = make_family(4, 2, all);
  CHECK(sparsity(full) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::isinf(complement_sparsity(full)));
  CHECK(complement_sparsity_of(std::log(2.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("5-extension of the reference family: exact member list") {
  SetFamily u = example1();
  SetFamily e = extend(u, 5);
  std::vector<Subset> want;
  for (auto v : std::vector<std::vector<int>>{{1, 2, 3, 4, 5},
                                              {1, 2, 3, 4, 6},
                                              {1, 2, 3, 4, 7},
                                              {1, 2, 3, 5, 6},
                                              {1, 2, 3, 5, 7},
                                              {1, 2, 3, 6, 7},
                                              {1, 2, 4, 5, 6},
                                              {1, 2, 4, 6, 7},
                                              {1, 3, 4, 5, 6},
                                              {1, 3, 4, 6, 7},
                                              {1, 4, 5, 6, 7}})
    want.push_back(from_elements(v));
  std::sort(want.begin(), want.end(), lex_less);
  CHECK(e.sets == want);
  CHECK(sparsity(e) == doctest::Approx(std::log(21.0 / 11.0)).epsilon(1e-12));
  CHECK_THROWS_AS(extend(u, 5, 3), TooLargeError);
}

TEST_CASE("mark and double-mark counts on the reference family") {
  SetFamily u = example1();
  MarkStats s = mark_stats(u, 5);
  CHECK(s.mark_count == 12);
  CHECK(s.double_mark_count == 14);
  CHECK(s.kappa_marks == doctest::Approx(std::log(17.5)).epsilon(1e-9));
  CHECK(s.kappa_double_total == doctest::Approx(std::log(150.0)).epsilon(1e-9));
  CHECK(s.kappa_double_proper ==
        doctest::Approx(std::log(150.0) - std::log(17.5)).epsilon(1e-9));
  CHECK(check_lemma1(u, 5));
}

TEST_CASE("sphere sub-families and the weighted-average identity") {
  SetFamily u = example1();
  SetFamily sph = sphere_subfamily(u, from_elements({1, 2, 3}), 2);
  REQUIRE(sph.size() == 1);
  CHECK(sph.sets[0] == from_elements({1, 4, 6}));
  CHECK(std::isinf(sphere_sparsity(u, from_elements({1, 2, 3}), 1)));
  CHECK(average_sphere_sparsity(u, 5) ==
        doctest::Approx(mark_stats(u, 5).kappa_double_proper).epsilon(1e-9));
  CHECK(check_kappaS_equals_kappaD(u, 5));
}

TEST_CASE("sandwich and average-sphere identity across random families") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 5 + static_cast<int>(rng() % 4);  // 5..8
    int m = 2 + static_cast<int>(rng() % 2);  // 2..3
    long long slice = exact_binom(n, m).get_si();
    long long count = 1 + static_cast<long long>(rng() % (slice - 1));
    SetFamily u = sample_family(n, m, count, rng);
    for (int l = m; l <= n; ++l) {
      CHECK(check_lemma1(u, l));
      CHECK(check_kappaS_equals_kappaD(u, l));
    }
  }
}

TEST_CASE("space augmentation is extension in a widened ground set") {
  SetFamily u = example1();
  SetFamily a = augment_space(u, 2);
  CHECK(a.n == 9);
  CHECK(a.m == 5);
  // every member still contains one of the original sets
  for (Subset s : a.sets) {
    bool covered = false;
    for (Subset t : u.sets) covered = covered || subset_of(t, s);
    CHECK(covered);
  }
  // count: inclusion-exclusion over the two originals, 2 extra from C(9-3,2)
  // supersets each, overlap = sets containing the union (5 elements) exactly
  long long per = exact_binom(6, 2).get_si();
  long long both = 1;  // the union {1,2,3,4,6} itself is the only 5-set
  CHECK(static_cast<long long>(a.size()) == 2 * per - both);
}

TEST_CASE("ordered splits and their sparsity") {
  SetFamily one = make_family(7, 3, {from_elements({1, 2, 3})});
  auto sp = all_splits(one, {1, 2});
  CHECK(sp.size() == 3);
  for (const Split& s : sp) {
    CHECK(popcount(s[0]) == 1);
    CHECK(popcount(s[1]) == 2);
    CHECK((s[0] | s[1]) == from_elements({1, 2, 3}));
  }
  CHECK_THROWS_AS(all_splits(one, {1, 1}), PreconditionError);
  SetFamily u = example1();
  CHECK(split_sparsity(u, {1, 2}) ==
        doctest::Approx(sparsity(u)).epsilon(1e-9));
  CHECK(split_sparsity(u, {2, 1}) ==
        doctest::Approx(sparsity(u)).epsilon(1e-9));
  CHECK(split_sparsity(u, {1, 1, 1}) ==
        doctest::Approx(sparsity(u)).epsilon(1e-9));
}

TEST_CASE("uniform family sampling is deterministic and duplicate-free") {
  Rng a(123), b(123);
  SetFamily x = sample_family(9, 3, 20, a);
  SetFamily y = sample_family(9, 3, 20, b);
  CHECK(x.sets == y.sets);
  CHECK(x.size() == 20);
  for (Subset s : x.sets) CHECK(popcount(s) == 3);
}
