#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "hf/circuit.hpp"

using namespace hf;

namespace {

// present-edge list for an assignment given as a bitmask over `edges`
std::vector<Lit> present_from_mask(const std::vector<Lit>& edges,
                                   unsigned mask) {
  std::vector<Lit> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (mask & (1u << i)) out.push_back(edges[i]);
  return out;
}

bool term_satisfied(const Term& t, const std::vector<Lit>& present) {
  for (Lit l : t) {
    bool has = std::find(present.begin(), present.end(), l & ~1u) !=
               present.end();
    if (lit_neg(l) ? has : !has) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("literal codes order edges and signs correctly") {
  Lit a = make_lit(1, 2), b = make_lit(2, 1), c = make_lit(1, 2, true);
  CHECK(a == b);
  CHECK(a < c);  // positive before negative on the same edge
  CHECK(lit_u(c) == 1);
  CHECK(lit_v(c) == 2);
  CHECK(lit_neg(c));
  CHECK_FALSE(lit_neg(a));
  CHECK(lit_edge(a) == lit_edge(c));
  CHECK(make_lit(1, 3) < make_lit(2, 3));
  CHECK_THROWS_AS(make_lit(0, 1), PreconditionError);
  CHECK_THROWS_AS(make_lit(2, 2), PreconditionError);
}

TEST_CASE("terms: union, contradiction, vertices") {
  Term t1{make_lit(1, 2), make_lit(2, 3)};
  Term t2{make_lit(1, 2), make_lit(1, 4)};
  Term u = term_union(t1, t2);
  CHECK(u.size() == 3);
  CHECK(term_all_positive(u));
  CHECK(term_vertices(u) == from_elements({1, 2, 3, 4}));
  Term bad{make_lit(1, 2), make_lit(1, 2, true)};
  std::sort(bad.begin(), bad.end());
  CHECK(term_contradictory(bad));
  CHECK_FALSE(term_contradictory(t1));
  CHECK_FALSE(term_all_positive(bad));
}

TEST_CASE("parsing and formatting round-trip") {
  std::string text =
      "0 LEAF + 1 2\n1 LEAF - 2 3\n2 AND 0 1\n3 OR 2 0\nROOT 3\n";
  Circuit c = parse_circuit(text);
  CHECK(c.nodes.size() == 4);
  CHECK(c.max_vertex == 3);
  CHECK_FALSE(c.monotone());
  CHECK(format_circuit(c) == text);
}

TEST_CASE("parser rejects malformed circuits") {
  CHECK_THROWS_AS(parse_circuit("0 AND 1 2\nROOT 0\n"), PreconditionError);
  CHECK_THROWS_AS(parse_circuit("0 LEAF + 1 2\n0 LEAF + 1 3\nROOT 0\n"),
                  PreconditionError);
  CHECK_THROWS_AS(parse_circuit("0 LEAF + 1 2\n"), PreconditionError);
  CHECK_THROWS_AS(parse_circuit("0 LEAF + 1 2\nROOT 0\n1 LEAF + 1 3\n"),
                  PreconditionError);
  CHECK_THROWS_AS(parse_circuit("0 LEAF + 1 2 junk\nROOT 0\n"),
                  PreconditionError);
  CHECK_THROWS_AS(parse_circuit("0 GATE 1 2\nROOT 0\n"), PreconditionError);
  CHECK_THROWS_AS(parse_circuit("0 LEAF * 1 2\nROOT 0\n"), PreconditionError);
}

TEST_CASE("canonical clique circuit shape and generated cliques") {
  Circuit c = build_clique_circuit(4, 3);
  // 6 shared leaves + 4 groups x 2 ANDs + 3 ORs
  CHECK(c.nodes.size() == 17);
  CHECK(c.max_vertex == 4);
  CHECK(c.monotone());
  DnfBuilder b(c);
  CHECK(b.root().size() == 4);
  CHECK(cliques_generated_at(c, c.root, 3, 4, b).size() == 4);
  // leaf (1,2) generates exactly the triangles through that edge
  int leaf12 = -1;
  for (std::size_t i = 0; i < c.nodes.size(); ++i)
    if (c.nodes[i].kind == NodeKind::Leaf && c.nodes[i].lit == make_lit(1, 2))
      leaf12 = static_cast<int>(i);
  REQUIRE(leaf12 >= 0);
  auto cl = cliques_generated_at(c, leaf12, 3, 4, b);
  CHECK(cl == std::vector<Subset>{from_elements({1, 2, 3}),
                                  from_elements({1, 2, 4})});
  CHECK_THROWS_AS(build_clique_circuit(3, 5), PreconditionError);
}

TEST_CASE("evaluation agrees with DNF membership on every assignment") {
  std::string mixed =
      "0 LEAF + 1 2\n1 LEAF - 1 3\n2 LEAF + 2 3\n3 AND 0 1\n4 OR 3 2\n"
      "5 AND 4 0\nROOT 5\n";
  Circuit c = parse_circuit(mixed);
  std::vector<Term> terms = dnf(c);
  std::vector<Lit> edges{make_lit(1, 2), make_lit(1, 3), make_lit(2, 3)};
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::vector<Lit> present = present_from_mask(edges, mask);
    bool via_terms = false;
    for (const Term& t : terms)
      via_terms = via_terms || term_satisfied(t, present);
    CHECK(evaluate(c, present) == via_terms);
  }
}

TEST_CASE("DNF expansion respects the size cap") {
  Circuit c = build_clique_circuit(5, 3);
  CHECK_THROWS_AS(dnf(c, 2), TooLargeError);
  CHECK(dnf(c, 1000).size() == 10);
}

TEST_CASE("consistent derivation of a term inside a target") {
  Circuit c = build_clique_circuit(4, 3);
  Term target{make_lit(1, 2), make_lit(1, 3), make_lit(2, 3)};
  MinimalTermResult r = minimal_term(c, target);
  REQUIRE(r.found);
  CHECK(r.term == target);  // the triangle's AND group needs all three edges
  // trace consistency: AND nodes unite children, OR nodes copy one child
  for (const auto& [node, t] : r.trace) {
    const Node& nd = c.nodes[node];
    if (nd.kind == NodeKind::Leaf) {
      CHECK(t == Term{nd.lit});
    } else if (nd.kind == NodeKind::And) {
      REQUIRE(r.trace.count(nd.a));
      REQUIRE(r.trace.count(nd.b));
      CHECK(t == term_union(r.trace.at(nd.a), r.trace.at(nd.b)));
    } else {
      bool from_a = r.trace.count(nd.a) && t == r.trace.at(nd.a);
      bool from_b = r.trace.count(nd.b) && t == r.trace.at(nd.b);
      CHECK((from_a || from_b));
    }
  }
  // no derivation avoids edge (1,2) entirely for a target without it
  Term small{make_lit(3, 4)};
  CHECK_FALSE(minimal_term(c, small).found);
}

TEST_CASE("clique-freeness of edge sets") {
  std::vector<Lit> square{make_lit(1, 2), make_lit(2, 3), make_lit(3, 4),
                          make_lit(1, 4)};
  CHECK(clique_free(square, 3, 4));
  std::vector<Lit> triangle{make_lit(1, 2), make_lit(2, 3), make_lit(1, 3)};
  CHECK_FALSE(clique_free(triangle, 3, 4));
  CHECK(clique_free(triangle, 4, 4));
  CHECK(clique_free({}, 3, 2));
}

TEST_CASE("counterexample verification") {
  Circuit orc = parse_circuit("0 LEAF + 1 2\n1 LEAF + 3 4\n2 OR 0 1\nROOT 2\n");
  CHECK(verify_counterexample(orc, Term{make_lit(1, 2)}, 3, 6));
  // not a DNF term
  CHECK_FALSE(verify_counterexample(orc, Term{make_lit(1, 3)}, 3, 6));
  // every term of a correct clique circuit contains a full triangle
  Circuit c = build_clique_circuit(4, 3);
  for (const Term& t : dnf(c)) CHECK_FALSE(verify_counterexample(c, t, 3, 4));
}
