#ifndef HF_CIRCUIT_HPP
#define HF_CIRCUIT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hf/util.hpp"

namespace hf {

// Literal over an edge variable X_{u,v}, u < v, vertices 1-based (<= 64).
// Code layout: (u << 8) | (v << 1) | negated.  Positive < negative for the
// same edge, smaller edges sort first.
using Lit = std::uint32_t;

inline Lit make_lit(int u, int v, bool neg = false) {
  if (u > v) std::swap(u, v);
  if (u < 1 || u == v || v > kMaxGround)
    throw PreconditionError("make_lit: bad edge");
  return (static_cast<Lit>(u) << 8) | (static_cast<Lit>(v) << 1) |
         (neg ? 1u : 0u);
}
inline int lit_u(Lit l) { return static_cast<int>(l >> 8); }
inline int lit_v(Lit l) { return static_cast<int>((l >> 1) & 0x7f); }
inline bool lit_neg(Lit l) { return l & 1u; }
inline Lit lit_edge(Lit l) { return l >> 1; }  // sign-stripped edge code

// Conjunction of literals: sorted, duplicate-free.  A term may be
// contradictory (edge present both positively and negatively); such terms are
// kept by the DNF expansion.
using Term = std::vector<Lit>;

Term term_union(const Term& a, const Term& b);
bool term_contradictory(const Term& t);
bool term_all_positive(const Term& t);
Subset term_vertices(const Term& t);

enum class NodeKind { Leaf, And, Or };

struct Node {
  NodeKind kind = NodeKind::Leaf;
  Lit lit = 0;      // leaves only
  int a = -1, b = -1;  // child indices, < own index
};

struct Circuit {
  std::vector<Node> nodes;  // children always precede parents
  std::vector<int> ids;     // original ids, one per node
  int root = -1;            // node index
  int max_vertex = 0;

  bool monotone() const;
};

// One node per line: "<id> LEAF +|- <u> <v>", "<id> AND <a> <b>",
// "<id> OR <a> <b>", finally "ROOT <id>".  Children must be declared first.
Circuit parse_circuit(const std::string& text);
std::string format_circuit(const Circuit& c);

// Canonical CLIQUE_{n,k}: balanced OR over all k-sets of balanced ANDs over
// each k-set's edges.
Circuit build_clique_circuit(int n, int k);

// present = positive literal codes of edges present in the graph.
bool evaluate(const Circuit& c, const std::vector<Lit>& present);

// DNF of every node, built bottom-up and memoized.  AND nodes multiply term
// counts, so the predicted size is checked against the cap before expansion.
class DnfBuilder {
 public:
  explicit DnfBuilder(const Circuit& c, long long cap = kDefaultEnumCap);
  const std::vector<Term>& at(int node);
  const std::vector<Term>& root() { return at(c_.root); }

 private:
  const Circuit& c_;
  long long cap_;
  std::vector<std::optional<std::vector<Term>>> memo_;
};

std::vector<Term> dnf(const Circuit& c, long long cap = kDefaultEnumCap);

// k-cliques c with some all-positive DNF term lying inside C(c,2).
std::vector<Subset> cliques_generated_at(const Circuit& c, int node, int k,
                                         int n, DnfBuilder& builder);

struct MinimalTermResult {
  bool found = false;
  Term term;                 // subset of the target, in DNF(root)
  std::map<int, Term> trace;  // node index -> the one term derived there
};

// Derivation with one consistent term per visited node: leaves contribute
// their literal, AND nodes the union of their children's terms, OR nodes one
// child's term.  Yields a term of DNF(root) contained in `target`.
MinimalTermResult minimal_term(const Circuit& c, const Term& target,
                               long long cap = kDefaultEnumCap);

// True when the positive edges of `edges` contain no k-clique over [n].
bool clique_free(const std::vector<Lit>& pos_edges, int k, int n);

// t must be a contradiction-free member of DNF(root) whose positive edges
// contain no k-clique; such a term witnesses that the circuit accepts a
// clique-free graph.
bool verify_counterexample(const Circuit& c, const Term& t, int k, int n = 0,
                           long long cap = kDefaultEnumCap);

}  // namespace hf

#endif
