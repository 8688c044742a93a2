#include "hf/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace hf {

Term term_union(const Term& a, const Term& b) {
  Term out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool term_contradictory(const Term& t) {
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (lit_edge(t[i]) == lit_edge(t[i + 1])) return true;
  return false;
}

bool term_all_positive(const Term& t) {
  for (Lit l : t)
    if (lit_neg(l)) return false;
  return true;
}

Subset term_vertices(const Term& t) {
  Subset s = 0;
  for (Lit l : t) s |= singleton(lit_u(l)) | singleton(lit_v(l));
  return s;
}

bool Circuit::monotone() const {
  for (const Node& nd : nodes)
    if (nd.kind == NodeKind::Leaf && lit_neg(nd.lit)) return false;
  return true;
}

Circuit parse_circuit(const std::string& text) {
  Circuit c;
  std::unordered_map<int, int> index_of;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_root = false;
  auto child = [&](int id) {
    auto it = index_of.find(id);
    if (it == index_of.end())
      throw PreconditionError("circuit: reference to undeclared node " +
                              std::to_string(id));
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first == "ROOT") {
      int id;
      if (!(ls >> id)) throw PreconditionError("circuit: malformed ROOT line");
      c.root = child(id);
      saw_root = true;
      continue;
    }
    if (saw_root) throw PreconditionError("circuit: node after ROOT");
    int id;
    try {
      id = std::stoi(first);
    } catch (...) {
      throw PreconditionError("circuit: bad node id at line " +
                              std::to_string(lineno));
    }
    if (index_of.count(id))
      throw PreconditionError("circuit: duplicate id " + std::to_string(id));
    std::string kind;
    if (!(ls >> kind)) throw PreconditionError("circuit: missing node kind");
    Node nd;
    if (kind == "LEAF") {
      std::string sign;
      int u, v;
      if (!(ls >> sign >> u >> v) || (sign != "+" && sign != "-"))
        throw PreconditionError("circuit: malformed LEAF line");
      nd.kind = NodeKind::Leaf;
      nd.lit = make_lit(u, v, sign == "-");
      c.max_vertex = std::max({c.max_vertex, u, v});
    } else if (kind == "AND" || kind == "OR") {
      int a, b;
      if (!(ls >> a >> b)) throw PreconditionError("circuit: malformed gate line");
      nd.kind = kind == "AND" ? NodeKind::And : NodeKind::Or;
      nd.a = child(a);
      nd.b = child(b);
    } else {
      throw PreconditionError("circuit: unknown kind " + kind);
    }
    std::string extra;
    if (ls >> extra) throw PreconditionError("circuit: trailing tokens");
    index_of[id] = static_cast<int>(c.nodes.size());
    c.nodes.push_back(nd);
    c.ids.push_back(id);
  }
  if (!saw_root) throw PreconditionError("circuit: missing ROOT");
  return c;
}

std::string format_circuit(const Circuit& c) {
  std::ostringstream out;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const Node& nd = c.nodes[i];
    out << c.ids[i] << ' ';
    switch (nd.kind) {
      case NodeKind::Leaf:
        out << "LEAF " << (lit_neg(nd.lit) ? '-' : '+') << ' ' << lit_u(nd.lit)
            << ' ' << lit_v(nd.lit);
        break;
      case NodeKind::And:
        out << "AND " << c.ids[nd.a] << ' ' << c.ids[nd.b];
        break;
      case NodeKind::Or:
        out << "OR " << c.ids[nd.a] << ' ' << c.ids[nd.b];
        break;
    }
    out << '\n';
  }
  out << "ROOT " << c.ids[c.root] << '\n';
  return out.str();
}

namespace {

// Balanced binary combine of already-built node indices.
int balance(Circuit& c, NodeKind kind, const std::vector<int>& leaves, int lo,
            int hi) {
  if (hi - lo == 1) return leaves[lo];
  int mid = lo + (hi - lo) / 2;
  int a = balance(c, kind, leaves, lo, mid);
  int b = balance(c, kind, leaves, mid, hi);
  Node nd;
  nd.kind = kind;
  nd.a = a;
  nd.b = b;
  c.nodes.push_back(nd);
  c.ids.push_back(static_cast<int>(c.nodes.size()) - 1);
  return static_cast<int>(c.nodes.size()) - 1;
}

}  // namespace

Circuit build_clique_circuit(int n, int k) {
  if (n < 2 || k < 2 || k > n) throw PreconditionError("clique circuit: bad (n,k)");
  Circuit c;
  c.max_vertex = n;
  std::unordered_map<Lit, int> leaf_of;
  auto leaf = [&](int u, int v) {
    Lit l = make_lit(u, v);
    auto it = leaf_of.find(l);
    if (it != leaf_of.end()) return it->second;
    Node nd;
    nd.kind = NodeKind::Leaf;
    nd.lit = l;
    c.nodes.push_back(nd);
    c.ids.push_back(static_cast<int>(c.nodes.size()) - 1);
    int idx = static_cast<int>(c.nodes.size()) - 1;
    leaf_of[l] = idx;
    return idx;
  };
  std::vector<Subset> ksets = combinations(full_set(n), k);
  std::sort(ksets.begin(), ksets.end(), lex_less);
  std::vector<int> groups;
  for (Subset ks : ksets) {
    std::vector<int> vs = elements(ks);
    std::vector<int> edge_leaves;
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        edge_leaves.push_back(leaf(vs[i], vs[j]));
    groups.push_back(
        balance(c, NodeKind::And, edge_leaves, 0, static_cast<int>(edge_leaves.size())));
  }
  c.root = balance(c, NodeKind::Or, groups, 0, static_cast<int>(groups.size()));
  return c;
}

bool evaluate(const Circuit& c, const std::vector<Lit>& present) {
  std::vector<char> truth(c.nodes.size());
  auto has = [&](Lit pos) {
    return std::find(present.begin(), present.end(), pos) != present.end();
  };
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const Node& nd = c.nodes[i];
    switch (nd.kind) {
      case NodeKind::Leaf: {
        bool p = has(nd.lit & ~1u);
        truth[i] = lit_neg(nd.lit) ? !p : p;
        break;
      }
      case NodeKind::And:
        truth[i] = truth[nd.a] && truth[nd.b];
        break;
      case NodeKind::Or:
        truth[i] = truth[nd.a] || truth[nd.b];
        break;
    }
  }
  return truth[c.root];
}

DnfBuilder::DnfBuilder(const Circuit& c, long long cap)
    : c_(c), cap_(cap), memo_(c.nodes.size()) {}

const std::vector<Term>& DnfBuilder::at(int node) {
  if (node < 0 || node >= static_cast<int>(c_.nodes.size()))
    throw PreconditionError("dnf: bad node index");
  if (memo_[node]) return *memo_[node];
  const Node& nd = c_.nodes[node];
  std::vector<Term> out;
  switch (nd.kind) {
    case NodeKind::Leaf:
      out.push_back(Term{nd.lit});
      break;
    case NodeKind::And: {
      const auto& A = at(nd.a);
      const auto& B = at(nd.b);
      if (static_cast<long long>(A.size()) * static_cast<long long>(B.size()) >
          cap_)
        throw TooLargeError("dnf: predicted term count exceeds cap");
      for (const Term& ta : A)
        for (const Term& tb : B) out.push_back(term_union(ta, tb));
      break;
    }
    case NodeKind::Or: {
      const auto& A = at(nd.a);
      const auto& B = at(nd.b);
      if (static_cast<long long>(A.size()) + static_cast<long long>(B.size()) >
          cap_)
        throw TooLargeError("dnf: predicted term count exceeds cap");
      out = A;
      out.insert(out.end(), B.begin(), B.end());
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  memo_[node] = std::move(out);
  return *memo_[node];
}

std::vector<Term> dnf(const Circuit& c, long long cap) {
  DnfBuilder b(c, cap);
  return b.root();
}

std::vector<Subset> cliques_generated_at(const Circuit& c, int node, int k,
                                         int n, DnfBuilder& builder) {
  std::vector<Subset> masks;
  for (const Term& t : builder.at(node)) {
    if (!term_all_positive(t)) continue;
    Subset vs = term_vertices(t);
    if (popcount(vs) <= k && subset_of(vs, full_set(n))) masks.push_back(vs);
  }
  std::vector<Subset> out;
  for (Subset cl : combinations(full_set(n), k)) {
    for (Subset m : masks)
      if (subset_of(m, cl)) {
        out.push_back(cl);
        break;
      }
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

MinimalTermResult minimal_term(const Circuit& c, const Term& target,
                               long long cap) {
  (void)cap;
  MinimalTermResult res;
  std::map<int, std::optional<Term>> memo;
  auto choose = [&](auto&& self, int node) -> const std::optional<Term>& {
    auto it = memo.find(node);
    if (it != memo.end()) return it->second;
    const Node& nd = c.nodes[node];
    std::optional<Term> got;
    switch (nd.kind) {
      case NodeKind::Leaf:
        if (std::binary_search(target.begin(), target.end(), nd.lit))
          got = Term{nd.lit};
        break;
      case NodeKind::And: {
        const auto& a = self(self, nd.a);
        if (a) {
          const auto& b = self(self, nd.b);
          if (b) got = term_union(*a, *b);
        }
        break;
      }
      case NodeKind::Or: {
        const auto& a = self(self, nd.a);
        if (a)
          got = *a;
        else {
          const auto& b = self(self, nd.b);
          if (b) got = *b;
        }
        break;
      }
    }
    return memo[node] = std::move(got);
  };
  const auto& r = choose(choose, c.root);
  if (!r) return res;
  res.found = true;
  res.term = *r;
  for (auto& [node, t] : memo)
    if (t) res.trace[node] = *t;
  return res;
}

bool clique_free(const std::vector<Lit>& pos_edges, int k, int n) {
  if (k > n) return true;
  for (Subset cl : combinations(full_set(n), k)) {
    std::vector<int> vs = elements(cl);
    bool all = true;
    for (std::size_t i = 0; i < vs.size() && all; ++i)
      for (std::size_t j = i + 1; j < vs.size() && all; ++j) {
        Lit want = make_lit(vs[i], vs[j]);
        if (std::find(pos_edges.begin(), pos_edges.end(), want) ==
            pos_edges.end())
          all = false;
      }
    if (all) return false;
  }
  return true;
}

bool verify_counterexample(const Circuit& c, const Term& t, int k, int n,
                           long long cap) {
  if (n == 0) n = c.max_vertex;
  DnfBuilder b(c, cap);
  const auto& terms = b.root();
  if (!std::binary_search(terms.begin(), terms.end(), t)) return false;
  if (term_contradictory(t)) return false;
  std::vector<Lit> pos;
  for (Lit l : t)
    if (!lit_neg(l)) pos.push_back(l);
  return clique_free(pos, k, n);
}

}  // namespace hf
