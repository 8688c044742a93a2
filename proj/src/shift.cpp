#include "hf/shift.hpp"

#include <algorithm>
#include <cmath>

#include "hf/binom.hpp"
#include "hf/generator.hpp"
#include "json.hpp"

namespace hf {

namespace {

void validate(const Circuit& c, const ShiftConfig& cfg) {
  if (cfg.n < 2 || cfg.n > kMaxGround || cfg.k < 2 || cfg.k > cfg.n)
    throw PreconditionError("shift: bad (n,k)");
  if (cfg.q < 1 || cfg.n % cfg.q != 0)
    throw PreconditionError("shift: q must divide n");
  if (cfg.l != 0 && cfg.l != cfg.n / cfg.q)
    throw PreconditionError("shift: l must equal n/q");
  if (cfg.z_block_size < 0 || cfg.r_block < 2)
    throw PreconditionError("shift: bad block parameters");
  if (c.max_vertex > cfg.n)
    throw PreconditionError("shift: circuit mentions vertices beyond n");
  if (!c.monotone()) throw PreconditionError("shift: circuit must be monotone");
}

int block_len(const ShiftConfig& cfg) { return cfg.n / cfg.q; }

std::vector<Lit> edges_within(Subset s) {
  std::vector<Lit> out;
  std::vector<int> vs = elements(s);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      out.push_back(make_lit(vs[i], vs[j]));
  std::sort(out.begin(), out.end());
  return out;
}

bool sorted_intersects(const std::vector<Lit>& a, const std::vector<Lit>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i; else ++j;
  }
  return false;
}

bool quad_less(const Quad& a, const Quad& b) {
  if (a.node != b.node) return a.node < b.node;
  if (a.g != b.g) return lex_less(a.g, b.g);
  if (a.g1 != b.g1) return lex_less(a.g1, b.g1);
  return lex_less(a.g2, b.g2);
}

}  // namespace

ShiftConfig shift_config_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ShiftConfig cfg;
  cfg.n = j.at("n").get<int>();
  cfg.k = j.at("k").get<int>();
  cfg.q = j.at("q").get<int>();
  cfg.l = j.value("l", 0);
  cfg.z_block_size = j.at("z_block_size").get<int>();
  cfg.r_block = j.at("r_block").get<int>();
  cfg.lambda_c = j.at("lambda_c").get<double>();
  cfg.candidate_budget = j.value("candidate_budget", cfg.candidate_budget);
  cfg.split_attempts = j.value("split_attempts", cfg.split_attempts);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.cap = j.value("cap", cfg.cap);
  return cfg;
}

std::string shift_config_to_json_text(const ShiftConfig& cfg) {
  nlohmann::ordered_json j;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["q"] = cfg.q;
  j["l"] = cfg.l ? cfg.l : block_len(cfg);
  j["z_block_size"] = cfg.z_block_size;
  j["r_block"] = cfg.r_block;
  j["lambda_c"] = cfg.lambda_c;
  j["candidate_budget"] = cfg.candidate_budget;
  j["split_attempts"] = cfg.split_attempts;
  j["seed"] = cfg.seed;
  j["cap"] = cfg.cap;
  return j.dump();
}

std::vector<NodeCliques> clique_generators(const Circuit& c,
                                           const ShiftConfig& cfg) {
  validate(c, cfg);
  DnfBuilder builder(c, cfg.cap);
  std::vector<NodeCliques> info(c.nodes.size());
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const Node& nd = c.nodes[i];
    NodeCliques& nc = info[i];
    if (nd.kind != NodeKind::Leaf) {
      std::vector<Subset> inh;
      std::set_union(info[nd.a].error.begin(), info[nd.a].error.end(),
                     info[nd.b].error.begin(), info[nd.b].error.end(),
                     std::back_inserter(inh), lex_less);
      nc.error = std::move(inh);
    }
    nc.generated =
        cliques_generated_at(c, static_cast<int>(i), cfg.k, cfg.n, builder);
    std::vector<Subset> pool;
    std::set_difference(nc.generated.begin(), nc.generated.end(),
                        nc.error.begin(), nc.error.end(),
                        std::back_inserter(pool), lex_less);
    // The loop stops once fewer than this many cliques are left uncovered;
    // the leftovers turn into error cliques.  Scaling by the pool size keeps
    // the error count below |pool| * e^{-lambda_c} at every node, and lets
    // lambda_c < 0 declare everything error.
    double threshold =
        static_cast<double>(pool.size()) * std::exp(-cfg.lambda_c);
    if (nd.kind == NodeKind::Leaf) {
      // Everything generated at a leaf contains the edge, so its endpoints
      // already cover the pool.
      if (!pool.empty() && static_cast<double>(pool.size()) >= threshold) {
        nc.generators.push_back(singleton(lit_u(nd.lit)) |
                                singleton(lit_v(nd.lit)));
        nc.nonerror = std::move(pool);
      } else if (!pool.empty()) {
        std::vector<Subset> err;
        std::set_union(nc.error.begin(), nc.error.end(), pool.begin(),
                       pool.end(), std::back_inserter(err), lex_less);
        nc.error = std::move(err);
      }
      continue;
    }
    while (static_cast<double>(pool.size()) >= threshold && !pool.empty()) {
      SetFamily fam = make_family(cfg.n, cfg.k, pool);
      FindGeneratorConfig gc;
      gc.cap = cfg.cap;
      auto fg =
          find_generator(fam, block_len(cfg), std::max(cfg.lambda_c, 1e-9), gc);
      Subset g = fg.gen.g;
      nc.generators.push_back(g);
      std::vector<Subset> rest;
      for (Subset cl : pool)
        if (!subset_of(g, cl)) rest.push_back(cl);
      if (rest.size() == pool.size())
        throw PreconditionError("clique_generators: generator removed nothing");
      pool = std::move(rest);
    }
    // leftovers become error cliques
    if (!pool.empty()) {
      std::vector<Subset> err;
      std::set_union(nc.error.begin(), nc.error.end(), pool.begin(), pool.end(),
                     std::back_inserter(err), lex_less);
      nc.error = std::move(err);
    }
    nc.nonerror.clear();
    std::set_difference(nc.generated.begin(), nc.generated.end(),
                        nc.error.begin(), nc.error.end(),
                        std::back_inserter(nc.nonerror), lex_less);
  }
  return info;
}

std::vector<Quad> build_Q0(const Circuit& c, const ShiftConfig& cfg,
                           const std::vector<NodeCliques>& info) {
  validate(c, cfg);
  std::vector<Quad> out;
  auto least_witness = [&](const std::vector<Subset>& pool, Subset need,
                           const std::vector<Subset>* also_in) -> std::optional<Subset> {
    for (Subset cl : pool) {  // pool is lex-sorted
      if (!subset_of(need, cl)) continue;
      if (also_in && !std::binary_search(also_in->begin(), also_in->end(), cl,
                                         lex_less))
        continue;
      return cl;
    }
    return std::nullopt;
  };
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const Node& nd = c.nodes[i];
    const NodeCliques& nc = info[i];
    if (nc.nonerror.empty()) continue;
    if (nd.kind == NodeKind::Leaf) {
      if (nc.generators.empty()) continue;
      Subset ev = nc.generators[0];
      if (auto w = least_witness(nc.nonerror, ev, nullptr))
        out.push_back(Quad{ev, ev, ev, static_cast<int>(i), *w});
      continue;
    }
    for (Subset g : nc.generators) {
      if (nd.kind == NodeKind::And) {
        for (Subset g1 : info[nd.a].generators)
          for (Subset g2 : info[nd.b].generators)
            if (auto w = least_witness(nc.nonerror, g | g1 | g2, nullptr))
              out.push_back(Quad{g, g1, g2, static_cast<int>(i), *w});
      } else {
        for (int child : {nd.a, nd.b})
          for (Subset h : info[child].generators)
            if (auto w = least_witness(nc.nonerror, g | h,
                                       &info[child].nonerror))
              out.push_back(Quad{g, h, h, static_cast<int>(i), *w});
      }
    }
  }
  std::sort(out.begin(), out.end(), quad_less);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Quad& a, const Quad& b) {
                          return a.node == b.node && a.g == b.g &&
                                 a.g1 == b.g1 && a.g2 == b.g2;
                        }),
            out.end());
  return out;
}

std::vector<Lit> quad_d(const Quad& s) {
  std::vector<Lit> all = edges_within(s.g1 | s.g2);
  std::vector<Lit> inner = edges_within(s.g);
  std::vector<Lit> out;
  std::set_difference(all.begin(), all.end(), inner.begin(), inner.end(),
                      std::back_inserter(out));
  return out;
}

std::vector<SplitVec> build_splits(const Circuit& c, const ShiftConfig& cfg,
                                   const std::vector<NodeCliques>& info,
                                   int count) {
  validate(c, cfg);
  int l = block_len(cfg);
  Rng rng(cfg.seed);
  std::vector<SplitVec> out;
  std::vector<SplitVec> seen;
  auto valid_for = [&](Subset g, const std::vector<Subset>& pool, Subset y) {
    for (Subset cl : pool)
      if (subset_of(g, cl) && subset_of(cl, g | y)) return true;
    return false;
  };
  for (int attempt = 0;
       attempt < cfg.split_attempts && static_cast<int>(out.size()) < count;
       ++attempt) {
    std::vector<int> perm(cfg.n);
    for (int i = 0; i < cfg.n; ++i) perm[i] = i + 1;
    std::shuffle(perm.begin(), perm.end(), rng);
    SplitVec split(cfg.q, 0);
    for (int j = 0; j < cfg.q; ++j)
      for (int t = 0; t < l; ++t) split[j] |= singleton(perm[j * l + t]);
    if (std::find(seen.begin(), seen.end(), split) != seen.end()) continue;
    seen.push_back(split);
    bool ok = true;
    for (std::size_t i = 0; i < info.size() && ok; ++i)
      for (Subset g : info[i].generators) {
        for (Subset y : split)
          if (!valid_for(g, info[i].nonerror, y)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
    if (ok) out.push_back(split);
  }
  return out;
}

std::vector<std::vector<Lit>> cliqueless_block_family(Subset y, int L, int r,
                                                      long long budget) {
  std::vector<Lit> all = edges_within(y);
  int ne = static_cast<int>(all.size());
  if (L > ne) return {};
  if (ne > kMaxGround)
    throw TooLargeError("cliqueless_block_family: block has too many edges");
  int n_hi = 0;
  for (int v : elements(y)) n_hi = std::max(n_hi, v);
  std::vector<std::vector<Lit>> out;
  Subset pattern = first_comb(L);
  long long seen = 0;
  do {
    if (++seen > budget)
      throw TooLargeError("cliqueless_block_family: enumeration exceeds budget");
    std::vector<Lit> z, rest;
    for (int i = 0; i < ne; ++i)
      (contains(pattern, i + 1) ? z : rest).push_back(all[i]);
    if (clique_free(rest, r, n_hi)) out.push_back(z);
    if (L == 0) break;
  } while (next_comb(pattern, ne));
  return out;
}

BlockedEdgesResult blocked_edges(const Circuit& c, const ShiftConfig& cfg,
                                 const std::vector<NodeCliques>& info,
                                 const std::vector<Quad>& q0,
                                 const SplitVec& split) {
  validate(c, cfg);
  BlockedEdgesResult res;
  res.y_of.assign(q0.size(), -1);
  res.f_of.assign(q0.size(), -1);
  res.z_blocks.resize(split.size());

  // f_j(sigma): retarget sigma to the least witness clique inside g u y_j and
  // the least quadruple at the same node/generator incident to it.
  auto retarget = [&](std::size_t qi, Subset y) -> int {
    const Quad& s = q0[qi];
    const NodeCliques& nc = info[s.node];
    Subset cstar = 0;
    bool found = false;
    for (Subset cl : nc.nonerror)
      if (subset_of(s.g, cl) && subset_of(cl, s.g | y)) {
        cstar = cl;
        found = true;
        break;
      }
    if (!found) return -1;
    const Node& nd = c.nodes[s.node];
    for (std::size_t j = 0; j < q0.size(); ++j) {
      const Quad& t = q0[j];
      if (t.node != s.node || t.g != s.g) continue;
      if (!subset_of(t.g1 | t.g2, cstar)) continue;
      if (nd.kind == NodeKind::Or) {
        // the clique must be generated through the child supplying g1
        bool via_a = std::binary_search(info[nd.a].nonerror.begin(),
                                        info[nd.a].nonerror.end(), cstar,
                                        lex_less) &&
                     std::find(info[nd.a].generators.begin(),
                               info[nd.a].generators.end(),
                               t.g1) != info[nd.a].generators.end();
        bool via_b = std::binary_search(info[nd.b].nonerror.begin(),
                                        info[nd.b].nonerror.end(), cstar,
                                        lex_less) &&
                     std::find(info[nd.b].generators.begin(),
                               info[nd.b].generators.end(),
                               t.g1) != info[nd.b].generators.end();
        if (!via_a && !via_b) continue;
      }
      return static_cast<int>(j);  // q0 is sorted; first hit is least
    }
    return -1;
  };

  std::vector<std::size_t> q;  // unresolved quad indices
  for (std::size_t i = 0; i < q0.size(); ++i) q.push_back(i);

  for (std::size_t j = 0; j < split.size(); ++j) {
    Subset y = split[j];
    std::vector<int> f_j(q.size(), -1);
    std::vector<std::vector<Lit>> d_j(q.size());
    for (std::size_t t = 0; t < q.size(); ++t) {
      f_j[t] = retarget(q[t], y);
      if (f_j[t] >= 0) d_j[t] = quad_d(q0[f_j[t]]);
    }
    auto candidates =
        cliqueless_block_family(y, cfg.z_block_size, cfg.r_block,
                                cfg.candidate_budget);
    if (candidates.empty()) {
      res.fail = FailureStage::no_cliqueless_block;
      res.q_trace.push_back(q.size());
      return res;
    }
    std::size_t best = 0, best_hits = q.size() + 1;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      std::size_t hits = 0;
      for (std::size_t t = 0; t < q.size(); ++t)
        if (f_j[t] < 0 || sorted_intersects(d_j[t], candidates[ci])) ++hits;
      if (hits < best_hits) {
        best_hits = hits;
        best = ci;
      }
    }
    const auto& z = candidates[best];
    res.z_blocks[j] = z;
    std::vector<std::size_t> blocked;
    for (std::size_t t = 0; t < q.size(); ++t) {
      if (f_j[t] >= 0 && !sorted_intersects(d_j[t], z)) {
        res.y_of[q[t]] = static_cast<int>(j);
        res.f_of[q[t]] = f_j[t];
      } else {
        blocked.push_back(q[t]);
      }
    }
    q = std::move(blocked);
    res.q_trace.push_back(q.size());
  }
  if (!q.empty()) {
    res.fail = FailureStage::residual_q;
    return res;
  }
  for (const auto& zb : res.z_blocks)
    res.z.insert(res.z.end(), zb.begin(), zb.end());
  std::sort(res.z.begin(), res.z.end());
  res.ok = true;
  return res;
}

LocalShiftResult local_shift(const Circuit& c, const ShiftConfig& cfg,
                             const std::vector<NodeCliques>& info,
                             const std::vector<Quad>& q0,
                             const BlockedEdgesResult& blocked) {
  validate(c, cfg);
  LocalShiftResult res;
  res.t_of.assign(q0.size(), Term{});
  // least quad at `node` with generator g, if any
  auto find_child_quad = [&](int node, Subset g) -> int {
    for (std::size_t j = 0; j < q0.size(); ++j)
      if (q0[j].node == node && q0[j].g == g) return static_cast<int>(j);
    return -1;
  };
  for (std::size_t qi = 0; qi < q0.size(); ++qi) {  // node-ascending order
    const Quad& s = q0[qi];
    const Node& nd = c.nodes[s.node];
    if (nd.kind == NodeKind::Leaf) {
      res.t_of[qi] = Term{nd.lit};
      continue;
    }
    if (blocked.f_of[qi] < 0) {
      res.violating_quad = static_cast<int>(qi);
      return res;
    }
    const Quad& sw = q0[blocked.f_of[qi]];
    if (nd.kind == NodeKind::And) {
      int c1 = find_child_quad(nd.a, sw.g1);
      int c2 = find_child_quad(nd.b, sw.g2);
      if (c1 < 0 || c2 < 0) {
        res.violating_quad = static_cast<int>(qi);
        return res;
      }
      res.t_of[qi] = term_union(res.t_of[c1], res.t_of[c2]);
    } else {
      int c1 = -1;
      for (int child : {nd.a, nd.b}) {
        if (std::find(info[child].generators.begin(),
                      info[child].generators.end(),
                      sw.g1) == info[child].generators.end())
          continue;
        if (!std::binary_search(info[child].nonerror.begin(),
                                info[child].nonerror.end(), sw.witness,
                                lex_less))
          continue;
        c1 = find_child_quad(child, sw.g1);
        if (c1 >= 0) break;
      }
      if (c1 < 0) {
        res.violating_quad = static_cast<int>(qi);
        return res;
      }
      res.t_of[qi] = res.t_of[c1];
    }
  }
  res.ok = true;
  return res;
}

bool audit_independence(const std::vector<Quad>& q0,
                        const BlockedEdgesResult& blocked,
                        const SplitVec& split) {
  for (std::size_t qi = 0; qi < q0.size(); ++qi) {
    if (blocked.f_of[qi] < 0 || blocked.y_of[qi] < 0) return false;
    Subset y = split[blocked.y_of[qi]];
    for (Lit e : quad_d(q0[blocked.f_of[qi]]))
      if (!contains(y, lit_u(e)) && !contains(y, lit_v(e))) return false;
  }
  return true;
}

bool audit_convergence(std::size_t q0_size,
                       const std::vector<std::size_t>& q_trace) {
  std::size_t prev = q0_size;
  for (std::size_t v : q_trace) {
    if (2 * v > prev) return false;
    prev = v;
  }
  return true;
}

ShiftOutcome run_shift(const Circuit& c, const ShiftConfig& cfg) {
  validate(c, cfg);
  ShiftOutcome out;
  auto info = clique_generators(c, cfg);
  auto q0 = build_Q0(c, cfg, info);
  out.q0_size = q0.size();
  auto splits = build_splits(c, cfg, info, cfg.split_attempts);
  if (splits.empty()) {
    out.failure_stage = FailureStage::no_valid_split;
    return out;
  }
  DnfBuilder builder(c, cfg.cap);
  for (const SplitVec& split : splits) {
    ++out.splits_tried;
    auto blocked = blocked_edges(c, cfg, info, q0, split);
    out.q_trace = blocked.q_trace;
    out.split = split;
    if (!blocked.ok) {
      out.failure_stage = blocked.fail;
      continue;
    }
    auto ls = local_shift(c, cfg, info, q0, blocked);
    if (!ls.ok) {
      out.failure_stage = FailureStage::chain_property_violation;
      continue;
    }
    out.z = blocked.z;
    out.failure_stage = FailureStage::none;

    // term from the least root quadruple with empty generator
    std::optional<Term> term;
    for (std::size_t qi = 0; qi < q0.size(); ++qi)
      if (q0[qi].node == c.root && q0[qi].g == 0) {
        term = ls.t_of[qi];
        break;
      }

    // audits
    ShiftAudits a;
    a.disjointness = true;
    for (std::size_t qi = 0; qi < q0.size() && a.disjointness; ++qi) {
      std::vector<Lit> outer;
      std::vector<Lit> inner = edges_within(q0[qi].g);
      for (Lit l : ls.t_of[qi])
        if (!lit_neg(l) &&
            !std::binary_search(inner.begin(), inner.end(), l))
          outer.push_back(l);
      if (sorted_intersects(outer, blocked.z)) a.disjointness = false;
      // every built term must belong to the node's disjunction
      const auto& terms = builder.at(q0[qi].node);
      if (!std::binary_search(terms.begin(), terms.end(), ls.t_of[qi]))
        a.disjointness = false;
    }
    a.independence = audit_independence(q0, blocked, split);
    a.convergence = audit_convergence(q0.size(), blocked.q_trace);
    bool conclusive = cfg.k > (cfg.r_block - 1) * cfg.q;
    if (term) {
      a.counterexample = conclusive &&
                         verify_counterexample(c, *term, cfg.k, cfg.n, cfg.cap);
      out.term = term;
      out.status = ShiftStatus::success;
    } else {
      a.counterexample = true;  // vacuous: nothing to verify
      out.status = ShiftStatus::vacuous;
    }
    out.audits = a;
    return out;
  }
  out.status = ShiftStatus::failure;
  return out;
}

const char* to_string(ShiftStatus s) {
  switch (s) {
    case ShiftStatus::success: return "success";
    case ShiftStatus::vacuous: return "vacuous";
    default: return "failure";
  }
}

const char* to_string(FailureStage s) {
  switch (s) {
    case FailureStage::none: return "none";
    case FailureStage::no_valid_split: return "NoValidSplit";
    case FailureStage::no_cliqueless_block: return "NoCliquelessBlock";
    case FailureStage::residual_q: return "ResidualQ";
    default: return "ChainPropertyViolation";
  }
}

std::string shift_outcome_to_json_text(const ShiftOutcome& o,
                                       const ShiftConfig& cfg) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(shift_config_to_json_text(cfg));
  j["status"] = to_string(o.status);
  if (o.status == ShiftStatus::failure)
    j["failure_stage"] = to_string(o.failure_stage);
  auto edge_list = [](const std::vector<Lit>& es) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (Lit e : es) arr.push_back({lit_u(e), lit_v(e)});
    return arr;
  };
  if (o.term) j["term"] = edge_list(*o.term);
  j["z"] = edge_list(o.z);
  j["Q_trace"] = o.q_trace;
  j["Q0_size"] = o.q0_size;
  j["splits_tried"] = o.splits_tried;
  nlohmann::ordered_json sp = nlohmann::ordered_json::array();
  for (Subset y : o.split) sp.push_back(elements(y));
  j["split"] = sp;
  j["audits"] = {{"disjointness", o.audits.disjointness},
                 {"independence", o.audits.independence},
                 {"convergence", o.audits.convergence},
                 {"counterexample", o.audits.counterexample}};
  return j.dump();
}

}  // namespace hf
