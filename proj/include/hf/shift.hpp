#ifndef HF_SHIFT_HPP
#define HF_SHIFT_HPP

#include <optional>
#include <string>
#include <vector>

#include "hf/circuit.hpp"
#include "hf/family.hpp"

namespace hf {

struct ShiftConfig {
  int n = 0;
  int k = 0;
  int q = 1;               // number of blocks; q | n
  int l = 0;               // block size; 0 means n/q
  int z_block_size = 0;    // edges removed per block
  int r_block = 0;         // clique size each block removal must destroy
  double lambda_c = 0;     // error-clique threshold is C(n,k)*e^{-lambda_c}
  long long candidate_budget = 100000;
  int split_attempts = 64;
  std::uint64_t seed = 0;
  long long cap = kDefaultEnumCap;
};

ShiftConfig shift_config_from_json_text(const std::string& text);
std::string shift_config_to_json_text(const ShiftConfig& cfg);

// Per-node bookkeeping for the generator sweep.
struct NodeCliques {
  std::vector<Subset> generated;   // k-cliques generated at the node
  std::vector<Subset> error;       // inherited + uncovered leftovers
  std::vector<Subset> nonerror;    // generated minus error
  std::vector<Subset> generators;  // discovery order; leaves: the edge's endpoints
};

// Bottom-up: each node inherits its children's error cliques, then repeatedly
// draws a generator of the remaining non-error generated cliques and removes
// everything containing it, until fewer than C(n,k)e^{-lambda_c} remain; the
// leftovers become error cliques.  Leaves keep the edge endpoints as their one
// generator (it covers every clique generated there).
std::vector<NodeCliques> clique_generators(const Circuit& c,
                                           const ShiftConfig& cfg);

// Quadruple (g, g1, g2, node): g a generator at the node, g1/g2 generators at
// the children (leaf: all three are the edge endpoints; OR: g1 = g2 from one
// child), witnessed by a non-error clique containing all of them.
struct Quad {
  Subset g = 0, g1 = 0, g2 = 0;
  int node = -1;
  Subset witness = 0;  // lex-least such clique

  friend bool operator==(const Quad&, const Quad&) = default;
};

std::vector<Quad> build_Q0(const Circuit& c, const ShiftConfig& cfg,
                           const std::vector<NodeCliques>& info);

// Edges C(g1 u g2, 2) \ C(g, 2), as positive literal codes.
std::vector<Lit> quad_d(const Quad& s);

using SplitVec = std::vector<Subset>;  // q blocks partitioning [n]

// Random block partitions of [n], filtered so that every block is valid for
// every generator at every node (witness clique inside g u y_j exists).
std::vector<SplitVec> build_splits(const Circuit& c, const ShiftConfig& cfg,
                                   const std::vector<NodeCliques>& info,
                                   int count);

// Candidate z of z_block_size edges inside C(y,2) whose removal leaves no
// r_block-clique among the block's vertices.  Deterministic enumeration order.
std::vector<std::vector<Lit>> cliqueless_block_family(Subset y, int L, int r,
                                                      long long budget);

enum class ShiftStatus { success, vacuous, failure };
enum class FailureStage {
  none,
  no_valid_split,
  no_cliqueless_block,
  residual_q,
  chain_property_violation,
};

const char* to_string(ShiftStatus s);
const char* to_string(FailureStage s);

struct BlockedEdgesResult {
  bool ok = false;
  FailureStage fail = FailureStage::none;
  std::vector<std::vector<Lit>> z_blocks;  // chosen z per block
  std::vector<Lit> z;                      // their union
  std::vector<int> y_of;   // per quad: assigned block (index into the split)
  std::vector<int> f_of;   // per quad: index into Q0 of the switch quadruple
  std::vector<std::size_t> q_trace;  // |Q| left after each block
};

// Loop over blocks: tentatively assign the block to every unresolved quad,
// pick the candidate z hitting the fewest switch-difference sets, defer the
// hit quads to the next block.  Succeeds when nothing is left after block q.
BlockedEdgesResult blocked_edges(const Circuit& c, const ShiftConfig& cfg,
                                 const std::vector<NodeCliques>& info,
                                 const std::vector<Quad>& q0,
                                 const SplitVec& split);

struct LocalShiftResult {
  bool ok = false;
  int violating_quad = -1;  // chain property failure, if any
  std::vector<Term> t_of;   // per quad
};

// Reverse-topological term construction: leaves yield their edge, AND nodes
// join the terms of the switch quadruple's child quadruples, OR nodes copy one
// child's term.
LocalShiftResult local_shift(const Circuit& c, const ShiftConfig& cfg,
                             const std::vector<NodeCliques>& info,
                             const std::vector<Quad>& q0,
                             const BlockedEdgesResult& blocked);

struct ShiftAudits {
  bool disjointness = false;    // t(sigma) \ C(g,2) avoids z, every quad
  bool independence = false;    // every switch-difference edge touches y(sigma)
  bool convergence = false;     // |Q| at least halves per block (informational)
  bool counterexample = false;  // produced term verifies (when k > (r-1)q)
};

bool audit_independence(const std::vector<Quad>& q0,
                        const BlockedEdgesResult& blocked, const SplitVec& split);
bool audit_convergence(std::size_t q0_size,
                       const std::vector<std::size_t>& q_trace);

struct ShiftOutcome {
  ShiftStatus status = ShiftStatus::failure;
  FailureStage failure_stage = FailureStage::none;
  std::optional<Term> term;  // from a root quadruple with g = empty
  std::vector<Lit> z;
  std::vector<std::size_t> q_trace;
  SplitVec split;
  ShiftAudits audits;
  std::size_t q0_size = 0;
  int splits_tried = 0;
};

ShiftOutcome run_shift(const Circuit& c, const ShiftConfig& cfg);

std::string shift_outcome_to_json_text(const ShiftOutcome& o,
                                       const ShiftConfig& cfg);

}  // namespace hf

#endif
