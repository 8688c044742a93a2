// hamming-forge: experiment driver for the set-family / circuit toolkit.
//
// Subcommands: identities | binom-calibrate | generator | sunflower | dnf |
// shift.  Every report embeds the tool version, the effective config and the
// seed; identical inputs produce byte-identical reports, also with --jobs > 1.
//
// Exit codes: 0 = ran to completion (pipeline failure is data, not an error),
// 1 = an identity/bound check failed, 2 = malformed input or usage error.

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hf/binom.hpp"
#include "hf/circuit.hpp"
#include "hf/family.hpp"
#include "hf/generator.hpp"
#include "hf/shift.hpp"
#include "hf/sunflower.hpp"
#include "hf/util.hpp"

namespace {

constexpr const char* kToolVersion = "hamming-forge 1.0.0";

using nlohmann::ordered_json;

struct Globals {
  bool json = false;
  std::uint64_t seed = 0;
  int jobs = 1;
  long long cap = hf::kDefaultEnumCap;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hf::PreconditionError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json base_report(const Globals& g, const std::string& command) {
  ordered_json j;
  j["tool"] = kToolVersion;
  j["command"] = command;
  j["seed"] = g.seed;
  j["cap"] = g.cap;
  return j;
}

// JSON has no infinity; finite doubles pass through, infinities become strings.
ordered_json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json validity_json(const hf::ValidityReport& v) {
  ordered_json j;
  j["g"] = hf::elements(v.g);
  j["l"] = v.l;
  j["lambda_target"] = v.lambda_target;
  j["valid_count"] = v.valid_count;
  j["total_count"] = v.total_count.get_str();
  j["sample_size"] = v.sample_size;
  j["fraction"] = v.fraction;
  j["ci_low"] = v.ci_low;
  j["ci_high"] = v.ci_high;
  j["complement_sparsity"] = num(v.complement_sparsity);
  j["mode"] = v.mode == hf::ValidityMode::exact ? "exact" : "sampled";
  j["rng"] = hf::kRngName;
  j["rng_seed"] = v.seed;
  j["success"] = v.success;
  return j;
}

ordered_json generator_json(const hf::FindGeneratorResult& r) {
  ordered_json j;
  j["g"] = hf::elements(r.gen.g);
  j["l0"] = r.gen.l0;
  j["r"] = r.gen.r;
  j["kappa_u"] = r.gen.kappa_u;
  j["kappa_hat"] = num(r.gen.kappa_hat);
  j["size_bound"] = num(r.gen.size_bound);
  j["maximal"] = r.gen.maximal;
  j["degenerate"] = r.gen.degenerate;
  j["validity"] = validity_json(r.validity);
  j["success"] = r.success;
  return j;
}

ordered_json lit_json(hf::Lit l) {
  ordered_json j = ordered_json::array();
  j.push_back(hf::lit_u(l));
  j.push_back(hf::lit_v(l));
  if (hf::lit_neg(l)) j.push_back("-");
  return j;
}

void emit(const Globals& g, const ordered_json& report,
          const std::string& human) {
  if (g.json)
    std::cout << report.dump() << "\n";
  else
    std::cout << human << "\n";
}

// ---------------------------------------------------------------- identities

int cmd_identities(const Globals& g, long long max_pqr, long long max_pascal,
                   bool inject_fault) {
  long long checks = 0;
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  };
  for (long long p = 0; p <= max_pqr; ++p)
    for (long long q = 0; q <= p; ++q)
      for (long long r = 0; r <= q; ++r)
        expect(hf::check_identity_basic1(p, q, r),
               "subset-chain identity at (" + std::to_string(p) + "," +
                   std::to_string(q) + "," + std::to_string(r) + ")");
  for (long long p = 0; p <= max_pqr; ++p)
    for (long long q = 0; q <= p; ++q)
      for (long long r = 0; r <= p; ++r)
        expect(hf::check_identity_vandermonde(p, q, r),
               "vandermonde at (" + std::to_string(p) + "," +
                   std::to_string(q) + "," + std::to_string(r) + ")");
  for (long long p = 1; p <= max_pascal; ++p)
    for (long long q = 0; q <= p; ++q)
      expect(hf::exact_binom(p, q) ==
                 hf::exact_binom(p - 1, q - 1) + hf::exact_binom(p - 1, q),
             "pascal at (" + std::to_string(p) + "," + std::to_string(q) + ")");
  if (inject_fault) expect(false, "injected fault (self-test)");

  ordered_json j = base_report(g, "identities");
  j["config"] = {{"max_pqr", max_pqr}, {"max_pascal", max_pascal}};
  j["checks_run"] = checks;
  j["failures"] = failures;
  j["ok"] = failures.empty();
  emit(g, j,
       "identities: " + std::to_string(checks) + " checks, " +
           std::to_string(failures.size()) + " failures");
  return failures.empty() ? 0 : 1;
}

// ----------------------------------------------------------- binom-calibrate

int cmd_calibrate(const Globals& g, long long max_p, long long max_l,
                  long long max_pq, const std::string& timestamp,
                  const std::string& out_path) {
  hf::CalibConstants c = hf::calibrate(max_p, max_l, max_pq);
  ordered_json j = base_report(g, "binom-calibrate");
  j["config"] = {{"max_p", max_p}, {"max_l", max_l}, {"max_pq", max_pq}};
  j["timestamp"] = timestamp;
  j["constants"] = {{"lemma22_K", c.lemma22_K},
                    {"lemma25_K", c.lemma25_K},
                    {"proportional_K", c.proportional_K}};
  std::string text = j.dump();
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw hf::PreconditionError("cannot write file: " + out_path);
    out << text << "\n";
  }
  std::ostringstream human;
  human.precision(17);
  human << "calibrated: lemma22_K=" << c.lemma22_K
        << " lemma25_K=" << c.lemma25_K
        << " proportional_K=" << c.proportional_K;
  if (g.json || out_path.empty()) std::cout << text << "\n";
  if (!g.json) std::cout << human.str() << "\n";
  return 0;
}

// ------------------------------------------------------------------ generator

int cmd_generator(const Globals& g, const std::string& family_path, int l,
                  double lambda, const std::string& mode, long long budget) {
  hf::SetFamily u = hf::family_from_json_text(read_file(family_path));
  hf::FindGeneratorConfig cfg;
  cfg.mode = mode == "sampled" ? hf::ValidityMode::sampled
                               : hf::ValidityMode::exact;
  cfg.budget = budget;
  cfg.seed = g.seed;
  cfg.cap = g.cap;
  hf::FindGeneratorResult r = hf::find_generator(u, l, lambda, cfg);
  ordered_json j = base_report(g, "generator");
  j["config"] = {{"family", family_path}, {"n", u.n},     {"m", u.m},
                 {"size", u.size()},      {"l", l},       {"lambda", lambda},
                 {"mode", mode},          {"budget", budget}};
  j["result"] = generator_json(r);
  std::ostringstream human;
  human << "generator: g={";
  bool first = true;
  for (int e : hf::elements(r.gen.g)) {
    if (!first) human << ",";
    human << e;
    first = false;
  }
  human << "} valid " << r.validity.valid_count << "/"
        << r.validity.total_count.get_str()
        << (r.success ? " success" : " failure");
  emit(g, j, human.str());
  return 0;
}

// ------------------------------------------------------------------ sunflower

int cmd_sunflower(const Globals& g, const std::string& family_path, int delta,
                  const std::string& method, int l, double lambda,
                  long long budget) {
  hf::SetFamily u = hf::family_from_json_text(read_file(family_path));
  ordered_json j = base_report(g, "sunflower");
  j["config"] = {{"family", family_path}, {"n", u.n},
                 {"m", u.m},              {"size", u.size()},
                 {"delta", delta},        {"method", method},
                 {"l", l},                {"lambda", lambda},
                 {"budget", budget}};
  std::optional<hf::Sunflower> found;
  if (method == "er") {
    found = hf::find_sunflower_er(u, delta);
  } else if (method == "small-core") {
    hf::SmallCoreResult r =
        hf::find_sunflower_small_core(u, delta, l, lambda, budget, g.cap);
    found = r.sunflower;
    j["generator"] = generator_json(r.gen);
    j["nodes_visited"] = r.nodes_visited;
    j["budget_exhausted"] = r.budget_exhausted;
  } else {
    throw hf::PreconditionError("unknown sunflower method: " + method);
  }
  if (found && !hf::verify_sunflower(u, *found))
    throw std::runtime_error("internal error: sunflower failed verification");
  j["found"] = found.has_value();
  if (found)
    j["sunflower"] =
        ordered_json::parse(hf::sunflower_to_json_text(*found));
  emit(g, j,
       found ? "sunflower: found, core size " +
                   std::to_string(hf::popcount(found->core)) + ", " +
                   std::to_string(found->petals.size()) + " petals"
             : "sunflower: not found");
  return 0;
}

// ------------------------------------------------------------------------ dnf

int cmd_dnf(const Globals& g, const std::string& circuit_path, int node_id) {
  hf::Circuit c = hf::parse_circuit(read_file(circuit_path));
  int node = c.root;
  if (node_id >= 0) {
    node = -1;
    for (std::size_t i = 0; i < c.ids.size(); ++i)
      if (c.ids[i] == node_id) node = static_cast<int>(i);
    if (node < 0)
      throw hf::PreconditionError("dnf: no node with id " +
                                  std::to_string(node_id));
  }
  hf::DnfBuilder b(c, g.cap);
  const std::vector<hf::Term>& terms = b.at(node);
  ordered_json j = base_report(g, "dnf");
  j["config"] = {{"circuit", circuit_path},
                 {"node", c.ids[node]},
                 {"nodes", c.nodes.size()},
                 {"max_vertex", c.max_vertex},
                 {"monotone", c.monotone()}};
  j["term_count"] = terms.size();
  ordered_json arr = ordered_json::array();
  for (const hf::Term& t : terms) {
    ordered_json tj = ordered_json::array();
    for (hf::Lit lit : t) tj.push_back(lit_json(lit));
    arr.push_back(tj);
  }
  j["terms"] = arr;
  emit(g, j, "dnf: " + std::to_string(terms.size()) + " terms at node " +
                 std::to_string(c.ids[node]));
  return 0;
}

// ---------------------------------------------------------------------- shift

int cmd_shift(const Globals& g, const std::string& circuit_path,
              const std::string& config_path, std::vector<std::uint64_t> seeds) {
  hf::Circuit c = hf::parse_circuit(read_file(circuit_path));
  hf::ShiftConfig base = hf::shift_config_from_json_text(read_file(config_path));
  base.cap = g.cap;
  if (seeds.empty()) seeds.push_back(g.seed);

  std::vector<ordered_json> runs(seeds.size());
  std::vector<hf::ShiftStatus> statuses(seeds.size());
  auto work = [&](std::size_t i) {
    hf::ShiftConfig cfg = base;
    cfg.seed = seeds[i];
    hf::ShiftOutcome out = hf::run_shift(c, cfg);
    runs[i] = ordered_json::parse(hf::shift_outcome_to_json_text(out, cfg));
    statuses[i] = out.status;
  };
  int jobs = std::max(1, g.jobs);
  if (jobs == 1 || seeds.size() == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }

  int successes = 0, vacuous = 0, fails = 0;
  for (hf::ShiftStatus s : statuses) {
    if (s == hf::ShiftStatus::success) ++successes;
    else if (s == hf::ShiftStatus::vacuous) ++vacuous;
    else ++fails;
  }
  ordered_json j = base_report(g, "shift");
  j["config"] = {{"circuit", circuit_path}, {"config_file", config_path},
                 {"seeds", seeds},          {"jobs", g.jobs}};
  j["runs"] = runs;  // seed order, independent of scheduling
  j["aggregate"] = {{"successes", successes},
                    {"vacuous", vacuous},
                    {"failures", fails}};
  std::ostringstream human;
  human << "shift: " << seeds.size() << " runs, " << successes << " success, "
        << vacuous << " vacuous, " << fails << " failure";
  emit(g, j, human.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hamming-forge: set-family sparsity, sunflower and monotone "
               "circuit shift experiments"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  Globals g;
  app.add_flag("--json", g.json, "emit the full JSON report");
  app.add_option("--seed", g.seed, "PRNG seed (mt19937_64)");
  app.add_option("--jobs", g.jobs, "worker threads for multi-seed runs");
  app.add_option("--cap", g.cap, "enumeration cap")
      ->envname("HAMMING_FORGE_CAP");

  auto* id = app.add_subcommand("identities", "exhaustive identity suites");
  long long max_pqr = 20, max_pascal = 64;
  bool inject_fault = false;
  id->add_option("--max-pqr", max_pqr, "exhaustive range for both identities");
  id->add_option("--max-pascal", max_pascal, "range for Pascal's rule");
  id->add_flag("--inject-fault", inject_fault, "force one failure (self-test)");

  auto* cal = app.add_subcommand("binom-calibrate",
                                 "recompute the approximation constants");
  long long max_p = 2000, max_l = 400, max_pq = 200;
  std::string timestamp = "reproducible", out_path;
  cal->add_option("--max-p", max_p, "sweep limit for the entropy approximation");
  cal->add_option("--max-l", max_l, "sweep limit for the two-binomial bound");
  cal->add_option("--max-pq", max_pq, "sweep limit for proportional splitting");
  cal->add_option("--timestamp", timestamp,
                  "timestamp string embedded in the report");
  cal->add_option("-o,--out", out_path, "also write the report to a file");

  auto* gen = app.add_subcommand("generator", "find a generator of a family");
  std::string family_path, mode = "exact";
  int gen_l = 0;
  double lambda = 1.0;
  long long budget = 100000;
  gen->add_option("--family", family_path, "family JSON file")->required();
  gen->add_option("--l", gen_l, "extension length")->required();
  gen->add_option("--lambda", lambda, "validity sparsity target")->required();
  gen->add_option("--mode", mode, "exact|sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  gen->add_option("--budget", budget, "draws in sampled mode");

  auto* sun = app.add_subcommand("sunflower", "find a sunflower in a family");
  std::string sun_family, method = "er";
  int delta = 0, sun_l = 0;
  double sun_lambda = 1.0;
  long long sun_budget = 100000;
  sun->add_option("--family", sun_family, "family JSON file")->required();
  sun->add_option("--delta", delta, "number of petals")
      ->required()
      ->check(CLI::Range(2, 64));
  sun->add_option("--method", method, "er|small-core")
      ->check(CLI::IsMember({"er", "small-core"}));
  sun->add_option("--l", sun_l, "extension length (small-core)");
  sun->add_option("--lambda", sun_lambda, "validity target (small-core)");
  sun->add_option("--budget", sun_budget, "backtracking node budget");

  auto* dn = app.add_subcommand("dnf", "expand a circuit node's disjunction");
  std::string dnf_circuit;
  int node_id = -1;
  dn->add_option("--circuit", dnf_circuit, "circuit file")->required();
  dn->add_option("--node", node_id, "node id (default: root)");

  auto* sh = app.add_subcommand("shift", "run the full shift pipeline");
  std::string sh_circuit, sh_config;
  std::vector<std::uint64_t> seeds;
  sh->add_option("--circuit", sh_circuit, "circuit file")->required();
  sh->add_option("--config", sh_config, "pipeline config JSON")->required();
  sh->add_option("--seeds", seeds, "seeds to run (default: --seed)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are input errors
  }

  try {
    if (*id) return cmd_identities(g, max_pqr, max_pascal, inject_fault);
    if (*cal)
      return cmd_calibrate(g, max_p, max_l, max_pq, timestamp, out_path);
    if (*gen) return cmd_generator(g, family_path, gen_l, lambda, mode, budget);
    if (*sun)
      return cmd_sunflower(g, sun_family, delta, method, sun_l, sun_lambda,
                           sun_budget);
    if (*dn) return cmd_dnf(g, dnf_circuit, node_id);
    if (*sh) return cmd_shift(g, sh_circuit, sh_config, seeds);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hf::PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
