// Command-line laboratory for the single-bit uncloneable encryption scheme:
// Clifford-group tooling, one-shot entropies via SDP, monogamy-of-
// entanglement games, decoupling experiments and the security-bound tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

#include "uclab/bound.hpp"
#include "uclab/decoupling.hpp"
#include "uclab/entropy.hpp"
#include "uclab/json_io.hpp"
#include "uclab/parallel.hpp"
#include "uclab/qecm.hpp"
#include "uclab/report.hpp"

using namespace uclab;

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out;
  int threads = 1;
  bool quiet = false;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& c, bool out_required) {
  c.seed_opt = sub->add_option("--seed", c.seed, "RNG seed (64-bit)")
                   ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  auto* out = sub->add_option("--out", c.out, "output path");
  if (out_required) out->required();
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--quiet", c.quiet, "suppress progress chatter");
}

void warn_repeated_seed(const CommonOpts& c) {
  if (c.seed_opt && c.seed_opt->count() > 1)
    std::cerr << "warning: --seed given " << c.seed_opt->count()
              << " times, last occurrence wins\n";
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

// Timestamps and config echo go to stderr only; output files must be
// byte-identical across reruns with the same seed.
void info(const CommonOpts& c, const std::string& line) {
  if (!c.quiet) std::cerr << line << "\n";
}

int finish(const CommonOpts& c, RunReport& report) {
  info(c, "finished " + timestamp());
  std::cout << emit_summary(report) << "\n";
  return report.rows_passed == report.rows_total ? 0 : 1;
}

std::vector<Index> parse_dims(const std::string& spec) {
  std::vector<Index> dims;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) dims.push_back(std::stoll(tok));
  if (dims.empty()) throw CLI::ValidationError("--dims", "empty dimension list");
  for (Index d : dims)
    if (d < 1) throw CLI::ValidationError("--dims", "dimensions must be positive");
  return dims;
}

// ---------------------------------------------------------------- clifford

int run_clifford(const CommonOpts& c, std::uint32_t n, bool enumerate, int samples) {
  RunReport report;
  nlohmann::json j;
  j["schemaVersion"] = kSchemaVersion;
  j["n"] = n;
  auto record = [n](const CliffordElement& e) {
    nlohmann::json rec;
    std::vector<std::string> cols;
    for (std::uint64_t col : e.symplectic_columns()) {
      std::string bits(2 * n, '0');
      for (std::uint32_t r = 0; r < 2 * n; ++r)
        if ((col >> r) & 1ULL) bits[r] = '1';
      cols.push_back(bits);
    }
    rec["symplectic"] = cols;
    std::string phases;
    for (int b : e.phase_bits()) phases.push_back(b ? '1' : '0');
    rec["phases"] = phases;
    return rec;
  };

  nlohmann::json elems = nlohmann::json::array();
  if (enumerate) {
    for (const auto& e : enumerate_clifford_elements(n)) {
      report.count(e.symplectic_ok());
      elems.push_back(record(e));
    }
  } else {
    Rng rng(c.seed);
    for (int i = 0; i < samples; ++i) {
      const CliffordElement e = sample_clifford(n, rng);
      report.count(e.symplectic_ok());
      elems.push_back(record(e));
    }
  }
  j["count"] = elems.size();
  j["elements"] = std::move(elems);
  write_text_atomic(c.out, j.dump() + "\n");
  return finish(c, report);
}

// ----------------------------------------------------------------- entropy

int run_entropy(const CommonOpts& c, const std::string& in, const std::string& task,
                const std::string& split, double tol) {
  DensityOperator rho = load_state(in);
  if (!split.empty()) {
    const std::vector<Index> dims = parse_dims(split);
    if (product(dims) != rho.dim())
      throw CLI::ValidationError("--split", "dimensions do not match the state");
    rho.dims = dims;
  }
  rho.validate(1e-10, 1e-8, 1e-8);

  nlohmann::json j;
  j["schemaVersion"] = kSchemaVersion;
  j["task"] = task;
  double value = 0.0;
  if (task == "vn") {
    value = von_neumann(rho);
  } else if (task == "cond-vn") {
    value = conditional_vn(rho);
  } else if (task == "mutual") {
    value = mutual_information(rho);
  } else if (task == "min") {
    const auto r = min_entropy(rho, tol);
    value = r.bits;
    j["gap"] = r.sdp.gap;
    j["converged"] = r.sdp.converged;
  } else if (task == "max") {
    const auto r = max_entropy_result(rho, tol);
    value = r.bits;
    j["gap"] = r.sdp.gap;
    j["converged"] = r.sdp.converged;
  } else {
    throw CLI::ValidationError("--task", "unknown task " + task);
  }
  j["value"] = value;
  std::cout << task << " = " << format_double(value) << "\n";
  if (!c.out.empty()) write_text_atomic(c.out, j.dump() + "\n");
  RunReport report;
  report.count(j.contains("converged") ? j["converged"].get<bool>() : true);
  return finish(c, report);
}

// ------------------------------------------------------------ verify-lemmas

int run_verify_lemmas(const CommonOpts& c, int trials, const std::string& dims_spec) {
  const std::vector<Index> dims = parse_dims(dims_spec);
  if (dims.size() != 3) throw CLI::ValidationError("--dims", "need three dimensions");

  RunReport report;
  CsvBuilder csv({"lemma", "trial", "gap", "pass"});
  struct Row {
    std::string lemma;
    int trial;
    double gap;
    bool pass;
  };

  auto run_suite = [&](const std::string& name, double tol,
                       const std::function<double(Rng&)>& gap_fn) {
    std::vector<Row> rows(trials);
    parallel_for(trials, c.threads, [&](int t) {
      Rng rng = Rng::stream(c.seed, std::hash<std::string>{}(name) + t);
      const double gap = gap_fn(rng);
      rows[t] = {name, t, gap, gap >= -tol};
    });
    for (const Row& r : rows) {
      report.count(r.pass);
      csv.add_row({r.lemma, std::to_string(r.trial), format_double(r.gap),
                   r.pass ? "1" : "0"});
    }
  };

  const Index da = dims[0], db = dims[1], dc = dims[2];
  run_suite("ssa-uncertainty", 1e-9, [&](Rng& rng) {
    return ssa_uncertainty_gap(random_density({da, db, dc}, 1 + rng.below(da * db * dc), rng));
  });
  run_suite("ssa-min-entropy", 1e-6, [&](Rng& rng) {
    return ssa_min_entropy_gap(random_density({da, db, dc}, 1 + rng.below(da * db * dc), rng));
  });
  run_suite("min-max", 1e-6, [&](Rng& rng) {
    return min_max_gap(random_density({da, db}, 1 + rng.below(da * db), rng));
  });
  run_suite("max-concavity", 1e-6, [&](Rng& rng) {
    const double w = 0.1 + 0.8 * rng.uniform();
    CqState cq{{w, 1.0 - w},
               {random_density({da, db}, 1 + rng.below(da * db), rng),
                random_density({da, db}, 1 + rng.below(da * db), rng)}};
    return max_concavity_gap(cq);
  });

  write_text_atomic(c.out, csv.str());
  return finish(c, report);
}

// -------------------------------------------------------------- moe-seesaw

int run_seesaw(const CommonOpts& c, const std::string& game_name, std::uint32_t n,
               Index dim_b, Index dim_c, int restarts, int iters, double tol) {
  const GameKind kind = game_name == "bb84" ? GameKind::Bb84 : GameKind::CliffordScheme;
  const MoEGame game = build_game(kind, n);
  const SeesawResult res =
      seesaw_optimize(game, dim_b, dim_c, restarts, iters, tol, c.seed, c.threads);
  res.strategy.validate(game);

  std::string state_path = c.out;
  const auto dot = state_path.rfind(".json");
  if (dot != std::string::npos) state_path.resize(dot);
  state_path += ".state.json";
  save_state(state_path, res.strategy.state);

  nlohmann::json j;
  j["schemaVersion"] = kSchemaVersion;
  j["config"] = {{"game", game_name}, {"n", n},        {"dimB", dim_b},
                 {"dimC", dim_c},     {"restarts", restarts}, {"iters", iters},
                 {"tol", tol},        {"seed", c.seed}};
  j["value"] = res.value;
  j["converged"] = res.converged;
  j["strategyStateFile"] = state_path;
  nlohmann::json traces = nlohmann::json::array();
  for (const auto& t : res.traces) traces.push_back(t);
  j["perRestart"] = std::move(traces);
  write_text_atomic(c.out, j.dump() + "\n");

  RunReport report;
  report.count(res.value >= 0.0 && res.value <= 1.0 + 1e-9);
  for (const auto& t : res.traces)
    for (size_t i = 1; i < t.size(); ++i) report.count(t[i] >= t[i - 1] - 1e-12);
  std::cout << "value = " << format_double(res.value) << "\n";
  return finish(c, report);
}

// -------------------------------------------------------------- decoupling

int run_decoupling(const CommonOpts& c, std::uint32_t n, std::uint32_t m,
                   const std::string& mode, int samples, int trials) {
  RunReport report;
  CsvBuilder csv({"trial", "lhs", "stderr", "rhs", "margin", "pass"});
  const bool exact = mode == "exact";
  UnitaryEnsemble ens;
  if (exact) ens = enumerate_clifford(n);

  std::vector<DecouplingReport> reports(trials);
  parallel_for(trials, c.threads, [&](int t) {
    Rng rng = Rng::stream(c.seed, t);
    const Index da = Index(1) << n;
    const DensityOperator rho = random_density({da, 2}, 1 + rng.below(2 * da), rng);
    reports[t] = exact ? decoupling_verify_exact(rho, n, m, ens)
                       : decoupling_verify_mc(rho, n, m, samples, c.seed * 7919 + t);
  });
  for (int t = 0; t < trials; ++t) {
    const DecouplingReport& r = reports[t];
    report.count(r.pass);
    csv.add_row({std::to_string(t), format_double(r.lhs), format_double(r.lhs_std_err),
                 format_double(r.rhs), format_double(r.margin), r.pass ? "1" : "0"});
  }
  write_text_atomic(c.out, csv.str());
  return finish(c, report);
}

// ------------------------------------------------------------- bound-table

int run_bound_table(const CommonOpts& c, std::int64_t n_min, std::int64_t n_max, int points) {
  const mpfr_prec_t prec = working_precision();
  const ChainTable table = verify_theorem1(n_min, n_max, points, prec);

  RunReport report;
  CsvBuilder csv({"n", "m", "r", "log2_eps0", "log2_eps1", "delta", "log2_gamma", "log2_eta",
                  "log2_eps_bound", "log2_thm1_rhs", "log2_margin", "pass"});
  for (const ChainRow& r : table.rows) {
    const bool ok = r.pass && r.domination_ok && r.cross_precision_ok;
    report.count(ok);
    csv.add_row({std::to_string(r.n), std::to_string(r.m), std::to_string(r.r),
                 format_double(r.log2_eps0), format_double(r.log2_eps1),
                 format_double(r.delta), format_double(r.log2_gamma),
                 format_double(r.log2_eta), format_double(r.log2_eps_bound),
                 format_double(r.log2_thm1_rhs), format_double(r.log2_margin),
                 ok ? "1" : "0"});
  }
  write_text_atomic(c.out, csv.str());
  info(c, "precision bits: " + std::to_string(prec));
  info(c, "smallest passing n: " + std::to_string(table.smallest_passing_n));
  return finish(c, report);
}

// --------------------------------------------------------------- qecm-demo

int run_qecm_demo(const CommonOpts& c, std::uint32_t n) {
  const QECMScheme scheme = build_scheme(n);
  if (scheme.keys.empty())
    throw CLI::ValidationError("--n", "demo needs the enumerated-key regime (n <= 2)");

  RunReport report;
  double worst_roundtrip = 0.0, worst_orthogonality = 0.0;
  for (const auto& key : scheme.keys) {
    for (int x = 0; x < 2; ++x) {
      const auto p = decrypt(scheme, key, encrypt(scheme, key, x));
      worst_roundtrip = std::max(worst_roundtrip, 1.0 - p[x]);
    }
    const Mat prod = encrypt(scheme, key, 0).mat * encrypt(scheme, key, 1).mat;
    worst_orthogonality = std::max(worst_orthogonality, std::abs(prod.trace()));
  }
  report.count(worst_roundtrip <= 1e-9);
  report.count(worst_orthogonality <= 1e-12);

  const CloningAttack trivial = trivial_routing_attack(scheme);
  const double value = cloning_success(scheme, trivial).value;
  report.count(std::abs(value - 0.5) <= 1e-9);

  nlohmann::json j;
  j["schemaVersion"] = kSchemaVersion;
  j["n"] = n;
  j["keys"] = scheme.keys.size();
  j["worstRoundTripDeviation"] = worst_roundtrip;
  j["worstOrthogonality"] = worst_orthogonality;
  j["trivialAttackValue"] = value;
  if (!c.out.empty()) write_text_atomic(c.out, j.dump() + "\n");
  std::cout << "round-trip deviation " << format_double(worst_roundtrip) << ", orthogonality "
            << format_double(worst_orthogonality) << ", trivial attack "
            << format_double(value) << "\n";
  return finish(c, report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolVersion) +
               " - numerical laboratory for single-bit uncloneable encryption"};
  app.require_subcommand(1);

  // clifford
  auto* sc = app.add_subcommand("clifford", "sample or enumerate Clifford tableaus");
  CommonOpts c_cliff;
  std::uint32_t cliff_n = 1;
  bool cliff_enum = false;
  int cliff_samples = 0;
  sc->add_option("--n", cliff_n, "qubit count")->required();
  auto* enum_flag = sc->add_flag("--enumerate", cliff_enum, "emit the whole group (n <= 2)");
  auto* sample_opt = sc->add_option("--sample", cliff_samples, "number of samples");
  enum_flag->excludes(sample_opt);
  add_common(sc, c_cliff, true);

  // entropy
  auto* se = app.add_subcommand("entropy", "entropies of a state file");
  CommonOpts c_ent;
  std::string ent_in, ent_task, ent_split;
  double ent_tol = 1e-8;
  se->add_option("--in", ent_in, "state JSON file")->required();
  se->add_option("--task", ent_task, "vn|cond-vn|mutual|min|max")->required();
  se->add_option("--split", ent_split, "comma separated subsystem dims");
  se->add_option("--tol", ent_tol, "duality-gap tolerance");
  add_common(se, c_ent, false);

  // verify-lemmas
  auto* sl = app.add_subcommand("verify-lemmas", "entropy inequality suites on random states");
  CommonOpts c_lem;
  int lem_trials = 100;
  std::string lem_dims = "2,2,2";
  sl->add_option("--trials", lem_trials, "trials per lemma")->check(CLI::PositiveNumber);
  sl->add_option("--dims", lem_dims, "tripartite dims, e.g. 2,2,2");
  add_common(sl, c_lem, true);

  // moe-seesaw
  auto* ss = app.add_subcommand("moe-seesaw", "lower-bound a game value by see-saw");
  CommonOpts c_see;
  std::string see_game = "bb84";
  std::uint32_t see_n = 1;
  Index see_db = 2, see_dc = 2;
  int see_restarts = 16, see_iters = 300;
  double see_tol = 1e-10;
  ss->add_option("--game", see_game, "bb84|clifford")
      ->check(CLI::IsMember({"bb84", "clifford"}));
  ss->add_option("--n", see_n, "qubit count for the clifford game");
  ss->add_option("--dim-b", see_db, "Bob dimension");
  ss->add_option("--dim-c", see_dc, "Charlie dimension");
  ss->add_option("--restarts", see_restarts, "random restarts");
  ss->add_option("--iters", see_iters, "max iterations per restart");
  ss->add_option("--tol", see_tol, "convergence threshold");
  add_common(ss, c_see, true);

  // decoupling
  auto* sd = app.add_subcommand("decoupling", "one-shot decoupling margins");
  CommonOpts c_dec;
  std::uint32_t dec_n = 2, dec_m = 1;
  std::string dec_mode = "exact";
  int dec_samples = 2000, dec_trials = 100;
  sd->add_option("--n", dec_n, "qubits in A");
  sd->add_option("--m", dec_m, "qubits kept");
  sd->add_option("--mode", dec_mode, "exact|mc")->check(CLI::IsMember({"exact", "mc"}));
  sd->add_option("--samples", dec_samples, "Monte-Carlo samples");
  sd->add_option("--trials", dec_trials, "random input states");
  add_common(sd, c_dec, true);

  // bound-table
  auto* sb = app.add_subcommand("bound-table", "security bound chain over a grid of n");
  CommonOpts c_bound;
  std::int64_t b_min = 20000, b_max = 100000000;
  int b_points = 64;
  sb->add_option("--n-min", b_min, "smallest n");
  sb->add_option("--n-max", b_max, "largest n");
  sb->add_option("--points", b_points, "grid points")->check(CLI::PositiveNumber);
  add_common(sb, c_bound, true);

  // qecm-demo
  auto* sq = app.add_subcommand("qecm-demo", "encrypt/decrypt round trip and trivial attack");
  CommonOpts c_demo;
  std::uint32_t demo_n = 1;
  sq->add_option("--n", demo_n, "qubit count (1 or 2)");
  add_common(sq, c_demo, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (sc->parsed()) {
      warn_repeated_seed(c_cliff);
      info(c_cliff, "started " + timestamp());
      if (!cliff_enum && cliff_samples <= 0)
        throw CLI::ValidationError("clifford", "need --enumerate or --sample <count>");
      return run_clifford(c_cliff, cliff_n, cliff_enum, cliff_samples);
    }
    if (se->parsed()) {
      warn_repeated_seed(c_ent);
      return run_entropy(c_ent, ent_in, ent_task, ent_split, ent_tol);
    }
    if (sl->parsed()) {
      warn_repeated_seed(c_lem);
      info(c_lem, "started " + timestamp());
      return run_verify_lemmas(c_lem, lem_trials, lem_dims);
    }
    if (ss->parsed()) {
      warn_repeated_seed(c_see);
      info(c_see, "started " + timestamp());
      return run_seesaw(c_see, see_game, see_n, see_db, see_dc, see_restarts, see_iters,
                        see_tol);
    }
    if (sd->parsed()) {
      warn_repeated_seed(c_dec);
      info(c_dec, "started " + timestamp());
      return run_decoupling(c_dec, dec_n, dec_m, dec_mode, dec_samples, dec_trials);
    }
    if (sb->parsed()) {
      warn_repeated_seed(c_bound);
      info(c_bound, "started " + timestamp());
      return run_bound_table(c_bound, b_min, b_max, b_points);
    }
    if (sq->parsed()) {
      warn_repeated_seed(c_demo);
      info(c_demo, "started " + timestamp());
      return run_qecm_demo(c_demo, demo_n);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
