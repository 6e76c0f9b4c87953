// Acceptance suite: one line per criterion, measured value next to the
// threshold. Exits 0 once every criterion has been evaluated; --strict turns
// any FAIL into a nonzero exit.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfdpf/harness.hpp"
#include "support/kalman_oracle.hpp"

using namespace cfdpf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

fs::path config_path(const std::string& name) {
  return fs::path(CFDPF_SOURCE_DIR) / "configs" / name;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double rel_diff(const Matrix& a, const Matrix& b) {
  return max_abs(a - b) / std::max(1.0, max_abs(b));
}

// ---------------------------------------------------------------------------

Outcome distributed_bound_exactness() {
  Stopwatch clock;
  auto cfg = load_config(config_path("desk_bot.json"));
  cfg.pcrlb.expectation.n_trajectories = 200;
  const auto run = run_scenario_pcrlb(cfg, build_setup(cfg));
  const double elapsed = clock.seconds();

  std::map<int, const Matrix*> central;
  for (const auto& p : run.points) {
    if (p.variant == "central") central[p.k] = &p.information;
  }
  // Entries reach 1e6 and beyond, where one ulp already exceeds 1e-10, so the
  // elementwise tolerance is taken relative to the largest entry.
  double worst = 0.0, worst_abs = 0.0, scale = 0.0;
  int compared = 0;
  for (const auto& p : run.points) {
    if (p.variant != "exact") continue;
    const Matrix& c = *central.at(p.k);
    worst = std::max(worst, max_abs(p.information - c) / max_abs(c));
    worst_abs = std::max(worst_abs, max_abs(p.information - c));
    scale = std::max(scale, max_abs(c));
    ++compared;
  }
  const bool ok = compared == cfg.n_steps + 1 && worst <= 1e-10 && elapsed < 30.0;
  return {ok, "max |J_dist - J_central| / max|J| = " + num(worst) + " over " +
                  std::to_string(compared) + " steps (tol 1e-10; absolute " + num(worst_abs) +
                  " at max|J| " + num(scale) + "), " + num(elapsed) + " s (limit 30 s)"};
}

// ---------------------------------------------------------------------------

struct LinearCheck {
  double information_error = 0.0;
  double worst_z = 0.0;  // max |fused - kalman| / SE at the last step
  int checks = 0;
};

// One CF/DPF realization on fixed measurements: local filters, consensus and
// a fusion chain per proposal. Returns the final fused estimate per proposal
// and node.
std::vector<std::vector<Vector>> cfdpf_final_estimates(
    const ScenarioConfig& cfg, const ScenarioSetup& setup,
    const std::vector<std::vector<Vector>>& measurements, const std::vector<ProposalKind>& kinds,
    std::uint64_t seed) {
  const auto& model = *setup.model;
  const int n = cfg.n_nodes;
  const ResamplePolicy policy{cfg.ess_fraction};
  std::vector<Rng> local_rngs;
  std::vector<ParticleSet> local;
  for (int l = 0; l < n; ++l) {
    local_rngs.push_back(make_rng(seed, {1, static_cast<std::uint64_t>(l)}));
    local.push_back(sample_prior(setup.initial_state, setup.prior_cov, cfg.n_particles_local,
                                 local_rngs.back()));
  }
  std::vector<std::vector<FusionFilterState>> states(kinds.size());
  std::vector<std::vector<Rng>> rngs(kinds.size());
  for (std::size_t v = 0; v < kinds.size(); ++v) {
    for (int l = 0; l < n; ++l) {
      rngs[v].push_back(make_rng(seed, {2, v, static_cast<std::uint64_t>(l)}));
      states[v].push_back(init_fusion_state(
          sample_prior(setup.initial_state, setup.prior_cov, cfg.n_particles_fusion,
                       rngs[v].back()),
          l));
    }
  }
  for (std::size_t k = 0; k < measurements.size(); ++k) {
    std::vector<LocalSummaries> summaries(n);
    for (int l = 0; l < n; ++l) {
      const Measurement z{l, measurements[k][l], static_cast<int>(k) + 1};
      ParticleSet pred = sample_prediction(local[l], model, local_rngs[l]);
      summaries[l].prediction = summarize(pred, l);
      apply_likelihood(pred, std::span<const Measurement>(&z, 1), model, l);
      summaries[l].filtering = summarize(pred, l);
      resample_if_degenerate(pred, local_rngs[l], policy);
      local[l] = std::move(pred);
    }
    for (std::size_t v = 0; v < kinds.size(); ++v) {
      states[v] = fusion_filter_step(states[v], summaries, setup.consensus,
                                     setup.consensus_budget, kinds[v], model, rngs[v], policy);
    }
  }
  std::vector<std::vector<Vector>> out(kinds.size());
  for (std::size_t v = 0; v < kinds.size(); ++v) {
    for (const auto& s : states[v]) out[v].push_back(fused_estimate(s));
  }
  return out;
}

LinearCheck linear_equivalence(const std::string& file) {
  const auto cfg = load_config(config_path(file));
  const auto setup = build_setup(cfg);
  const auto& model = *setup.model;
  const auto& lin = cfg.linear;

  LinearCheck out;
  std::vector<Matrix> h, r;
  for (int l = 0; l < cfg.n_nodes; ++l) {
    h.push_back(lin.observation.size() == 1 ? lin.observation[0] : lin.observation[l]);
    r.push_back(lin.observation_cov.size() == 1 ? lin.observation_cov[0] : lin.observation_cov[l]);
  }

  // Information recursion against the Kalman covariance.
  ExpectationConfig closed;
  closed.mode = ExpectationMode::closed_form_gaussian;
  const auto paths =
      sample_trajectories(model, setup.initial_state, setup.prior_cov, cfg.n_steps, closed);
  oracle::Kalman kf{lin.transition, lin.process_cov, h, r, lin.initial_state, lin.prior_cov};
  Matrix j = setup.prior_cov.inverse();
  for (int k = 0; k < cfg.n_steps; ++k) {
    j = centralized_fim_step(j, d_blocks_gaussian(model, paths[k], paths[k + 1]));
    kf.predict();
    Matrix kalman_info = kf.cov.inverse();
    for (int l = 0; l < cfg.n_nodes; ++l) kalman_info += h[l].transpose() * r[l].inverse() * h[l];
    kf.cov = kalman_info.inverse();
    out.information_error = std::max(out.information_error, max_abs(j - kalman_info));
  }

  // The harness run is the CF/DPF under test. Independent particle replicates
  // on its measurement record give the Monte-Carlo standard error of one run.
  const RunLog log = run_scenario(cfg, setup, 0);
  std::vector<std::vector<Vector>> measurements;
  oracle::Kalman track{lin.transition, lin.process_cov, h, r, lin.initial_state, lin.prior_cov};
  for (const auto& s : log.steps) {
    measurements.push_back(s.measurements);
    track.predict();
    track.update(std::vector<oracle::Vec>(s.measurements.begin(), s.measurements.end()));
  }
  const std::vector<ProposalKind> kinds = cfg.proposals;
  constexpr int kReplicates = 20;
  std::vector<std::vector<std::vector<Vector>>> finals;  // [replicate][proposal][node]
  for (int rep = 0; rep < kReplicates; ++rep) {
    finals.push_back(cfdpf_final_estimates(
        cfg, setup, measurements, kinds, derive_seed(cfg.seed, {99, static_cast<std::uint64_t>(rep)})));
  }
  if (!log.divergences.empty()) out.worst_z = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < kinds.size(); ++v) {
    const std::string variant = std::string("fused_") + to_string(kinds[v]);
    const auto record = std::find_if(log.fusion.begin(), log.fusion.end(), [&](const FusionRecord& f) {
      return f.variant == variant && f.k == cfg.n_steps;
    });
    if (record == log.fusion.end()) {
      out.worst_z = std::numeric_limits<double>::infinity();
      continue;
    }
    for (int l = 0; l < cfg.n_nodes; ++l) {
      for (int i = 0; i < model.state_dim(); ++i) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& f : finals) {
          sum += f[v][l](i);
          sum_sq += f[v][l](i) * f[v][l](i);
        }
        const double mean = sum / kReplicates;
        const double se = std::sqrt(std::max(sum_sq - kReplicates * mean * mean, 0.0) / (kReplicates - 1));
        out.worst_z = std::max(out.worst_z, std::abs(record->estimates[l](i) - track.mean(i)) / se);
        ++out.checks;
      }
    }
  }
  return out;
}

Outcome kalman_equivalence() {
  Stopwatch clock;
  bool ok = true;
  std::string detail;
  for (const auto* file : {"linear_scalar.json", "linear_2d.json"}) {
    const auto c = linear_equivalence(file);
    ok = ok && c.information_error <= 1e-12 && c.worst_z <= 3.0;
    detail += std::string(detail.empty() ? "" : "; ") + fs::path(file).stem().string() +
              ": max |J - J_kalman| = " + num(c.information_error) +
              " (tol 1e-12), max |fused - kalman|/SE at k = 20 = " + num(c.worst_z) + " over " +
              std::to_string(c.checks) + " proposal/node/coordinate means (tol 3)";
  }
  const double elapsed = clock.seconds();
  ok = ok && elapsed < 60.0;
  return {ok, detail + ", " + num(elapsed) + " s (limit 60 s)"};
}

// ---------------------------------------------------------------------------

Outcome approximation_ordering() {
  const auto cfg = load_config(config_path("desk_bot.json"));
  const auto setup = build_setup(cfg);
  const auto& model = *setup.model;
  const auto run = run_scenario_pcrlb(cfg, setup);
  const int n = model.n_nodes();

  const Matrix prior_info = setup.prior_cov.inverse();
  std::vector<Matrix> local(n, prior_info);
  Matrix j = prior_info;
  double node_gap = 0.0, permutation_gap = 0.0, sum_gap = 0.0;
  for (int k = 0; k < cfg.n_steps; ++k) {
    const DBlocks& blocks = run.blocks.at(k);
    std::vector<Matrix> next(n), pred(n);
    for (int l = 0; l < n; ++l) {
      next[l] = local_fim_step(local[l], blocks, l);
      pred[l] = local_prediction_fim_step(local[l], blocks);
    }
    const Matrix a = approx_fim_tharmarasa(local[0], next, pred, blocks, 0);
    const Matrix b = approx_fim_tharmarasa(local[3], next, pred, blocks, 3);
    node_gap = std::max(node_gap, rel_diff(a, b));

    std::vector<Matrix> next_rev(next.rbegin(), next.rend()), pred_rev(pred.rbegin(), pred.rend());
    const Matrix exact = distributed_fim_step(j, next, pred, blocks);
    permutation_gap =
        std::max(permutation_gap, rel_diff(distributed_fim_step(j, next_rev, pred_rev, blocks), exact));

    const Matrix c22 = distributed_c22(next, pred, blocks);
    sum_gap = std::max(sum_gap, rel_diff(approx_fim_sum(next, pred), c22 - blocks.process_info));

    j = exact;
    local = std::move(next);
  }
  const bool ok = node_gap > 1e-6 && permutation_gap <= 1e-10 && sum_gap <= 1e-10;
  return {ok, "tharmarasa node 0 vs 3 rel. difference = " + num(node_gap) +
                  " (must exceed 1e-6), exact under node relabelling = " + num(permutation_gap) +
                  " (tol 1e-10), |sum - (C22 - Q^-1)| rel. = " + num(sum_gap) + " (tol 1e-10)"};
}

// ---------------------------------------------------------------------------

struct DeskReport {
  MetricReport report;
  double seconds = 0.0;
};

const DeskReport& desk_report() {
  static const DeskReport cached = [] {
    Stopwatch clock;
    const auto cfg = load_config(config_path("desk_bot.json"));
    DeskReport d;
    d.report = monte_carlo(cfg, 25);
    d.seconds = clock.seconds();
    return d;
  }();
  return cached;
}

Outcome proposal_ordering() {
  const auto& d = desk_report();
  const auto& rms = d.report.time_averaged_rms;
  const double central = rms.at("central"), sir = rms.at("fused_sir"),
               product = rms.at("fused_product"), optimal = rms.at("fused_optimal");
  const bool order = sir > product && sir > optimal;
  const bool band = std::abs(product - central) <= 0.3 * central &&
                    std::abs(optimal - central) <= 0.3 * central;
  const bool ok = order && band && d.seconds < 300.0;
  return {ok, "RMS central " + num(central) + ", sir " + num(sir) + ", product " + num(product) +
                  ", optimal " + num(optimal) + "; need sir > product, sir > optimal and " +
                  "product, optimal within 30% of central; " + num(d.seconds) +
                  " s (limit 300 s)"};
}

Outcome standalone_failure() {
  const auto& rms = desk_report().report.time_averaged_rms;
  const double standalone = rms.at("standalone"), product = rms.at("fused_product");
  const double ratio = standalone / product;
  return {ratio >= 2.0, "RMS standalone " + num(standalone) + " / product " + num(product) +
                            " = " + num(ratio) + " (need >= 2)"};
}

// ---------------------------------------------------------------------------

Outcome multirate_boundedness() {
  const auto cfg = load_config(config_path("multirate.json"));
  ScheduleConfig schedule = cfg.schedule;
  schedule.consensus_cycle = 2.0;

  int comparator_lag = 0;
  for (const auto& e : schedule_multirate(schedule, FusionMode::standard, 20)) {
    comparator_lag = std::max(comparator_lag, e.lag);
  }

  const auto setup = build_setup(cfg);
  std::vector<RunLog> logs;
  int modified_lag = 0;
  for (int r = 0; r < cfg.mc_runs; ++r) {
    logs.push_back(run_scenario(cfg, setup, r));
    for (const auto& f : logs.back().fusion) {
      if (f.variant == "fused_modified") modified_lag = std::max(modified_lag, f.lag);
    }
  }
  const auto rep = aggregate(cfg, logs);

  // Time average over the indices the modified filter actually estimates.
  const auto& mod_counts = rep.counts.at("fused_modified");
  double mod_sum = 0.0, central_sum = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < rep.steps.size(); ++i) {
    if (mod_counts[i] == 0 || rep.counts.at("central")[i] == 0) continue;
    mod_sum += rep.rms.at("fused_modified")[i];
    central_sum += rep.rms.at("central")[i];
    ++used;
  }
  const double mod = used > 0 ? mod_sum / used : std::numeric_limits<double>::quiet_NaN();
  const double central = used > 0 ? central_sum / used : std::numeric_limits<double>::quiet_NaN();
  const bool ok = comparator_lag > 8 && modified_lag <= 2 && std::abs(mod - central) <= 0.5 * central;
  return {ok, "one-index comparator max lag " + std::to_string(comparator_lag) +
                  " within 20 steps (need > 8), modified max m " + std::to_string(modified_lag) +
                  " (need <= 2), RMS modified " + num(mod) + " vs central " + num(central) +
                  " on " + std::to_string(used) + " shared indices (need within 50%)"};
}

// ---------------------------------------------------------------------------

Outcome consensus_properties() {
  Rng rng(4242);
  std::uniform_int_distribution<int> size(3, 20);
  std::normal_distribution<double> normal;
  double worst_mean = 0.0, worst_ratio = 0.0;
  for (int g = 0; g < 50; ++g) {
    const int n = size(rng);
    const auto graph = random_geometric_graph(n, default_connectivity_radius(n, 16.0), 16.0, rng);
    const auto u = metropolis_weights(graph);
    ConsensusState state;
    for (int l = 0; l < n; ++l) state.values.push_back(Matrix::Constant(1, 1, 5.0 + normal(rng)));
    auto mean_of = [](const ConsensusState& s) {
      double acc = 0.0;
      for (const auto& v : s.values) acc += v(0, 0);
      return acc / static_cast<double>(s.values.size());
    };
    const double mean0 = mean_of(state);
    const int iterations = std::max(1, static_cast<int>(std::ceil(5.0 * u.convergence_time)));
    ConsensusState current = state;
    for (int t = 0; t < iterations; ++t) {
      current = run_consensus(current, u, 1).state;
      worst_mean = std::max(worst_mean, std::abs(mean_of(current) - mean0) / std::abs(mean0));
    }
    const double initial = max_disagreement(state.values);
    const double final_gap = max_disagreement(current.values);
    worst_ratio = std::max(worst_ratio, final_gap / (std::exp(-5.0) * initial * 2.0));
  }
  const bool ok = worst_mean <= 1e-10 && worst_ratio < 1.0;
  return {ok, "50 graphs: max relative mean drift per step " + num(worst_mean) +
                  " (tol 1e-10), max disagreement / (2 e^-5 initial) = " + num(worst_ratio) +
                  " (need < 1)"};
}

// ---------------------------------------------------------------------------

Matrix random_spd(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix a(dim, dim);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  return a * a.transpose() + 0.5 * Matrix::Identity(dim, dim);
}

Outcome fusion_algebra() {
  Rng rng(777);
  std::uniform_int_distribution<int> count(2, 10), dims(1, 4);
  std::normal_distribution<double> normal;
  double perm = 0.0, additivity = 0.0, identical = 0.0, consensus = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = count(rng), dim = dims(rng);
    std::vector<GaussianSummary> inputs;
    for (int l = 0; l < n; ++l) {
      GaussianSummary s;
      s.mean = Vector(dim);
      for (int i = 0; i < dim; ++i) s.mean(i) = 3.0 * normal(rng);
      s.covariance = random_spd(dim, rng);
      s.node = l;
      inputs.push_back(s);
    }
    const auto fused = gaussian_product(inputs);

    auto shuffled = inputs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto fused_shuffled = gaussian_product(shuffled);
    perm = std::max({perm, rel_diff(fused_shuffled.mean, fused.mean),
                     rel_diff(fused_shuffled.covariance, fused.covariance)});

    Matrix info = Matrix::Zero(dim, dim);
    Vector eta = Vector::Zero(dim);
    for (const auto& s : inputs) {
      info += s.covariance.inverse();
      eta += s.covariance.inverse() * s.mean;
    }
    const Matrix fused_info = fused.covariance.inverse();
    additivity = std::max({additivity, rel_diff(fused_info, info),
                           rel_diff(fused_info * fused.mean, eta)});

    std::vector<GaussianSummary> same(n, inputs.front());
    identical = std::max(identical,
                         rel_diff(gaussian_product(same).covariance, inputs.front().covariance / double(n)));

    const auto graph = random_geometric_graph(n, default_connectivity_radius(n, 16.0), 16.0, rng);
    const auto u = metropolis_weights(graph);
    std::vector<LocalSummaries> local;
    for (const auto& s : inputs) local.push_back({s, s});
    const int budget = std::max(1, static_cast<int>(std::ceil(50.0 * u.convergence_time)));
    for (const auto& node : consensus_product(local, u, budget)) {
      consensus = std::max({consensus, rel_diff(node.filtering.mean, fused.mean),
                            rel_diff(node.filtering.covariance, fused.covariance)});
    }
  }
  const bool ok = perm <= 1e-12 && additivity <= 1e-10 && identical <= 1e-12 && consensus <= 1e-6;
  return {ok, "100 instances: permutation " + num(perm) + " (tol 1e-12), additivity " +
                  num(additivity) + " (tol 1e-10), identical inputs vs P/N " + num(identical) +
                  " (tol 1e-12), consensus after 50 N_c vs exact " + num(consensus) +
                  " (tol 1e-6)"};
}

// ---------------------------------------------------------------------------

Outcome modified_reduction() {
  const auto cfg = load_config(config_path("linear_scalar.json"));
  const auto setup = build_setup(cfg);
  const auto& model = *setup.model;
  const int n = cfg.n_nodes;

  Rng truth_rng(31), local_rng(32);
  std::vector<ParticleSet> local;
  for (int l = 0; l < n; ++l) {
    local.push_back(sample_prior(setup.initial_state, setup.prior_cov, 500, local_rng));
  }
  std::vector<FusionFilterState> standard, modified;
  std::vector<Rng> rngs_standard, rngs_modified;
  for (int l = 0; l < n; ++l) {
    Rng prior_rng(100 + l);
    auto prior = init_fusion_state(
        sample_prior(setup.initial_state, setup.prior_cov, 300, prior_rng), l);
    standard.push_back(prior);
    modified.push_back(prior);
    rngs_standard.emplace_back(200 + l);
    rngs_modified.emplace_back(200 + l);
  }

  Vector x = setup.initial_state;
  bool identical = true;
  int steps = 0;
  for (int k = 1; k <= 10; ++k) {
    x = model.propagate(x, truth_rng);
    std::vector<LocalSummaries> summaries(n);
    for (int l = 0; l < n; ++l) {
      const Measurement z{l, model.observe(l, x, truth_rng), k};
      ParticleSet pred = sample_prediction(local[l], model, local_rng);
      summaries[l].prediction = summarize(pred, l);
      apply_likelihood(pred, std::span<const Measurement>(&z, 1), model, l);
      summaries[l].filtering = summarize(pred, l);
      resample_if_degenerate(pred, local_rng);
      local[l] = std::move(pred);
    }
    standard = fusion_filter_step(standard, summaries, setup.consensus, setup.consensus_budget,
                                  ProposalKind::product, model, rngs_standard);
    std::vector<std::vector<LocalSummaries>> history(n);
    for (int l = 0; l < n; ++l) history[l].push_back(summaries[l]);
    modified = modified_fusion_filter_step(modified, history, setup.consensus,
                                           setup.consensus_budget, model, rngs_modified);
    for (int l = 0; l < n; ++l) {
      const auto& a = standard[l].particles;
      const auto& b = modified[l].particles;
      identical = identical && a.particles.rows() == b.particles.rows() &&
                  a.particles.cols() == b.particles.cols() && a.particles == b.particles &&
                  a.log_weights == b.log_weights;
    }
    ++steps;
  }
  return {identical, std::string(identical ? "bit-identical" : "differs") +
                         " particles and log-weights at every node over " + std::to_string(steps) +
                         " steps"};
}

// ---------------------------------------------------------------------------

Outcome determinism() {
  std::random_device entropy;
  const fs::path root =
      fs::temp_directory_path() / ("cfdpf_acceptance_" + std::to_string(entropy()));
  const fs::path a = root / "a", b = root / "b";
  fs::create_directories(a);
  fs::create_directories(b);
  const std::string config = config_path("desk_bot.json").string();
  auto invoke = [&](const fs::path& out) {
    const std::string cmd = std::string("\"") + CFDPF_CLI + "\" montecarlo --config \"" + config +
                            "\" --out \"" + out.string() + "\" > /dev/null";
    return std::system(cmd.c_str());
  };
  const int status_a = invoke(a), status_b = invoke(b);

  bool ok = status_a == 0 && status_b == 0;
  std::string detail = "exit codes " + std::to_string(status_a) + ", " + std::to_string(status_b);
  int compared = 0;
  for (const auto* name : {"metrics.csv", "summary.csv", "cdf.csv"}) {
    const bool both = fs::exists(a / name) && fs::exists(b / name);
    const bool same = both && read_text(a / name) == read_text(b / name);
    if (!same) detail += std::string("; ") + name + " differs";
    ok = ok && same;
    compared += same ? 1 : 0;
  }
  fs::remove_all(root);
  return {ok, detail + "; " + std::to_string(compared) + "/3 CSV files byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::string(argv[1]) == "--strict";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 distributed bound equals centralized bound", distributed_bound_exactness},
      {"AC2 linear-Gaussian equivalence with the Kalman filter", kalman_equivalence},
      {"AC3 bound approximations", approximation_ordering},
      {"AC4 proposal-quality ordering", proposal_ordering},
      {"AC5 stand-alone node loses the track", standalone_failure},
      {"AC6 multi-rate lag stays bounded", multirate_boundedness},
      {"AC7 consensus properties", consensus_properties},
      {"AC8 fusion algebra", fusion_algebra},
      {"AC9 modified step with m = 1 reduces to the product step", modified_reduction},
      {"AC10 montecarlo CSV determinism", determinism},
  };

  int passed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    passed += outcome.pass ? 1 : 0;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << ": " << outcome.detail
              << std::endl;
  }
  std::cout << passed << "/" << criteria.size() << " criteria passed" << std::endl;
  return strict && passed != static_cast<int>(criteria.size()) ? 1 : 0;
}
