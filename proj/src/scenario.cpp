#include <cmath>

#include "cfdpf/harness.hpp"

namespace cfdpf {

namespace {

// Stream tags for derive_seed.
enum : std::uint64_t {
  kGraphStream = 1,
  kTruthStream,
  kCentralStream,
  kStandaloneStream,
  kLocalStream,
  kFusionStream,
  kPcrlbStream,
};

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

Point2 region_origin(const ScenarioConfig& cfg) {
  return cfg.region_origin.value_or(Point2(-0.5 * cfg.region_side, -0.5 * cfg.region_side));
}

NetworkGraph build_graph(const ScenarioConfig& cfg) {
  Rng rng = make_rng(cfg.seed, {kGraphStream});
  const double radius = cfg.connectivity_radius > 0.0
                            ? cfg.connectivity_radius
                            : (cfg.n_nodes > 1 ? default_connectivity_radius(cfg.n_nodes,
                                                                              cfg.region_side)
                                               : 0.0);
  if (cfg.topology == Topology::random_geometric) {
    NetworkGraph g = random_geometric_graph(cfg.n_nodes, radius, cfg.region_side, rng);
    for (auto& p : g.positions) p += region_origin(cfg);
    return g;
  }
  std::uniform_real_distribution<double> unif(0.0, cfg.region_side);
  std::vector<Point2> positions(cfg.n_nodes);
  for (auto& p : positions) {
    const double x = unif(rng);
    p = Point2(x, unif(rng)) + region_origin(cfg);
  }
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < cfg.n_nodes; ++a) {
    if (cfg.topology == Topology::complete) {
      for (int b = a + 1; b < cfg.n_nodes; ++b) edges.emplace_back(a, b);
    } else if (a + 1 < cfg.n_nodes) {
      edges.emplace_back(a, a + 1);
    }
  }
  NetworkGraph g = graph_from_edges(cfg.n_nodes, edges);
  g.positions = std::move(positions);
  g.region_side = cfg.region_side;
  g.connectivity_radius = radius;
  return g;
}

template <typename T>
const T& pick(const std::vector<T>& list, int node) {
  return list.size() == 1 ? list.front() : list.at(node);
}

// Predict, weight, record the estimate, resample. Returns the filtering mean.
Vector filter_step(ParticleSet& set, std::span<const Measurement> z, const StateSpaceModel& model,
                   Rng& rng, ResamplePolicy policy, int node) {
  set = sample_prediction(set, model, rng);
  apply_likelihood(set, z, model, node);
  Vector mean = set.particles * set.weights();
  resample_if_degenerate(set, rng, policy);
  return mean;
}

struct VariantRun {
  std::string name;
  bool modified = false;
  ProposalKind kind = ProposalKind::product;
  std::vector<FusionEvent> events;
  std::size_t next_event = 0;
  std::vector<FusionFilterState> states;
  std::vector<Rng> rngs;
  bool alive = true;
};

}  // namespace

Vector bot_initial_state(const BotConfig& bot) {
  const double course = bot.course_deg * kPi / 180.0;
  Vector x(4);
  x << bot.start.x(), bot.start.y(), bot.speed * std::sin(course), bot.speed * std::cos(course);
  return x;
}

ScenarioSetup build_setup(const ScenarioConfig& cfg) {
  ScenarioSetup s;
  s.graph = build_graph(cfg);
  s.consensus = metropolis_weights(s.graph);
  if (!std::isfinite(s.consensus.convergence_time)) {
    throw Error("graph", "consensus matrix does not converge (disconnected network)");
  }
  s.consensus_budget = cfg.consensus_budget > 0
                           ? cfg.consensus_budget
                           : std::max(1, static_cast<int>(std::ceil(
                                             30.0 * s.consensus.convergence_time)));
  switch (cfg.scenario) {
    case ScenarioKind::bot:
      s.model = std::make_shared<CoordinatedTurnBearingModel>(cfg.bot.motion, s.graph.positions,
                                                              cfg.bot.glint, cfg.bot.convention);
      s.initial_state = bot_initial_state(cfg.bot);
      s.prior_cov = cfg.bot.prior_variances.asDiagonal();
      break;
    case ScenarioKind::unicycle:
      s.model = std::make_shared<UnicycleBearingModel>(cfg.unicycle.motion, s.graph.positions,
                                                       cfg.unicycle.glint,
                                                       cfg.unicycle.convention);
      s.initial_state = cfg.unicycle.start;
      s.prior_cov = cfg.unicycle.prior_variances.asDiagonal();
      break;
    case ScenarioKind::linear_test: {
      std::vector<Matrix> h, r;
      for (int l = 0; l < cfg.n_nodes; ++l) {
        h.push_back(pick(cfg.linear.observation, l));
        r.push_back(pick(cfg.linear.observation_cov, l));
      }
      s.model = linear_gaussian_model(cfg.linear.transition, cfg.linear.process_cov, h, r);
      s.initial_state = cfg.linear.initial_state;
      s.prior_cov = cfg.linear.prior_cov;
      break;
    }
  }
  return s;
}

std::vector<std::string> fused_variant_names(const ScenarioConfig& cfg) {
  std::vector<std::string> names;
  for (auto p : cfg.proposals) names.push_back(std::string("fused_") + to_string(p));
  if (cfg.modified) names.emplace_back("fused_modified");
  return names;
}

RunLog run_scenario(const ScenarioConfig& cfg, int run) {
  return run_scenario(cfg, build_setup(cfg), run);
}

RunLog run_scenario(const ScenarioConfig& cfg, const ScenarioSetup& setup, int run) {
  const StateSpaceModel& model = *setup.model;
  const int n = model.n_nodes();
  const int steps = cfg.n_steps;
  const auto r = static_cast<std::uint64_t>(run);
  const ResamplePolicy policy{cfg.ess_fraction};

  RunLog log;
  log.scenario = cfg.name;
  log.run = run;
  log.seed = cfg.seed;
  log.convergence_time = setup.consensus.convergence_time;
  log.consensus_budget = setup.consensus_budget;
  log.position_indices = model.position_indices();

  // Truth and one measurement realization shared by every method.
  Rng truth_rng = make_rng(cfg.seed, {r, kTruthStream});
  std::vector<Vector> truth(steps + 1);
  std::vector<std::vector<Measurement>> z(steps + 1);
  truth[0] = cfg.truth_from_prior ? Gaussian(setup.initial_state, setup.prior_cov).sample(truth_rng)
                                  : setup.initial_state;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (int k = 1; k <= steps; ++k) {
    truth[k] = model.propagate(truth[k - 1], truth_rng);
    for (int l = 0; l < n; ++l) {
      Measurement m{l, model.observe(l, truth[k], truth_rng), k};
      hash = fnv1a(hash, m.value.data(), sizeof(double) * m.value.size());
      z[k].push_back(std::move(m));
    }
  }
  log.measurement_hash = hash;

  const auto* bearing_model = dynamic_cast<const BearingSensorModel*>(&model);

  Rng central_rng = make_rng(cfg.seed, {r, kCentralStream});
  ParticleSet central = sample_prior(setup.initial_state, setup.prior_cov,
                                     cfg.n_particles_central, central_rng);
  bool central_alive = true;

  Rng standalone_rng = make_rng(cfg.seed, {r, kStandaloneStream});
  ParticleSet standalone = sample_prior(setup.initial_state, setup.prior_cov,
                                        cfg.n_particles_standalone, standalone_rng);
  bool standalone_alive = true;

  std::vector<Rng> local_rngs;
  std::vector<ParticleSet> local;
  for (int l = 0; l < n; ++l) {
    local_rngs.push_back(make_rng(cfg.seed, {r, kLocalStream, static_cast<std::uint64_t>(l)}));
    local.push_back(sample_prior(setup.initial_state, setup.prior_cov, cfg.n_particles_local,
                                 local_rngs.back()));
  }
  std::vector<std::vector<LocalSummaries>> history(steps + 1, std::vector<LocalSummaries>(n));

  std::vector<VariantRun> variants;
  const auto names = fused_variant_names(cfg);
  for (std::size_t v = 0; v < names.size(); ++v) {
    VariantRun vr;
    vr.name = names[v];
    vr.modified = v >= cfg.proposals.size();
    vr.kind = vr.modified ? ProposalKind::product : cfg.proposals[v];
    vr.events = schedule_multirate(cfg.schedule,
                                   vr.modified ? FusionMode::modified : FusionMode::standard, steps);
    for (int l = 0; l < n; ++l) {
      vr.rngs.push_back(make_rng(cfg.seed, {r, kFusionStream, static_cast<std::uint64_t>(v),
                                            static_cast<std::uint64_t>(l)}));
      vr.states.push_back(init_fusion_state(
          sample_prior(setup.initial_state, setup.prior_cov, cfg.n_particles_fusion,
                       vr.rngs.back()),
          l));
    }
    variants.push_back(std::move(vr));
  }

  for (int k = 1; k <= steps; ++k) {
    StepRecord rec;
    rec.k = k;
    rec.truth = truth[k];
    for (const auto& m : z[k]) rec.measurements.push_back(m.value);

    if (central_alive) {
      try {
        rec.central = filter_step(central, z[k], model, central_rng, policy, -1);
      } catch (const DivergenceError&) {
        central_alive = false;
        log.divergences.push_back({"central", -1, k});
      }
    }
    if (standalone_alive) {
      try {
        const std::span<const Measurement> own(&z[k][cfg.standalone_node], 1);
        rec.standalone = filter_step(standalone, own, model, standalone_rng, policy,
                                     cfg.standalone_node);
      } catch (const DivergenceError&) {
        standalone_alive = false;
        log.divergences.push_back({"standalone", cfg.standalone_node, k});
      }
    }

    for (int l = 0; l < n; ++l) {
      ParticleSet pred = sample_prediction(local[l], model, local_rngs[l]);
      history[k][l].prediction = summarize(pred, l);
      const std::span<const Measurement> own(&z[k][l], 1);
      try {
        apply_likelihood(pred, own, model, l);
      } catch (const DivergenceError&) {
        // Keep the node running on its prediction cloud.
        log.divergences.push_back({"local", l, k});
        pred.log_weights.setConstant(-std::log(static_cast<double>(pred.size())));
        pred.kind = DensityKind::filtering;
      }
      history[k][l].filtering = summarize(pred, l);
      rec.local.push_back(history[k][l].filtering.mean);
      resample_if_degenerate(pred, local_rngs[l], policy);
      local[l] = std::move(pred);

      if (bearing_model != nullptr) {
        const double b = bearing(truth[k], bearing_model->sensors()[l]);
        const double var = bearing_model->glint().variance(bearing_model->range(l, truth[k]));
        rec.snr_db.push_back(10.0 * std::log10(std::max(b * b, 1e-300) / var));
      }
    }

    for (auto& v : variants) {
      while (v.alive && v.next_event < v.events.size() &&
             v.events[v.next_event].available == k) {
        const FusionEvent& e = v.events[v.next_event++];
        FusionRecord fr;
        fr.variant = v.name;
        fr.k = e.to_index;
        fr.lag = e.lag;
        fr.start_time = e.start_time;
        try {
          std::vector<FusionStepInfo> info;
          std::vector<FusedSummaries> fused;
          if (v.modified) {
            std::vector<std::vector<LocalSummaries>> buffer(n);
            for (int l = 0; l < n; ++l) {
              for (int i = e.from_index + e.skipped + 1; i <= e.to_index; ++i) {
                buffer[l].push_back(history[i][l]);
              }
            }
            v.states = modified_fusion_filter_step(v.states, buffer, setup.consensus,
                                                   setup.consensus_budget, model, v.rngs, policy,
                                                   e.skipped, &info, &fused);
          } else {
            const auto& locals = history[e.to_index];
            fused = consensus_product(locals, setup.consensus, setup.consensus_budget);
            info.resize(n);
            for (int l = 0; l < n; ++l) {
              v.states[l] = fusion_update(v.states[l], fused[l], locals[l].prediction, v.kind,
                                          model, v.rngs[l], policy, &info[l]);
            }
          }
          fr.disagreement = fused.front().disagreement;
          fr.min_ess = info.front().ess;
          for (int l = 0; l < n; ++l) {
            fr.estimates.push_back(fused_estimate(v.states[l]));
            fr.fallbacks += info[l].fell_back ? 1 : 0;
            fr.min_ess = std::min(fr.min_ess, info[l].ess);
          }
          log.fusion.push_back(std::move(fr));
        } catch (const Error& err) {
          const auto* div = dynamic_cast<const DivergenceError*>(&err);
          log.divergences.push_back({v.name, div != nullptr ? div->node() : -1, e.to_index});
          v.alive = false;
        }
      }
    }
    log.steps.push_back(std::move(rec));
  }
  return log;
}

PcrlbRun run_scenario_pcrlb(const ScenarioConfig& cfg, const ScenarioSetup& setup) {
  ExpectationConfig expectation = cfg.pcrlb.expectation;
  expectation.seed = derive_seed(cfg.seed, {kPcrlbStream});
  return run_pcrlb(*setup.model, setup.initial_state, setup.prior_cov, cfg.n_steps, expectation,
                   cfg.pcrlb.tharmarasa_nodes);
}

}  // namespace cfdpf
