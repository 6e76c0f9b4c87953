#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cfdpf/consensus.hpp"
#include "cfdpf/fusion.hpp"
#include "cfdpf/pcrlb.hpp"
#include "cfdpf/ssm.hpp"

namespace cfdpf {

enum class ScenarioKind { bot, unicycle, linear_test };
enum class Topology { random_geometric, complete, path };

struct ScheduleConfig {
  double dt_obs = 1.0;
  /// Duration of one fusion step as a multiple of dt_obs.
  double consensus_cycle = 1.0;
  /// Optional per-index override of consensus_cycle, indexed by the local
  /// index at which the step starts (entry 0 is index 1).
  std::vector<double> cycle_profile;
  int max_lag = 2;
};

struct BotConfig {
  Point2 start{3.0, 6.0};
  double speed = 0.49;        // units/s
  double course_deg = -140.0; // clockwise from +y
  CoordinatedTurnParams motion;
  GlintNoiseParams glint;
  BearingConvention convention = BearingConvention::four_quadrant;
  Vector prior_variances = (Vector(4) << 1.0, 1.0, 0.1, 0.1).finished();
};

struct UnicycleConfig {
  Vector start = (Vector(3) << 3.0, 6.0, 0.0).finished();
  UnicycleParams motion;
  GlintNoiseParams glint;
  BearingConvention convention = BearingConvention::four_quadrant;
  Vector prior_variances = (Vector(3) << 1.0, 1.0, 0.05).finished();
};

struct LinearConfig {
  Matrix transition;
  Matrix process_cov;
  std::vector<Matrix> observation;      // per node; one entry is shared by all nodes
  std::vector<Matrix> observation_cov;  // per node; one entry is shared by all nodes
  Vector initial_state;
  Matrix prior_cov;
};

struct CdfPoint {
  int coordinate = 0;
  int k = 0;
};

struct PcrlbConfig {
  bool enabled = true;
  ExpectationConfig expectation;
  std::vector<int> tharmarasa_nodes{0, 1};
};

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioKind scenario = ScenarioKind::bot;
  int n_nodes = 8;
  Topology topology = Topology::random_geometric;
  double region_side = 16.0;
  // Lower-left corner of the sensor square; unset centres the square on the origin.
  std::optional<Point2> region_origin;
  double connectivity_radius = 0.0;  // 0 selects side * sqrt(2 log N / N)
  int n_particles_central = 2000;
  int n_particles_local = 200;
  int n_particles_fusion = 200;
  int n_particles_standalone = 2000;
  std::vector<ProposalKind> proposals{ProposalKind::sir, ProposalKind::product,
                                      ProposalKind::optimal_gaussian};
  bool modified = false;
  ScheduleConfig schedule;
  int consensus_budget = 0;  // 0 selects ceil(30 N_c), at least 1
  int n_steps = 30;
  int mc_runs = 25;
  std::uint64_t seed = 0;
  int standalone_node = 0;
  double ess_fraction = 0.5;
  // Draw each run's true initial state from the filters' prior; false starts
  // the truth at the prior mean.
  bool truth_from_prior = true;
  BotConfig bot;
  UnicycleConfig unicycle;
  LinearConfig linear;
  PcrlbConfig pcrlb;
  std::vector<CdfPoint> cdf;
};

ScenarioConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Network, model and prior built from a config. The network depends only on
/// the master seed, so every Monte-Carlo run shares it.
struct ScenarioSetup {
  NetworkGraph graph;
  ConsensusMatrix consensus;
  int consensus_budget = 1;
  std::shared_ptr<StateSpaceModel> model;
  Vector initial_state;
  Matrix prior_cov;
};

ScenarioSetup build_setup(const ScenarioConfig& cfg);

/// Initial BOT state from start position, speed and course.
Vector bot_initial_state(const BotConfig& bot);

enum class FusionMode { standard, modified };

/// One fusion step on the continuous clock. Local index k is ready at t = k.
struct FusionEvent {
  double start_time = 0.0;
  double end_time = 0.0;
  int available = 0;  // newest local index when the step starts
  int from_index = 0; // fusion index before the step
  int to_index = 0;   // fusion index after the step
  int skipped = 0;    // indices propagated without their summaries
  int lag = 0;        // available - from_index, the m(k) of the step
};

std::vector<FusionEvent> schedule_multirate(const ScheduleConfig& schedule, FusionMode mode,
                                            int n_steps);

/// Backlog sizes of successive catch-up rounds for the one-index-per-step
/// fusion filter: each round fuses everything that was pending when it began.
std::vector<int> catch_up_rounds(const ScheduleConfig& schedule, int n_steps);

struct StepRecord {
  int k = 0;
  Vector truth;
  std::vector<Vector> measurements;  // per node
  std::optional<Vector> central;
  std::optional<Vector> standalone;
  std::vector<Vector> local;     // per node filtering mean
  std::vector<double> snr_db;    // per node
};

struct FusionRecord {
  std::string variant;
  int k = 0;  // fused index
  int lag = 0;
  double start_time = 0.0;
  std::vector<Vector> estimates;  // per node
  double disagreement = 0.0;
  int fallbacks = 0;
  double min_ess = 0.0;
};

struct DivergenceRecord {
  std::string method;
  int node = -1;
  int k = 0;
};

struct RunLog {
  std::string scenario;
  int run = 0;
  std::uint64_t seed = 0;
  std::uint64_t measurement_hash = 0;
  double convergence_time = 0.0;
  int consensus_budget = 0;
  std::vector<int> position_indices;
  std::vector<StepRecord> steps;
  std::vector<FusionRecord> fusion;
  std::vector<DivergenceRecord> divergences;
};

std::vector<std::string> fused_variant_names(const ScenarioConfig& cfg);

/// One Monte-Carlo run: truth, measurements, centralized, local, fused and
/// stand-alone filters. Deterministic in (cfg.seed, run).
RunLog run_scenario(const ScenarioConfig& cfg, const ScenarioSetup& setup, int run = 0);
RunLog run_scenario(const ScenarioConfig& cfg, int run = 0);

/// Position error per method and k of one run; missing estimates are absent.
std::map<std::string, std::map<int, double>> squared_position_errors(const RunLog& log);

struct CdfSamples {
  std::string method;
  int coordinate = 0;
  int k = 0;
  std::vector<double> values;  // sorted
};

struct MetricReport {
  std::string scenario;
  int runs = 0;
  std::vector<std::string> methods;
  std::vector<int> steps;
  // rms[method][i] over runs at steps[i]; NaN where no run produced an estimate.
  std::map<std::string, std::vector<double>> rms;
  std::map<std::string, std::vector<int>> counts;
  std::map<std::string, double> time_averaged_rms;
  std::map<std::string, double> exclusion_rate;
  std::vector<CdfSamples> cdf;
  std::vector<std::uint64_t> measurement_hashes;
};

MetricReport aggregate(const ScenarioConfig& cfg, const std::vector<RunLog>& logs);
MetricReport monte_carlo(const ScenarioConfig& cfg, int runs);

nlohmann::json run_log_to_json(const RunLog& log);
RunLog run_log_from_json(const nlohmann::json& doc);
nlohmann::json report_to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& doc);

/// Columns: k, method, rms, count.
std::string report_to_csv(const MetricReport& report);
/// Columns: method, time_averaged_rms, exclusion_rate.
std::string summary_to_csv(const MetricReport& report);
/// Columns: method, coordinate, k, rank, value.
std::string cdf_to_csv(const MetricReport& report);
/// Columns: k, method, node, x0..x{n-1}; truth rows use node -1.
std::string run_log_to_csv(const RunLog& log);
/// Columns: k, variant, position_bound, J row-major.
std::string bounds_to_csv(const PcrlbRun& run);

PcrlbRun run_scenario_pcrlb(const ScenarioConfig& cfg, const ScenarioSetup& setup);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace cfdpf
