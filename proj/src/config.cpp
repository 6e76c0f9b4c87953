#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cfdpf/harness.hpp"

namespace cfdpf {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& message) { throw Error("config", message); }

void check_keys(const json& doc, const std::string& where, std::initializer_list<const char*> keys) {
  if (!doc.is_object()) config_error(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : doc.items()) {
    if (!allowed.count(item.key())) config_error("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("invalid value for '") + key + "'");
  }
}

Vector vector_from(const json& doc, const std::string& what) {
  if (doc.is_number()) return Vector::Constant(1, doc.get<double>());
  if (!doc.is_array()) config_error(what + " must be a number or an array");
  Vector v(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) config_error(what + " must contain numbers");
    v(i) = doc[i].get<double>();
  }
  return v;
}

Matrix matrix_from(const json& doc, const std::string& what) {
  if (doc.is_number()) return Matrix::Constant(1, 1, doc.get<double>());
  if (!doc.is_array() || doc.empty() || !doc[0].is_array()) {
    config_error(what + " must be a number or an array of rows");
  }
  const auto rows = doc.size();
  const auto cols = doc[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!doc[r].is_array() || doc[r].size() != cols) config_error(what + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!doc[r][c].is_number()) config_error(what + " must contain numbers");
      m(r, c) = doc[r][c].get<double>();
    }
  }
  return m;
}

json to_json_vector(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json_matrix(const Matrix& m) {
  json a = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

GlintNoiseParams glint_from(const json& doc) {
  check_keys(doc, "glint", {"epsilon", "variance_coeffs", "inflation", "wrapped"});
  GlintNoiseParams g;
  g.epsilon = get_or(doc, "epsilon", g.epsilon);
  if (doc.contains("variance_coeffs")) {
    const Vector c = vector_from(doc.at("variance_coeffs"), "glint.variance_coeffs");
    if (c.size() != 3) config_error("glint.variance_coeffs needs three entries (a2, a1, a0)");
    g.variance_coeffs = {c(0), c(1), c(2)};
  }
  g.inflation = get_or(doc, "inflation", g.inflation);
  g.wrapped = get_or(doc, "wrapped", g.wrapped);
  if (!(g.epsilon >= 0.0 && g.epsilon <= 1.0)) config_error("glint.epsilon must lie in [0, 1]");
  if (!(g.inflation > 0.0)) config_error("glint.inflation must be positive");
  const auto& c = g.variance_coeffs;
  // sigma^2(r) > 0 for all r >= 0.
  if (!(c[2] > 0.0) || c[0] < 0.0 || (c[1] < 0.0 && c[0] <= 0.0) ||
      (c[1] < 0.0 && c[1] * c[1] >= 4.0 * c[0] * c[2])) {
    config_error("glint variance must be positive for every range");
  }
  return g;
}

json glint_to_json(const GlintNoiseParams& g) {
  return {{"epsilon", g.epsilon},
          {"variance_coeffs", {g.variance_coeffs[0], g.variance_coeffs[1], g.variance_coeffs[2]}},
          {"inflation", g.inflation},
          {"wrapped", g.wrapped}};
}

BearingConvention convention_from(const std::string& name) {
  if (name == "four_quadrant") return BearingConvention::four_quadrant;
  if (name == "single_quadrant") return BearingConvention::single_quadrant;
  config_error("unknown bearing convention '" + name + "'");
}

const char* convention_name(BearingConvention c) {
  return c == BearingConvention::four_quadrant ? "four_quadrant" : "single_quadrant";
}

const char* scenario_name(ScenarioKind s) {
  switch (s) {
    case ScenarioKind::bot: return "bot";
    case ScenarioKind::unicycle: return "unicycle";
    case ScenarioKind::linear_test: return "linear_test";
  }
  return "bot";
}

const char* topology_name(Topology t) {
  switch (t) {
    case Topology::random_geometric: return "random_geometric";
    case Topology::complete: return "complete";
    case Topology::path: return "path";
  }
  return "random_geometric";
}

void require_positive_variances(const Vector& v, const std::string& what) {
  if (v.size() == 0 || (v.array() <= 0.0).any() || !v.allFinite()) {
    config_error(what + " must be positive");
  }
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
  check_keys(doc, "config",
             {"name", "scenario", "seed", "n_nodes", "topology", "region_side", "region_origin",
              "connectivity_radius", "particles", "fusion", "schedule", "n_steps", "mc_runs",
              "standalone_node", "truth_from_prior", "bot", "unicycle", "linear", "pcrlb", "cdf"});
  ScenarioConfig cfg;
  if (!doc.contains("seed")) config_error("seed is mandatory");
  if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer()) {
    config_error("seed must be a non-negative integer");
  }
  if (doc.at("seed").is_number_integer() && doc.at("seed").get<long long>() < 0) {
    config_error("seed must be a non-negative integer");
  }
  cfg.seed = doc.at("seed").get<std::uint64_t>();
  cfg.name = get_or<std::string>(doc, "name", cfg.name);

  const auto scenario = get_or<std::string>(doc, "scenario", "bot");
  if (scenario == "bot") cfg.scenario = ScenarioKind::bot;
  else if (scenario == "unicycle") cfg.scenario = ScenarioKind::unicycle;
  else if (scenario == "linear_test") cfg.scenario = ScenarioKind::linear_test;
  else config_error("unknown scenario '" + scenario + "'");

  cfg.n_nodes = get_or(doc, "n_nodes", cfg.n_nodes);
  const auto topology = get_or<std::string>(doc, "topology", "random_geometric");
  if (topology == "random_geometric") cfg.topology = Topology::random_geometric;
  else if (topology == "complete") cfg.topology = Topology::complete;
  else if (topology == "path") cfg.topology = Topology::path;
  else config_error("unknown topology '" + topology + "'");
  cfg.region_side = get_or(doc, "region_side", cfg.region_side);
  if (doc.contains("region_origin") && !doc.at("region_origin").is_null()) {
    const Vector o = vector_from(doc.at("region_origin"), "region_origin");
    if (o.size() != 2) config_error("region_origin must have 2 entries");
    cfg.region_origin = Point2(o(0), o(1));
  }
  cfg.connectivity_radius = get_or(doc, "connectivity_radius", cfg.connectivity_radius);
  cfg.n_steps = get_or(doc, "n_steps", cfg.n_steps);
  cfg.mc_runs = get_or(doc, "mc_runs", cfg.mc_runs);
  cfg.standalone_node = get_or(doc, "standalone_node", cfg.standalone_node);
  cfg.truth_from_prior = get_or(doc, "truth_from_prior", cfg.truth_from_prior);

  if (doc.contains("particles")) {
    const auto& p = doc.at("particles");
    check_keys(p, "particles", {"central", "local", "fusion", "standalone"});
    cfg.n_particles_central = get_or(p, "central", cfg.n_particles_central);
    cfg.n_particles_local = get_or(p, "local", cfg.n_particles_local);
    cfg.n_particles_fusion = get_or(p, "fusion", cfg.n_particles_fusion);
    cfg.n_particles_standalone = get_or(p, "standalone", cfg.n_particles_central);
  } else {
    cfg.n_particles_standalone = cfg.n_particles_central;
  }

  if (doc.contains("fusion")) {
    const auto& f = doc.at("fusion");
    check_keys(f, "fusion", {"proposals", "modified", "consensus_budget", "ess_fraction"});
    if (f.contains("proposals")) {
      cfg.proposals.clear();
      for (const auto& name : f.at("proposals")) {
        cfg.proposals.push_back(proposal_from_string(name.get<std::string>()));
      }
    }
    cfg.modified = get_or(f, "modified", cfg.modified);
    cfg.consensus_budget = get_or(f, "consensus_budget", cfg.consensus_budget);
    cfg.ess_fraction = get_or(f, "ess_fraction", cfg.ess_fraction);
  }

  if (doc.contains("schedule")) {
    const auto& s = doc.at("schedule");
    check_keys(s, "schedule", {"dt_obs", "consensus_cycle", "cycle_profile", "max_lag"});
    cfg.schedule.dt_obs = get_or(s, "dt_obs", cfg.schedule.dt_obs);
    cfg.schedule.consensus_cycle = get_or(s, "consensus_cycle", cfg.schedule.consensus_cycle);
    cfg.schedule.cycle_profile =
        get_or(s, "cycle_profile", std::vector<double>{});
    cfg.schedule.max_lag = get_or(s, "max_lag", cfg.schedule.max_lag);
  }

  if (doc.contains("bot")) {
    const auto& b = doc.at("bot");
    check_keys(b, "bot",
               {"start", "speed", "course_deg", "accel", "sigma_v", "glint", "bearing",
                "prior_variances"});
    if (b.contains("start")) {
      const Vector s = vector_from(b.at("start"), "bot.start");
      if (s.size() != 2) config_error("bot.start needs two coordinates");
      cfg.bot.start = Point2(s(0), s(1));
    }
    cfg.bot.speed = get_or(b, "speed", cfg.bot.speed);
    cfg.bot.course_deg = get_or(b, "course_deg", cfg.bot.course_deg);
    cfg.bot.motion.accel = get_or(b, "accel", cfg.bot.motion.accel);
    cfg.bot.motion.sigma_v = get_or(b, "sigma_v", cfg.bot.motion.sigma_v);
    if (b.contains("glint")) cfg.bot.glint = glint_from(b.at("glint"));
    if (b.contains("bearing")) cfg.bot.convention = convention_from(b.at("bearing"));
    if (b.contains("prior_variances")) {
      cfg.bot.prior_variances = vector_from(b.at("prior_variances"), "bot.prior_variances");
      if (cfg.bot.prior_variances.size() != 4) config_error("bot.prior_variances needs 4 entries");
    }
  }

  if (doc.contains("unicycle")) {
    const auto& u = doc.at("unicycle");
    check_keys(u, "unicycle",
               {"start", "velocity_mean", "velocity_std", "angular_velocity_mean",
                "angular_velocity_std", "orientation_noise_std", "cm_per_unit", "glint",
                "bearing", "prior_variances"});
    if (u.contains("start")) {
      cfg.unicycle.start = vector_from(u.at("start"), "unicycle.start");
      if (cfg.unicycle.start.size() != 3) config_error("unicycle.start needs (x, y, theta)");
    }
    auto& m = cfg.unicycle.motion;
    m.velocity_mean = get_or(u, "velocity_mean", m.velocity_mean);
    m.velocity_std = get_or(u, "velocity_std", m.velocity_std);
    m.angular_velocity_mean = get_or(u, "angular_velocity_mean", m.angular_velocity_mean);
    m.angular_velocity_std = get_or(u, "angular_velocity_std", m.angular_velocity_std);
    m.orientation_noise_std = get_or(u, "orientation_noise_std", m.orientation_noise_std);
    m.cm_per_unit = get_or(u, "cm_per_unit", m.cm_per_unit);
    if (u.contains("glint")) cfg.unicycle.glint = glint_from(u.at("glint"));
    if (u.contains("bearing")) cfg.unicycle.convention = convention_from(u.at("bearing"));
    if (u.contains("prior_variances")) {
      cfg.unicycle.prior_variances =
          vector_from(u.at("prior_variances"), "unicycle.prior_variances");
      if (cfg.unicycle.prior_variances.size() != 3) {
        config_error("unicycle.prior_variances needs 3 entries");
      }
    }
    if (!(m.velocity_std >= 0.0) || !(m.angular_velocity_std >= 0.0) ||
        !(m.orientation_noise_std > 0.0) || !(m.cm_per_unit > 0.0)) {
      config_error("unicycle noise parameters must be non-negative");
    }
  }

  if (doc.contains("linear")) {
    const auto& l = doc.at("linear");
    check_keys(l, "linear",
               {"transition", "process_cov", "observation", "observation_cov", "initial_state",
                "prior_cov"});
    auto& lin = cfg.linear;
    lin.transition = matrix_from(l.at("transition"), "linear.transition");
    lin.process_cov = matrix_from(l.at("process_cov"), "linear.process_cov");
    for (const auto& h : l.at("observation")) {
      lin.observation.push_back(matrix_from(h, "linear.observation"));
    }
    for (const auto& r : l.at("observation_cov")) {
      lin.observation_cov.push_back(matrix_from(r, "linear.observation_cov"));
    }
    lin.initial_state = vector_from(l.at("initial_state"), "linear.initial_state");
    lin.prior_cov = matrix_from(l.at("prior_cov"), "linear.prior_cov");
  } else if (cfg.scenario == ScenarioKind::linear_test) {
    config_error("linear_test needs a 'linear' section");
  }

  if (doc.contains("pcrlb")) {
    const auto& p = doc.at("pcrlb");
    check_keys(p, "pcrlb", {"enabled", "n_trajectories", "mode", "tharmarasa_nodes"});
    cfg.pcrlb.enabled = get_or(p, "enabled", cfg.pcrlb.enabled);
    cfg.pcrlb.expectation.n_trajectories =
        get_or(p, "n_trajectories", cfg.pcrlb.expectation.n_trajectories);
    const auto mode = get_or<std::string>(p, "mode", "monte_carlo");
    if (mode == "monte_carlo") cfg.pcrlb.expectation.mode = ExpectationMode::monte_carlo;
    else if (mode == "closed_form") cfg.pcrlb.expectation.mode = ExpectationMode::closed_form_gaussian;
    else config_error("unknown pcrlb mode '" + mode + "'");
    cfg.pcrlb.tharmarasa_nodes = get_or(p, "tharmarasa_nodes", cfg.pcrlb.tharmarasa_nodes);
  }

  if (doc.contains("cdf")) {
    for (const auto& c : doc.at("cdf")) {
      check_keys(c, "cdf entry", {"coordinate", "k"});
      cfg.cdf.push_back({c.at("coordinate").get<int>(), c.at("k").get<int>()});
    }
  }

  // Cross-field validation.
  if (cfg.n_nodes < 1) config_error("n_nodes must be at least 1");
  if (cfg.topology == Topology::random_geometric && cfg.n_nodes < 2) {
    config_error("random geometric topology needs at least 2 nodes");
  }
  if (cfg.n_particles_central < 1 || cfg.n_particles_local < 1 || cfg.n_particles_fusion < 1 ||
      cfg.n_particles_standalone < 1) {
    config_error("particle counts must be at least 1");
  }
  if (cfg.n_steps < 1) config_error("n_steps must be at least 1");
  if (cfg.mc_runs < 1) config_error("mc_runs must be at least 1");
  if (cfg.consensus_budget < 0) config_error("consensus_budget must be non-negative");
  if (!(cfg.region_side > 0.0)) config_error("region_side must be positive");
  if (cfg.connectivity_radius < 0.0) config_error("connectivity_radius must be non-negative");
  if (!(cfg.ess_fraction >= 0.0 && cfg.ess_fraction <= 1.0)) {
    config_error("ess_fraction must lie in [0, 1]");
  }
  if (cfg.schedule.max_lag < 1) config_error("schedule.max_lag must be at least 1");
  if (!(cfg.schedule.dt_obs > 0.0)) config_error("schedule.dt_obs must be positive");
  if (!(cfg.schedule.consensus_cycle > 0.0)) config_error("schedule.consensus_cycle must be positive");
  for (double c : cfg.schedule.cycle_profile) {
    if (!(c > 0.0)) config_error("schedule.cycle_profile entries must be positive");
  }
  if (cfg.standalone_node < 0 || cfg.standalone_node >= cfg.n_nodes) {
    config_error("standalone_node out of range");
  }
  if (cfg.pcrlb.expectation.n_trajectories < 1) config_error("pcrlb.n_trajectories must be >= 1");
  for (int node : cfg.pcrlb.tharmarasa_nodes) {
    if (node < 0 || node >= cfg.n_nodes) config_error("pcrlb.tharmarasa_nodes out of range");
  }
  if (!(cfg.bot.speed > 0.0)) config_error("bot.speed must be positive");
  if (!(cfg.bot.motion.accel > 0.0)) config_error("bot.accel must be positive");
  if (!(cfg.bot.motion.sigma_v > 0.0)) config_error("bot.sigma_v must be positive");
  require_positive_variances(cfg.bot.prior_variances, "bot.prior_variances");
  require_positive_variances(cfg.unicycle.prior_variances, "unicycle.prior_variances");
  cfg.bot.motion.dt = cfg.schedule.dt_obs;
  cfg.unicycle.motion.dt = cfg.schedule.dt_obs;
  if (cfg.scenario == ScenarioKind::linear_test) {
    const auto& lin = cfg.linear;
    const auto n = lin.transition.rows();
    if (lin.transition.cols() != n || lin.process_cov.rows() != n || lin.process_cov.cols() != n ||
        lin.initial_state.size() != n || lin.prior_cov.rows() != n || lin.prior_cov.cols() != n) {
      config_error("linear model dimensions disagree");
    }
    const auto nh = lin.observation.size();
    const auto nr = lin.observation_cov.size();
    if (!(nh == 1 || static_cast<int>(nh) == cfg.n_nodes) ||
        !(nr == 1 || static_cast<int>(nr) == cfg.n_nodes)) {
      config_error("linear observation lists need one entry or one per node");
    }
  }
  for (const auto& c : cfg.cdf) {
    if (c.k < 1 || c.k > cfg.n_steps || c.coordinate < 0) config_error("cdf entry out of range");
  }
  return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
  json proposals = json::array();
  for (auto p : cfg.proposals) proposals.push_back(to_string(p));
  json doc = {
      {"name", cfg.name},
      {"scenario", scenario_name(cfg.scenario)},
      {"seed", cfg.seed},
      {"n_nodes", cfg.n_nodes},
      {"topology", topology_name(cfg.topology)},
      {"region_side", cfg.region_side},
      {"region_origin", cfg.region_origin ? json::array({cfg.region_origin->x(),
                                                         cfg.region_origin->y()})
                                          : json(nullptr)},
      {"connectivity_radius", cfg.connectivity_radius},
      {"truth_from_prior", cfg.truth_from_prior},
      {"particles",
       {{"central", cfg.n_particles_central},
        {"local", cfg.n_particles_local},
        {"fusion", cfg.n_particles_fusion},
        {"standalone", cfg.n_particles_standalone}}},
      {"fusion",
       {{"proposals", proposals},
        {"modified", cfg.modified},
        {"consensus_budget", cfg.consensus_budget},
        {"ess_fraction", cfg.ess_fraction}}},
      {"schedule",
       {{"dt_obs", cfg.schedule.dt_obs},
        {"consensus_cycle", cfg.schedule.consensus_cycle},
        {"cycle_profile", cfg.schedule.cycle_profile},
        {"max_lag", cfg.schedule.max_lag}}},
      {"n_steps", cfg.n_steps},
      {"mc_runs", cfg.mc_runs},
      {"standalone_node", cfg.standalone_node},
      {"bot",
       {{"start", {cfg.bot.start.x(), cfg.bot.start.y()}},
        {"speed", cfg.bot.speed},
        {"course_deg", cfg.bot.course_deg},
        {"accel", cfg.bot.motion.accel},
        {"sigma_v", cfg.bot.motion.sigma_v},
        {"glint", glint_to_json(cfg.bot.glint)},
        {"bearing", convention_name(cfg.bot.convention)},
        {"prior_variances", to_json_vector(cfg.bot.prior_variances)}}},
      {"unicycle",
       {{"start", to_json_vector(cfg.unicycle.start)},
        {"velocity_mean", cfg.unicycle.motion.velocity_mean},
        {"velocity_std", cfg.unicycle.motion.velocity_std},
        {"angular_velocity_mean", cfg.unicycle.motion.angular_velocity_mean},
        {"angular_velocity_std", cfg.unicycle.motion.angular_velocity_std},
        {"orientation_noise_std", cfg.unicycle.motion.orientation_noise_std},
        {"cm_per_unit", cfg.unicycle.motion.cm_per_unit},
        {"glint", glint_to_json(cfg.unicycle.glint)},
        {"bearing", convention_name(cfg.unicycle.convention)},
        {"prior_variances", to_json_vector(cfg.unicycle.prior_variances)}}},
      {"pcrlb",
       {{"enabled", cfg.pcrlb.enabled},
        {"n_trajectories", cfg.pcrlb.expectation.n_trajectories},
        {"mode", cfg.pcrlb.expectation.mode == ExpectationMode::monte_carlo ? "monte_carlo"
                                                                            : "closed_form"},
        {"tharmarasa_nodes", cfg.pcrlb.tharmarasa_nodes}}},
  };
  if (cfg.scenario == ScenarioKind::linear_test) {
    json obs = json::array(), obs_cov = json::array();
    for (const auto& h : cfg.linear.observation) obs.push_back(to_json_matrix(h));
    for (const auto& r : cfg.linear.observation_cov) obs_cov.push_back(to_json_matrix(r));
    doc["linear"] = {{"transition", to_json_matrix(cfg.linear.transition)},
                     {"process_cov", to_json_matrix(cfg.linear.process_cov)},
                     {"observation", obs},
                     {"observation_cov", obs_cov},
                     {"initial_state", to_json_vector(cfg.linear.initial_state)},
                     {"prior_cov", to_json_matrix(cfg.linear.prior_cov)}};
  }
  json cdf = json::array();
  for (const auto& c : cfg.cdf) cdf.push_back({{"coordinate", c.coordinate}, {"k", c.k}});
  doc["cdf"] = cdf;
  return doc;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("config", path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("io", path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("io", "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cfdpf
