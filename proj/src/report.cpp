#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "cfdpf/harness.hpp"

namespace cfdpf {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double squared_position_error(const Vector& estimate, const Vector& truth,
                              const std::vector<int>& pos) {
  double s = 0.0;
  for (int i : pos) s += (estimate(i) - truth(i)) * (estimate(i) - truth(i));
  return s;
}

json vec_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vec_from(const json& a) {
  Vector v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v(i) = a[i].is_null() ? kNaN : a[i].get<double>();
  return v;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_from(const json& v) { return v.is_null() ? kNaN : v.get<double>(); }

std::vector<std::string> method_order(const ScenarioConfig& cfg) {
  std::vector<std::string> methods{"central"};
  for (const auto& n : fused_variant_names(cfg)) methods.push_back(n);
  methods.emplace_back("local");
  methods.emplace_back("standalone");
  return methods;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::map<std::string, std::map<int, double>> squared_position_errors(const RunLog& log) {
  std::map<std::string, std::map<int, double>> out;
  const auto& pos = log.position_indices;
  std::map<int, const Vector*> truth;
  for (const auto& s : log.steps) {
    truth[s.k] = &s.truth;
    if (s.central) out["central"][s.k] = squared_position_error(*s.central, s.truth, pos);
    if (s.standalone) out["standalone"][s.k] = squared_position_error(*s.standalone, s.truth, pos);
    if (!s.local.empty()) {
      double acc = 0.0;
      for (const auto& e : s.local) acc += squared_position_error(e, s.truth, pos);
      out["local"][s.k] = acc / static_cast<double>(s.local.size());
    }
  }
  for (const auto& f : log.fusion) {
    auto it = truth.find(f.k);
    if (it == truth.end() || f.estimates.empty()) continue;
    double acc = 0.0;
    for (const auto& e : f.estimates) acc += squared_position_error(e, *it->second, pos);
    out[f.variant][f.k] = acc / static_cast<double>(f.estimates.size());
  }
  return out;
}

MetricReport aggregate(const ScenarioConfig& cfg, const std::vector<RunLog>& logs) {
  MetricReport rep;
  rep.scenario = cfg.name;
  rep.runs = static_cast<int>(logs.size());
  rep.methods = method_order(cfg);
  for (int k = 1; k <= cfg.n_steps; ++k) rep.steps.push_back(k);

  std::map<std::string, std::vector<double>> sums;
  for (const auto& m : rep.methods) {
    sums[m].assign(rep.steps.size(), 0.0);
    rep.counts[m].assign(rep.steps.size(), 0);
    rep.exclusion_rate[m] = 0.0;
  }
  for (const auto& log : logs) {
    rep.measurement_hashes.push_back(log.measurement_hash);
    std::set<std::string> diverged;
    for (const auto& d : log.divergences) diverged.insert(d.method);
    const auto errors = squared_position_errors(log);
    for (const auto& m : rep.methods) {
      if (diverged.count(m)) {
        rep.exclusion_rate[m] += 1.0;
        continue;
      }
      auto it = errors.find(m);
      if (it == errors.end()) continue;
      for (const auto& [k, e] : it->second) {
        if (k < 1 || k > cfg.n_steps) continue;
        sums[m][k - 1] += e;
        rep.counts[m][k - 1] += 1;
      }
    }
  }
  for (const auto& m : rep.methods) {
    auto& rms = rep.rms[m];
    rms.assign(rep.steps.size(), kNaN);
    double acc = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < rep.steps.size(); ++i) {
      if (rep.counts[m][i] > 0) {
        rms[i] = std::sqrt(sums[m][i] / rep.counts[m][i]);
        acc += rms[i];
        ++used;
      }
    }
    rep.time_averaged_rms[m] = used > 0 ? acc / used : kNaN;
    if (rep.runs > 0) rep.exclusion_rate[m] /= rep.runs;
  }

  for (const auto& point : cfg.cdf) {
    std::vector<std::string> cdf_methods{"central"};
    for (const auto& n : fused_variant_names(cfg)) cdf_methods.push_back(n);
    for (const auto& m : cdf_methods) {
      CdfSamples c;
      c.method = m;
      c.coordinate = point.coordinate;
      c.k = point.k;
      for (const auto& log : logs) {
        if (m == "central") {
          for (const auto& s : log.steps) {
            if (s.k == point.k && s.central && point.coordinate < s.central->size()) {
              c.values.push_back((*s.central)(point.coordinate));
            }
          }
        } else {
          for (const auto& f : log.fusion) {
            if (f.variant == m && f.k == point.k && !f.estimates.empty() &&
                point.coordinate < f.estimates.front().size()) {
              c.values.push_back(f.estimates.front()(point.coordinate));
            }
          }
        }
      }
      std::sort(c.values.begin(), c.values.end());
      rep.cdf.push_back(std::move(c));
    }
  }
  return rep;
}

MetricReport monte_carlo(const ScenarioConfig& cfg, int runs) {
  if (runs < 1) throw Error("config", "runs must be at least 1");
  const ScenarioSetup setup = build_setup(cfg);
  std::vector<RunLog> logs;
  logs.reserve(runs);
  for (int r = 0; r < runs; ++r) logs.push_back(run_scenario(cfg, setup, r));
  return aggregate(cfg, logs);
}

json run_log_to_json(const RunLog& log) {
  json steps = json::array();
  for (const auto& s : log.steps) {
    json local = json::array();
    for (const auto& e : s.local) local.push_back(vec_json(e));
    json snr = json::array();
    for (double v : s.snr_db) snr.push_back(number_or_null(v));
    json meas = json::array();
    for (const auto& m : s.measurements) meas.push_back(vec_json(m));
    steps.push_back({{"k", s.k},
                     {"truth", vec_json(s.truth)},
                     {"measurements", meas},
                     {"central", s.central ? vec_json(*s.central) : json(nullptr)},
                     {"standalone", s.standalone ? vec_json(*s.standalone) : json(nullptr)},
                     {"local", local},
                     {"snr_db", snr}});
  }
  json fusion = json::array();
  for (const auto& f : log.fusion) {
    json est = json::array();
    for (const auto& e : f.estimates) est.push_back(vec_json(e));
    fusion.push_back({{"variant", f.variant},
                      {"k", f.k},
                      {"lag", f.lag},
                      {"start_time", f.start_time},
                      {"estimates", est},
                      {"disagreement", number_or_null(f.disagreement)},
                      {"fallbacks", f.fallbacks},
                      {"min_ess", number_or_null(f.min_ess)}});
  }
  json divergences = json::array();
  for (const auto& d : log.divergences) {
    divergences.push_back({{"method", d.method}, {"node", d.node}, {"k", d.k}});
  }
  return {{"scenario", log.scenario},
          {"run", log.run},
          {"seed", log.seed},
          {"measurement_hash", log.measurement_hash},
          {"convergence_time", number_or_null(log.convergence_time)},
          {"consensus_budget", log.consensus_budget},
          {"position_indices", log.position_indices},
          {"steps", steps},
          {"fusion", fusion},
          {"divergences", divergences}};
}

RunLog run_log_from_json(const json& doc) {
  RunLog log;
  log.scenario = doc.at("scenario").get<std::string>();
  log.run = doc.at("run").get<int>();
  log.seed = doc.at("seed").get<std::uint64_t>();
  log.measurement_hash = doc.at("measurement_hash").get<std::uint64_t>();
  log.convergence_time = number_from(doc.at("convergence_time"));
  log.consensus_budget = doc.at("consensus_budget").get<int>();
  log.position_indices = doc.at("position_indices").get<std::vector<int>>();
  for (const auto& s : doc.at("steps")) {
    StepRecord r;
    r.k = s.at("k").get<int>();
    r.truth = vec_from(s.at("truth"));
    for (const auto& m : s.at("measurements")) r.measurements.push_back(vec_from(m));
    if (!s.at("central").is_null()) r.central = vec_from(s.at("central"));
    if (!s.at("standalone").is_null()) r.standalone = vec_from(s.at("standalone"));
    for (const auto& e : s.at("local")) r.local.push_back(vec_from(e));
    for (const auto& v : s.at("snr_db")) r.snr_db.push_back(number_from(v));
    log.steps.push_back(std::move(r));
  }
  for (const auto& f : doc.at("fusion")) {
    FusionRecord r;
    r.variant = f.at("variant").get<std::string>();
    r.k = f.at("k").get<int>();
    r.lag = f.at("lag").get<int>();
    r.start_time = f.at("start_time").get<double>();
    for (const auto& e : f.at("estimates")) r.estimates.push_back(vec_from(e));
    r.disagreement = number_from(f.at("disagreement"));
    r.fallbacks = f.at("fallbacks").get<int>();
    r.min_ess = number_from(f.at("min_ess"));
    log.fusion.push_back(std::move(r));
  }
  for (const auto& d : doc.at("divergences")) {
    log.divergences.push_back(
        {d.at("method").get<std::string>(), d.at("node").get<int>(), d.at("k").get<int>()});
  }
  return log;
}

json report_to_json(const MetricReport& rep) {
  json rms = json::object(), counts = json::object(), avg = json::object(),
       excl = json::object();
  for (const auto& m : rep.methods) {
    json series = json::array();
    for (double v : rep.rms.at(m)) series.push_back(number_or_null(v));
    rms[m] = series;
    counts[m] = rep.counts.at(m);
    avg[m] = number_or_null(rep.time_averaged_rms.at(m));
    excl[m] = rep.exclusion_rate.at(m);
  }
  json cdf = json::array();
  for (const auto& c : rep.cdf) {
    cdf.push_back(
        {{"method", c.method}, {"coordinate", c.coordinate}, {"k", c.k}, {"values", c.values}});
  }
  return {{"scenario", rep.scenario},
          {"runs", rep.runs},
          {"methods", rep.methods},
          {"steps", rep.steps},
          {"rms", rms},
          {"counts", counts},
          {"time_averaged_rms", avg},
          {"exclusion_rate", excl},
          {"cdf", cdf},
          {"measurement_hashes", rep.measurement_hashes}};
}

MetricReport report_from_json(const json& doc) {
  MetricReport rep;
  rep.scenario = doc.at("scenario").get<std::string>();
  rep.runs = doc.at("runs").get<int>();
  rep.methods = doc.at("methods").get<std::vector<std::string>>();
  rep.steps = doc.at("steps").get<std::vector<int>>();
  for (const auto& m : rep.methods) {
    std::vector<double> series;
    for (const auto& v : doc.at("rms").at(m)) series.push_back(number_from(v));
    rep.rms[m] = series;
    rep.counts[m] = doc.at("counts").at(m).get<std::vector<int>>();
    rep.time_averaged_rms[m] = number_from(doc.at("time_averaged_rms").at(m));
    rep.exclusion_rate[m] = doc.at("exclusion_rate").at(m).get<double>();
  }
  for (const auto& c : doc.at("cdf")) {
    rep.cdf.push_back({c.at("method").get<std::string>(), c.at("coordinate").get<int>(),
                       c.at("k").get<int>(), c.at("values").get<std::vector<double>>()});
  }
  rep.measurement_hashes = doc.at("measurement_hashes").get<std::vector<std::uint64_t>>();
  return rep;
}

std::string report_to_csv(const MetricReport& rep) {
  std::string out = "k,method,rms,count\n";
  for (const auto& m : rep.methods) {
    const auto& rms = rep.rms.at(m);
    const auto& counts = rep.counts.at(m);
    for (std::size_t i = 0; i < rep.steps.size(); ++i) {
      out += std::to_string(rep.steps[i]) + "," + m + "," + format_double(rms[i]) + "," +
             std::to_string(counts[i]) + "\n";
    }
  }
  return out;
}

std::string summary_to_csv(const MetricReport& rep) {
  std::string out = "method,time_averaged_rms,exclusion_rate\n";
  for (const auto& m : rep.methods) {
    out += m + "," + format_double(rep.time_averaged_rms.at(m)) + "," +
           format_double(rep.exclusion_rate.at(m)) + "\n";
  }
  return out;
}

std::string cdf_to_csv(const MetricReport& rep) {
  std::string out = "method,coordinate,k,rank,value\n";
  for (const auto& c : rep.cdf) {
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      out += c.method + "," + std::to_string(c.coordinate) + "," + std::to_string(c.k) + "," +
             std::to_string(i + 1) + "," + format_double(c.values[i]) + "\n";
    }
  }
  return out;
}

std::string run_log_to_csv(const RunLog& log) {
  const long dim = log.steps.empty() ? 0 : log.steps.front().truth.size();
  std::string out = "k,method,node";
  for (long i = 0; i < dim; ++i) out += ",x" + std::to_string(i);
  out += "\n";
  auto row = [&](int k, const std::string& method, int node, const Vector& v) {
    out += std::to_string(k) + "," + method + "," + std::to_string(node);
    for (int i = 0; i < v.size(); ++i) out += "," + format_double(v(i));
    out += "\n";
  };
  for (const auto& s : log.steps) {
    row(s.k, "truth", -1, s.truth);
    if (s.central) row(s.k, "central", -1, *s.central);
    if (s.standalone) row(s.k, "standalone", -1, *s.standalone);
    for (std::size_t l = 0; l < s.local.size(); ++l) {
      row(s.k, "local", static_cast<int>(l), s.local[l]);
    }
  }
  for (const auto& f : log.fusion) {
    for (std::size_t l = 0; l < f.estimates.size(); ++l) {
      row(f.k, f.variant, static_cast<int>(l), f.estimates[l]);
    }
  }
  return out;
}

std::string bounds_to_csv(const PcrlbRun& run) {
  const long dim = run.points.empty() ? 0 : run.points.front().information.rows();
  std::string out = "k,variant,position_bound";
  for (long r = 0; r < dim; ++r) {
    for (long c = 0; c < dim; ++c) out += ",j" + std::to_string(r) + std::to_string(c);
  }
  out += "\n";
  for (const auto& p : run.points) {
    out += std::to_string(p.k) + "," + p.variant + "," + format_double(p.position_bound);
    for (long r = 0; r < p.information.rows(); ++r) {
      for (long c = 0; c < p.information.cols(); ++c) {
        out += "," + format_double(p.information(r, c));
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace cfdpf
