// Command-line driver: simulate, montecarlo, pcrlb, graph.
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cfdpf/harness.hpp"

namespace {

using cfdpf::Error;
namespace fs = std::filesystem;

int report_error(const std::string& code, const std::string& message) {
  nlohmann::json rec = {{"error", code}, {"message", message}};
  std::cerr << rec.dump() << "\n";
  return 2;
}

std::set<std::string> split_list(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

void simulate(const fs::path& config_path, const fs::path& out, int run) {
  const auto cfg = cfdpf::load_config(config_path);
  const auto setup = cfdpf::build_setup(cfg);
  const auto log = cfdpf::run_scenario(cfg, setup, run);
  cfdpf::write_text(out / "run_log.json", cfdpf::run_log_to_json(log).dump(1) + "\n");
  cfdpf::write_text(out / "run_log.csv", cfdpf::run_log_to_csv(log));
  const auto report = cfdpf::aggregate(cfg, {log});
  cfdpf::write_text(out / "metrics.csv", cfdpf::report_to_csv(report));
  cfdpf::write_text(out / "summary.csv", cfdpf::summary_to_csv(report));
  std::cout << "run " << run << ": N_c " << cfdpf::format_double(log.convergence_time)
            << ", consensus budget " << log.consensus_budget << ", measurement hash "
            << log.measurement_hash << "\n";
}

void montecarlo(const fs::path& config_path, const fs::path& out, int runs) {
  const auto cfg = cfdpf::load_config(config_path);
  const auto report = cfdpf::monte_carlo(cfg, runs > 0 ? runs : cfg.mc_runs);
  cfdpf::write_text(out / "metrics.csv", cfdpf::report_to_csv(report));
  cfdpf::write_text(out / "summary.csv", cfdpf::summary_to_csv(report));
  cfdpf::write_text(out / "cdf.csv", cfdpf::cdf_to_csv(report));
  cfdpf::write_text(out / "report.json", cfdpf::report_to_json(report).dump(1) + "\n");
  for (const auto& m : report.methods) {
    std::cout << m << " " << cfdpf::format_double(report.time_averaged_rms.at(m)) << "\n";
  }
}

void bounds(const fs::path& config_path, const fs::path& out, const std::string& variants) {
  const auto cfg = cfdpf::load_config(config_path);
  const auto setup = cfdpf::build_setup(cfg);
  auto run = cfdpf::run_scenario_pcrlb(cfg, setup);
  const auto wanted = split_list(variants);
  for (const auto& v : wanted) {
    if (v != "exact" && v != "central" && v != "tharmarasa" && v != "sum") {
      throw Error("usage", "unknown bound variant '" + v + "'");
    }
  }
  std::erase_if(run.points, [&](const cfdpf::BoundPoint& p) {
    const std::string family = p.variant.rfind("tharmarasa", 0) == 0 ? "tharmarasa" : p.variant;
    return !wanted.count(family);
  });
  cfdpf::write_text(out / "bounds.csv", cfdpf::bounds_to_csv(run));
}

void graph(int n, double radius, double side, std::uint64_t seed, const fs::path& out) {
  cfdpf::Rng rng(seed);
  if (n < 2) throw Error("usage", "--n must be at least 2");
  const double r = radius > 0.0 ? radius : cfdpf::default_connectivity_radius(n, side);
  const auto g = cfdpf::random_geometric_graph(n, r, side, rng);
  const auto u = cfdpf::metropolis_weights(g);
  cfdpf::write_text(out, cfdpf::graph_to_json(g, &u).dump(1) + "\n");
  std::cout << "N_c " << cfdpf::format_double(u.convergence_time) << ", edges " << g.edge_count()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consensus/fusion distributed particle filter simulator"};
  app.require_subcommand(1);

  std::string config, out, variants = "exact,central,tharmarasa,sum";
  int runs = 0, run = 0, n = 20;
  double radius = 0.0, side = 16.0;
  std::uint64_t seed = 1;

  auto* sim = app.add_subcommand("simulate", "Run one scenario realization");
  sim->add_option("--config", config, "Scenario JSON")->required();
  sim->add_option("--out", out, "Output directory")->required();
  sim->add_option("--run", run, "Monte-Carlo run index");

  auto* mc = app.add_subcommand("montecarlo", "Run a Monte-Carlo batch");
  mc->add_option("--config", config, "Scenario JSON")->required();
  mc->add_option("--out", out, "Output directory")->required();
  mc->add_option("--runs", runs, "Number of runs (default: config mc_runs)");

  auto* pc = app.add_subcommand("pcrlb", "Compute the information bounds");
  pc->add_option("--config", config, "Scenario JSON")->required();
  pc->add_option("--out", out, "Output directory")->required();
  pc->add_option("--variants", variants, "Comma list of exact,central,tharmarasa,sum");

  auto* gr = app.add_subcommand("graph", "Generate a connected random geometric graph");
  gr->add_option("--n", n, "Number of nodes");
  gr->add_option("--radius", radius, "Connectivity radius (default sqrt(2 log N / N) * side)");
  gr->add_option("--side", side, "Region side");
  gr->add_option("--seed", seed, "Seed");
  gr->add_option("--out", out, "Output JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("usage", e.what());
  }

  try {
    if (*sim) simulate(config, out, run);
    if (*mc) montecarlo(config, out, runs);
    if (*pc) bounds(config, out, variants);
    if (*gr) graph(n, radius, side, seed, out);
  } catch (const Error& e) {
    return report_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
  return 0;
}
