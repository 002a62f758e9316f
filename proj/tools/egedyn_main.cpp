// Command-line laboratory for the elliptic Gaussian matrix process: seeded
// simulation of eigenvalue trajectories plus the verification batteries.
//
// Exit codes: 0 all reports pass, 1 statistical failure, 2 configuration
// error, 3 numerically degenerate spectrum (with a time/gap dump).

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "egedyn/config.hpp"
#include "egedyn/process.hpp"
#include "egedyn/report.hpp"
#include "egedyn/spectral.hpp"
#include "egedyn/spectral_stats.hpp"
#include "egedyn/suites.hpp"
#include "egedyn/threads.hpp"

namespace fs = std::filesystem;
using namespace ege;

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  require(out.good(), "failed writing " + path.string());
}

std::string full17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// compact tau label for file names: 0.5 -> "0.5", 0.0 -> "0"
std::string tau_label(double x) {
  std::string s = std::to_string(x);
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification laboratory for eigenvalue dynamics of the "
               "elliptic Gaussian matrix process"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads_flag = 0;
  std::vector<std::string> overrides;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "sample matrix paths and write tracked eigenvalue trajectories as CSV"},
      {"verify", "run the full SDE verification battery (bridges, derivatives, drift, "
                 "martingale order, quadratic variation, Vandermonde, non-collision)"},
      {"identities", "run the deterministic linear-algebra identity suite"},
      {"two-by-two", "run the 2x2 closed-form battery (drift, quadratic variation, "
                     "negative covariation, exponential law)"},
      {"stats", "run the static spectral-law checks (elliptic support, semicircle, weak "
                "non-hermiticity scaling, overlap profile)"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file merged over built-in defaults");
    sub->add_option("--seed", seed, "master seed (overrides the config document)");
    sub->add_option("--threads", threads_flag,
                    "worker threads; 0 = EGEDYN_THREADS env or hardware concurrency");
    sub->add_option("--out", out_dir, "output directory (default: current directory)");
    sub->add_option("--set", overrides,
                    "dotted-path config override KEY=VALUE, e.g. --set sim.tau=0.5; repeatable");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help exits 0; any parse failure is a config error
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();

  int exit_code = 0;
  try {
    Json cfg = default_config();
    if (!config_path.empty()) merge_config(cfg, load_config_file(config_path));
    for (const std::string& kv : overrides) apply_override(cfg, kv);
    if (sub->count("--seed") > 0) cfg["seed"] = seed;
    const int threads = resolve_threads(threads_flag);

    const fs::path out(out_dir);
    fs::create_directories(out);

    Json manifest;
    manifest["config_hash"] = config_hash(cfg);
    manifest["seed"] = cfg.at("seed");
    manifest["version"] = kVersion;
    manifest["started"] = utc_now();
    std::vector<std::string> outputs;

    if (cmd == "simulate") {
      const SimConfig sim = sim_config_from(cfg);
      TrajectoryOptions opts;
      opts.record_full_overlaps = cfg.at("simulate").at("record_full_overlaps").get<bool>();
      for (int r = 0; r < sim.replicas; ++r) {
        const Trajectory traj = simulate_trajectory(sim, std::uint64_t(r), opts);
        const std::string name = "trajectory_r" + std::to_string(r) + ".csv";
        std::ofstream os(out / name, std::ios::binary);
        require(os.good(), "cannot open " + (out / name).string() + " for writing");
        traj.write_csv(os);
        os.close();
        require(os.good(), "failed writing " + (out / name).string());
        outputs.push_back(name);
        if (traj.any_ambiguous_match)
          std::fprintf(stderr, "warning: replica %d had an ambiguous eigenvalue match; "
                               "consider a smaller sim.dt\n", r);
      }
      std::printf("wrote %d trajectory file(s) to %s\n", sim.replicas, out_dir.c_str());
    } else {
      std::vector<VerificationReport> reports;
      if (cmd == "verify")
        reports = run_verify_suite(cfg, threads);
      else if (cmd == "identities")
        reports = run_identity_suite(cfg, threads);
      else if (cmd == "two-by-two")
        reports = run_two_by_two_suite(cfg, threads);
      else
        reports = run_stats_suite(cfg, threads);

      if (cmd == "stats" && cfg.at("stats").at("export_cloud").get<bool>()) {
        StatsConfig st = stats_config_from(cfg);
        for (const double tau : cfg.at("stats").at("elliptic_taus").get<std::vector<double>>()) {
          st.tau = Hermiticity(tau);
          const std::vector<Complex> cloud = pooled_scaled_eigenvalues(st, threads);
          std::string body = "re,im\n";
          for (const Complex& z : cloud)
            body += full17(z.real()) + "," + full17(z.imag()) + "\n";
          const std::string name = "cloud_tau" + tau_label(tau) + ".csv";
          write_text(out / name, body);
          outputs.push_back(name);
        }
      }

      print_report_lines(reports);
      const std::string name = "report_" + cmd + ".json";
      write_text(out / name, reports_to_json(reports).dump(2) + "\n");
      outputs.push_back(name);
      if (!all_pass(reports)) exit_code = 1;
    }

    manifest["finished"] = utc_now();
    manifest["outputs"] = outputs;
    write_text(out / "manifest.json", manifest.dump(2) + "\n");
  } catch (const DegeneracyError& e) {
    std::fprintf(stderr, "degeneracy: %s (min_gap=%.3e at t=%.6f)\n", e.what(), e.min_gap, e.t);
    return 3;
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  return exit_code;
}
