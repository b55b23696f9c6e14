// Batch driver: run experiment suites from a JSON configuration, emit the
// JSON report plus CSV plot data, or validate a configuration file.
// Exit codes: 0 pass, 1 check failure, 2 configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "arveson/config.hpp"
#include "arveson/report.hpp"
#include "arveson/suites.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw arveson::ConfigError("", "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonFlags {
  std::string config_path;
  std::string suite;
  std::string out_dir;
  long long seed = -1;
  int threads = 0;
};

arveson::ExperimentConfig load(const CommonFlags& flags) {
  arveson::ExperimentConfig cfg =
      arveson::parse_config_text(read_file(flags.config_path));
  if (!flags.suite.empty()) cfg.suite = flags.suite;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.seed >= 0) cfg.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.threads > 0) {
    cfg.threads = flags.threads;
  } else if (const char* env = std::getenv("ARVESON_KIT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) cfg.threads = t;
  }
  static const char* kSuites[] = {"spectra", "classify", "duality",
                                  "gns",     "qft",      "all"};
  bool ok = false;
  for (const char* s : kSuites)
    if (cfg.suite == s) ok = true;
  if (!ok) throw arveson::ConfigError("/suite", "unknown suite '" + cfg.suite + "'");
  return cfg;
}

int cmd_run(const CommonFlags& flags) {
  const arveson::ExperimentConfig cfg = load(flags);
  const arveson::SuiteReport rep = arveson::run_suite(cfg);
  const std::filesystem::path out_dir = cfg.out_dir;
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path report_path = out_dir / "report.json";
  arveson::write_text_file(report_path, arveson::report_text(rep));
  for (const char* kind : {"ergodic", "l1", "spectrum"}) {
    try {
      arveson::emit_plots(rep.doc, kind, out_dir);
    } catch (const arveson::MissingCurve&) {
      // A suite selection may legitimately produce no curves of this kind.
    }
  }
  std::cerr << "report: " << report_path.string() << "\n";
  if (!rep.pass) {
    std::cerr << "FAIL:";
    for (const auto& id : rep.failing) std::cerr << " " << id;
    std::cerr << "\n";
    return 1;
  }
  std::cerr << "PASS\n";
  return 0;
}

int cmd_validate(const CommonFlags& flags) {
  load(flags);
  std::cerr << "config ok\n";
  return 0;
}

int cmd_plot(const std::string& report_path, const std::string& kind,
             const std::string& out_dir) {
  arveson::ordered_json doc;
  std::ifstream in(report_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open report: " << report_path << "\n";
    return 1;
  }
  try {
    in >> doc;
  } catch (const std::exception& e) {
    std::cerr << "error: malformed report: " << e.what() << "\n";
    return 1;
  }
  const auto written = arveson::emit_plots(doc, kind, out_dir);
  for (const auto& p : written) std::cerr << "wrote " << p << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral decomposition toolkit for group actions"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string report_path, kind, plot_out = "out";

  CLI::App* run = app.add_subcommand("run", "run the configured suites");
  run->add_option("--config", flags.config_path, "config JSON path")->required();
  run->add_option("--suite", flags.suite, "suite override");
  run->add_option("--out", flags.out_dir, "output directory override");
  run->add_option("--seed", flags.seed, "seed override");
  run->add_option("--threads", flags.threads, "worker thread count");

  CLI::App* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("--config", flags.config_path, "config JSON path")->required();
  validate->add_option("--suite", flags.suite, "suite override");

  CLI::App* plot = app.add_subcommand("plot", "emit CSV plot data from a report");
  plot->add_option("--report", report_path, "report JSON path")->required();
  plot->add_option("--kind", kind, "curve kind: ergodic | l1 | spectrum")->required();
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (run->parsed()) return cmd_run(flags);
    if (validate->parsed()) return cmd_validate(flags);
    return cmd_plot(report_path, kind, plot_out);
  } catch (const arveson::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const arveson::MissingCurve& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const arveson::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
