// coopsec: command-line front end for the cooperative secrecy simulator.
//
//   coopsec solve  --config run.cfg --seed 7
//   coopsec sweep  --config run.cfg --out results.csv
//   coopsec figure --preset fig2 --out fig2.csv
//
// Exit status: 0 success, 2 configuration or usage error, 3 every trial infeasible,
// 4 I/O error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coopsec/cli.hpp"
#include "coopsec/coopsec.hpp"

namespace {

using namespace coopsec;

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out_path;
  std::string format = "csv";
  std::string preset;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
  out << data;
  if (!out) throw Error(Errc::IoError, "write to '" + path + "' failed");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

std::size_t thread_cap() {
  if (const char* env = std::getenv("SECRECY_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid SECRECY_THREADS='" << env << "'\n";
  }
  return 0;
}

SweepConfig load_config(const Options& opt, const std::string& preset) {
  std::vector<cli::ConfigEntry> entries;
  if (!preset.empty()) {
    const auto doc = cli::preset_document(preset);
    if (!doc) throw Error(Errc::InvalidConfig, "unknown preset '" + preset + "'");
    entries = cli::parse_document(*doc);
  }
  if (!opt.config_path.empty()) entries = cli::merge_entries(std::move(entries), cli::parse_document(read_file(opt.config_path)));
  SweepConfig cfg = cli::resolve_config(entries);
  if (opt.seed) cfg.base_seed = *opt.seed;
  if (opt.trials) {
    if (*opt.trials < 1) throw Error(Errc::InvalidConfig, "--trials must be >= 1");
    cfg.trials = *opt.trials;
  }
  cfg.threads = thread_cap();
  return cfg;
}

cli::Format parse_format(const std::string& f) { return f == "json" ? cli::Format::Json : cli::Format::Csv; }

int run_sweep_command(const Options& opt, const std::string& preset) {
  const SweepConfig cfg = load_config(opt, preset);
  const SweepResult result = run_sweep(cfg);
  const auto format = parse_format(opt.format);

  cli::RunManifest manifest;
  manifest.config_path = opt.config_path.empty() ? (preset.empty() ? "" : "preset:" + preset) : opt.config_path;
  manifest.config_echo = cli::echo_config(cfg);
  manifest.base_seed = cfg.base_seed;
  manifest.prng_id = result.metadata.prng_id;
  manifest.version = result.metadata.version;
  manifest.timestamp = utc_timestamp();

  if (opt.out_path.empty()) {
    std::cout << cli::emit_results(result, format, manifest);
  } else {
    manifest.outputs.push_back(opt.out_path);
    if (format == cli::Format::Csv) {
      const std::string manifest_path = opt.out_path + ".manifest.json";
      manifest.outputs.push_back(manifest_path);
      write_file(opt.out_path, cli::emit_csv(result));
      write_file(manifest_path, cli::manifest_json(manifest).dump(2) + "\n");
    } else {
      write_file(opt.out_path, cli::emit_json(result, manifest));
    }
  }

  const bool all_infeasible =
      std::ranges::all_of(result.rows, [](const SweepRow& r) { return r.infeasible == r.trials; });
  return all_infeasible ? kExitInfeasible : 0;
}

nlohmann::json vector_json(const ComplexVector& w) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < w.size(); ++i) arr.push_back({w(i).real(), w(i).imag()});
  return arr;
}

int run_solve_command(const Options& opt) {
  SweepConfig cfg = load_config(opt, "");
  const Scenario sc = sample_scenario(cfg.geometry, trial_seed(cfg.base_seed, 0));
  nlohmann::json doc;
  doc["seed"] = cfg.base_seed;
  doc["n_nodes"] = sc.n_nodes();
  doc["n_eavesdroppers"] = sc.n_eavesdroppers();
  doc["noise_power_w"] = sc.noise_power;
  doc["results"] = nlohmann::json::array();
  bool any_feasible = false;
  for (Strategy s : cfg.strategies) {
    const TrialOutcome o = run_trial(sc, cfg.problem_for(s, sc.n_nodes()), s);
    nlohmann::json r;
    r["strategy"] = std::string(to_string(s));
    r["metric_name"] = metric_name(s, cfg.csi_mode);
    r["feasible"] = o.feasible;
    if (o.feasible) r["metric"] = o.metric;
    else r["reason"] = o.reason;
    if (o.solution) {
      r["w"] = vector_json(o.solution->w);
      r["transmit_power_w"] = o.solution->transmit_power;
      r["c_dest"] = o.solution->c_dest;
      r["c_eav"] = o.solution->c_eav;
      r["secrecy_capacity"] = o.solution->secrecy_capacity;
      r["secrecy_is_lower_bound"] = o.solution->secrecy_is_lower_bound;
    }
    if (o.trace) r["iterations"] = o.trace->iterations;
    any_feasible = any_feasible || o.feasible;
    doc["results"].push_back(std::move(r));
  }

  std::ostringstream text;
  if (opt.format == "json") {
    text << doc.dump(2) << "\n";
  } else {
    text << "scenario: seed=" << cfg.base_seed << " N=" << sc.n_nodes() << " J=" << sc.n_eavesdroppers()
         << " noise=" << cli::format_number(sc.noise_power) << " W\n";
    for (const auto& r : doc["results"]) {
      text << "[" << r["strategy"].get<std::string>() << "] ";
      if (!r["feasible"].get<bool>()) {
        text << "infeasible: " << r["reason"].get<std::string>() << "\n";
        continue;
      }
      text << r["metric_name"].get<std::string>() << " = " << cli::format_number(r["metric"].get<double>()) << "\n";
      if (r.contains("w")) {
        text << "  transmit_power_w = " << cli::format_number(r["transmit_power_w"].get<double>())
             << "  c_dest = " << cli::format_number(r["c_dest"].get<double>()) << "  c_eav =";
        for (double c : r["c_eav"]) text << " " << cli::format_number(c);
        text << "\n  w =";
        for (const auto& z : r["w"])
          text << " (" << cli::format_number(z[0].get<double>()) << "," << cli::format_number(z[1].get<double>()) << ")";
        text << "\n";
      }
    }
  }
  if (opt.out_path.empty()) std::cout << text.str();
  else write_file(opt.out_path, text.str());
  return any_feasible ? 0 : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative beamforming for physical-layer secrecy: solver and Monte-Carlo simulator"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Config file (key = value lines)");
    sub->add_option("--seed", opt.seed, "Base seed (u64)");
    sub->add_option("--out", opt.out_path, "Output path (default: stdout)");
  };

  auto* solve = app.add_subcommand("solve", "Solve one sampled scenario and print weights and capacities");
  add_common(solve);
  solve->add_option("--format", opt.format, "text|json")->check(CLI::IsMember({"text", "json"}));
  opt.format = "text";

  auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo grid sweep");
  add_common(sweep);
  sweep->add_option("--trials", opt.trials, "Trials per grid point");
  sweep->add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  auto* figure = app.add_subcommand("figure", "Run a named reference experiment");
  add_common(figure);
  figure->add_option("--trials", opt.trials, "Trials per grid point");
  figure->add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  figure->add_option("--preset", opt.preset, "fig2|fig3|fig4|fig5")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (!solve->parsed() && opt.format == "text") opt.format = "csv";

  try {
    if (solve->parsed()) return run_solve_command(opt);
    if (sweep->parsed()) return run_sweep_command(opt, "");
    return run_sweep_command(opt, opt.preset);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::IoError ? kExitIo : kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
