#pragma once

// Config ingestion and result emission for the command-line front end.
//
// Config documents are flat `key = value` lines; `#` starts a comment. Lists are
// comma-separated. Unset keys take the defaults of the reference simulation setup, and
// geometry lengths not given explicitly scale with the wavelength.

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopsec/channel.hpp"
#include "coopsec/error.hpp"
#include "coopsec/montecarlo.hpp"

namespace coopsec::cli {

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t value_column = 0;  // 1-based
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] inline void parse_fail(const ConfigEntry& e, const std::string& msg) {
  throw Error(Errc::ParseError,
              "line " + std::to_string(e.line) + ", column " + std::to_string(e.value_column) + ": " + e.key + ": " + msg);
}

inline double to_double(const ConfigEntry& e, std::string_view text) {
  double v = 0.0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
    parse_fail(e, "expected a number, got '" + t + "'");
  return v;
}

inline std::uint64_t to_u64(const ConfigEntry& e, std::string_view text) {
  std::uint64_t v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    parse_fail(e, "expected a non-negative integer, got '" + t + "'");
  return v;
}

inline std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool to_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "on") return true;
  if (e.value == "false" || e.value == "0" || e.value == "off") return false;
  parse_fail(e, "expected true/false");
}

}  // namespace detail

/// Splits a document into entries. Rejects malformed lines and duplicate keys.
[[nodiscard]] inline std::vector<ConfigEntry> parse_document(std::string_view text) {
  std::vector<ConfigEntry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (detail::trim(raw).empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) {
      const auto col = raw.find_first_not_of(" \t") + 1;
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ", column " + std::to_string(col) +
                                        ": expected 'key = value'");
    }
    ConfigEntry e;
    e.key = detail::trim(raw.substr(0, eq));
    e.value = detail::trim(raw.substr(eq + 1));
    e.line = line_no;
    const auto vstart = raw.find_first_not_of(" \t", eq + 1);
    e.value_column = (vstart == std::string_view::npos ? eq + 1 : vstart) + 1;
    if (e.key.empty())
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ", column 1: empty key");
    for (const auto& prev : entries)
      if (prev.key == e.key) detail::parse_fail(e, "duplicate key (first set on line " + std::to_string(prev.line) + ")");
    entries.push_back(std::move(e));
  }
  return entries;
}

/// Builds a validated SweepConfig from entries. Later entries must not repeat keys.
[[nodiscard]] inline SweepConfig resolve_config(const std::vector<ConfigEntry>& entries) {
  SweepConfig cfg;
  std::optional<double> wavelength, cluster_radius, dest_distance, eav_min, eav_max;
  std::optional<double> noise_dbm, noise_w, power_dbm, power_w, stage1_dbm, stage1_w;
  std::optional<std::size_t> n_nodes, n_eav;
  std::optional<std::vector<std::size_t>> grid_n, grid_j;
  const ConfigEntry* noise_entry = nullptr;
  const ConfigEntry* power_entry = nullptr;
  const ConfigEntry* stage1_entry = nullptr;

  auto positive = [](const ConfigEntry& e, double v) {
    if (!(v > 0.0)) detail::parse_fail(e, "must be > 0");
    return v;
  };
  auto watts = [](const ConfigEntry& e, double v) {
    if (!(v > 0.0))
      throw Error(Errc::UnitError, "line " + std::to_string(e.line) + ": " + e.key + " must be a positive power in watts");
    return v;
  };
  auto count_list = [](const ConfigEntry& e) {
    std::vector<std::size_t> out;
    for (const auto& item : detail::split_list(e.value)) out.push_back(detail::to_u64(e, item));
    if (out.empty()) detail::parse_fail(e, "empty list");
    return out;
  };

  for (const auto& e : entries) {
    const std::string& k = e.key;
    if (k == "wavelength") wavelength = positive(e, detail::to_double(e, e.value));
    else if (k == "cluster_radius") cluster_radius = positive(e, detail::to_double(e, e.value));
    else if (k == "path_loss_exponent") {
      cfg.geometry.path_loss_exponent = detail::to_double(e, e.value);
      if (cfg.geometry.path_loss_exponent < 2.0) detail::parse_fail(e, "must be >= 2");
    } else if (k == "noise_power_dbm") { noise_dbm = detail::to_double(e, e.value); noise_entry = &e; }
    else if (k == "noise_power_w") { noise_w = watts(e, detail::to_double(e, e.value)); noise_entry = &e; }
    else if (k == "n_nodes") {
      n_nodes = detail::to_u64(e, e.value);
      if (*n_nodes < 1) detail::parse_fail(e, "n_nodes must be >= 1");
    } else if (k == "n_eavesdroppers") n_eav = detail::to_u64(e, e.value);
    else if (k == "dest_distance") dest_distance = positive(e, detail::to_double(e, e.value));
    else if (k == "eav_distance_min") eav_min = positive(e, detail::to_double(e, e.value));
    else if (k == "eav_distance_max") eav_max = positive(e, detail::to_double(e, e.value));
    else if (k == "phase_model") {
      if (e.value == "geometric") cfg.geometry.phase_model = PhaseModel::Geometric;
      else if (e.value == "uniform_random") cfg.geometry.phase_model = PhaseModel::UniformRandom;
      else detail::parse_fail(e, "expected geometric or uniform_random");
    } else if (k == "grid_n") {
      grid_n = count_list(e);
      for (auto n : *grid_n)
        if (n < 1) detail::parse_fail(e, "grid N values must be >= 1");
    } else if (k == "grid_j") grid_j = count_list(e);
    else if (k == "strategies") {
      cfg.strategies.clear();
      for (const auto& item : detail::split_list(e.value)) {
        const auto s = parse_strategy(item);
        if (!s) detail::parse_fail(e, "unknown strategy '" + item + "'");
        cfg.strategies.push_back(*s);
      }
    } else if (k == "target_secrecy") cfg.target_secrecy = positive(e, detail::to_double(e, e.value));
    else if (k == "power_budget_dbm") { power_dbm = detail::to_double(e, e.value); power_entry = &e; }
    else if (k == "power_budget_w") { power_w = watts(e, detail::to_double(e, e.value)); power_entry = &e; }
    else if (k == "trials") {
      cfg.trials = detail::to_u64(e, e.value);
      if (cfg.trials < 1) detail::parse_fail(e, "trials must be >= 1");
    } else if (k == "seed") cfg.base_seed = detail::to_u64(e, e.value);
    else if (k == "csi_mode") {
      if (e.value == "perfect") cfg.csi_mode = CsiMode::Perfect;
      else if (e.value == "imperfect") cfg.csi_mode = CsiMode::Imperfect;
      else detail::parse_fail(e, "expected perfect or imperfect");
    } else if (k == "csi_error_variance") {
      cfg.csi_error_variance = detail::to_double(e, e.value);
      if (cfg.csi_error_variance < 0.0) detail::parse_fail(e, "must be >= 0");
    } else if (k == "stage1_enabled") cfg.stage1.enabled = detail::to_bool(e);
    else if (k == "stage1_power_dbm") { stage1_dbm = detail::to_double(e, e.value); stage1_entry = &e; }
    else if (k == "stage1_power_w") {
      stage1_w = detail::to_double(e, e.value);
      if (*stage1_w < 0.0) throw Error(Errc::UnitError, "line " + std::to_string(e.line) + ": stage1_power_w must be >= 0");
      stage1_entry = &e;
    } else if (k == "iteration_threshold") cfg.iteration.threshold = positive(e, detail::to_double(e, e.value));
    else if (k == "max_iter") {
      cfg.iteration.max_iter = detail::to_u64(e, e.value);
      if (cfg.iteration.max_iter < 1) detail::parse_fail(e, "must be >= 1");
    } else {
      throw Error(Errc::UnknownKey, "line " + std::to_string(e.line) + ": unknown key '" + k + "'");
    }
  }

  auto both = [](const ConfigEntry* e, const char* what) {
    throw Error(Errc::UnitError, "line " + std::to_string(e ? e->line : 0) + ": " + what +
                                     " given in both dBm and watts");
  };
  if (noise_dbm && noise_w) both(noise_entry, "noise power");
  if (power_dbm && power_w) both(power_entry, "power budget");
  if (stage1_dbm && stage1_w) both(stage1_entry, "stage-1 power");

  auto& g = cfg.geometry;
  g.wavelength = wavelength.value_or(0.33);
  g.cluster_radius = cluster_radius.value_or(5.0 * g.wavelength);
  g.dest_distance = dest_distance.value_or(20.0 * g.cluster_radius);
  g.eav_distance_min = eav_min.value_or(40.0 * g.cluster_radius);
  g.eav_distance_max = eav_max.value_or(100.0 * g.cluster_radius);
  g.noise_power = noise_w ? *noise_w : dbm_to_watts(noise_dbm.value_or(-60.0));
  g.n_nodes = n_nodes.value_or(10);
  g.n_eavesdroppers = n_eav.value_or(1);
  if (power_w) cfg.power_budget = *power_w;
  else if (power_dbm) cfg.power_budget = dbm_to_watts(*power_dbm);
  if (stage1_w) cfg.stage1.stage1_power = *stage1_w;
  else if (stage1_dbm) cfg.stage1.stage1_power = dbm_to_watts(*stage1_dbm);
  cfg.grid_n = grid_n.value_or(std::vector<std::size_t>{g.n_nodes});
  cfg.grid_j = grid_j.value_or(std::vector<std::size_t>{g.n_eavesdroppers});

  try {
    cfg.validate();
  } catch (const Error& err) {
    throw Error(Errc::ParseError, std::string("invalid configuration: ") + err.what());
  }
  return cfg;
}

[[nodiscard]] inline SweepConfig parse_config(std::string_view text) { return resolve_config(parse_document(text)); }

/// Appends `overrides` to `base`, replacing any base entry with the same key.
[[nodiscard]] inline std::vector<ConfigEntry> merge_entries(std::vector<ConfigEntry> base,
                                                            const std::vector<ConfigEntry>& overrides) {
  for (const auto& o : overrides) {
    std::erase_if(base, [&](const ConfigEntry& b) { return b.key == o.key; });
    base.push_back(o);
  }
  return base;
}

/// Config documents for the named reference experiments.
[[nodiscard]] inline std::optional<std::string> preset_document(std::string_view name) {
  if (name == "fig2")
    return "grid_n = 10, 30, 50\ngrid_j = 1, 2, 3, 4, 5, 6\n"
           "strategies = coop_min_power, direct_min_power\ntarget_secrecy = 3\ntrials = 1000\n";
  if (name == "fig3")
    return "grid_n = 10, 20, 30, 40, 50\ngrid_j = 1, 3, 6\n"
           "strategies = coop_min_power, direct_min_power\ntarget_secrecy = 3\ntrials = 1000\n";
  if (name == "fig4")
    return "grid_n = 10, 30, 50\ngrid_j = 1, 2, 3, 4, 5, 6\n"
           "strategies = coop_max_secrecy, direct_max_secrecy\npower_budget_dbm = 5\ntrials = 1000\n";
  if (name == "fig5")
    return "grid_n = 10, 20, 30, 40, 50\ngrid_j = 1, 3, 6\n"
           "strategies = coop_max_secrecy, direct_max_secrecy\npower_budget_dbm = 5\ntrials = 1000\n";
  return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// Output

inline constexpr std::string_view kCsvHeader = "n_nodes,n_eavesdroppers,strategy,metric_name,mean,stderr,infeasible,trials";

/// 12 significant digits, locale-independent.
[[nodiscard]] inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

struct RunManifest {
  std::string config_path;
  nlohmann::json config_echo;
  std::uint64_t base_seed = 0;
  std::string prng_id;
  std::string version;
  std::string timestamp;
  std::vector<std::string> outputs;
};

[[nodiscard]] inline nlohmann::json echo_config(const SweepConfig& c) {
  nlohmann::json j;
  const auto& g = c.geometry;
  j["wavelength"] = g.wavelength;
  j["cluster_radius"] = g.cluster_radius;
  j["path_loss_exponent"] = g.path_loss_exponent;
  j["noise_power_w"] = g.noise_power;
  j["dest_distance"] = g.dest_distance;
  j["eav_distance_min"] = g.eav_distance_min;
  j["eav_distance_max"] = g.eav_distance_max;
  j["phase_model"] = std::string(to_string(g.phase_model));
  j["n_nodes"] = g.n_nodes;
  j["n_eavesdroppers"] = g.n_eavesdroppers;
  j["grid_n"] = c.grid_n;
  j["grid_j"] = c.grid_j;
  std::vector<std::string> names;
  for (auto s : c.strategies) names.emplace_back(to_string(s));
  j["strategies"] = names;
  j["target_secrecy"] = c.target_secrecy;
  j["power_budget_w"] = c.power_budget;
  j["trials"] = c.trials;
  j["seed"] = c.base_seed;
  j["csi_mode"] = std::string(to_string(c.csi_mode));
  j["csi_error_variance"] = c.csi_error_variance;
  j["stage1_enabled"] = c.stage1.enabled;
  j["stage1_power_w"] = c.stage1.stage1_power;
  j["iteration_threshold"] = c.iteration.threshold;
  j["max_iter"] = c.iteration.max_iter;
  j["direct_rate_prefactor"] = 1.0;
  j["cooperative_rate_prefactor"] = 0.5;
  return j;
}

[[nodiscard]] inline nlohmann::json manifest_json(const RunManifest& m) {
  return {{"config_path", m.config_path}, {"config", m.config_echo},       {"base_seed", m.base_seed},
          {"prng", m.prng_id},            {"version", m.version},          {"timestamp", m.timestamp},
          {"outputs", m.outputs}};
}

[[nodiscard]] inline std::string emit_csv(const SweepResult& r) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : r.rows) {
    out += std::to_string(row.n_nodes) + ',' + std::to_string(row.n_eavesdroppers) + ',' +
           std::string(to_string(row.strategy)) + ',' + row.metric_name + ',' + format_number(row.mean) + ',' +
           format_number(row.std_error) + ',' + std::to_string(row.infeasible) + ',' + std::to_string(row.trials) + '\n';
  }
  return out;
}

[[nodiscard]] inline nlohmann::json row_json(const SweepRow& row) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"n_nodes", row.n_nodes},
          {"n_eavesdroppers", row.n_eavesdroppers},
          {"strategy", std::string(to_string(row.strategy))},
          {"metric_name", row.metric_name},
          {"mean", num(row.mean)},
          {"stderr", num(row.std_error)},
          {"infeasible", row.infeasible},
          {"trials", row.trials}};
}

[[nodiscard]] inline std::string emit_json(const SweepResult& r, const RunManifest& manifest) {
  nlohmann::json doc;
  doc["manifest"] = manifest_json(manifest);
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) doc["rows"].push_back(row_json(row));
  return doc.dump(2) + "\n";
}

/// Reads the rows back from emit_json output.
[[nodiscard]] inline std::vector<SweepRow> parse_rows_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<SweepRow> rows;
  auto num = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  for (const auto& j : doc.at("rows")) {
    SweepRow row;
    row.n_nodes = j.at("n_nodes").get<std::size_t>();
    row.n_eavesdroppers = j.at("n_eavesdroppers").get<std::size_t>();
    const auto s = parse_strategy(j.at("strategy").get<std::string>());
    if (!s) throw Error(Errc::ParseError, "unknown strategy in results");
    row.strategy = *s;
    row.metric_name = j.at("metric_name").get<std::string>();
    row.mean = num(j.at("mean"));
    row.std_error = num(j.at("stderr"));
    row.infeasible = j.at("infeasible").get<std::size_t>();
    row.trials = j.at("trials").get<std::size_t>();
    rows.push_back(std::move(row));
  }
  return rows;
}

enum class Format { Csv, Json };

[[nodiscard]] inline std::string emit_results(const SweepResult& r, Format format, const RunManifest& manifest = {}) {
  return format == Format::Csv ? emit_csv(r) : emit_json(r, manifest);
}

}  // namespace coopsec::cli
