#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "singosc/errors.hpp"
#include "singosc/model.hpp"
#include "singosc/oracle.hpp"
#include "singosc/spectrum.hpp"
#include "singosc/verify.hpp"
#include "singosc/wavefn.hpp"

namespace singosc::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JobConfig {
  PhysicalParams params;
  ExtensionParameter tau = ExtensionParameter::finite(0.0);
  std::string tau_text = "0";
  int count = 5;
  std::string format;  // empty: the command's default
  std::string out;
  std::vector<std::string> only;
  std::optional<double> tau_min;
  std::optional<double> tau_max;
  int tau_count = 50;
  int level = 0;
  int r_count = 200;
  double tolerance_scale = 1.0;
};

// ---------------------------------------------------------------- parsing

ExtensionParameter parse_tau(const std::string& text) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "inf" || t == "+inf" || t == "-inf" || t == "infinity" || t == "-infinity") {
    return ExtensionParameter::infinity();
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("cannot parse tau '" + text + "' (a number, 'inf' or '-inf')");
  }
  if (used != text.size() || !std::isfinite(v)) throw UsageError("cannot parse tau '" + text + "'");
  return ExtensionParameter::finite(v);
}

void apply_config_file(const std::string& path, JobConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a flat JSON object");
  auto num = [&](const std::string& key, const json& v) {
    if (!v.is_number()) throw UsageError("config field '" + key + "' must be a number");
    return v.get<double>();
  };
  auto integer = [&](const std::string& key, const json& v) {
    if (!v.is_number_integer()) throw UsageError("config field '" + key + "' must be an integer");
    return v.get<int>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "m") {
      cfg.params.m = num(key, v);
    } else if (key == "v0") {
      cfg.params.v0 = num(key, v);
    } else if (key == "g") {
      cfg.params.g = num(key, v);
    } else if (key == "l") {
      cfg.params.l = integer(key, v);
    } else if (key == "tau") {
      cfg.tau_text = v.is_string() ? v.get<std::string>() : v.is_number() ? format_number(v.get<double>()) : "";
      if (cfg.tau_text.empty()) throw UsageError("config field 'tau' must be a number or a string");
      cfg.tau = parse_tau(cfg.tau_text);
    } else if (key == "count") {
      cfg.count = integer(key, v);
    } else if (key == "format") {
      if (!v.is_string()) throw UsageError("config field 'format' must be a string");
      cfg.format = v.get<std::string>();
    } else if (key == "out") {
      if (!v.is_string()) throw UsageError("config field 'out' must be a string");
      cfg.out = v.get<std::string>();
    } else if (key == "only") {
      if (v.is_string()) {
        cfg.only = {v.get<std::string>()};
      } else if (v.is_array()) {
        cfg.only = v.get<std::vector<std::string>>();
      } else {
        throw UsageError("config field 'only' must be a string or a list of strings");
      }
    } else if (key == "tau_min") {
      cfg.tau_min = num(key, v);
    } else if (key == "tau_max") {
      cfg.tau_max = num(key, v);
    } else if (key == "tau_count") {
      cfg.tau_count = integer(key, v);
    } else if (key == "level") {
      cfg.level = integer(key, v);
    } else if (key == "r_count") {
      cfg.r_count = integer(key, v);
    } else if (key == "tolerance_scale") {
      cfg.tolerance_scale = num(key, v);
    } else {
      throw UsageError("unknown config field '" + key + "'");
    }
  }
}

// Flag values, applied over the config file only when given.
struct Flags {
  double m = 0, v0 = 0, g = 0;
  int l = 0;
  std::string tau;
  int count = 0;
  std::string config, format, out;
  std::vector<std::string> only;
  double tau_min = 0, tau_max = 0;
  int tau_count = 0, level = 0, r_count = 0;
  double tolerance_scale = 1.0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--m", f.m, "mass m > 0");
  sub->add_option("--v0", f.v0, "inverse-square strength V0 >= 0");
  sub->add_option("--g", f.g, "oscillator coupling g > 0");
  sub->add_option("--l", f.l, "orbital quantum number");
  sub->add_option("--tau", f.tau, "extension parameter: a number, 'inf' or '-inf'");
  sub->add_option("--count", f.count, "number of levels");
  sub->add_option("--config", f.config, "flat JSON file with the same field names; flags override it");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--out", f.out, "write files into this directory instead of stdout");
}

JobConfig resolve(const CLI::App* sub, const Flags& f) {
  JobConfig cfg;
  if (!f.config.empty()) apply_config_file(f.config, cfg);
  auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--m")) cfg.params.m = f.m;
  if (given("--v0")) cfg.params.v0 = f.v0;
  if (given("--g")) cfg.params.g = f.g;
  if (given("--l")) cfg.params.l = f.l;
  if (given("--tau")) {
    cfg.tau_text = f.tau;
    cfg.tau = parse_tau(f.tau);
  }
  if (given("--count")) cfg.count = f.count;
  if (given("--format")) cfg.format = f.format;
  if (given("--out")) cfg.out = f.out;
  if (given("--only")) cfg.only = f.only;
  if (given("--tau-min")) cfg.tau_min = f.tau_min;
  if (given("--tau-max")) cfg.tau_max = f.tau_max;
  if (given("--tau-count")) cfg.tau_count = f.tau_count;
  if (given("--level")) cfg.level = f.level;
  if (given("--r-count")) cfg.r_count = f.r_count;
  if (given("--tolerance-scale")) cfg.tolerance_scale = f.tolerance_scale;
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json") {
    throw UsageError("--format must be csv or json");
  }
  if (cfg.count < 1) throw UsageError("--count must be >= 1");
  if (cfg.tau_count < 0) throw UsageError("--tau-count must be >= 0");
  if (cfg.level < 0) throw UsageError("--level must be >= 0");
  if (cfg.r_count < 2) throw UsageError("--r-count must be >= 2");
  try {
    cfg.params.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// ---------------------------------------------------------------- output

std::string json_string(const std::string& s) { return json(s).dump(); }

void write_json(const json& j, std::string& s, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        s += "{}";
        return;
      }
      s += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) s += ",\n";
        first = false;
        s += pad + json_string(k) + ": ";
        write_json(v, s, depth + 1);
      }
      s += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        s += "[]";
        return;
      }
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& v) { return v.is_structured(); });
      if (flat) {
        s += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) s += ", ";
          write_json(j[i], s, depth + 1);
        }
        s += "]";
        return;
      }
      s += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += ",\n";
        s += pad;
        write_json(j[i], s, depth + 1);
      }
      s += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      s += std::isfinite(x) ? format_number(x) : json_string(format_number(x));
      return;
    }
    default:
      s += j.dump();
  }
}

std::string dump(const json& j) {
  std::string s;
  write_json(j, s, 0);
  return s + "\n";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row_strings(header); }

  Csv& row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + csv_field(cells[i]);
    text_ += "\n";
    return *this;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

class Sink {
 public:
  Sink(const std::string& dir, std::ostream& out) : dir_(dir), out_(out) {}

  void emit(const std::string& filename, const std::string& content) {
    if (dir_.empty()) {
      out_ << content;
      return;
    }
    std::filesystem::create_directories(dir_);
    const std::filesystem::path path = std::filesystem::path(dir_) / filename;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
  }
  bool to_files() const { return !dir_.empty(); }

 private:
  std::string dir_;
  std::ostream& out_;
};

json params_json(const PhysicalParams& p) {
  return json{{"m", p.m}, {"v0", p.v0}, {"g", p.g}, {"l", p.l}};
}

json tau_json(const ExtensionParameter& tau) {
  if (tau.is_infinite()) return "inf";
  return tau.value();
}

// ---------------------------------------------------------------- commands

int cmd_derive(const JobConfig& cfg, Sink& sink) {
  const DerivedParams d = derive(cfg.params);
  const bool sae = d.regime == Regime::SaeRequired;
  const double bound = sae ? tau_lower_bound(d) : 0.0;
  if (cfg.format != "csv") {
    json j = params_json(cfg.params);
    j["P"] = d.P;
    j["s"] = d.s;
    j["omega"] = d.omega;
    j["kappa_scale"] = d.kappa_scale;
    j["defect"] = d.defect;
    j["regime"] = std::string(to_string(d.regime));
    if (sae) j["tau_lower_bound"] = bound;
    sink.emit("derive.json", dump(j));
    return kOk;
  }
  Csv csv({"m", "v0", "g", "l", "P", "s", "omega", "kappa_scale", "defect", "regime", "tau_lower_bound"});
  csv.row_strings({format_number(cfg.params.m), format_number(cfg.params.v0), format_number(cfg.params.g),
                   std::to_string(cfg.params.l), format_number(d.P), format_number(d.s), format_number(d.omega),
                   format_number(d.kappa_scale), format_number(d.defect), std::string(to_string(d.regime)),
                   sae ? format_number(bound) : ""});
  sink.emit("derive.csv", csv.str());
  return kOk;
}

int cmd_spectrum(const JobConfig& cfg, Sink& sink, std::ostream& err) {
  const DerivedParams d = derive(cfg.params);
  const SpectralProblem prob = SpectralProblem::make(d, cfg.tau);
  // One extra level so that every row has a spacing.
  const SpectrumResult res = solve_spectrum(prob, cfg.count + 1);
  if (res.physicality_warning) {
    err << "warning: tau > 0 gives no negative level and is excluded on physical grounds\n";
  }
  const double w = d.omega;
  if (cfg.format == "json") {
    json levels = json::array();
    for (int n = 0; n < cfg.count; ++n) {
      const EnergyLevel& lv = res.levels[n];
      const double spacing = res.levels[n + 1].energy - lv.energy;
      levels.push_back(json{{"n_r", lv.n_r},
                            {"E", lv.energy},
                            {"E_over_omega", lv.energy / w},
                            {"branch", to_string(lv.branch)},
                            {"bracket_lo", res.brackets[n].lo},
                            {"bracket_hi", res.brackets[n].hi},
                            {"spacing", spacing},
                            {"spacing_over_omega", spacing / w}});
    }
    json j{{"params", params_json(cfg.params)},
           {"P", d.P},
           {"omega", w},
           {"tau", tau_json(cfg.tau)},
           {"physicality_warning", res.physicality_warning},
           {"levels", levels}};
    sink.emit("spectrum.json", dump(j));
    return kOk;
  }
  Csv csv({"n_r", "E", "E/omega", "branch", "bracket_lo", "bracket_hi", "spacing", "spacing/omega",
           "physicality_warning"});
  for (int n = 0; n < cfg.count; ++n) {
    const EnergyLevel& lv = res.levels[n];
    const double spacing = res.levels[n + 1].energy - lv.energy;
    csv.row_strings({std::to_string(lv.n_r), format_number(lv.energy), format_number(lv.energy / w),
                     to_string(lv.branch), format_number(res.brackets[n].lo), format_number(res.brackets[n].hi),
                     format_number(spacing), format_number(spacing / w),
                     res.physicality_warning ? "true" : "false"});
  }
  sink.emit("spectrum.csv", csv.str());
  return kOk;
}

int cmd_scan_tau(const JobConfig& cfg, Sink& sink) {
  const DerivedParams d = derive(cfg.params);
  const bool sae = d.regime == Regime::SaeRequired;
  const double bound = sae ? tau_lower_bound(d) : 0.0;
  const double lo = cfg.tau_min.value_or(bound);
  const double hi = cfg.tau_max.value_or(0.0);
  std::vector<double> taus;
  for (int k = 0; k < cfg.tau_count; ++k) {
    taus.push_back(cfg.tau_count == 1 ? lo : lo + (hi - lo) * k / (cfg.tau_count - 1));
  }
  const double w = d.omega;

  // energies[level][k]
  std::vector<std::vector<double>> energies(cfg.count);
  json census = json::array();
  for (double t : taus) {
    const SpectralProblem prob = SpectralProblem::make(d, ExtensionParameter::finite(t));
    const SpectrumResult res = solve_spectrum(prob, cfg.count);
    int negatives = 0;
    for (int n = 0; n < cfg.count; ++n) {
      energies[n].push_back(res.levels[n].energy);
      if (res.levels[n].energy < 0.0) ++negatives;
    }
    json row{{"tau", t}, {"negative_levels", negatives}};
    row["negative_level_exists"] = (sae && t < 0.0) ? json(negative_level_exists(prob)) : json(false);
    row["physicality_warning"] = res.physicality_warning;
    census.push_back(row);
  }

  json summary{{"params", params_json(cfg.params)}, {"P", d.P}, {"omega", w}};
  summary["tau_lower_bound"] = sae ? json(bound) : json(nullptr);
  summary["tau"] = taus;
  summary["census"] = census;

  if (sink.to_files()) {
    for (int n = 0; n < cfg.count; ++n) {
      const std::string stem = "level_" + std::to_string(n);
      if (cfg.format == "json") {
        json j{{"n_r", n}, {"tau", taus}, {"E", energies[n]}};
        json over = json::array();
        for (double e : energies[n]) over.push_back(e / w);
        j["E_over_omega"] = over;
        sink.emit(stem + ".json", dump(j));
      } else {
        Csv csv({"tau", "E", "E/omega"});
        for (std::size_t k = 0; k < taus.size(); ++k) {
          csv.row_strings({format_number(taus[k]), format_number(energies[n][k]), format_number(energies[n][k] / w)});
        }
        sink.emit(stem + ".csv", csv.str());
      }
    }
    sink.emit("summary.json", dump(summary));
    return kOk;
  }
  if (cfg.format == "json") {
    json levels = json::array();
    for (int n = 0; n < cfg.count; ++n) levels.push_back(json{{"n_r", n}, {"E", energies[n]}});
    summary["levels"] = levels;
    sink.emit("", dump(summary));
    return kOk;
  }
  Csv csv({"tau", "n_r", "E", "E/omega"});
  for (int n = 0; n < cfg.count; ++n) {
    for (std::size_t k = 0; k < taus.size(); ++k) {
      csv.row_strings({format_number(taus[k]), std::to_string(n), format_number(energies[n][k]),
                       format_number(energies[n][k] / w)});
    }
  }
  sink.emit("", csv.str());
  return kOk;
}

int cmd_wavefunction(const JobConfig& cfg, Sink& sink) {
  const DerivedParams d = derive(cfg.params);
  const SpectralProblem prob = SpectralProblem::make(d, cfg.tau);
  const SpectrumResult res = solve_spectrum(prob, cfg.level + 1);
  const RadialWavefunction w = normalized(build_wavefunction(prob, res.levels[cfg.level]));
  const RadialGrid grid = RadialGrid::default_for(d);

  struct Row {
    double r, general, unified, whittaker;
  };
  std::vector<Row> rows;
  double peak = 0.0;
  for (int i = 0; i < cfg.r_count; ++i) {
    const double r = grid.r_min * std::pow(grid.r_max / grid.r_min, static_cast<double>(i) / (cfg.r_count - 1));
    rows.push_back({r, eval_general(w, r), eval_unified(w, r), eval_whittaker(w, r)});
    peak = std::max(peak, std::abs(rows.back().unified));
  }
  // Relative deviation between the three forms; left at 0 within 1e-12 of
  // the peak, where a node makes the ratio meaningless.
  auto deviation = [&](const Row& row) {
    if (std::abs(row.unified) <= 1e-12 * peak) return 0.0;
    return std::max(std::abs(row.general / row.unified - 1.0), std::abs(row.whittaker / row.unified - 1.0));
  };
  double worst = 0.0;
  for (const Row& row : rows) worst = std::max(worst, deviation(row));

  if (cfg.format == "json") {
    json pts = json::array();
    for (const Row& row : rows) {
      pts.push_back(json{{"r", row.r},
                         {"R_general", row.general},
                         {"R_unified", row.unified},
                         {"R_whittaker", row.whittaker},
                         {"u", row.r * row.unified},
                         {"rel_dev", deviation(row)}});
    }
    json j{{"params", params_json(cfg.params)},
           {"P", d.P},
           {"omega", d.omega},
           {"tau", tau_json(cfg.tau)},
           {"n_r", res.levels[cfg.level].n_r},
           {"E", w.energy},
           {"E_over_omega", w.energy / d.omega},
           {"branch", to_string(w.branch)},
           {"c_coeff", w.c_coeff},
           {"d_coeff", w.d_coeff},
           {"max_rel_dev", worst},
           {"points", pts}};
    sink.emit("wavefunction.json", dump(j));
    return kOk;
  }
  Csv csv({"r", "R_general", "R_unified", "R_whittaker", "u", "rel_dev"});
  for (const Row& row : rows) {
    csv.row_strings({format_number(row.r), format_number(row.general), format_number(row.unified),
                     format_number(row.whittaker), format_number(row.r * row.unified),
                     format_number(deviation(row))});
  }
  sink.emit("wavefunction.csv", csv.str());
  return kOk;
}

int cmd_verify(const JobConfig& cfg, Sink& sink) {
  VerifyOptions opt;
  for (const std::string& item : cfg.only) {
    std::stringstream ss(item);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (!name.empty()) opt.only.push_back(name);
    }
  }
  opt.tolerance_scale = cfg.tolerance_scale;
  std::vector<CheckResult> results;
  try {
    results = run_verification(opt);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const bool all = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  if (cfg.format == "json") {
    json arr = json::array();
    for (const CheckResult& r : results) {
      arr.push_back(json{{"id", r.id},
                         {"name", r.name},
                         {"passed", r.passed},
                         {"detail", r.detail},
                         {"seconds", r.seconds},
                         {"budget_seconds", r.budget_seconds}});
    }
    sink.emit("verify.json", dump(json{{"passed", all}, {"checks", arr}}));
  } else if (cfg.format == "csv") {
    Csv csv({"id", "name", "passed", "seconds", "budget_seconds", "detail"});
    for (const CheckResult& r : results) {
      csv.row_strings({std::to_string(r.id), r.name, r.passed ? "true" : "false", format_number(r.seconds),
                       format_number(r.budget_seconds), r.detail});
    }
    sink.emit("verify.csv", csv.str());
  } else {
    std::string text;
    for (const CheckResult& r : results) text += format_result(r) + "\n";
    text += all ? "all checks passed\n" : "some checks FAILED\n";
    sink.emit("verify.txt", text);
  }
  return all ? kOk : kVerifyFailed;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra and eigenfunctions of the singular oscillator V = -V0/r^2 + g r^2", "singosc"};
  app.require_subcommand(1);
  Flags f;
  CLI::App* derive_cmd = app.add_subcommand("derive", "derived parameters and regime");
  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "lowest levels for one extension parameter");
  CLI::App* scan_cmd = app.add_subcommand("scan-tau", "levels over a grid of tau values");
  CLI::App* wave_cmd = app.add_subcommand("wavefunction", "tabulate a normalized radial eigenfunction");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the acceptance checks");
  for (CLI::App* sub : {derive_cmd, spectrum_cmd, scan_cmd, wave_cmd, verify_cmd}) add_common(sub, f);
  scan_cmd->add_option("--tau-min", f.tau_min, "first tau of the grid (default: the negative-level bound)");
  scan_cmd->add_option("--tau-max", f.tau_max, "last tau of the grid (default 0)");
  scan_cmd->add_option("--tau-count", f.tau_count, "number of grid points (default 50)");
  wave_cmd->add_option("--level", f.level, "level index n_r (default 0)");
  wave_cmd->add_option("--r-count", f.r_count, "number of log-spaced radii (default 200)");
  verify_cmd->add_option("--only", f.only, "run only these checks (repeatable or comma separated)");
  verify_cmd->add_option("--tolerance-scale", f.tolerance_scale, "multiply every tolerance (0 forces failures)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const JobConfig cfg = resolve(sub, f);
    Sink sink(cfg.out, out);
    if (sub == derive_cmd) return cmd_derive(cfg, sink);
    if (sub == spectrum_cmd) return cmd_spectrum(cfg, sink, err);
    if (sub == scan_cmd) return cmd_scan_tau(cfg, sink);
    if (sub == wave_cmd) return cmd_wavefunction(cfg, sink);
    return cmd_verify(cfg, sink);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FallToCenterError& e) {
    err << "error: " << e.what() << "\n";
    return kRegime;
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << "\n";
    return kRegime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSolver;
  }
}

}  // namespace singosc::cli
