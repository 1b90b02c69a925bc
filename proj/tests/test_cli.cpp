#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "singosc/model.hpp"
#include "singosc/spectrum.hpp"

using namespace singosc;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("singosc_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_number") {
  CHECK(cli::format_number(0.4) == "4.0000000000000002e-01");
  CHECK(cli::format_number(-3.0) == "-3.0000000000000000e+00");
  CHECK(cli::format_number(HUGE_VAL) == "inf");
  CHECK(cli::format_number(-HUGE_VAL) == "-inf");
  CHECK(cli::format_number(NAN) == "nan");
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 5e-324}) {
    CHECK(std::strtod(cli::format_number(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("derive") {
  const Run r = run({"derive", "--m", "0.5", "--v0", "0.09", "--g", "0.5", "--l", "0"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["P"].get<double>() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(j["regime"] == "SaeRequired");
  CHECK(j.contains("tau_lower_bound"));
  for (const char* key : {"m", "v0", "g", "l", "P", "s", "omega", "kappa_scale", "defect", "regime"}) CHECK(j.contains(key));

  const Run fall = run({"derive", "--m", "0.5", "--v0", "0.3", "--g", "0.5", "--l", "0"});
  CHECK(fall.code == 2);
  CHECK(fall.err.find("fall to the center") != std::string::npos);
  CHECK(fall.err.find("(l+1/2)^2") != std::string::npos);

  const Run strong = run({"derive", "--l", "1", "--m", "0.5", "--v0", "2.1"});
  CHECK(strong.code == 0);
  CHECK(json::parse(strong.out)["regime"] == "SaeRequired");

  const Run regular = run({"derive", "--v0", "0"});
  CHECK(regular.code == 0);
  CHECK(json::parse(regular.out)["regime"] == "Regular");
  CHECK_FALSE(json::parse(regular.out).contains("tau_lower_bound"));

  const Run csv = run({"derive", "--v0", "0.09", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(parse_csv(csv.out).size() == 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"nonsense"}).code == 1);
  CHECK(run({"derive", "--m", "abc"}).code == 1);
  CHECK(run({"derive", "--m", "-1"}).code == 1);
  CHECK(run({"spectrum", "--tau", "banana"}).code == 1);
  CHECK(run({"spectrum", "--format", "xml"}).code == 1);
  CHECK(run({"spectrum", "--count", "0"}).code == 1);
  CHECK(run({"derive", "--config", "/nonexistent/file.json"}).code == 1);
  CHECK(run({"verify", "--only", "no_such_check"}).code == 1);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("scan-tau") != std::string::npos);
}

TEST_CASE("spectrum closed forms") {
  // P = 0.4 and ω = 1
  const std::vector<std::string> base = {"spectrum", "--m", "0.5", "--v0", "0.09", "--g", "1", "--count", "3"};
  auto col = [](const Run& r, const std::string& name) {
    const auto rows = parse_csv(r.out);
    const auto it = std::find(rows[0].begin(), rows[0].end(), name);
    REQUIRE(it != rows[0].end());
    std::vector<std::string> v;
    for (std::size_t i = 1; i < rows.size(); ++i) v.push_back(rows[i][it - rows[0].begin()]);
    return v;
  };
  auto args = base;
  args.insert(args.end(), {"--tau", "0"});
  const Run st = run(args);
  REQUIRE(st.code == 0);
  const auto rows = parse_csv(st.out);
  CHECK(rows[0] == std::vector<std::string>{"n_r", "E", "E/omega", "branch", "bracket_lo", "bracket_hi", "spacing",
                                            "spacing/omega", "physicality_warning"});
  CHECK(rows.size() == 4);
  const double expect_st[] = {2.8, 6.8, 10.8};
  const auto e_st = col(st, "E/omega");
  for (int i = 0; i < 3; ++i) CHECK(std::stod(e_st[i]) == doctest::Approx(expect_st[i]).epsilon(1e-14));

  for (const char* spelled : {"inf", "-inf", "+inf"}) {
    args = base;
    args.insert(args.end(), {"--tau", spelled});
    const Run add = run(args);
    REQUIRE(add.code == 0);
    const double expect_add[] = {1.2, 5.2, 9.2};
    const auto e_add = col(add, "E/omega");
    for (int i = 0; i < 3; ++i) CHECK(std::stod(e_add[i]) == doctest::Approx(expect_add[i]).epsilon(1e-14));
    CHECK(col(add, "branch")[0] == "additional");
  }

  args = base;
  args.insert(args.end(), {"--tau", "-1"});
  const Run gen = run(args);
  REQUIRE(gen.code == 0);
  const auto spacing = col(gen, "spacing/omega");
  CHECK(std::abs(std::stod(spacing[0]) - 4.0) > 1e-3);
  CHECK(col(gen, "physicality_warning")[0] == "false");

  args = base;
  args.insert(args.end(), {"--tau", "0.5", "--format", "json"});
  const Run pos = run(args);
  REQUIRE(pos.code == 0);
  CHECK(json::parse(pos.out)["physicality_warning"] == true);
  CHECK(pos.err.find("warning") != std::string::npos);
}

TEST_CASE("spectrum errors") {
  // A regular-regime problem admits only tau = 0.
  const Run r = run({"spectrum", "--v0", "0", "--tau", "-1"});
  CHECK(r.code == 2);
  // A negative level below the default search floor.
  const Run deep = run({"spectrum", "--v0", "0.2475", "--tau", "-1e-12"});
  CHECK(deep.code == 3);
}

TEST_CASE("CSV and JSON round trip") {
  const DerivedParams d = derive(PhysicalParams{0.5, 0.1875, 1.3, 0});
  const auto res = solve_spectrum(SpectralProblem::make(d, ExtensionParameter::finite(-0.7)), 5);

  const Run csv = run({"spectrum", "--v0", "0.1875", "--g", "1.3", "--tau", "-0.7", "--count", "4"});
  const Run js = run({"spectrum", "--v0", "0.1875", "--g", "1.3", "--tau", "-0.7", "--count", "4", "--format", "json"});
  REQUIRE(csv.code == 0);
  REQUIRE(js.code == 0);
  const auto rows = parse_csv(csv.out);
  const json j = json::parse(js.out);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::strtod(rows[i + 1][1].c_str(), nullptr) == res.levels[i].energy);
    CHECK(std::strtod(rows[i + 1][4].c_str(), nullptr) == res.brackets[i].lo);
    CHECK(j["levels"][i]["E"].get<double>() == res.levels[i].energy);
    CHECK(j["levels"][i]["bracket_hi"].get<double>() == res.brackets[i].hi);
    CHECK(j["levels"][i]["spacing"].get<double>() == res.levels[i + 1].energy - res.levels[i].energy);
  }
  CHECK(j["omega"].get<double>() == d.omega);
}

TEST_CASE("byte-identical output and LF endings") {
  const auto a = scratch_dir("a"), b = scratch_dir("b");
  const std::vector<std::string> args = {"scan-tau", "--v0", "0.09", "--tau-count", "7", "--count", "2"};
  auto with_out = [&](const std::filesystem::path& dir) {
    auto v = args;
    v.insert(v.end(), {"--out", dir.string()});
    return v;
  };
  REQUIRE(run(with_out(a)).code == 0);
  REQUIRE(run(with_out(b)).code == 0);
  for (const char* f : {"level_0.csv", "level_1.csv", "summary.json"}) {
    const std::string x = slurp(a / f), y = slurp(b / f);
    CHECK(!x.empty());
    CHECK(x == y);
    CHECK(x.find('\r') == std::string::npos);
    CHECK(x.back() == '\n');
  }
  CHECK(run(args).out == run(args).out);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST_CASE("scan-tau") {
  const auto dir = scratch_dir("scan");
  const Run r = run({"scan-tau", "--v0", "0.09", "--count", "3", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const json summary = json::parse(slurp(dir / "summary.json"));
  const DerivedParams d = derive(PhysicalParams{0.5, 0.09, 1.0, 0});
  CHECK(summary["tau_lower_bound"].get<double>() == tau_lower_bound(d));
  CHECK(summary["tau"].size() == 50);
  CHECK(summary["tau"][0].get<double>() == tau_lower_bound(d));
  CHECK(summary["tau"][49].get<double>() == 0.0);

  // Level 0 against the census: E0 < 0 exactly where a negative level is predicted.
  const auto rows = parse_csv(slurp(dir / "level_0.csv"));
  CHECK(rows[0] == std::vector<std::string>{"tau", "E", "E/omega"});
  REQUIRE(rows.size() == 51);
  double prev = HUGE_VAL;
  for (int k = 1; k < 49; ++k) {
    const double e = std::stod(rows[k + 1][1]);
    CHECK(e < prev);
    prev = e;
    CHECK((e < 0) == summary["census"][k]["negative_level_exists"].get<bool>());
    CHECK(summary["census"][k]["negative_levels"] == 1);
  }
  // τ -> 0⁻ end of the traces approaches the standard levels.
  for (int n = 0; n < 3; ++n) {
    const auto lv = parse_csv(slurp(dir / ("level_" + std::to_string(n) + ".csv")));
    const double near_zero = std::stod(lv[49][2]);
    CHECK(near_zero < standard_level(d, n) / d.omega);
  }
  std::filesystem::remove_all(dir);

  // Far negative τ puts the traces next to the additional levels.
  const Run far = run({"scan-tau", "--v0", "0.09", "--count", "3", "--tau-min", "-1e8", "--tau-max", "-1e7", "--tau-count", "2"});
  REQUIRE(far.code == 0);
  const auto far_rows = parse_csv(far.out);
  CHECK(far_rows[0] == std::vector<std::string>{"tau", "n_r", "E", "E/omega"});
  for (int n = 0; n < 3; ++n) {
    const double e = std::stod(far_rows[1 + 2 * n][3]);
    CHECK(e == doctest::Approx(additional_level(d, n) / d.omega).epsilon(1e-6));
  }

  const auto empty = scratch_dir("empty");
  const Run none = run({"scan-tau", "--v0", "0.09", "--tau-count", "0", "--out", empty.string()});
  CHECK(none.code == 0);
  CHECK(slurp(empty / "level_0.csv") == "tau,E,E/omega\n");
  CHECK(json::parse(slurp(empty / "summary.json"))["tau"].empty());
  const Run none_stdout = run({"scan-tau", "--v0", "0.09", "--tau-count", "0"});
  CHECK(none_stdout.code == 0);
  CHECK(parse_csv(none_stdout.out).size() == 1);
  std::filesystem::remove_all(empty);
}

TEST_CASE("wavefunction") {
  const Run r = run({"wavefunction", "--v0", "0.1875", "--tau", "-1", "--level", "1", "--r-count", "120"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"r", "R_general", "R_unified", "R_whittaker", "u", "rel_dev"});
  REQUIRE(rows.size() == 121);
  const DerivedParams d = derive(PhysicalParams{0.5, 0.1875, 1.0, 0});
  CHECK(std::stod(rows[1][0]) == doctest::Approx(1e-6 / std::pow(d.kappa_scale, 0.5)).epsilon(1e-14));
  CHECK(std::stod(rows[120][0]) == doctest::Approx(std::sqrt(50.0 / d.kappa_scale)).epsilon(1e-12));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][5]) <= 1e-8);

  const Run j = run({"wavefunction", "--v0", "0.09", "--tau", "0", "--format", "json", "--r-count", "10"});
  REQUIRE(j.code == 0);
  const json w = json::parse(j.out);
  CHECK(w["branch"] == "standard");
  CHECK(w["points"].size() == 10);
  CHECK(w["max_rel_dev"].get<double>() <= 1e-8);
}

TEST_CASE("config file with flag override") {
  const auto dir = scratch_dir("config");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "job.json");
    f << R"({"m": 0.5, "v0": 0.09, "g": 1.0, "l": 0, "tau": "inf", "count": 2, "format": "json"})";
  }
  const Run from_file = run({"spectrum", "--config", (dir / "job.json").string()});
  REQUIRE(from_file.code == 0);
  const json j = json::parse(from_file.out);
  CHECK(j["levels"].size() == 2);
  CHECK(j["levels"][0]["E_over_omega"].get<double>() == doctest::Approx(1.2).epsilon(1e-14));

  const Run overridden = run({"spectrum", "--config", (dir / "job.json").string(), "--tau", "0", "--count", "1"});
  REQUIRE(overridden.code == 0);
  const json k = json::parse(overridden.out);
  CHECK(k["levels"].size() == 1);
  CHECK(k["levels"][0]["E_over_omega"].get<double>() == doctest::Approx(2.8).epsilon(1e-14));

  {
    std::ofstream f(dir / "bad.json");
    f << R"({"m": 0.5, "mass": 1})";
  }
  CHECK(run({"derive", "--config", (dir / "bad.json").string()}).code == 1);
  {
    std::ofstream f(dir / "broken.json");
    f << "{ not json";
  }
  CHECK(run({"derive", "--config", (dir / "broken.json").string()}).code == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify filter and injected fault") {
  const Run only = run({"verify", "--only", "orthogonality"});
  CHECK(only.code == 0);
  CHECK(only.out.find("orthogonality") != std::string::npos);
  CHECK(only.out.find("closed_form") == std::string::npos);

  const Run fault = run({"verify", "--only", "closed_form", "--only", "ratio_identity", "--tolerance-scale", "0"});
  CHECK(fault.code == 4);
  CHECK(fault.out.find("FAIL  1 closed_form") != std::string::npos);

  const Run js = run({"verify", "--only", "quantum_defect", "--format", "json"});
  CHECK(js.code == 0);
  const json j = json::parse(js.out);
  CHECK(j["passed"] == true);
  CHECK(j["checks"][0]["name"] == "quantum_defect");
}
