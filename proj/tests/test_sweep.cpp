#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "catswap/sweep.hpp"

using namespace catswap;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("catswap_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepSpec tiny_spec() {
  SweepSpec s;
  s.alpha_min = 0.5;
  s.alpha_max = 1.5;
  s.alpha_steps = 3;
  s.T = {1.0, 0.95};
  return s;
}

}  // namespace

TEST_CASE("spec validation names the offending key") {
  SweepSpec s;
  CHECK_NOTHROW(s.validate());
  s.T = {1.2};
  try {
    s.validate();
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("T") != std::string::npos);
  }
  s = {};
  s.alpha_steps = 0;
  CHECK_THROWS_AS(s.validate(), config_error);
  s = {};
  s.alpha_min = 2.0;
  s.alpha_max = 1.0;
  CHECK_THROWS_AS(s.validate(), config_error);
  s = {};
  s.Upsilon = {0.00001};  // below the averaging floor
  CHECK_THROWS_AS(s.validate(), config_error);
  s = {};
  s.dx = {0.0};
  CHECK_THROWS_AS(s.validate(), config_error);
}

TEST_CASE("sweep grid is deterministic and ordered") {
  auto rows = run_sweep(tiny_spec());
  REQUIRE(rows.size() == 6);
  // lexicographic in (alpha, T)
  CHECK(rows[0].alpha == doctest::Approx(0.5));
  CHECK(rows[0].T == doctest::Approx(0.95));
  CHECK(rows[1].T == doctest::Approx(1.0));
  CHECK(rows[4].alpha == doctest::Approx(1.5));

  // frozen anchor on the (alpha=1, T=1) row
  CHECK(rows[3].T == doctest::Approx(1.0));
  CHECK(rows[3].p_vacuum == doctest::Approx(0.573735430114).epsilon(1e-9));
  REQUIRE(rows[3].F_plus.has_value());
  CHECK(*rows[3].F_plus == doctest::Approx(0.84704837881512218).epsilon(1e-9));
  CHECK(!rows[3].p_homodyne.has_value());

  // rerun is bit-identical once serialized
  std::ostringstream a, b;
  write_rows_csv(a, rows);
  write_rows_csv(b, run_sweep(tiny_spec()));
  CHECK(a.str() == b.str());
}

TEST_CASE("csv format") {
  auto rows = run_sweep(tiny_spec());
  std::ostringstream os;
  write_rows_csv(os, rows);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "alpha,T,Upsilon,dx,peak,F_plus,F_minus,p_vacuum,p_homodyne");
  int data_lines = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ++data_lines;
    // NA for the unset Upsilon, dx and p_homodyne columns
    CHECK(line.find(",NA,NA,plus,") != std::string::npos);
    CHECK(line.rfind(",NA") == line.size() - 3);
  }
  CHECK(data_lines == 6);

  // 17 significant digits round-trip the doubles exactly
  std::istringstream is2(os.str());
  std::getline(is2, header);
  std::getline(is2, line);
  double a = std::strtod(line.c_str(), nullptr);
  CHECK(a == rows[0].alpha);
}

TEST_CASE("json format") {
  auto spec = tiny_spec();
  auto rows = run_sweep(spec);
  std::ostringstream os;
  write_rows_json(os, rows);
  auto doc = nlohmann::json::parse(os.str());
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 6);
  CHECK(doc[0]["alpha"].get<double>() == rows[0].alpha);
  CHECK(doc[0]["Upsilon"].is_null());
  CHECK(doc[0]["dx"].is_null());
  CHECK(doc[0]["peak"].get<std::string>() == "plus");
  CHECK(doc[0]["F_plus"].is_number());
}

TEST_CASE("vacuum-only sweeps skip the fidelities") {
  SweepSpec s;
  s.alpha_min = 1.0;
  s.alpha_max = 1.0;
  s.alpha_steps = 1;
  s.vacuum_only = true;
  auto rows = run_sweep(s);
  REQUIRE(rows.size() == 1);
  CHECK(!rows[0].F_plus.has_value());
  CHECK(!rows[0].F_minus.has_value());
  CHECK(rows[0].p_vacuum == doctest::Approx(0.573735430114).epsilon(1e-9));
}

TEST_CASE("config loading") {
  fs::path dir = temp_dir("config");

  SUBCASE("empty file keeps defaults") {
    fs::path f = dir / "empty.cfg";
    std::ofstream(f) << "# nothing but a comment\n\n";
    SweepSpec s = load_config(f.string());
    CHECK(s.alpha_steps == 161);
    CHECK(s.T.size() == 1);
    CHECK(s.format == OutputFormat::Csv);
  }

  SUBCASE("scalar and list values") {
    fs::path f = dir / "basic.cfg";
    std::ofstream(f) << "alpha_max = 2.0\n"
                        "alpha_steps = 11   # inline comment\n"
                        "T = 1.0, 0.97\n"
                        "Upsilon = NA, 0.05\n"
                        "dx = ideal, 0.5\n"
                        "peak = both\n"
                        "vacuum_only = false\n"
                        "format = json\n"
                        "output = out.json\n";
    SweepSpec s = load_config(f.string());
    CHECK(s.alpha_max == doctest::Approx(2.0));
    CHECK(s.alpha_steps == 11);
    REQUIRE(s.T.size() == 2);
    CHECK(s.T[1] == doctest::Approx(0.97));
    REQUIRE(s.Upsilon.size() == 2);
    CHECK(!s.Upsilon[0].has_value());
    CHECK(*s.Upsilon[1] == doctest::Approx(0.05));
    REQUIRE(s.dx.size() == 2);
    CHECK(!s.dx[0].has_value());
    CHECK(*s.dx[1] == doctest::Approx(0.5));
    CHECK(s.peak == Peak::Both);
    CHECK(s.format == OutputFormat::Json);
    CHECK(s.output == "out.json");
  }

  SUBCASE("out-of-range value names the key") {
    fs::path f = dir / "bad_t.cfg";
    std::ofstream(f) << "T = 1.2\n";
    try {
      load_config(f.string());
      FAIL("expected config_error");
    } catch (const config_error& e) {
      CHECK(std::string(e.what()).find("T") != std::string::npos);
    }
  }

  SUBCASE("unknown key reports the line") {
    fs::path f = dir / "unknown.cfg";
    std::ofstream(f) << "alpha_max = 2.0\nwobble = 3\n";
    try {
      load_config(f.string());
      FAIL("expected config_error");
    } catch (const config_error& e) {
      std::string msg = e.what();
      CHECK(msg.find("wobble") != std::string::npos);
      CHECK(msg.find(":2") != std::string::npos);
    }
  }

  SUBCASE("malformed number reports the line") {
    fs::path f = dir / "mal.cfg";
    std::ofstream(f) << "alpha_max = two\n";
    CHECK_THROWS_AS(load_config(f.string()), config_error);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config((dir / "absent.cfg").string()), config_error);
  }
}

TEST_CASE("figure names round-trip") {
  for (FigureId id : all_figures()) {
    auto back = figure_from_name(figure_name(id));
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }
  CHECK(!figure_from_name("no_such_figure").has_value());
}

TEST_CASE("figure presets validate") {
  for (FigureId id : all_figures()) {
    if (id == FigureId::Fig11ProbDist) {
      CHECK_THROWS_AS(figure_preset(id), std::invalid_argument);
      continue;
    }
    CHECK_NOTHROW(figure_preset(id).validate());
  }
}

TEST_CASE("figure reproduction writes csv, metadata and plot script") {
  fs::path dir = temp_dir("figs");
  std::string csv = reproduce_figure(FigureId::Fig12, dir.string());
  CHECK(fs::exists(csv));
  fs::path base = fs::path(csv).parent_path() / fs::path(csv).stem();
  CHECK(fs::exists(base.string() + ".meta.json"));
  CHECK(fs::exists(base.string() + ".gp"));

  auto meta = nlohmann::json::parse(slurp(base.string() + ".meta.json"));
  CHECK(meta["figure"].get<std::string>() == figure_name(FigureId::Fig12));
  CHECK(meta["version"].get<std::string>() == kVersion);
  CHECK(meta["rows"].get<int>() > 0);

  // deterministic output
  std::string first = slurp(csv);
  reproduce_figure(FigureId::Fig12, dir.string());
  CHECK(slurp(csv) == first);
}

TEST_CASE("quadrature-density figure uses its own schema") {
  fs::path dir = temp_dir("fig11");
  std::string csv = reproduce_figure(FigureId::Fig11ProbDist, dir.string());
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,density_alpha0,density_alpha1,density_alpha2");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 801);
}

TEST_CASE("worker count") {
  CHECK(worker_count() >= 1);
}
