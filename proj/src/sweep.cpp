#include "catswap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "catswap/fock_oracle.hpp"

namespace catswap {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt17(const std::optional<double>& v) {
  return v.has_value() ? fmt17(*v) : "NA";
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()),
                            std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  std::exception_ptr err;
  auto body = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace

const char* peak_name(Peak p) {
  switch (p) {
    case Peak::Plus:
      return "plus";
    case Peak::Minus:
      return "minus";
    case Peak::Both:
      return "both";
  }
  return "plus";
}

std::optional<Peak> peak_from_name(const std::string& s) {
  if (s == "plus") return Peak::Plus;
  if (s == "minus") return Peak::Minus;
  if (s == "both") return Peak::Both;
  return std::nullopt;
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("CATSWAP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end && *end == '\0' && cap >= 1) {
      hw = std::min<long>(hw, std::min<long>(cap, 256));
    }
  }
  return hw;
}

void SweepSpec::validate() const {
  auto fail = [](const std::string& msg) { throw config_error(msg); };
  if (!(alpha_min >= 0.0 && alpha_min <= 6.0) ||
      !(alpha_max >= 0.0 && alpha_max <= 6.0) || !(alpha_min <= alpha_max)) {
    fail("alpha_min/alpha_max: need 0 <= alpha_min <= alpha_max <= 6");
  }
  if (alpha_steps < 1 || alpha_steps > 100000) {
    fail("alpha_steps: must be in [1, 100000]");
  }
  if (T.empty()) fail("T: list must not be empty");
  for (double t : T) {
    if (!(t >= 0.0 && t <= 1.0)) fail("T: values must be in [0, 1]");
  }
  if (Upsilon.empty()) fail("Upsilon: list must not be empty (use NA)");
  for (const auto& u : Upsilon) {
    if (u.has_value() && !(*u > 1e-4 && *u <= 1.0)) {
      fail("Upsilon: values must be in (1e-4, 1] or NA");
    }
  }
  if (dx.empty()) fail("dx: list must not be empty (use NA)");
  for (const auto& d : dx) {
    if (d.has_value() && !(*d > 0.0 && *d <= 100.0)) {
      fail("dx: values must be in (0, 100] or NA");
    }
  }
  if (nodes < 2 || nodes > 4096) fail("nodes: must be in [2, 4096]");
  if (upsilon_nodes < 8 || upsilon_nodes > 4096) {
    fail("upsilon_nodes: must be in [8, 4096]");
  }
  if (output.empty()) fail("output: path must not be empty");
}

namespace {

template <typename T>
std::vector<T> sorted_unique_like(std::vector<T> v) {
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) {
    if constexpr (std::is_same_v<T, std::optional<double>>) {
      if (a.has_value() != b.has_value()) return !a.has_value();
      if (!a.has_value()) return false;
      return *a < *b;
    } else {
      return a < b;
    }
  });
  return v;
}

SweepRow eval_row(const SweepSpec& spec, double alpha, double t,
                  const std::optional<double>& ups,
                  const std::optional<double>& dx) {
  SweepRow row;
  row.alpha = alpha;
  row.T = t;
  row.Upsilon = ups;
  row.dx = dx;
  row.peak = spec.peak;

  ProtocolParams p;
  p.alpha = alpha;
  p.T = t;
  p.upsilon = 0.0;
  p.bandwidth = dx;
  p.peak = spec.peak;
  p.nodes.count = spec.nodes;

  if (spec.vacuum_only) {
    if (ups.has_value()) {
      const double upsilon_max = std::min(6.0 * *ups, t);
      double weight = 0.0, acc = 0.0;
      for (const auto& [u, w] :
           gauss_legendre_on(0.0, upsilon_max, spec.upsilon_nodes)) {
        const double f = w * gaussian_weight(u, *ups);
        weight += f;
        acc += f * vacuum_selected_state(alpha, t, u).p_vacuum;
      }
      row.p_vacuum = acc / weight;
    } else {
      row.p_vacuum = vacuum_selected_state(alpha, t, 0.0).p_vacuum;
    }
    return row;
  }

  HeraldedOutcome out =
      ups.has_value()
          ? run_es_averaged(p, GaussianLossSpec{*ups, spec.upsilon_nodes, {}})
          : run_es_fixed(p);
  row.F_plus = fidelity(out.rho, bell_state(alpha, BellSign::Plus));
  row.F_minus = fidelity(out.rho, bell_state(alpha, BellSign::Minus));
  row.p_vacuum = out.p_vacuum;
  row.p_homodyne = out.p_homodyne;
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> alphas;
  if (spec.alpha_steps == 1) {
    alphas.push_back(spec.alpha_min);
  } else {
    const double step =
        (spec.alpha_max - spec.alpha_min) / (spec.alpha_steps - 1);
    for (int i = 0; i < spec.alpha_steps; ++i) {
      alphas.push_back(spec.alpha_min + i * step);
    }
  }
  const auto ts = sorted_unique_like(spec.T);
  const auto upsilons = sorted_unique_like(spec.Upsilon);
  const auto dxs = sorted_unique_like(spec.dx);

  struct Point {
    double alpha, T;
    std::optional<double> ups, dx;
  };
  std::vector<Point> grid;
  grid.reserve(alphas.size() * ts.size() * upsilons.size() * dxs.size());
  for (double a : alphas) {
    for (double t : ts) {
      for (const auto& u : upsilons) {
        for (const auto& d : dxs) grid.push_back({a, t, u, d});
      }
    }
  }

  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Point& g = grid[i];
    rows[i] = eval_row(spec, g.alpha, g.T, g.ups, g.dx);
  });
  return rows;
}

void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "alpha,T,Upsilon,dx,peak,F_plus,F_minus,p_vacuum,p_homodyne\n";
  for (const SweepRow& r : rows) {
    os << fmt17(r.alpha) << ',' << fmt17(r.T) << ',' << opt17(r.Upsilon) << ','
       << opt17(r.dx) << ',' << peak_name(r.peak) << ',' << opt17(r.F_plus)
       << ',' << opt17(r.F_minus) << ',' << fmt17(r.p_vacuum) << ','
       << opt17(r.p_homodyne) << '\n';
  }
}

namespace {

nlohmann::ordered_json row_to_json(const SweepRow& r) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["T"] = r.T;
  j["Upsilon"] = r.Upsilon.has_value() ? nlohmann::ordered_json(*r.Upsilon)
                                       : nlohmann::ordered_json(nullptr);
  j["dx"] = r.dx.has_value() ? nlohmann::ordered_json(*r.dx)
                             : nlohmann::ordered_json(nullptr);
  j["peak"] = peak_name(r.peak);
  j["F_plus"] = r.F_plus.has_value() ? nlohmann::ordered_json(*r.F_plus)
                                     : nlohmann::ordered_json(nullptr);
  j["F_minus"] = r.F_minus.has_value() ? nlohmann::ordered_json(*r.F_minus)
                                       : nlohmann::ordered_json(nullptr);
  j["p_vacuum"] = r.p_vacuum;
  j["p_homodyne"] = r.p_homodyne.has_value()
                        ? nlohmann::ordered_json(*r.p_homodyne)
                        : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace

void write_rows_json(std::ostream& os, const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SweepRow& r : rows) arr.push_back(row_to_json(r));
  os << arr.dump(2) << '\n';
}

namespace {

struct ConfigLine {
  int number;
  std::string key;
  std::string value;
};

[[noreturn]] void config_fail(const std::string& path, int line,
                              const std::string& msg) {
  throw config_error(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& path, int line, const std::string& key,
                    const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    config_fail(path, line, "key '" + key + "': cannot parse number '" + v + "'");
  }
}

int parse_int(const std::string& path, int line, const std::string& key,
              const std::string& v) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    config_fail(path, line, "key '" + key + "': cannot parse integer '" + v + "'");
  }
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

}  // namespace

SweepSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path + ": cannot open config file");
  SweepSpec spec;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_fail(path, line_no, "expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "alpha_min") {
      spec.alpha_min = parse_double(path, line_no, key, value);
    } else if (key == "alpha_max") {
      spec.alpha_max = parse_double(path, line_no, key, value);
    } else if (key == "alpha_steps") {
      spec.alpha_steps = parse_int(path, line_no, key, value);
    } else if (key == "T") {
      spec.T.clear();
      for (const std::string& item : split_list(value)) {
        spec.T.push_back(parse_double(path, line_no, key, item));
      }
    } else if (key == "Upsilon") {
      spec.Upsilon.clear();
      for (const std::string& item : split_list(value)) {
        if (item == "NA") {
          spec.Upsilon.push_back(std::nullopt);
        } else {
          spec.Upsilon.push_back(parse_double(path, line_no, key, item));
        }
      }
    } else if (key == "dx") {
      spec.dx.clear();
      for (const std::string& item : split_list(value)) {
        if (item == "NA" || item == "ideal") {
          spec.dx.push_back(std::nullopt);
        } else {
          spec.dx.push_back(parse_double(path, line_no, key, item));
        }
      }
    } else if (key == "peak") {
      const auto p = peak_from_name(value);
      if (!p) config_fail(path, line_no, "peak must be plus/minus/both");
      spec.peak = *p;
    } else if (key == "vacuum_only") {
      if (value == "true" || value == "1") {
        spec.vacuum_only = true;
      } else if (value == "false" || value == "0") {
        spec.vacuum_only = false;
      } else {
        config_fail(path, line_no, "vacuum_only must be true/false");
      }
    } else if (key == "nodes") {
      spec.nodes = parse_int(path, line_no, key, value);
    } else if (key == "upsilon_nodes") {
      spec.upsilon_nodes = parse_int(path, line_no, key, value);
    } else if (key == "output") {
      spec.output = value;
    } else if (key == "format") {
      if (value == "csv") {
        spec.format = OutputFormat::Csv;
      } else if (value == "json") {
        spec.format = OutputFormat::Json;
      } else {
        config_fail(path, line_no, "format must be csv or json");
      }
    } else {
      config_fail(path, line_no, "unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

const char* figure_name(FigureId id) {
  switch (id) {
    case FigureId::Fig6:
      return "Fig6";
    case FigureId::Fig7:
      return "Fig7";
    case FigureId::Fig8:
      return "Fig8";
    case FigureId::Fig9:
      return "Fig9";
    case FigureId::Fig10:
      return "Fig10";
    case FigureId::Fig11ProbDist:
      return "Fig11ProbDist";
    case FigureId::Fig12:
      return "Fig12";
    case FigureId::FigHomSuccess:
      return "FigHomSuccess";
  }
  return "Fig6";
}

std::optional<FigureId> figure_from_name(const std::string& name) {
  for (FigureId id : all_figures()) {
    if (name == figure_name(id)) return id;
  }
  return std::nullopt;
}

std::vector<FigureId> all_figures() {
  return {FigureId::Fig6,  FigureId::Fig7,          FigureId::Fig8,
          FigureId::Fig9,  FigureId::Fig10,         FigureId::Fig11ProbDist,
          FigureId::Fig12, FigureId::FigHomSuccess};
}

SweepSpec figure_preset(FigureId id) {
  SweepSpec s;
  switch (id) {
    case FigureId::Fig6:
      s.T = {0.95, 0.96, 0.97, 0.98, 0.99, 1.0};
      break;
    case FigureId::Fig7:
      s.T = {0.95, 1.0};
      s.Upsilon = {std::nullopt, 0.05, 0.10};
      break;
    case FigureId::Fig8: {
      s.alpha_steps = 41;
      s.T = {1.0};
      s.Upsilon.clear();
      for (int k = 0; k <= 40; ++k) s.Upsilon.push_back(0.0025 * (k + 1));
      break;
    }
    case FigureId::Fig9:
      s.T = {1.0};
      s.dx = {0.01, 0.25, 0.5, 1.0};
      break;
    case FigureId::Fig10:
      s.T = {0.95};
      s.dx = {0.01, 0.25, 0.5, 1.0};
      break;
    case FigureId::Fig11ProbDist:
      throw std::invalid_argument(
          "figure_preset: Fig11ProbDist does not map onto the sweep schema");
    case FigureId::Fig12:
      s.alpha_max = 2.5;
      s.alpha_steps = 101;
      s.T = {0.95, 0.96, 0.97, 0.98, 0.99, 1.0};
      s.vacuum_only = true;
      break;
    case FigureId::FigHomSuccess:
      s.T = {1.0};
      s.dx = {0.25, 0.5, 1.0, 5.0};
      s.peak = Peak::Both;
      break;
  }
  s.output = std::string(figure_name(id)) + ".csv";
  return s;
}

namespace {

nlohmann::ordered_json spec_to_json(const SweepSpec& s) {
  nlohmann::ordered_json j;
  j["alpha_min"] = s.alpha_min;
  j["alpha_max"] = s.alpha_max;
  j["alpha_steps"] = s.alpha_steps;
  j["T"] = s.T;
  nlohmann::ordered_json ups = nlohmann::ordered_json::array();
  for (const auto& u : s.Upsilon) {
    ups.push_back(u.has_value() ? nlohmann::ordered_json(*u)
                                : nlohmann::ordered_json(nullptr));
  }
  j["Upsilon"] = ups;
  nlohmann::ordered_json dxs = nlohmann::ordered_json::array();
  for (const auto& d : s.dx) {
    dxs.push_back(d.has_value() ? nlohmann::ordered_json(*d)
                                : nlohmann::ordered_json(nullptr));
  }
  j["dx"] = dxs;
  j["peak"] = peak_name(s.peak);
  j["vacuum_only"] = s.vacuum_only;
  j["nodes"] = s.nodes;
  j["upsilon_nodes"] = s.upsilon_nodes;
  j["format"] = s.format == OutputFormat::Csv ? "csv" : "json";
  return j;
}

void write_text_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << body;
}

std::string plot_script(FigureId id, const std::string& csv_name) {
  std::string y = "6";  // F_plus
  std::string ylabel = "F_plus";
  if (id == FigureId::Fig12) {
    y = "8";
    ylabel = "p_vacuum";
  } else if (id == FigureId::FigHomSuccess) {
    y = "9";
    ylabel = "p_homodyne";
  }
  std::string s;
  s += "# generic gnuplot helper; refine per series as needed\n";
  s += "set datafile separator ','\n";
  s += "set key autotitle columnhead\n";
  if (id == FigureId::Fig11ProbDist) {
    s += "set xlabel 'x'\nset ylabel 'density'\n";
    s += "plot '" + csv_name + "' using 1:2 with lines, '' using 1:3 with "
         "lines, '' using 1:4 with lines\n";
  } else {
    s += "set xlabel 'alpha'\nset ylabel '" + ylabel + "'\n";
    s += "plot '" + csv_name + "' using 1:" + y + " with points\n";
  }
  return s;
}

}  // namespace

std::string reproduce_figure(FigureId id, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto t_start = std::chrono::steady_clock::now();
  const std::string base = figure_name(id);
  const fs::path csv_path = fs::path(out_dir) / (base + ".csv");

  nlohmann::ordered_json meta;
  meta["figure"] = base;
  meta["version"] = kVersion;
  std::size_t n_rows = 0;

  if (id == FigureId::Fig11ProbDist) {
    const std::vector<double> alphas = {0.0, 1.0, 2.0};
    std::vector<double> xs;
    for (int i = 0; i <= 800; ++i) xs.push_back(-4.0 + 0.01 * i);
    std::vector<std::vector<std::pair<double, double>>> curves(alphas.size());
    parallel_for(alphas.size(), [&](std::size_t i) {
      ProtocolParams p;
      p.alpha = alphas[i];
      p.T = 1.0;
      curves[i] = quadrature_distribution(p, xs);
    });
    std::ostringstream os;
    os << "x,density_alpha0,density_alpha1,density_alpha2\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      os << fmt17(xs[i]);
      for (const auto& curve : curves) os << ',' << fmt17(curve[i].second);
      os << '\n';
    }
    write_text_file(csv_path, os.str());
    n_rows = xs.size();
    meta["params"] = {{"x_min", -4.0},  {"x_max", 4.0}, {"x_step", 0.01},
                      {"alpha", alphas}, {"T", 1.0},     {"upsilon", 0.0}};
  } else {
    SweepSpec spec = figure_preset(id);
    spec.output = csv_path.string();
    const std::vector<SweepRow> rows = run_sweep(spec);
    std::ostringstream os;
    write_rows_csv(os, rows);
    write_text_file(csv_path, os.str());
    n_rows = rows.size();
    meta["params"] = spec_to_json(spec);
  }

  write_text_file(fs::path(out_dir) / (base + ".gp"),
                  plot_script(id, base + ".csv"));

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  meta["rows"] = n_rows;
  meta["wall_time_seconds"] = wall;
  write_text_file(fs::path(out_dir) / (base + ".meta.json"),
                  meta.dump(2) + "\n");
  return csv_path.string();
}

std::vector<DistanceRow> distance_report(const std::vector<double>& thresholds,
                                         double atten_db_per_km) {
  if (!(atten_db_per_km > 0.0)) {
    throw std::invalid_argument("distance_report: attenuation must be > 0");
  }
  for (double th : thresholds) {
    if (!(th > 0.0 && th < 1.0)) {
      throw std::invalid_argument(
          "distance_report: thresholds must be in (0, 1)");
    }
  }

  const GaussianLossSpec loss{0.05, 32, {}};
  // Best fidelity over the cat-amplitude grid at one transmission level,
  // averaged over the loss-mismatch distribution.
  const auto peak_avg_fidelity = [&](double t) {
    constexpr int kAlphaPoints = 76;  // 0.25 .. 4.00, step 0.05
    std::vector<double> f(kAlphaPoints);
    parallel_for(kAlphaPoints, [&](std::size_t i) {
      const double alpha = 0.25 + 0.05 * static_cast<double>(i);
      ProtocolParams p;
      p.alpha = alpha;
      p.T = t;
      const HeraldedOutcome out = run_es_averaged(p, loss);
      f[i] = fidelity(out.rho, bell_state(alpha, BellSign::Plus));
    });
    return *std::max_element(f.begin(), f.end());
  };

  std::vector<DistanceRow> rows;
  for (double th : thresholds) {
    double lo = 0.5;
    double hi = 1.0;
    if (peak_avg_fidelity(hi) < th) {
      throw std::invalid_argument(
          "distance_report: threshold exceeds the lossless-arm ceiling");
    }
    while (peak_avg_fidelity(lo) >= th && lo > 0.05) lo *= 0.5;
    // peak fidelity grows monotonically with T: bisect for the crossing.
    for (int iter = 0; iter < 40 && hi - lo > 1e-5; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (peak_avg_fidelity(mid) >= th ? hi : lo) = mid;
    }
    DistanceRow row;
    row.threshold = th;
    row.tolerated_T = hi;
    row.loss_db = transmission_to_db(hi);
    row.separation_km = 2.0 * distance_for_T(hi, atten_db_per_km);
    rows.push_back(row);
  }
  return rows;
}

std::vector<OracleCheckRow> oracle_check_grid(int n_max) {
  struct Cell {
    double alpha, T, upsilon;
    std::optional<double> dx;
  };
  std::vector<Cell> cells;
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double t : {1.0, 0.95, 0.9}) {
      for (double ups : {0.0, 0.05}) {
        for (const auto& dx :
             {std::optional<double>{}, std::optional<double>{0.5}}) {
          cells.push_back({alpha, t, ups, dx});
        }
      }
    }
  }
  std::vector<OracleCheckRow> rows(cells.size());
  fock::OracleConfig config;
  config.n_max = n_max;
  parallel_for(cells.size(), [&](std::size_t i) {
    const Cell& c = cells[i];
    ProtocolParams p;
    p.alpha = c.alpha;
    p.T = c.T;
    p.upsilon = c.upsilon;
    p.bandwidth = c.dx;
    const HeraldedOutcome analytic = run_es_fixed(p);
    const HeraldedOutcome oracle = fock::oracle_run_es(p, config);
    OracleCheckRow& row = rows[i];
    row.alpha = c.alpha;
    row.T = c.T;
    row.upsilon = c.upsilon;
    row.dx = c.dx;
    row.trace_dist =
        trace_distance(analytic.rho.matrix(), oracle.rho.matrix());
    row.delta_p0 = std::abs(analytic.p_vacuum - oracle.p_vacuum);
    row.pass = row.trace_dist <= 1e-6 && row.delta_p0 <= 1e-8;
  });
  return rows;
}

}  // namespace catswap
