#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "catswap/metrics.hpp"

namespace catswap {

inline constexpr const char* kVersion = "1.0.0";

enum class OutputFormat { Csv, Json };

// Text names used in CSV/JSON output and on the command line.
const char* peak_name(Peak p);
std::optional<Peak> peak_from_name(const std::string& s);

// A rectangular parameter sweep. Optional entries use std::nullopt for
// "not applicable": an empty Upsilon slot means fixed upsilon = 0 (no
// averaging) and an empty dx slot means ideal point homodyne; both print as
// the literal NA.
struct SweepSpec {
  double alpha_min = 0.0;
  double alpha_max = 4.0;
  int alpha_steps = 161;  // number of grid points (inclusive endpoints)
  std::vector<double> T{1.0};
  std::vector<std::optional<double>> Upsilon{std::nullopt};
  std::vector<std::optional<double>> dx{std::nullopt};
  Peak peak = Peak::Plus;
  bool vacuum_only = false;  // skip fidelities, report P0 only
  int nodes = 32;            // window quadrature
  int upsilon_nodes = 32;    // mismatch-average quadrature
  std::string output = "sweep.csv";
  OutputFormat format = OutputFormat::Csv;

  void validate() const;  // throws config_error naming the offending key
};

struct SweepRow {
  double alpha = 0.0;
  double T = 1.0;
  std::optional<double> Upsilon;
  std::optional<double> dx;
  Peak peak = Peak::Plus;
  std::optional<double> F_plus;
  std::optional<double> F_minus;
  double p_vacuum = 0.0;
  std::optional<double> p_homodyne;
};

// Evaluates the grid in deterministic lexicographic order of
// (alpha, T, Upsilon, dx) (absent values sort first). Parallelized over rows;
// CATSWAP_THREADS caps the worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// CSV: header alpha,T,Upsilon,dx,peak,F_plus,F_minus,p_vacuum,p_homodyne;
// numbers at 17 significant digits; NA literal; \n newlines.
void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_rows_json(std::ostream& os, const std::vector<SweepRow>& rows);

// Flat key=value config (# comments). Keys match SweepSpec field names.
// Unknown keys and malformed values raise config_error with the line number.
SweepSpec load_config(const std::string& path);

enum class FigureId {
  Fig6,           // F vs alpha, equal loss levels
  Fig7,           // F vs alpha, equal + averaged unequal loss
  Fig8,           // F over (alpha, Upsilon) grid at T=1
  Fig9,           // F vs alpha for several window widths, T=1
  Fig10,          // same at T=0.95
  Fig11ProbDist,  // pi/4 quadrature densities for alpha in {0,1,2}
  Fig12,          // vacuum success probability vs alpha
  FigHomSuccess,  // window success probability vs alpha
};

const char* figure_name(FigureId id);
std::optional<FigureId> figure_from_name(const std::string& name);
std::vector<FigureId> all_figures();

// Frozen preset grid for a figure (not meaningful for Fig11ProbDist, which
// does not map onto the sweep schema).
SweepSpec figure_preset(FigureId id);

// Writes <name>.csv, <name>.meta.json and a small <name>.gp plotting script
// into out_dir. Returns the CSV path.
std::string reproduce_figure(FigureId id, const std::string& out_dir);

struct DistanceRow {
  double threshold = 0.0;    // required fidelity
  double tolerated_T = 0.0;  // lowest per-arm transmission reaching it
  double loss_db = 0.0;      // corresponding per-arm loss
  double separation_km = 0.0;  // two arms at atten_db_per_km
};

// For each fidelity threshold, finds the lowest transmission T whose best
// achievable fidelity (over alpha, averaged over the Upsilon = 0.05 mismatch
// distribution) still reaches the threshold, and converts it to an
// Alice-Bob separation.
std::vector<DistanceRow> distance_report(const std::vector<double>& thresholds,
                                         double atten_db_per_km);

// Worker count: min(hardware, CATSWAP_THREADS if set); at least 1.
int worker_count();

struct OracleCheckRow {
  double alpha = 0.0;
  double T = 1.0;
  double upsilon = 0.0;
  std::optional<double> dx;  // empty = ideal readout
  double trace_dist = 0.0;   // analytic vs Fock-basis heralded state
  double delta_p0 = 0.0;     // vacuum-probability difference
  bool pass = false;         // trace_dist <= 1e-6 and delta_p0 <= 1e-8
};

// Cross-checks the closed-form engine against the truncated-Fock oracle on a
// fixed (alpha, T, upsilon, readout) grid.
std::vector<OracleCheckRow> oracle_check_grid(int n_max);

}  // namespace catswap
