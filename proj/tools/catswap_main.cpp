#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "catswap/fock_oracle.hpp"
#include "catswap/sweep.hpp"

using namespace catswap;

namespace {

std::vector<double> parse_double_list(const std::string& raw, const char* what) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw config_error(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw config_error(std::string(what) + ": empty list");
  return out;
}

std::vector<std::optional<double>> parse_optional_list(const std::string& raw,
                                                       const char* what) {
  std::vector<std::optional<double>> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "NA" || item == "na" || item == "ideal") {
      out.push_back(std::nullopt);
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw config_error(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw config_error(std::string(what) + ": empty list");
  return out;
}

void write_rows(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::ofstream os(spec.output, std::ios::binary);
  if (!os) throw config_error("cannot open output file '" + spec.output + "'");
  if (spec.format == OutputFormat::Csv) {
    write_rows_csv(os, rows);
  } else {
    write_rows_json(os, rows);
  }
}

int run_sweep_command(const std::string& config_path, const CLI::App* cmd,
                      const std::string& alpha_range, const std::string& t_list,
                      const std::string& upsilon_list, const std::string& dx_list,
                      int alpha_steps, const std::string& peak, bool vacuum_only,
                      int nodes, int upsilon_nodes, const std::string& output,
                      const std::string& format) {
  SweepSpec spec;
  if (!config_path.empty()) spec = load_config(config_path);

  if (cmd->count("--alpha") > 0) {
    auto mm = parse_double_list(alpha_range, "--alpha");
    if (mm.size() != 2) throw config_error("--alpha needs exactly 'min,max'");
    spec.alpha_min = mm[0];
    spec.alpha_max = mm[1];
  }
  if (cmd->count("--alpha-steps") > 0) spec.alpha_steps = alpha_steps;
  if (cmd->count("--T") > 0) spec.T = parse_double_list(t_list, "--T");
  if (cmd->count("--Upsilon") > 0)
    spec.Upsilon = parse_optional_list(upsilon_list, "--Upsilon");
  if (cmd->count("--dx") > 0) spec.dx = parse_optional_list(dx_list, "--dx");
  if (cmd->count("--peak") > 0) {
    auto p = peak_from_name(peak);
    if (!p) throw config_error("--peak must be plus, minus or both");
    spec.peak = *p;
  }
  if (cmd->count("--vacuum-only") > 0) spec.vacuum_only = vacuum_only;
  if (cmd->count("--nodes") > 0) spec.nodes = nodes;
  if (cmd->count("--upsilon-nodes") > 0) spec.upsilon_nodes = upsilon_nodes;
  if (cmd->count("--output") > 0) spec.output = output;
  if (cmd->count("--format") > 0) {
    if (format == "csv") {
      spec.format = OutputFormat::Csv;
    } else if (format == "json") {
      spec.format = OutputFormat::Json;
    } else {
      throw config_error("--format must be csv or json");
    }
  }

  spec.validate();
  auto rows = run_sweep(spec);
  write_rows(spec, rows);
  std::printf("wrote %zu rows to %s\n", rows.size(), spec.output.c_str());
  return 0;
}

int run_figure_command(const std::string& which, const std::string& out_dir) {
  std::vector<FigureId> ids;
  if (which == "all") {
    ids = all_figures();
  } else {
    auto id = figure_from_name(which);
    if (!id) {
      std::string names = "all";
      for (FigureId f : all_figures()) names += std::string(", ") + figure_name(f);
      throw config_error("unknown figure '" + which + "' (choose one of: " + names +
                         ")");
    }
    ids.push_back(*id);
  }
  for (FigureId id : ids) {
    std::string csv = reproduce_figure(id, out_dir);
    std::printf("%s -> %s\n", figure_name(id), csv.c_str());
  }
  return 0;
}

int run_distance_command(double atten, const std::string& thresholds_raw,
                         const std::string& output) {
  auto thresholds = parse_double_list(thresholds_raw, "--thresholds");
  auto rows = distance_report(thresholds, atten);
  std::ostringstream os;
  os << "threshold,tolerated_T,loss_db,separation_km\n";
  os.precision(17);
  for (const auto& r : rows) {
    os << r.threshold << ',' << r.tolerated_T << ',' << r.loss_db << ','
       << r.separation_km << '\n';
  }
  if (output.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw config_error("cannot open output file '" + output + "'");
    f << os.str();
    std::printf("wrote %zu rows to %s\n", rows.size(), output.c_str());
  }
  return 0;
}

int run_oracle_command(int n_max) {
  auto rows = oracle_check_grid(n_max);
  std::printf("alpha     T      upsilon  dx     trace_dist   delta_p0     status\n");
  int failed = 0;
  for (const auto& r : rows) {
    char dx[16];
    if (r.dx) {
      std::snprintf(dx, sizeof dx, "%-6.3g", *r.dx);
    } else {
      std::snprintf(dx, sizeof dx, "ideal ");
    }
    std::printf("%-8.3g  %-5.3g  %-7.3g  %s %-12.3e %-12.3e %s\n", r.alpha, r.T,
                r.upsilon, dx, r.trace_dist, r.delta_p0, r.pass ? "ok" : "MISMATCH");
    if (!r.pass) ++failed;
  }
  if (failed > 0) {
    std::fprintf(stderr, "%d of %zu cells disagree beyond tolerance\n", failed,
                 rows.size());
    throw numerical_error("oracle cross-check failed");
  }
  std::printf("all %zu cells agree (trace distance <= 1e-6, |dP0| <= 1e-8)\n",
              rows.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form simulator of a cat-state hybrid entanglement-swapping "
               "protocol"};
  app.set_version_flag("--version", std::string("catswap ") + kVersion);
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid");
  std::string config_path, alpha_range, t_list, upsilon_list, dx_list;
  std::string peak = "plus", output = "sweep.csv", format = "csv";
  int alpha_steps = 161, nodes = 32, upsilon_nodes = 32;
  bool vacuum_only = false;
  sweep->add_option("--config", config_path, "key=value config file");
  sweep->add_option("--alpha", alpha_range, "amplitude range 'min,max'");
  sweep->add_option("--alpha-steps", alpha_steps, "number of grid points");
  sweep->add_option("--T", t_list, "transmissions, comma separated");
  sweep->add_option("--Upsilon", upsilon_list,
                    "mismatch spreads, comma separated (NA = fixed upsilon = 0)");
  sweep->add_option("--dx", dx_list,
                    "window widths, comma separated (NA or ideal = point readout)");
  sweep->add_option("--peak", peak, "heralding peak: plus, minus or both");
  sweep->add_flag("--vacuum-only", vacuum_only, "report P0 only");
  sweep->add_option("--nodes", nodes, "window quadrature nodes");
  sweep->add_option("--upsilon-nodes", upsilon_nodes, "mismatch quadrature nodes");
  sweep->add_option("--output", output, "output path");
  sweep->add_option("--format", format, "csv or json");

  // figure
  auto* figure = app.add_subcommand("figure", "reproduce a frozen figure dataset");
  std::string fig_name, fig_outdir = "figures";
  figure->add_option("name", fig_name, "figure name or 'all'")->required();
  figure->add_option("--outdir", fig_outdir, "output directory");

  // distance-report
  auto* dist = app.add_subcommand("distance-report",
                                  "fidelity thresholds to channel reach");
  double atten = 0.149;
  std::string thresholds = "0.80,0.70,0.60", dist_output;
  dist->add_option("--atten", atten, "fiber attenuation in dB/km");
  dist->add_option("--thresholds", thresholds, "fidelity thresholds, comma separated");
  dist->add_option("--output", dist_output, "write CSV here instead of stdout");

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check",
                                    "cross-check against the Fock-basis oracle");
  int n_max = 40;
  oracle->add_option("--n-max", n_max, "Fock truncation");

  try {
    app.parse(argc, argv);
    if (sweep->parsed()) {
      return run_sweep_command(config_path, sweep, alpha_range, t_list, upsilon_list,
                               dx_list, alpha_steps, peak, vacuum_only, nodes,
                               upsilon_nodes, output, format);
    }
    if (figure->parsed()) return run_figure_command(fig_name, fig_outdir);
    if (dist->parsed()) return run_distance_command(atten, thresholds, dist_output);
    if (oracle->parsed()) return run_oracle_command(n_max);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 3;
  }
}
