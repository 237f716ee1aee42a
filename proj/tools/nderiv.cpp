// Command-line frontend: differentiate noisy CSV data, reproduce the
// paper-style experiments, or sweep gradient/stopping configurations.
//
// Exit codes: 0 success, 1 I/O error, 2 usage or validation error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nderiv/csv.hpp"
#include "nderiv/descent.hpp"
#include "nderiv/experiments.hpp"
#include "nderiv/grid.hpp"
#include "nderiv/transform.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;

struct GradientChoice {
  nderiv::CgVariant cg = nderiv::CgVariant::None;
  double omega = 1.0;
};

GradientChoice parse_gradient(const std::string& name, double omega) {
  GradientChoice g;
  g.omega = omega;
  if (name == "l2") {
    g.omega = 0.0;
  } else if (name == "sobolev") {
    g.cg = nderiv::CgVariant::None;
  } else if (name == "cg-l2h1") {
    g.cg = nderiv::CgVariant::L2H1;
  } else if (name == "cg-h1h1") {
    g.cg = nderiv::CgVariant::H1H1;
  } else {
    throw CLI::ValidationError("--gradient", "unknown gradient '" + name + "'");
  }
  return g;
}

nderiv::BoundaryKind parse_bc(const std::string& name) {
  if (name == "dirichlet") return nderiv::BoundaryKind::Dirichlet;
  if (name == "neumann") return nderiv::BoundaryKind::Neumann;
  if (name == "robin-left") return nderiv::BoundaryKind::RobinLeft;
  if (name == "robin-right") return nderiv::BoundaryKind::RobinRight;
  throw CLI::ValidationError("--bc", "unknown boundary condition '" + name +
                                         "'");
}

std::string sibling_path(const std::string& path, const std::string& suffix) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

// ---------------------------------------------------------------- differentiate

struct DiffOptions {
  std::string input, output;
  std::string gradient = "sobolev";
  std::string bc = "neumann";
  std::string stop = "heuristic";
  double omega = 1.0;
  double delta = -1.0;
  double tau = 1.0;
  double uptick = 1e-3;
  int patience = 3;
  double sat_tol = 1e-4;
  double fit_tol = 0.05;
  int max_iter = 500;
  std::optional<double> phi_a, phi_b;
  std::optional<double> g_a, g_b;
};

int cmd_differentiate(const DiffOptions& opt) {
  using namespace nderiv;

  if (opt.stop == "discrepancy" && !(opt.delta > 0.0)) {
    std::cerr << "error: --stop discrepancy requires --delta > 0\n";
    return kExitUsage;
  }
  if (opt.bc == "dirichlet" && !(opt.phi_a && opt.phi_b)) {
    std::cerr << "error: --bc dirichlet requires --phi-a and --phi-b\n";
    return kExitUsage;
  }

  // Read the two-column (x, y) CSV; a non-numeric first row is a header.
  std::vector<double> xs, ys;
  {
    std::ifstream in(opt.input);
    if (!in) {
      std::cerr << "error: cannot open input file '" << opt.input << "'\n";
      return kExitIo;
    }
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto fields = nderiv::csv::split_line(line);
      if (fields.size() < 2) {
        std::cerr << "error: line '" << line << "' does not have two columns\n";
        return kExitUsage;
      }
      double x, y;
      const bool numeric = nderiv::csv::parse_double(fields[0], x) &&
                           nderiv::csv::parse_double(fields[1], y);
      if (!numeric) {
        if (first) {  // header row
          first = false;
          continue;
        }
        std::cerr << "error: non-numeric row '" << line << "'\n";
        return kExitUsage;
      }
      first = false;
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  if (xs.size() < 3) {
    std::cerr << "error: need at least 3 data rows, got " << xs.size() << "\n";
    return kExitUsage;
  }

  // Uniform, strictly increasing abscissas (relative jitter <= 1e-8).
  const double h0 = (xs.back() - xs.front()) / (xs.size() - 1);
  if (!(h0 > 0.0)) {
    std::cerr << "error: x values must be strictly increasing\n";
    return kExitUsage;
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double step = xs[i] - xs[i - 1];
    if (!(step > 0.0) || std::abs(step - h0) > 1e-8 * std::abs(h0)) {
      std::cerr << "error: x values are not uniformly spaced (step "
                << step << " vs " << h0 << " at row " << i
                << "); resample the data onto a uniform grid first\n";
      return kExitUsage;
    }
  }

  Grid grid = make_uniform_grid(xs.front(), xs.back(),
                                static_cast<int>(xs.size()));
  SampledFunction g_tilde(grid, ys);
  TransformedData data =
      transform_data(g_tilde, opt.g_a.value_or(ys.front()),
                     opt.g_b.value_or(ys.back()));

  DescentConfig config;
  GradientChoice gc = parse_gradient(opt.gradient, opt.omega);
  config.cg = gc.cg;
  config.omega = gc.omega;
  config.bc = parse_bc(opt.bc);
  config.max_iter = opt.max_iter;
  config.stop = opt.stop == "discrepancy"
                    ? StoppingRule::discrepancy(opt.delta, opt.tau)
                    : StoppingRule::heuristic(opt.uptick, opt.patience,
                                              opt.sat_tol, opt.fit_tol);
  if (opt.phi_a && opt.phi_b) {
    // Straight line joining the trusted boundary derivative values.
    config.psi0 = sample(grid, [&](double x) {
      return *opt.phi_a +
             (*opt.phi_b - *opt.phi_a) * (x - grid.a) / (grid.b - grid.a);
    });
    config.bc = BoundaryKind::Dirichlet;
  }

  DescentReport report;
  try {
    report = run_descent(data, config);
  } catch (const std::exception& e) {
    std::cerr << "error: descent failed: " << e.what() << "\n";
    return kExitIo;
  }

  {
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open output file '" << opt.output << "'\n";
      return kExitIo;
    }
    out << "x,derivative,smoothed_fit\n";
    for (int i = 0; i < grid.n; ++i)
      out << nderiv::csv::format_double(grid.node(i)) << ','
          << nderiv::csv::format_double(report.phi_hat[i]) << ','
          << nderiv::csv::format_double(report.smoothed_fit[i]) << '\n';
    if (!out) {
      std::cerr << "error: write failed for '" << opt.output << "'\n";
      return kExitIo;
    }
  }
  try {
    write_history_csv(report.history, sibling_path(opt.output, "_history"));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ experiment

struct ExperimentOptions {
  std::string name;
  int seeds = 11;
  std::string out_dir = ".";
  std::string gradient;  // optional override
  std::string stop;      // optional override
  double omega = -1.0;   // optional override
  int max_iter = -1;     // optional override
};

void apply_overrides(nderiv::ExperimentSpec& spec,
                     const ExperimentOptions& opt) {
  spec.seeds = nderiv::default_seeds(opt.seeds);
  if (!opt.gradient.empty()) {
    GradientChoice gc =
        parse_gradient(opt.gradient, opt.omega >= 0 ? opt.omega
                                                    : spec.config.omega);
    spec.config.cg = gc.cg;
    spec.config.omega = gc.omega;
  } else if (opt.omega >= 0) {
    spec.config.omega = opt.omega;
  }
  if (!opt.stop.empty()) {
    if (opt.stop == "heuristic")
      spec.config.stop = nderiv::StoppingRule::heuristic();
    else if (opt.stop == "discrepancy")
      spec.config.stop = nderiv::StoppingRule::discrepancy(1.0);  // per-seed
    else
      throw CLI::ValidationError("--stop", "unknown stop '" + opt.stop + "'");
  }
  if (opt.max_iter > 0) spec.config.max_iter = opt.max_iter;
}

int run_one_experiment(const std::string& name, const ExperimentOptions& opt,
                       const std::string& file_tag) {
  using namespace nderiv;
  ExperimentSpec spec = named_experiment(name);
  apply_overrides(spec, opt);
  ExperimentReport report =
      spec.landweber ? run_landweber_contrast(spec) : run_example(spec);
  const std::string base = opt.out_dir + "/" + file_tag;
  write_report_csv(report, base + "_summary.csv");
  for (const auto& r : report.results)
    if (!r.failed)
      write_history_csv(r.history, base + "_seed" + std::to_string(r.seed) +
                                       "_history.csv");
  std::cout << file_tag << ": median_error="
            << nderiv::csv::format_double(report.median_error)
            << " (paper: " << nderiv::csv::format_double(report.paper_reference)
            << ")\n";
  return kExitOk;
}

int cmd_experiment(const ExperimentOptions& opt) {
  auto names = nderiv::experiment_names();
  std::vector<std::string> to_run;
  if (opt.name == "all") {
    to_run = names;
  } else if (std::find(names.begin(), names.end(), opt.name) != names.end()) {
    to_run.push_back(opt.name);
  } else {
    std::cerr << "error: unknown experiment '" << opt.name
              << "'. Valid names:\n";
    for (const auto& n : names) std::cerr << "  " << n << "\n";
    return kExitUsage;
  }
  try {
    for (const auto& n : to_run) run_one_experiment(n, opt, n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

// ----------------------------------------------------------------------- sweep

struct SweepOptions {
  std::string name;
  std::vector<std::string> gradients{"sobolev", "cg-l2h1", "cg-h1h1"};
  std::vector<std::string> stops{"discrepancy", "heuristic"};
  int seeds = 11;
  std::string out_dir = ".";
  int jobs = 1;
};

int cmd_sweep(const SweepOptions& opt) {
  using namespace nderiv;
  auto names = experiment_names();
  if (std::find(names.begin(), names.end(), opt.name) == names.end()) {
    std::cerr << "error: unknown experiment '" << opt.name << "'\n";
    return kExitUsage;
  }
  std::vector<std::string> gradients, stops;
  for (const auto& g : opt.gradients)
    if (!g.empty()) gradients.push_back(g);
  for (const auto& s : opt.stops)
    if (!s.empty()) stops.push_back(s);
  if (gradients.empty() || stops.empty()) {
    std::cerr << "error: sweep requires at least one gradient and one stop\n";
    return kExitUsage;
  }
  for (const auto& g : gradients)
    if (g != "l2" && g != "sobolev" && g != "cg-l2h1" && g != "cg-h1h1") {
      std::cerr << "error: unknown gradient '" << g << "'\n";
      return kExitUsage;
    }
  for (const auto& s : stops)
    if (s != "discrepancy" && s != "heuristic") {
      std::cerr << "error: unknown stop '" << s << "'\n";
      return kExitUsage;
    }

  struct Cell {
    std::string gradient, stop, tag;
    ExperimentReport report;
  };
  std::vector<Cell> cells;
  for (const auto& g : gradients)
    for (const auto& s : stops)
      cells.push_back({g, s, opt.name + "__" + g + "__" + s, {}});

  auto run_cell = [&](Cell& cell) {
    ExperimentSpec spec = named_experiment(opt.name);
    ExperimentOptions eo;
    eo.seeds = opt.seeds;
    eo.gradient = cell.gradient;
    eo.stop = cell.stop;
    apply_overrides(spec, eo);
    cell.report =
        spec.landweber ? run_landweber_contrast(spec) : run_example(spec);
  };

  try {
    if (opt.jobs > 1) {
      std::vector<std::future<void>> pending;
      for (auto& cell : cells) {
        if (static_cast<int>(pending.size()) >= opt.jobs) {
          pending.front().get();
          pending.erase(pending.begin());
        }
        pending.push_back(
            std::async(std::launch::async, [&cell, &run_cell] { run_cell(cell); }));
      }
      for (auto& p : pending) p.get();
    } else {
      for (auto& cell : cells) run_cell(cell);
    }

    std::ofstream index(opt.out_dir + "/" + opt.name + "_sweep_index.csv",
                        std::ios::binary);
    if (!index) {
      std::cerr << "error: cannot open sweep index for writing\n";
      return kExitIo;
    }
    index << "experiment,gradient,stop,median_error,summary_path\n";
    for (auto& cell : cells) {
      const std::string summary = cell.tag + "_summary.csv";
      write_report_csv(cell.report, opt.out_dir + "/" + summary);
      for (const auto& r : cell.report.results)
        if (!r.failed)
          write_history_csv(r.history,
                            opt.out_dir + "/" + cell.tag + "_seed" +
                                std::to_string(r.seed) + "_history.csv");
      index << opt.name << ',' << cell.gradient << ',' << cell.stop << ','
            << nderiv::csv::format_double(cell.report.median_error) << ','
            << summary << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stable numerical differentiation of noisy data by Sobolev-gradient "
      "descent on twice-integrated data"};
  app.require_subcommand(1);

  DiffOptions d;
  auto* diff = app.add_subcommand(
      "differentiate", "Differentiate a two-column (x, y) CSV file");
  diff->add_option("-i,--input", d.input, "Input CSV (uniform x grid)")
      ->required();
  diff->add_option("-o,--output", d.output,
                   "Output CSV (x, derivative, smoothed_fit); a *_history "
                   "sibling file is written next to it")
      ->required();
  diff->add_option("--gradient", d.gradient,
                   "Descent direction: l2, sobolev, cg-l2h1, cg-h1h1 "
                   "(default sobolev)");
  diff->add_option("--bc", d.bc,
                   "Preconditioner boundary condition: dirichlet, neumann, "
                   "robin-left, robin-right (default neumann)");
  diff->add_option("--omega", d.omega,
                   "Blend weight in [0,1]: omega*Sobolev + (1-omega)*L2 "
                   "gradient (default 1)");
  diff->add_option("--stop", d.stop,
                   "Stopping rule: discrepancy or heuristic (default "
                   "heuristic)");
  diff->add_option("--delta", d.delta,
                   "Noise norm ||g3_noisy - g3|| for the discrepancy rule");
  diff->add_option("--tau", d.tau, "Discrepancy factor tau >= 1 (default 1)");
  diff->add_option("--uptick", d.uptick,
                   "Heuristic relative uptick threshold (default 1e-3)");
  diff->add_option("--patience", d.patience,
                   "Heuristic saturation window (default 3)");
  diff->add_option("--sat-tol", d.sat_tol,
                   "Heuristic saturation tolerance (default 1e-4)");
  diff->add_option("--fit-tol", d.fit_tol,
                   "Heuristic residual-plateau tolerance for selecting the "
                   "returned iterate (default 0.05)");
  diff->add_option("--max-iter", d.max_iter, "Iteration cap (default 500)");
  diff->add_option("--phi-a", d.phi_a,
                   "Known derivative value at x = a (with --phi-b: straight-"
                   "line start and Dirichlet preconditioning)");
  diff->add_option("--phi-b", d.phi_b, "Known derivative value at x = b");
  diff->add_option("--g-a", d.g_a, "Trusted data value at x = a");
  diff->add_option("--g-b", d.g_b, "Trusted data value at x = b");

  ExperimentOptions e;
  auto* exp = app.add_subcommand("experiment",
                                 "Run a named paper experiment (or 'all')");
  std::string names_help = "Experiment name or 'all'. Names:";
  for (const auto& n : nderiv::experiment_names()) names_help += " " + n;
  exp->add_option("name", e.name, names_help)->required();
  exp->add_option("--seeds", e.seeds, "Number of seeds 0..k-1 (default 11)");
  exp->add_option("--out", e.out_dir, "Output directory (default .)");
  exp->add_option("--gradient", e.gradient,
                  "Override gradient: l2, sobolev, cg-l2h1, cg-h1h1");
  exp->add_option("--stop", e.stop, "Override stop: discrepancy, heuristic");
  exp->add_option("--omega", e.omega, "Override blend weight in [0,1]");
  exp->add_option("--max-iter", e.max_iter, "Override iteration cap");

  SweepOptions s;
  auto* sweep = app.add_subcommand(
      "sweep", "Run a gradient x stopping-rule matrix of one experiment");
  sweep->add_option("name", s.name, "Experiment name")->required();
  sweep
      ->add_option("--gradients", s.gradients,
                   "Gradient list (default: sobolev,cg-l2h1,cg-h1h1)")
      ->delimiter(',');
  sweep
      ->add_option("--stops", s.stops,
                   "Stop list (default: discrepancy,heuristic)")
      ->delimiter(',');
  sweep->add_option("--seeds", s.seeds, "Number of seeds (default 11)");
  sweep->add_option("--out", s.out_dir, "Output directory (default .)");
  sweep->add_option("--jobs", s.jobs, "Parallel cells (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (diff->parsed()) return cmd_differentiate(d);
    if (exp->parsed()) return cmd_experiment(e);
    if (sweep->parsed()) return cmd_sweep(s);
  } catch (const CLI::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
