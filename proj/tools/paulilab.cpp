// Command line front end: one subcommand per experiment stage.
//
// Exit codes: 0 success, 2 invalid input (flags or config), 3 numerical failure.

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "paulilab/cutoff.hpp"
#include "paulilab/dynamics.hpp"
#include "paulilab/experiment.hpp"
#include "paulilab/field_io.hpp"
#include "paulilab/localize.hpp"
#include "paulilab/pauli.hpp"
#include "paulilab/spectra.hpp"
#include "paulilab/sweep.hpp"
#include "paulilab/weyl.hpp"

namespace fs = std::filesystem;
using namespace paulilab;
using nlohmann::json;

namespace {

constexpr int kInvalid = 2;
constexpr int kNumerical = 3;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config;
  std::string out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  bool resume = false;
  std::optional<double> h;
  std::optional<double> kappa;
  std::string field;
};

ExperimentConfig load(const Flags& f) {
  ExperimentConfig c = f.config.empty() ? parse_config("{}", "<defaults>") : load_config(f.config);
  if (f.seed) {
    c.seed = *f.seed;
    c.dynamics.seed = *f.seed;
  }
  if (f.workers) {
    if (*f.workers < 1) throw InvalidInput("--workers: must be at least 1");
    c.workers = *f.workers;
    c.dynamics.workers = *f.workers;
  }
  if (!f.out.empty()) c.output = f.out;
  return c;
}

SweepPoint single_point(const ExperimentConfig& c, const Flags& f) {
  SweepPoint p{c.h_values.front(), c.kappa_values.front()};
  if (f.h) {
    const double h_min = min_resolved_h(c.grid());
    if (!(*f.h > 0.0 && *f.h <= 1.0)) throw InvalidInput("--h: must lie in (0, 1]");
    if (*f.h < h_min) {
      throw InvalidInput("--h: " + std::to_string(*f.h) + " is below the grid resolution limit " +
                         std::to_string(h_min));
    }
    p.h = *f.h;
  }
  if (f.kappa) {
    if (!(*f.kappa > 0.0)) throw InvalidInput("--kappa: must be positive");
    p.kappa = *f.kappa;
  }
  return p;
}

void write_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

int cmd_plan(const Flags& f) {
  const ExperimentConfig c = load(f);
  json points = json::array();
  for (const auto& p : sweep_points(c)) {
    points.push_back({{"h", p.h},
                      {"kappa", p.kappa},
                      {"hash", point_hash(c, p)},
                      {"directory", point_directory(c.output, p).string()}});
  }
  const json plan = {{"config", to_json(c)}, {"points", points}};
  std::cout << plan.dump(2) << '\n';
  if (!f.out.empty()) write_json(fs::path(f.out) / "plan.json", plan);
  return 0;
}

int cmd_weyl(const Flags& f) {
  const ExperimentConfig c = load(f);
  const Grid grid = c.grid();
  const ScalarField v = sample_potential(c.potential, grid);
  json reports = json::array();
  std::cout << std::left << std::setw(8) << "h" << std::setw(16) << "Weyl(tau)" << std::setw(16)
            << "Weyl1" << std::setw(16) << "Weyl1*" << "quadrature" << '\n';
  for (double h : c.h_values) {
    const WeylReport r = weyl_report(v, h, c.weyl_tau, c.kappa1, c.kappa2);
    reports.push_back(to_json(r));
    std::cout << std::setw(8) << h << std::setw(16) << r.weyl_tau << std::setw(16) << r.weyl1
              << std::setw(16) << r.corrected.combined_form << r.quadrature_error << '\n';
  }
  write_json(c.output / "weyl.json", {{"tau", c.weyl_tau},
                                      {"kappa1", c.kappa1},
                                      {"kappa2", c.kappa2},
                                      {"reports", reports}});
  return 0;
}

VectorField field_or_zero(const Flags& f, const Grid& grid) {
  if (f.field.empty()) return VectorField(grid);
  const FieldBlob blob = read_blob(f.field);
  if (!(blob.grid == grid)) throw InvalidInput("--field: grid differs from the config grid");
  return vector_from_blob(blob);
}

int cmd_spectrum(const Flags& f) {
  const ExperimentConfig c = load(f);
  const SweepPoint p = single_point(c, f);
  const Grid grid = c.grid();
  const ScalarField v = sample_potential(c.potential, grid);
  const PauliOperator op(grid, field_or_zero(f, grid), v, p.h);
  const SpectralResult s = negative_spectrum(op, 0.0, c.solver_options());
  const TraceReport tr = trace_minus(s);
  fs::create_directories(c.output);
  save_spectral(s, c.output / "spectrum");
  std::cout << "solver " << to_string(s.solver) << ", " << s.size() << " eigenvalues <= 0, "
            << s.applies << " operator applications\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::cout << "  " << std::setprecision(12) << s.eigenvalues[i] << "  (residual "
              << std::setprecision(3) << s.residuals[i] << ")\n";
  }
  std::cout << std::setprecision(12) << "Tr^- = " << tr.value << "  Weyl1 = " << weyl1(v, p.h)
            << '\n';
  if (tr.ambiguous) std::cout << tr.ambiguous << " eigenvalue(s) within the ambiguity width of 0\n";
  return 0;
}

int cmd_minimize(const Flags& f) {
  const ExperimentConfig c = load(f);
  const SweepPoint p = single_point(c, f);
  const SweepRecord r = run_point(c, p, c.output, f.resume);
  std::cout << to_json(r).dump(2) << '\n';
  return r.converged ? 0 : kNumerical;
}

int cmd_localize(const Flags& f) {
  const ExperimentConfig c = load(f);
  if (!c.cutoff && !c.partition_gamma) {
    throw InvalidInput("localize: config needs a cutoff or partition_gamma");
  }
  const SweepPoint p = single_point(c, f);
  const Grid grid = c.grid();
  const ScalarField v = sample_potential(c.potential, grid);
  const PauliOperator op(grid, field_or_zero(f, grid), v, p.h);
  json out = {{"h", p.h}};
  if (c.cutoff) {
    const CutoffSpec cut = make_cutoff(grid, c.cutoff->center, c.cutoff->radius, c.cutoff->taper);
    const double tr = localized_trace_minus(op, cut.psi, c.solver_options());
    const double w = hadamard(weyl1_local(v, p.h), hadamard(cut.psi, cut.psi)).integral();
    out["cutoff"] = {{"center", cut.center},
                     {"requested_center", cut.requested_center},
                     {"snapped", cut.snapped},
                     {"radius", cut.radius},
                     {"taper", cut.taper},
                     {"c", cut.audit.c},
                     {"max_ell_slope", cut.audit.max_ell_slope},
                     {"audit_ok", cut.audit.ok},
                     {"trace_minus", tr},
                     {"weyl1", w}};
    std::cout << "cutoff: Tr^-(psi H psi) = " << tr << ", int Weyl1 psi^2 = " << w
              << ", c = " << cut.audit.c << (cut.snapped ? " (center snapped)" : "") << '\n';
  }
  if (c.partition_gamma) {
    const Partition part = build_partition(grid, *c.partition_gamma);
    const double defect = ism_check(op, part, 20, c.seed);
    json pj = {{"gamma", part.gamma},
               {"members", part.members.size()},
               {"completeness_defect", part.completeness_defect},
               {"gradient_constant", part.gradient_constant},
               {"ism_defect", defect}};
    std::cout << "partition: " << part.members.size() << " members, ISM defect " << defect << '\n';
    if (grid.size() <= static_cast<std::size_t>(c.dense_max_sites)) {
      const SubadditivityReport sub = subadditivity_check(op, part);
      pj["subadditivity"] = to_json(sub);
      std::cout << "subadditivity gap " << sub.gap << (sub.holds ? "" : " (violated)") << '\n';
    }
    out["partition"] = pj;
  }
  write_json(c.output / "localize.json", out);
  return 0;
}

int cmd_dynamics(const Flags& f) {
  const ExperimentConfig c = load(f);
  const MeasureEstimate m = periodic_measure(c.dynamics);
  write_json(c.output / "dynamics.json", to_json(m));
  write_outcomes_csv(m, c.output / "dynamics_samples.csv");
  std::cout << "periodic-point measure " << m.estimate << "  95% CI [" << m.lower << ", "
            << m.upper << "]  (" << m.returns << "/" << m.samples << " returns, max drift "
            << m.max_energy_drift << ")\n";
  return 0;
}

int cmd_sweep(const Flags& f) {
  const ExperimentConfig c = load(f);
  const SweepSummary s = run_sweep(c, c.output, c.workers, f.resume,
                                   [](const std::string& line) { std::cerr << line << '\n'; });
  std::cout << s.computed << " computed, " << s.skipped << " already complete, "
            << s.failures.size() << " failed\n";
  for (const auto& e : s.failures) std::cout << "  " << e << '\n';
  return s.failures.empty() ? 0 : kNumerical;
}

fs::path results_dir(const Flags& f) {
  if (!f.out.empty()) return f.out;
  return load(f).output;
}

int cmd_fit(const Flags& f) {
  const fs::path out = results_dir(f);
  const FitReport r = fit_records(load_records(out));
  write_json(out / "fit.json", to_json(r));
  std::ofstream csv(out / "fit.csv");
  csv << "label,p,constant,residual,points,trimmed\n" << std::setprecision(17);
  for (const auto& fit : r.fits) {
    csv << fit.label << ',' << fit.fit.p << ',' << fit.fit.constant << ',' << fit.fit.residual
        << ',' << fit.fit.points << ',' << (fit.trimmed ? 1 : 0) << '\n';
    std::cout << fit.label << ": p = " << fit.fit.p << " (C = " << fit.fit.constant
              << ", residual " << fit.fit.residual << (fit.trimmed ? ", two largest h dropped" : "")
              << ")\n";
  }
  for (const auto& s : r.skipped) std::cout << "skipped " << s << '\n';
  return 0;
}

int cmd_report(const Flags& f) {
  const fs::path out = results_dir(f);
  const ConstantsConfig constants = f.config.empty() ? ConstantsConfig{} : load(f).constants;
  write_report(load_records(out), constants, out, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paulilab: self-generated magnetic field experiments"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", f.out, "results directory (overrides the config)");
  app.add_option("--workers", f.workers, "worker threads");
  app.add_option("--seed", f.seed, "random seed (overrides the config)");
  app.add_flag("--resume", f.resume, "continue interrupted minimizations from checkpoints");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Flags&);
    bool point;
  };
  const Command commands[] = {
      {"plan", "print the full config with defaults and the sweep points", cmd_plan, false},
      {"weyl", "Weyl terms for every h", cmd_weyl, false},
      {"spectrum", "negative spectrum at one h", cmd_spectrum, true},
      {"minimize", "minimize the energy at one (h, kappa)", cmd_minimize, true},
      {"localize", "cutoff and partition diagnostics at one h", cmd_localize, true},
      {"dynamics", "periodic-point measure of the classical flow", cmd_dynamics, false},
      {"sweep", "run every (h, kappa) point", cmd_sweep, false},
      {"fit", "fit remainder exponents from sweep records", cmd_fit, false},
      {"report", "summary table and report.csv from sweep records", cmd_report, false},
  };
  int (*chosen)(const Flags&) = nullptr;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->set_help_flag("--help", "print help");
    if (c.point) {
      sub->add_option("--h", f.h, "semiclassical parameter (default: first h)");
      sub->add_option("--kappa", f.kappa, "coupling (default: first kappa)");
    }
    if (std::string(c.name) == "spectrum" || std::string(c.name) == "localize") {
      sub->add_option("--field", f.field, "vector potential blob (default A = 0)")
          ->check(CLI::ExistingFile);
    }
    sub->callback([&chosen, run = c.run]() { chosen = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }
  try {
    return chosen(f);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
