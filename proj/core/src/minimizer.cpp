#include "paulilab/minimizer.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "paulilab/field_io.hpp"
#include "paulilab/spectral_ops.hpp"

namespace paulilab {

VectorField random_coulomb_field(const Grid& grid, double amplitude, std::uint64_t seed,
                                 int max_mode) {
  VectorField a(grid);
  if (amplitude == 0.0) return a;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int c = 0; c < 3; ++c) {
    for (int m0 = -max_mode; m0 <= max_mode; ++m0)
      for (int m1 = -max_mode; m1 <= max_mode; ++m1)
        for (int m2 = -max_mode; m2 <= max_mode; ++m2) {
          const double cr = nd(gen), ci = nd(gen);
          for (std::size_t s = 0; s < grid.size(); ++s) {
            const Vec3 x = grid.position(s);
            const double phase = two_pi * (m0 * x[0] / grid.length(0) +
                                           m1 * x[1] / grid.length(1) +
                                           m2 * x[2] / grid.length(2));
            a[c][s] += cr * std::cos(phase) + ci * std::sin(phase);
          }
        }
  }
  a = coulomb_projection(a);
  const double peak = a.max_abs();
  if (peak > 0.0) a *= amplitude / peak;
  return a;
}

namespace {

struct Evaluated {
  EnergyEvaluation e;
  VectorField phi;
  double residual;
};

KrylovOptions warm_krylov(KrylovOptions k, const SpectralResult& previous) {
  if (previous.eigenfunctions.empty()) return k;
  const Grid& g = previous.eigenfunctions.front().grid();
  const double scale = std::sqrt(g.cell_volume());
  k.initial.resize(2 * static_cast<Eigen::Index>(g.size()),
                   static_cast<Eigen::Index>(previous.size()));
  for (std::size_t n = 0; n < previous.size(); ++n) {
    k.initial.col(static_cast<Eigen::Index>(n)) = previous.eigenfunctions[n].values() * scale;
  }
  return k;
}

}  // namespace

MinimizerState minimize(const ScalarField& v, double h, double kappa,
                        const MinimizeOptions& options) {
  if (!(options.mixing > 0.0 && options.mixing <= 1.0)) {
    throw std::invalid_argument("minimize: mixing must lie in (0, 1]");
  }
  const Grid& grid = v.grid();
  EnergyOptions eopt = options.energy;
  const double w = eopt.field_weight;

  auto evaluate = [&](const VectorField& a, const SpectralResult* warm) {
    EnergyOptions local = eopt;
    if (warm) local.solver.krylov = warm_krylov(local.solver.krylov, *warm);
    const PauliOperator op(grid, a, v, h);
    Evaluated ev{evaluate_energy(op, kappa, local), VectorField(grid), 0.0};
    ev.phi = coulomb_projection(current_phi(ev.e.spectrum, op, local.smoothing));
    ev.residual = el_residual(a, ev.phi, kappa, h, w);
    return ev;
  };

  Evaluated zero = evaluate(VectorField(grid), nullptr);
  auto ambiguous = [&](const Evaluated& ev) {
    return !eopt.smoothing && ev.e.trace.ambiguous > 0;
  };
  auto switch_smoothing = [&]() {
    eopt.smoothing = SmoothingSpec{options.smoothing_factor * h * h};
    zero = evaluate(VectorField(grid), nullptr);
  };
  if (ambiguous(zero)) switch_smoothing();

  MinimizerState st(grid);
  VectorField a(grid);
  std::optional<VectorField> resumed;
  if (options.checkpoint) resumed = load_checkpoint_field(*options.checkpoint, grid);
  if (resumed) {
    a = coulomb_projection(*resumed);
  } else if (options.initial) {
    a = coulomb_projection(*options.initial);
  } else {
    a = random_coulomb_field(grid, options.initial_amplitude, options.seed);
  }
  const double start_amplitude = std::max(a.max_abs(), 1e-300);

  Evaluated cur = evaluate(a, &zero.e.spectrum);
  if (ambiguous(cur)) {
    switch_smoothing();
    cur = evaluate(a, &zero.e.spectrum);
  }
  double beta = options.mixing;
  const double field_scale = kappa * h * h / (2.0 * w);
  st.history.push_back({0, cur.e.energy, cur.residual, beta});

  int it = 0;
  bool jumped_to_zero = false;
  while (it < options.max_iterations && cur.residual > options.tolerance) {
    ++it;
    VectorField target = inverse_laplacian(cur.phi);
    target *= field_scale;
    bool accepted = false;
    while (beta >= options.min_mixing) {
      VectorField trial = (1.0 - beta) * a + beta * target;
      trial = coulomb_projection(trial);
      Evaluated next = evaluate(trial, &cur.e.spectrum);
      if (ambiguous(next)) {
        switch_smoothing();
        cur = evaluate(a, &cur.e.spectrum);
        accepted = true;  // re-enter with the regularized functional
        break;
      }
      const double slack = options.line_search_tol * std::max(1.0, std::abs(cur.e.energy));
      if (next.e.energy <= cur.e.energy + slack) {
        a = std::move(trial);
        cur = std::move(next);
        accepted = true;
        beta = std::min(options.mixing, 2.0 * beta);
        break;
      }
      beta *= 0.5;
    }
    if (!accepted) {
      st.message = "line search stalled";
      break;
    }
    st.history.push_back({it, cur.e.energy, cur.residual, beta});
    if (a.max_abs() < 1e-3 * start_amplitude && zero.e.energy <= cur.e.energy) {
      jumped_to_zero = true;
      break;
    }
    if (options.checkpoint) {
      MinimizerState snap(grid);
      snap.a = a;
      snap.energy = cur.e.energy;
      snap.el_residual = cur.residual;
      snap.iteration = it;
      snap.mixing = beta;
      snap.history = st.history;
      save_checkpoint(snap, *options.checkpoint);
    }
  }

  const double slack = options.line_search_tol * std::max(1.0, std::abs(zero.e.energy));
  if (jumped_to_zero || cur.e.energy > zero.e.energy + slack) {
    a = VectorField(grid);
    cur = std::move(zero);
    st.restarted_from_zero = true;
  }
  st.a = a;
  st.spectral = cur.e.spectrum;
  st.energy = cur.e.energy;
  st.trace_term = cur.e.trace_term;
  st.trace_minus = cur.e.trace.value;
  st.smoothed = cur.e.uses_smoothing;
  st.smoothed_trace = cur.e.smoothed;
  st.field_energy = cur.e.field_energy;
  st.energy_zero = st.restarted_from_zero ? cur.e.energy : zero.e.energy;
  st.el_residual = cur.residual;
  st.iteration = it;
  st.mixing = beta;
  st.converged = cur.residual <= options.tolerance;
  if (!st.converged && st.message.empty()) st.message = "iteration limit reached";
  if (st.converged) st.message.clear();
  if (options.checkpoint) save_checkpoint(st, *options.checkpoint);
  return st;
}

nlohmann::json to_json(const MinimizerState& s) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& e : s.history) {
    hist.push_back({{"iteration", e.iteration},
                    {"energy", e.energy},
                    {"residual", e.residual},
                    {"mixing", e.mixing}});
  }
  return {{"energy", s.energy},
          {"trace_term", s.trace_term},
          {"trace_minus", s.trace_minus},
          {"smoothed", s.smoothed},
          {"smoothed_trace", s.smoothed_trace},
          {"field_energy", s.field_energy},
          {"energy_zero", s.energy_zero},
          {"el_residual", s.el_residual},
          {"iteration", s.iteration},
          {"mixing", s.mixing},
          {"converged", s.converged},
          {"restarted_from_zero", s.restarted_from_zero},
          {"message", s.message},
          {"history", hist}};
}

void save_checkpoint(const MinimizerState& s, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_blob(dir / "A.bin", to_blob(s.a));
  std::ofstream os(dir / "minimizer_state.json");
  os << to_json(s).dump(2) << '\n';
}

std::optional<VectorField> load_checkpoint_field(const std::filesystem::path& dir,
                                                 const Grid& grid) {
  const auto path = dir / "A.bin";
  if (!std::filesystem::exists(path)) return std::nullopt;
  FieldBlob blob = read_blob(path);
  if (!(blob.grid == grid)) return std::nullopt;
  return vector_from_blob(blob);
}

}  // namespace paulilab
