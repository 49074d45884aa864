#include "paulilab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace paulilab {

double classical_energy(const Potential& v, const PhasePoint& p) {
  return p.xi[0] * p.xi[0] + p.xi[1] * p.xi[1] + p.xi[2] * p.xi[2] - v(p.x);
}

namespace {

void leapfrog(const Potential& v, PhasePoint& p, double dt) {
  Vec3 g = v.gradient(p.x);
  for (int a = 0; a < 3; ++a) p.xi[a] += 0.5 * dt * g[a];
  for (int a = 0; a < 3; ++a) p.x[a] += 2.0 * dt * p.xi[a];
  g = v.gradient(p.x);
  for (int a = 0; a < 3; ++a) p.xi[a] += 0.5 * dt * g[a];
}

void yoshida(const Potential& v, PhasePoint& p, double dt) {
  static const double cbrt2 = std::cbrt(2.0);
  static const double w1 = 1.0 / (2.0 - cbrt2);
  static const double w0 = -cbrt2 / (2.0 - cbrt2);
  leapfrog(v, p, w1 * dt);
  leapfrog(v, p, w0 * dt);
  leapfrog(v, p, w1 * dt);
}

bool finite(const PhasePoint& p) {
  for (int a = 0; a < 3; ++a)
    if (!std::isfinite(p.x[a]) || !std::isfinite(p.xi[a])) return false;
  return true;
}

// Integrates and reports the first time in [t_min, T] within rho of the start.
template <class Visit>
double integrate(const Potential& v, const PhasePoint& start, double horizon, double step,
                 Visit&& visit) {
  if (!(step > 0.0) || !(horizon >= 0.0)) {
    throw std::invalid_argument("flow: step must be positive and horizon non-negative");
  }
  const int n = static_cast<int>(std::ceil(horizon / step - 1e-12));
  const double dt = n > 0 ? horizon / n : 0.0;
  const double e0 = classical_energy(v, start);
  const double scale = std::max(1.0, std::abs(e0));
  double drift = 0.0;
  PhasePoint p = start;
  for (int i = 1; i <= n; ++i) {
    yoshida(v, p, dt);
    const double err = std::abs(classical_energy(v, p) - e0) / scale;
    drift = std::max(drift, err);
    if (!finite(p) || err > 1e-3) {
      throw std::runtime_error("flow: integration unstable, reduce the step");
    }
    if (!visit(i * dt, p)) break;
  }
  return drift;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Trajectory flow(const Potential& v, const PhasePoint& start, double horizon, double step) {
  Trajectory tr;
  tr.t.push_back(0.0);
  tr.points.push_back(start);
  tr.energy_drift = integrate(v, start, horizon, step, [&](double t, const PhasePoint& p) {
    tr.t.push_back(t);
    tr.points.push_back(p);
    return true;
  });
  return tr;
}

MeasureEstimate periodic_measure(const FlowConfig& c) {
  if (c.step > c.rho / 10.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("periodic measure: step must not exceed rho / 10");
  }
  if (c.samples < 100) throw std::invalid_argument("periodic measure: need at least 100 samples");
  if (!(c.sample_box > 0.0)) throw std::invalid_argument("periodic measure: sample box must be positive");
  const Potential v(c.potential);
  const double b = c.sample_box;

  // Envelope for rejection sampling of x with density sqrt(V + tau)_+.
  double envelope = 0.0;
  const int probe = 40;
  for (int i = 0; i <= probe; ++i)
    for (int j = 0; j <= probe; ++j)
      for (int k = 0; k <= probe; ++k) {
        const Vec3 x = {-b + 2 * b * i / probe, -b + 2 * b * j / probe, -b + 2 * b * k / probe};
        envelope = std::max(envelope, v(x) + c.tau);
      }
  if (!(envelope > 0.0)) throw std::invalid_argument("periodic measure: empty energy shell");
  envelope = std::sqrt(envelope) * 1.25;

  MeasureEstimate m;
  m.samples = c.samples;
  m.outcomes.resize(c.samples);
  std::vector<double> shell_weights(c.samples, 0.0);
  std::vector<int> proposals(c.samples, 0);

  auto run_sample = [&](int idx) {
    std::mt19937_64 gen(splitmix(c.seed * 0x100000001B3ULL + static_cast<std::uint64_t>(idx)));
    std::uniform_real_distribution<double> uni(-b, b), u01(0.0, 1.0);
    std::normal_distribution<double> nd;
    PhasePoint p;
    double radius = 0.0;
    for (;;) {
      p.x = {uni(gen), uni(gen), uni(gen)};
      const double r2 = v(p.x) + c.tau;
      ++proposals[idx];
      if (r2 <= 0.0) continue;
      const double r = std::sqrt(r2);
      shell_weights[idx] += 2.0 * std::numbers::pi * r;
      if (r > envelope) throw std::runtime_error("periodic measure: sampling envelope exceeded");
      if (u01(gen) * envelope <= r) {
        radius = r;
        break;
      }
    }
    Vec3 dir = {nd(gen), nd(gen), nd(gen)};
    const double norm = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    for (int a = 0; a < 3; ++a) p.xi[a] = radius * dir[a] / norm;

    SampleOutcome out;
    out.start = p;
    out.energy_drift = integrate(v, p, c.horizon, c.step, [&](double t, const PhasePoint& q) {
      if (t < c.min_return_time) return true;
      double d2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        d2 += (q.x[a] - p.x[a]) * (q.x[a] - p.x[a]) + (q.xi[a] - p.xi[a]) * (q.xi[a] - p.xi[a]);
      }
      if (d2 <= c.rho * c.rho) {
        out.return_time = t;
        return false;
      }
      return true;
    });
    m.outcomes[idx] = out;
  };

  const int workers = std::max(1, std::min(c.workers, c.samples));
  if (workers == 1) {
    for (int i = 0; i < c.samples; ++i) run_sample(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < c.samples; i += workers) run_sample(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  double weight = 0.0;
  long total = 0;
  for (int i = 0; i < c.samples; ++i) {
    weight += shell_weights[i];
    total += proposals[i];
    if (m.outcomes[i].return_time) ++m.returns;
    m.max_energy_drift = std::max(m.max_energy_drift, m.outcomes[i].energy_drift);
  }
  m.shell_volume = std::pow(2 * b, 3) * weight / static_cast<double>(total);
  const double n = c.samples, phat = m.returns / n, z = 1.959963984540054;
  const double denom = 1 + z * z / n;
  const double centre = (phat + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom;
  m.estimate = phat;
  m.lower = std::max(0.0, centre - half);
  m.upper = std::min(1.0, centre + half);
  return m;
}

nlohmann::json to_json(const MeasureEstimate& m) {
  return {{"estimate", m.estimate},         {"ci_lower", m.lower},
          {"ci_upper", m.upper},            {"returns", m.returns},
          {"samples", m.samples},           {"shell_volume", m.shell_volume},
          {"max_energy_drift", m.max_energy_drift}};
}

void write_outcomes_csv(const MeasureEstimate& m, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << "x1,x2,x3,xi1,xi2,xi3,return_time,energy_drift\n" << std::setprecision(17);
  for (const auto& o : m.outcomes) {
    for (double q : o.start.x) os << q << ',';
    for (double q : o.start.xi) os << q << ',';
    if (o.return_time) os << *o.return_time;
    os << ',' << o.energy_drift << '\n';
  }
}

}  // namespace paulilab
