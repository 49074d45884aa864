#include "paulilab/spectral_ops.hpp"

#include <cmath>
#include <numbers>

#include "paulilab/fft.hpp"

namespace paulilab {

namespace {

using Spectrum = std::vector<Complex>;

Spectrum to_spectrum(const ScalarField& f) {
  Spectrum s(f.values().begin(), f.values().end());
  Fft3::for_dims(f.grid().dims()).forward(s.data());
  return s;
}

ScalarField from_spectrum(const Grid& grid, Spectrum s) {
  Fft3::for_dims(grid.dims()).backward(s.data());
  ScalarField out(grid);
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
  return out;
}

int signed_mode(int m, int n) { return m <= n / 2 ? m : m - n; }

// Visits every mode with its wavevector: fn(index, kx, ky, kz).
template <class Fn>
void for_each_mode(const Grid& grid, Fn&& fn) {
  const auto kx = wavenumbers(grid, 0);
  const auto ky = wavenumbers(grid, 1);
  const auto kz = wavenumbers(grid, 2);
  std::size_t idx = 0;
  for (int i = 0; i < grid.dim(0); ++i)
    for (int j = 0; j < grid.dim(1); ++j)
      for (int k = 0; k < grid.dim(2); ++k, ++idx) fn(idx, kx[i], ky[j], kz[k]);
}

}  // namespace

std::vector<double> wavenumbers(const Grid& grid, int axis) {
  const int n = grid.dim(axis);
  const double base = 2.0 * std::numbers::pi / grid.length(axis);
  std::vector<double> k(n);
  for (int m = 0; m < n; ++m) {
    k[m] = (n % 2 == 0 && m == n / 2) ? 0.0 : base * signed_mode(m, n);
  }
  return k;
}

int max_resolved_mode(const Grid& grid, int axis) {
  const int n = grid.dim(axis);
  return n % 2 == 0 ? n / 2 - 1 : n / 2;
}

ScalarField derivative(const ScalarField& f, int axis) {
  auto s = to_spectrum(f);
  const Complex I(0.0, 1.0);
  for_each_mode(f.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
    const double k = axis == 0 ? kx : (axis == 1 ? ky : kz);
    s[idx] *= I * k;
  });
  return from_spectrum(f.grid(), std::move(s));
}

ScalarField second_derivative(const ScalarField& f, int a, int b) {
  auto s = to_spectrum(f);
  for_each_mode(f.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
    const double k[3] = {kx, ky, kz};
    s[idx] *= -k[a] * k[b];
  });
  return from_spectrum(f.grid(), std::move(s));
}

VectorField gradient(const ScalarField& f) {
  return VectorField(derivative(f, 0), derivative(f, 1), derivative(f, 2));
}

ScalarField divergence(const VectorField& v) {
  ScalarField out = derivative(v[0], 0);
  out += derivative(v[1], 1);
  out += derivative(v[2], 2);
  return out;
}

VectorField curl(const VectorField& v) {
  return VectorField(derivative(v[2], 1) - derivative(v[1], 2),
                     derivative(v[0], 2) - derivative(v[2], 0),
                     derivative(v[1], 0) - derivative(v[0], 1));
}

ScalarField laplacian(const ScalarField& f) {
  auto s = to_spectrum(f);
  for_each_mode(f.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
    s[idx] *= -(kx * kx + ky * ky + kz * kz);
  });
  return from_spectrum(f.grid(), std::move(s));
}

VectorField laplacian(const VectorField& v) {
  return VectorField(laplacian(v[0]), laplacian(v[1]), laplacian(v[2]));
}

ScalarField inverse_laplacian(const ScalarField& f) {
  auto s = to_spectrum(f);
  for_each_mode(f.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    s[idx] = k2 > 0.0 ? s[idx] / (-k2) : Complex(0.0);
  });
  return from_spectrum(f.grid(), std::move(s));
}

VectorField inverse_laplacian(const VectorField& v) {
  return VectorField(inverse_laplacian(v[0]), inverse_laplacian(v[1]),
                     inverse_laplacian(v[2]));
}

VectorField coulomb_projection(const VectorField& v) {
  std::array<Spectrum, 3> s = {to_spectrum(v[0]), to_spectrum(v[1]),
                               to_spectrum(v[2])};
  for_each_mode(v.grid(), [&](std::size_t idx, double kx, double ky, double kz) {
    const double k[3] = {kx, ky, kz};
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) {
      for (auto& c : s) c[idx] = 0.0;
      return;
    }
    const Complex kv = k[0] * s[0][idx] + k[1] * s[1][idx] + k[2] * s[2][idx];
    for (int a = 0; a < 3; ++a) s[a][idx] -= k[a] * kv / k2;
  });
  const Grid& g = v.grid();
  return VectorField(from_spectrum(g, std::move(s[0])),
                     from_spectrum(g, std::move(s[1])),
                     from_spectrum(g, std::move(s[2])));
}

std::array<std::array<ScalarField, 3>, 3> jacobian(const VectorField& a) {
  const Grid& g = a.grid();
  std::array<std::array<ScalarField, 3>, 3> out = {
      {{ScalarField(g), ScalarField(g), ScalarField(g)},
       {ScalarField(g), ScalarField(g), ScalarField(g)},
       {ScalarField(g), ScalarField(g), ScalarField(g)}}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = derivative(a[j], i);
  return out;
}

double grad_energy(const VectorField& a) {
  double total = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      const ScalarField d = derivative(a[j], i);
      double s = 0.0;
      for (double v : d.values()) s += v * v;
      total += s;
    }
  }
  return total * a.grid().cell_volume();
}

double high_mode_fraction(const ScalarField& f, int max_mode) {
  const auto s = to_spectrum(f);
  const Grid& g = f.grid();
  double high = 0.0, total = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < g.dim(0); ++i)
    for (int j = 0; j < g.dim(1); ++j)
      for (int k = 0; k < g.dim(2); ++k, ++idx) {
        const double p = std::norm(s[idx]);
        total += p;
        if (std::abs(signed_mode(i, g.dim(0))) > max_mode ||
            std::abs(signed_mode(j, g.dim(1))) > max_mode ||
            std::abs(signed_mode(k, g.dim(2))) > max_mode) {
          high += p;
        }
      }
  return total > 0.0 ? high / total : 0.0;
}

}  // namespace paulilab
