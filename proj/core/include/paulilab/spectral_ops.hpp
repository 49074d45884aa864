#pragma once

#include <array>
#include <vector>

#include "paulilab/fields.hpp"

namespace paulilab {

/// Angular wavenumbers along one axis in FFT order. The Nyquist entry of an
/// even-sized axis is zero so that first derivatives of real fields stay
/// real and D = -i d/dx is Hermitian on the grid.
std::vector<double> wavenumbers(const Grid& grid, int axis);

/// Largest resolved |integer mode| along an axis (n/2 - 1 for even n).
int max_resolved_mode(const Grid& grid, int axis);

ScalarField derivative(const ScalarField& f, int axis);
ScalarField second_derivative(const ScalarField& f, int axis_a, int axis_b);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);

/// Solves lap u = f on the zero-mean subspace; the mean of f (and any
/// content on modes where the discrete Laplacian vanishes) is discarded.
ScalarField inverse_laplacian(const ScalarField& f);
VectorField inverse_laplacian(const VectorField& v);

/// Projects onto divergence-free, zero-mean fields (Coulomb gauge).
VectorField coulomb_projection(const VectorField& v);

/// Jacobian entries d_i A_j, indexed [i][j].
std::array<std::array<ScalarField, 3>, 3> jacobian(const VectorField& a);

/// Integral of sum_{i,j} |d_i A_j|^2.
double grad_energy(const VectorField& a);

/// Ratio of spectral energy on modes above `max_mode` (per axis) to the total.
double high_mode_fraction(const ScalarField& f, int max_mode);

}  // namespace paulilab
