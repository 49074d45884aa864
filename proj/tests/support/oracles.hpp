#pragma once

#include <vector>

#include <Eigen/Dense>

#include "paulilab/fields.hpp"

namespace paulilab::testing {

/// Pauli matrix assembled from explicit Fourier-sum derivative matrices and
/// Kronecker products, without going through the FFT-based operator.
Eigen::MatrixXcd pauli_matrix(const Grid& grid, const VectorField& a, const ScalarField& v,
                              double h);

/// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);

/// Eigenvalues h^2 |k|^2 - v0 <= limit of the free operator, each listed twice
/// (spin), by enumerating the resolved lattice modes.
std::vector<double> free_spectrum(const Grid& grid, double h, double v0, double limit);

/// Gaussian well with amplitude, width and floor drawn from the given seed.
struct RandomInstance {
  Grid grid;
  VectorField a;
  ScalarField v;
  double h;
};
RandomInstance random_instance(int n, std::uint64_t seed, double field_amplitude);

}  // namespace paulilab::testing
