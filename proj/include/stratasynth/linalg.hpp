#pragma once

// Small dense factorizations used on cold paths: the shifted SPD solve for the
// ridge correction, a symmetric eigendecomposition for the imbalance
// diagnostic, and companion-matrix eigenvalues for AR stability checks.

#include <cstddef>
#include <vector>

#include "stratasynth/matrix.hpp"

namespace strata::linalg {

// Solves (A + shift*I) x = b with A symmetric positive semidefinite (n x n).
// With shift = 0 the matrix must be numerically positive definite, otherwise
// SingularGramError is thrown.
std::vector<double> spd_solve_shifted(const Matrix& a, double shift,
                                      const std::vector<double>& b);

struct SymEig {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j is the eigenvector for values[j]
};

SymEig sym_eig(const Matrix& a);

// Largest-magnitude root of z^p - c1 z^(p-1) - ... - cp, i.e. the spectral
// radius of the AR companion matrix for coefficients c.
double ar_spectral_radius(const std::vector<double>& coeffs);

}  // namespace strata::linalg
