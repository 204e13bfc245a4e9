#pragma once

// Test-only oracles, deliberately independent of the library's solver paths:
// plain loops, no kernels, no Eigen. Each one re-derives a quantity the
// implementation computes by a different route.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "stratasynth/matrix.hpp"
#include "stratasynth/panel.hpp"

namespace oracle {

// Weighted SCM objective (x1 - x0 g)' V (x1 - x0 g), plain loops.
inline double scm_objective(const strata::Matrix& x0, const std::vector<double>& x1,
                            const std::vector<double>& v, const std::vector<double>& g) {
  double acc = 0.0;
  for (std::size_t r = 0; r < x0.rows(); ++r) {
    double fit = 0.0;
    for (std::size_t j = 0; j < x0.cols(); ++j) fit += x0(r, j) * g[j];
    double d = x1[r] - fit;
    acc += v[r] * d * d;
  }
  return acc;
}

// Dense enumeration of the probability simplex for J = 2 or 3 at the given
// resolution; returns the best objective found.
inline double grid_search_simplex(const strata::Matrix& x0, const std::vector<double>& x1,
                                  const std::vector<double>& v, double resolution) {
  const std::size_t j = x0.cols();
  const int steps = static_cast<int>(std::lround(1.0 / resolution));
  double best = std::numeric_limits<double>::infinity();
  if (j == 2) {
    for (int a = 0; a <= steps; ++a) {
      double g0 = static_cast<double>(a) / steps;
      best = std::min(best, scm_objective(x0, x1, v, {g0, 1.0 - g0}));
    }
  } else if (j == 3) {
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; a + b <= steps; ++b) {
        double g0 = static_cast<double>(a) / steps;
        double g1 = static_cast<double>(b) / steps;
        best = std::min(best, scm_objective(x0, x1, v, {g0, g1, 1.0 - g0 - g1}));
      }
    }
  }
  return best;
}

// Ridge-ASCM variational objective of the augmented-weight problem:
// 1/(2 lambda) ||x1 - x0 g||^2 + 1/2 ||g - g_scm||^2.
inline double ridge_variational_objective(const strata::Matrix& x0,
                                          const std::vector<double>& x1,
                                          const std::vector<double>& g_scm,
                                          const std::vector<double>& g, double lambda) {
  double fit = 0.0;
  for (std::size_t r = 0; r < x0.rows(); ++r) {
    double f = 0.0;
    for (std::size_t j = 0; j < x0.cols(); ++j) f += x0(r, j) * g[j];
    double d = x1[r] - f;
    fit += d * d;
  }
  double prox = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double d = g[j] - g_scm[j];
    prox += d * d;
  }
  return fit / (2.0 * lambda) + 0.5 * prox;
}

// Numerically minimizes the variational objective subject to sum(g) = 1 by
// projected gradient descent on the hyperplane (projection adds the same
// constant to every coordinate). Independent of the closed-form route.
inline std::vector<double> minimize_ridge_variational(const strata::Matrix& x0,
                                                      const std::vector<double>& x1,
                                                      const std::vector<double>& g_scm,
                                                      double lambda, int iters = 200000) {
  const std::size_t k = x0.rows();
  const std::size_t j = x0.cols();
  std::vector<double> g = g_scm;
  // Lipschitz bound: ||x0||_F^2 / lambda + 1.
  double fro2 = 0.0;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < j; ++c) fro2 += x0(r, c) * x0(r, c);
  double step = 1.0 / (fro2 / lambda + 1.0);
  std::vector<double> grad(j), fit(k);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t r = 0; r < k; ++r) {
      double f = 0.0;
      for (std::size_t c = 0; c < j; ++c) f += x0(r, c) * g[c];
      fit[r] = f - x1[r];
    }
    for (std::size_t c = 0; c < j; ++c) {
      double gr = 0.0;
      for (std::size_t r = 0; r < k; ++r) gr += x0(r, c) * fit[r];
      grad[c] = gr / lambda + (g[c] - g_scm[c]);
    }
    double gnorm = 0.0;
    for (std::size_t c = 0; c < j; ++c) {
      g[c] -= step * grad[c];
      gnorm += grad[c] * grad[c];
    }
    // re-project onto the sum-one hyperplane
    double s = 0.0;
    for (double x : g) s += x;
    double shift = (1.0 - s) / static_cast<double>(j);
    for (double& x : g) x += shift;
    if (gnorm < 1e-26) break;
  }
  return g;
}

// One-sided Jacobi SVD returning the singular values of an m x n matrix
// (m >= 1, n >= 1), plus the left singular vectors spanning R^m when
// requested. Used to cross-check the imbalance diagnostic.
struct JacobiSvd {
  std::vector<double> singular_values;  // descending, length min(m,n) padded to m
  strata::Matrix u;                     // m x m, columns are left singular vectors
};

inline JacobiSvd jacobi_svd_left(const strata::Matrix& a_in) {
  // Work on A' (n x m columns in R^n ... easier: apply one-sided Jacobi to
  // the m-row matrix's transpose so rotations act on columns of A' in R^n).
  const std::size_t m = a_in.rows();
  const std::size_t n = a_in.cols();
  // B = A', size n x m; orthogonalize the m columns of B; then column norms
  // are singular values and normalized B columns relate to right vectors of
  // A'. Left singular vectors of A = right singular vectors of A' = the
  // accumulated rotations applied to I_m.
  std::vector<std::vector<double>> b(m, std::vector<double>(n));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) b[r][c] = a_in(r, c);
  // columns of interest: rows of a_in viewed as vectors in R^n; we rotate
  // pairs of rows to zero out their inner products. The rotations accumulate
  // into V (m x m) with A = (rotated rows as Sigma * U') ... after
  // convergence row_i . row_j = 0, ||row_i|| = sigma_i and the accumulated
  // rotation matrix holds the left singular vectors.
  strata::Matrix v(m, m);
  for (std::size_t i = 0; i < m; ++i) v(i, i) = 1.0;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
          app += b[p][c] * b[p][c];
          aqq += b[q][c] * b[q][c];
          apq += b[p][c] * b[q][c];
        }
        off += apq * apq;
        if (std::fabs(apq) < 1e-300) continue;
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = cs * t;
        for (std::size_t c = 0; c < n; ++c) {
          double bp = b[p][c], bq = b[q][c];
          b[p][c] = cs * bp - sn * bq;
          b[q][c] = sn * bp + cs * bq;
        }
        for (std::size_t r = 0; r < m; ++r) {
          double vp = v(r, p), vq = v(r, q);
          v(r, p) = cs * vp - sn * vq;
          v(r, q) = sn * vp + cs * vq;
        }
      }
    }
    if (off < 1e-28) break;
  }
  JacobiSvd out;
  out.singular_values.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double norm2 = 0.0;
    for (std::size_t c = 0; c < n; ++c) norm2 += b[i][c] * b[i][c];
    out.singular_values[i] = std::sqrt(norm2);
  }
  out.u = v;
  return out;
}

// Exhaustive per-unit exposure classification for the random-graph oracle.
inline std::vector<strata::Stratum> classify_all(const strata::TreatmentSchedule& schedule,
                                                 const strata::AdjacencyGraph& graph,
                                                 double q_threshold) {
  const int n = graph.n_units();
  std::vector<strata::Stratum> out(n);
  for (int i = 0; i < n; ++i) {
    int treated_nb = 0;
    int deg = static_cast<int>(graph.neighbors(i).size());
    for (int j : graph.neighbors(i))
      if (std::find(schedule.treated_units.begin(), schedule.treated_units.end(), j) !=
          schedule.treated_units.end())
        ++treated_nb;
    bool q;
    if (q_threshold <= 0.0)
      q = treated_nb >= 1;
    else
      q = deg > 0 && static_cast<double>(treated_nb) / deg >= q_threshold;
    bool own = std::find(schedule.treated_units.begin(), schedule.treated_units.end(), i) !=
               schedule.treated_units.end();
    out[i] = own ? (q ? strata::Stratum::S11 : strata::Stratum::S10)
                 : (q ? strata::Stratum::S01 : strata::Stratum::S00);
  }
  return out;
}

}  // namespace oracle
