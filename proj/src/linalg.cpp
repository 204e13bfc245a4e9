#include "stratasynth/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "stratasynth/errors.hpp"

namespace strata::linalg {

namespace {
Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  return m;
}
}  // namespace

std::vector<double> spd_solve_shifted(const Matrix& a, double shift,
                                      const std::vector<double>& b) {
  const std::size_t n = a.rows();
  Eigen::MatrixXd m = to_eigen(a);
  m.diagonal().array() += shift;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw SingularGramError("Gram matrix is not positive definite (lambda=0 with rank-deficient donors?)");
  if (shift == 0.0) {
    // LLT can silently succeed on a nearly singular matrix; reject pivots at
    // roundoff level relative to the largest diagonal entry.
    Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    double max_piv = diag.maxCoeff();
    double min_piv = diag.minCoeff();
    double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    if (!(min_piv > 0.0) || min_piv * min_piv <= tol * max_piv * max_piv)
      throw SingularGramError("Gram matrix is numerically singular at lambda=0");
  }
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  Eigen::VectorXd x = llt.solve(rhs);
  return std::vector<double>(x.data(), x.data() + x.size());
}

SymEig sym_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a));
  if (es.info() != Eigen::Success)
    throw Error("symmetric eigendecomposition failed");
  SymEig out;
  const std::size_t n = a.rows();
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  out.vectors = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out.vectors(r, c) = es.eigenvectors()(r, c);
  return out;
}

double ar_spectral_radius(const std::vector<double>& coeffs) {
  const std::size_t p = coeffs.size();
  if (p == 0) return 0.0;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t j = 0; j < p; ++j) comp(0, j) = coeffs[j];
  for (std::size_t i = 1; i < p; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    rho = std::max(rho, std::abs(es.eigenvalues()[i]));
  return rho;
}

}  // namespace strata::linalg
