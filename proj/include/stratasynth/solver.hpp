#pragma once

// Simplex-constrained SCM weight solver (accelerated projected gradient with
// exact simplex projection), the ridge-augmented closed-form correction, the
// leave-one-pre-period-out penalty selection, and fit diagnostics.

#include <string>
#include <vector>

#include "stratasynth/matrix.hpp"
#include "stratasynth/panel.hpp"

namespace strata {

// Assembled balance problem for one (target, pool) pair. Rows are the t0
// pre-period outcomes followed by covariates when enabled; each row is
// centered by the donor mean and, when the donor spread allows, divided by
// the donor standard deviation. Raw copies are kept for residuals reported in
// outcome units.
struct FeatureBlock {
  Matrix x0;                     // k x J, scaled; column j <-> pool donor j
  std::vector<double> x1;        // k, scaled target features
  Matrix x0_raw;                 // k x J, original units
  std::vector<double> x1_raw;    // k
  std::vector<double> row_center;
  std::vector<double> row_scale;       // 1.0 for unscaled rows
  std::vector<char> row_is_scaled;
  std::vector<double> v_diag;          // k nonnegative importance weights
  int n_pre_rows = 0;                  // leading rows that are outcomes
  std::vector<std::string> warnings;

  int k() const { return static_cast<int>(x1.size()); }
  int n_donors() const { return static_cast<int>(x0.cols()); }
};

FeatureBlock assemble_features(const PanelData& panel, int target,
                               const DonorPool& pool, bool use_covariates,
                               const std::vector<double>* v_diag = nullptr);

struct WeightVector {
  enum class Kind { scm, augmented };
  std::vector<double> gamma;
  Kind kind = Kind::scm;
  double sum_constraint_residual = 0.0;  // sum(gamma) - 1 before re-centering
  double min_weight = 0.0;
  double objective = 0.0;                // scaled-feature objective at gamma
  double fixed_point_residual = 0.0;     // scm only
  int iterations = 0;                    // scm only
};

// Euclidean projection onto {w : w >= 0, sum w = 1} (sort-and-threshold).
std::vector<double> simplex_project(std::vector<double> v);

// min over the simplex of (x1 - x0 g)' V (x1 - x0 g).
WeightVector scm_weights(const FeatureBlock& fb);

// Ridge-augmented weights: gamma_scm plus the closed-form correction
// x0' (x0 x0' + lambda I)^-1 (x1 - x0 gamma_scm). Requires lambda >= 0; at
// lambda = 0 the Gram matrix must be invertible.
WeightVector augmented_weights(const FeatureBlock& fb, const WeightVector& scm,
                               double lambda);

struct CvPoint {
  double lambda;
  double cv_error;
};

struct LambdaChoice {
  double lambda = 0.0;
  std::vector<CvPoint> curve;
  bool endpoint_warning = false;
};

// Leave-one-pre-period-out cross-validation over the grid; ties broken toward
// the larger lambda. Requires t0 >= 3.
LambdaChoice select_lambda(const FeatureBlock& fb, const std::vector<double>& grid);

// 20 log-spaced values spanning [1e-4, 1e4] x (mean Gram diagonal).
std::vector<double> default_lambda_grid(const FeatureBlock& fb, int size = 20);

struct FitDiagnostics {
  double pre_rmse = 0.0;        // original outcome units, pre rows only
  double max_abs_weight = 0.0;
  double l2_weight_norm = 0.0;
  double imbalance_term = 0.0;  // || diag(lambda/(d_j^2+lambda)) U'(x1 - x0 g) ||_2
};

FitDiagnostics diagnostics(const FeatureBlock& fb, const WeightVector& w,
                           double lambda);

}  // namespace strata
