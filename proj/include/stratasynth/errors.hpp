#pragma once

#include <stdexcept>
#include <string>

namespace strata {

// Base for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input files or arguments violate a documented contract. Messages carry
// file/line context where available.
struct ValidationError : Error {
  using Error::Error;
};

// A donor pool came out empty for the requested effect kind.
struct EmptyDonorPoolError : Error {
  using Error::Error;
};

// The target unit is not in the stratum required by the estimator.
struct StratumMismatchError : Error {
  using Error::Error;
};

// Two effect series do not share target unit / post-period index.
struct MismatchedSeriesError : Error {
  using Error::Error;
};

// lambda = 0 requested but the donor Gram matrix is rank deficient.
struct SingularGramError : Error {
  using Error::Error;
};

// NaN or infinity where a finite value is required.
struct NonFiniteError : Error {
  using Error::Error;
};

}  // namespace strata
