#pragma once

// Arithmetic kernels behind the weight solvers and the simulation study.
// Scalar reference implementations always exist; an AVX2 variant is selected
// at runtime when the CPU supports it. The two variants are equivalence-tested
// against each other (accumulation order differs, so comparisons are made at
// rounding-level tolerances, not bitwise). Within one process the selection is
// fixed, which keeps runs reproducible.
//
// Selection override: environment variable STRATA_SYNTH_SIMD=scalar|avx2|auto
// (read once, at first use), or force_isa() from code.

#include <cstddef>

namespace strata::kernels {

enum class Isa { scalar, avx2 };

// Currently active instruction set.
Isa active_isa();
const char* isa_name(Isa isa);

// Test/benchmark hook. Forcing avx2 on a CPU without it throws.
void force_isa(Isa isa);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// y = A x with A row-major (rows x cols).
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);

double sum(const double* x, std::size_t n);
double sumsq(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

}  // namespace strata::kernels
