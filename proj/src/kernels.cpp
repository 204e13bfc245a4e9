// Scalar reference kernels plus the runtime dispatch table.

#include "stratasynth/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace strata::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sumsq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

}  // namespace scalar

namespace avx2 {
bool available();
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);
double sum(const double* x, std::size_t n);
double sumsq(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
}  // namespace avx2

namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
  double (*sum)(const double*, std::size_t);
  double (*sumsq)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
};

constexpr Table kScalarTable{Isa::scalar, scalar::dot,   scalar::axpy,
                             scalar::matvec, scalar::sum, scalar::sumsq,
                             scalar::max_abs};
constexpr Table kAvx2Table{Isa::avx2,   avx2::dot,   avx2::axpy, avx2::matvec,
                           avx2::sum, avx2::sumsq, avx2::max_abs};

Table make_table(Isa isa) {
  if (isa == Isa::avx2) {
    if (!avx2::available())
      throw std::runtime_error("AVX2 kernels requested but CPU lacks AVX2");
    return kAvx2Table;
  }
  return kScalarTable;
}

Table initial_table() {
  if (const char* env = std::getenv("STRATA_SYNTH_SIMD")) {
    std::string v(env);
    if (v == "scalar") return kScalarTable;
    if (v == "avx2") return make_table(Isa::avx2);
    // "auto" or anything else falls through to detection
  }
  return avx2::available() ? kAvx2Table : kScalarTable;
}

Table& table() {
  static Table t = initial_table();
  return t;
}

}  // namespace

Isa active_isa() { return table().isa; }

const char* isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

void force_isa(Isa isa) { table() = make_table(isa); }

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  table().axpy(alpha, x, y, n);
}

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  table().matvec(a, rows, cols, x, y);
}

double sum(const double* x, std::size_t n) { return table().sum(x, n); }

double sumsq(const double* x, std::size_t n) { return table().sumsq(x, n); }

double max_abs(const double* x, std::size_t n) { return table().max_abs(x, n); }

}  // namespace strata::kernels
