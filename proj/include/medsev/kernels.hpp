#pragma once

#include <cstddef>

// Double-precision inner loops shared by the matrix, fusion and classifier
// code. Every kernel has a scalar reference implementation and (on x86) an
// AVX2 variant; the active backend is picked once at startup from CPUID and
// can be overridden for tests. SIMD and scalar results may differ in the
// last bits (different summation order); the equivalence tests bound that.

namespace medsev::kernels {

enum class Backend { Scalar, Avx2 };

// Backend currently used by the kernel entry points.
Backend active_backend();

// Override the backend (tests). Throws medsev::Error if the requested
// backend is not available on this CPU/build.
void set_backend(Backend b);

// True if the backend can run here (Scalar always can).
bool backend_available(Backend b);

const char* backend_name(Backend b);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// Plane rotation: (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
void rot(double* x, double* y, double c, double s, std::size_t n);

// sum_i a[i]
double sum(const double* a, std::size_t n);

// sum_i a[i]^2
double sumsq(const double* a, std::size_t n);

// a[i] *= alpha
void scale(double* a, double alpha, std::size_t n);

namespace detail {
// Scalar reference kernels, always available; the equivalence tests compare
// the dispatched kernels against these.
double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void rot_scalar(double* x, double* y, double c, double s, std::size_t n);
double sum_scalar(const double* a, std::size_t n);
double sumsq_scalar(const double* a, std::size_t n);
void scale_scalar(double* a, double alpha, std::size_t n);

#if MEDSEV_HAVE_AVX2_TU
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void rot_avx2(double* x, double* y, double c, double s, std::size_t n);
double sum_avx2(const double* a, std::size_t n);
double sumsq_avx2(const double* a, std::size_t n);
void scale_avx2(double* a, double alpha, std::size_t n);
#endif
} // namespace detail

} // namespace medsev::kernels
