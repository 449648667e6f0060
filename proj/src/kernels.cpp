#include "medsev/kernels.hpp"

#include "medsev/error.hpp"

namespace medsev::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double sumsq_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void scale_scalar(double* a, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= alpha;
}

} // namespace detail

namespace {

struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*rot)(double*, double*, double, double, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    void (*scale)(double*, double, std::size_t);
};

constexpr KernelTable kScalarTable = {
    detail::dot_scalar, detail::axpy_scalar, detail::rot_scalar,
    detail::sum_scalar, detail::sumsq_scalar, detail::scale_scalar,
};

#if MEDSEV_HAVE_AVX2_TU
constexpr KernelTable kAvx2Table = {
    detail::dot_avx2, detail::axpy_avx2, detail::rot_avx2,
    detail::sum_avx2, detail::sumsq_avx2, detail::scale_avx2,
};
#endif

bool cpu_has_avx2() {
#if MEDSEV_HAVE_AVX2_TU && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

struct Dispatch {
    Backend backend;
    const KernelTable* table;
};

Dispatch& dispatch() {
    static Dispatch d = [] {
#if MEDSEV_HAVE_AVX2_TU
        if (cpu_has_avx2()) return Dispatch{Backend::Avx2, &kAvx2Table};
#endif
        return Dispatch{Backend::Scalar, &kScalarTable};
    }();
    return d;
}

} // namespace

Backend active_backend() { return dispatch().backend; }

bool backend_available(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return cpu_has_avx2();
    }
    return false;
}

const char* backend_name(Backend b) {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
    if (!backend_available(b))
        throw Error(std::string("kernel backend not available: ") + backend_name(b));
    switch (b) {
        case Backend::Scalar:
            dispatch() = {Backend::Scalar, &kScalarTable};
            break;
        case Backend::Avx2:
#if MEDSEV_HAVE_AVX2_TU
            dispatch() = {Backend::Avx2, &kAvx2Table};
#endif
            break;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    return dispatch().table->dot(a, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    dispatch().table->axpy(alpha, x, y, n);
}
void rot(double* x, double* y, double c, double s, std::size_t n) {
    dispatch().table->rot(x, y, c, s, n);
}
double sum(const double* a, std::size_t n) { return dispatch().table->sum(a, n); }
double sumsq(const double* a, std::size_t n) { return dispatch().table->sumsq(a, n); }
void scale(double* a, double alpha, std::size_t n) { dispatch().table->scale(a, alpha, n); }

} // namespace medsev::kernels
