#include <atomic>
#include <cstdlib>
#include <string>

#include "gdicke/kernels.hpp"

namespace gdicke::kernels {

#ifndef GDICKE_BUILD_AVX2
namespace avx2 {
void evanescent_sommerfeld(const EvanescentParams& p, const double* k, std::size_t n,
                           std::complex<double>* out) {
    scalar::evanescent_sommerfeld(p, k, n, out);
}
void gauss_bessel_row(double l2, double k, const double* kp, std::size_t n, double* out) {
    scalar::gauss_bessel_row(l2, k, kp, n, out);
}
}  // namespace avx2
#endif

namespace {

Isa detect() {
    Isa best = avx2_available() ? Isa::avx2 : Isa::scalar;
    if (const char* env = std::getenv("GDICKE_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2") return best;
    }
    return best;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

bool avx2_available() {
#if defined(GDICKE_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa set_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
    return current().exchange(isa);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void evanescent_sommerfeld(const EvanescentParams& p, const double* k, std::size_t n,
                           std::complex<double>* out) {
    if (active_isa() == Isa::avx2)
        avx2::evanescent_sommerfeld(p, k, n, out);
    else
        scalar::evanescent_sommerfeld(p, k, n, out);
}

void gauss_bessel_row(double l2, double k, const double* kp, std::size_t n, double* out) {
    if (active_isa() == Isa::avx2)
        avx2::gauss_bessel_row(l2, k, kp, n, out);
    else
        scalar::gauss_bessel_row(l2, k, kp, n, out);
}

}  // namespace gdicke::kernels
