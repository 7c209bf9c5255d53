#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant each.
// The dispatching entry points pick the variant once at runtime from CPUID;
// tests call the explicit variants to check them against each other.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace fskjcr::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa best_available_isa();

// Process-wide selection used by the dispatching entry points. Defaults to
// the best available ISA; set_active_isa throws if the ISA is unavailable.
Isa active_isa();
void set_active_isa(Isa isa);

// One delay row of the ambiguity surface in normalized units (time in T,
// Doppler in rad/T). Term t contributes
//     coef_t * integral_{lo_t}^{hi_t} exp(i * unit * (g_t + j) * u) du
// to column j, where g_t is an integer so zero-frequency columns are detected
// exactly.
struct AfRowTerms {
    std::vector<double> coef_re;
    std::vector<double> coef_im;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::int64_t> g_start;

    void clear();
    void push(std::complex<double> coef, std::int64_t g, double lower, double upper);
    std::size_t size() const { return coef_re.size(); }
};

// out[j] = |sum over terms| for j in [0, out.size()).
void af_row_scalar(const AfRowTerms& terms, double unit, std::span<double> out);
void af_row_avx2(const AfRowTerms& terms, double unit, std::span<double> out);
void af_row(const AfRowTerms& terms, double unit, std::span<double> out);

// out[l - lag] = phasors[l] * conj(phasors[l - lag]) for l in [lag, n).
// out must hold n - lag elements.
void lag_products_scalar(std::span<const std::complex<double>> phasors, std::size_t lag,
                         std::span<std::complex<double>> out);
void lag_products_avx2(std::span<const std::complex<double>> phasors, std::size_t lag,
                       std::span<std::complex<double>> out);
void lag_products(std::span<const std::complex<double>> phasors, std::size_t lag,
                  std::span<std::complex<double>> out);

}  // namespace fskjcr::kernels
