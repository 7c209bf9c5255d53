#include <atomic>

#include "fskjcr/error.hpp"
#include "fskjcr/kernels.hpp"

namespace fskjcr::kernels {

#ifndef FSKJCR_HAVE_AVX2
// Stubs keep the symbol set identical on builds without the AVX2 unit.
void af_row_avx2(const AfRowTerms&, double, std::span<double>)
{
    throw DomainError("AVX2 kernels not compiled in");
}
void lag_products_avx2(std::span<const std::complex<double>>, std::size_t, std::span<std::complex<double>>)
{
    throw DomainError("AVX2 kernels not compiled in");
}
#endif

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa)
{
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(FSKJCR_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Isa best_available_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

namespace {

std::atomic<Isa>& active_slot()
{
    static std::atomic<Isa> slot{best_available_isa()};
    return slot;
}

}  // namespace

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa)
{
    if (!isa_available(isa)) throw DomainError(std::string("ISA not available: ") + isa_name(isa));
    active_slot().store(isa, std::memory_order_relaxed);
}

void af_row(const AfRowTerms& terms, double unit, std::span<double> out)
{
    if (active_isa() == Isa::avx2)
        af_row_avx2(terms, unit, out);
    else
        af_row_scalar(terms, unit, out);
}

void lag_products(std::span<const std::complex<double>> phasors, std::size_t lag,
                  std::span<std::complex<double>> out)
{
    if (active_isa() == Isa::avx2)
        lag_products_avx2(phasors, lag, out);
    else
        lag_products_scalar(phasors, lag, out);
}

}  // namespace fskjcr::kernels
