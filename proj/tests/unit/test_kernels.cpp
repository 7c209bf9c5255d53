#include <doctest.h>

#include <cmath>
#include <random>

#include "fskjcr/kernels.hpp"
#include "fskjcr/waveform.hpp"

using namespace fskjcr;
using namespace fskjcr::kernels;

namespace {

AfRowTerms random_terms(std::mt19937_64& gen, int count, int g_span)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    AfRowTerms terms;
    for (int t = 0; t < count; ++t) {
        const double lo = 10.0 * u(gen);
        const double hi = lo + u(gen);
        const auto g = static_cast<std::int64_t>(gen() % (2 * g_span + 1)) - g_span;
        terms.push(std::polar(u(gen), kTwoPi * u(gen)), g, lo, hi);
    }
    return terms;
}

}  // namespace

TEST_SUITE("kernels")
{
    TEST_CASE("scalar AF row matches the closed-form integral")
    {
        AfRowTerms terms;
        terms.push({1.0, 0.0}, -2, 0.25, 1.0);
        const double unit = kTwoPi / 16;
        std::vector<double> out(5);
        af_row_scalar(terms, unit, out);
        for (int j = 0; j < 5; ++j) {
            const int g = -2 + j;
            double expect = 0.75;
            if (g != 0) {
                const double gamma = unit * g;
                expect = std::abs((std::exp(cplx(0, gamma * 1.0)) - std::exp(cplx(0, gamma * 0.25))) / gamma);
            }
            CHECK(out[j] == doctest::Approx(expect).epsilon(1e-14));
        }
    }

    TEST_CASE("AVX2 AF row agrees with the scalar reference")
    {
        if (!isa_available(Isa::avx2)) {
            MESSAGE("AVX2 not available on this machine; equivalence test skipped");
            return;
        }
        std::mt19937_64 gen(5);
        for (int cols : {1, 3, 4, 7, 33, 129, 257, 1031}) {
            for (int rep = 0; rep < 5; ++rep) {
                const AfRowTerms terms = random_terms(gen, 1 + rep * 7, 600);
                const double unit = kTwoPi * (1 + rep % 2) / 16.0;
                std::vector<double> a(cols), b(cols);
                af_row_scalar(terms, unit, a);
                af_row_avx2(terms, unit, b);
                for (int j = 0; j < cols; ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12);
            }
        }
    }

    TEST_CASE("lag products agree across variants")
    {
        std::mt19937_64 gen(9);
        std::uniform_real_distribution<double> u(0.0, kTwoPi);
        for (std::size_t n : {1u, 2u, 5u, 16u, 33u}) {
            std::vector<cplx> c(n);
            for (auto& v : c) v = std::polar(1.0, u(gen));
            for (std::size_t lag = 0; lag <= n; ++lag) {
                std::vector<cplx> a(n - lag), b(n - lag);
                lag_products_scalar(c, lag, a);
                for (std::size_t l = lag; l < n; ++l) CHECK(std::abs(a[l - lag] - c[l] * std::conj(c[l - lag])) < 1e-15);
                if (isa_available(Isa::avx2)) {
                    lag_products_avx2(c, lag, b);
                    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
                }
            }
        }
    }

    TEST_CASE("dispatch selection")
    {
        const Isa before = active_isa();
        CHECK(isa_available(Isa::scalar));
        set_active_isa(Isa::scalar);
        CHECK(active_isa() == Isa::scalar);
        if (!isa_available(Isa::avx2)) CHECK_THROWS(set_active_isa(Isa::avx2));
        set_active_isa(before);
        CHECK(std::string(isa_name(best_available_isa())) != "");
    }
}
