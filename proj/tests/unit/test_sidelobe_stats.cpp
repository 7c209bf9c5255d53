#include <doctest.h>

#include <cmath>
#include <random>

#include "fskjcr/error.hpp"
#include "fskjcr/phase_optimizer.hpp"
#include "fskjcr/sidelobe_stats.hpp"
#include "oracles.hpp"

using namespace fskjcr;

namespace {

// Pearson correlation of two match counts over all M^L sequences.
double brute_force_correlation(int L, int M, GridPoint a, GridPoint b)
{
    std::uint64_t n = 1;
    for (int l = 0; l < L; ++l) n *= M;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto f = oracle::digits(i, L, M);
        const double x = oracle::matches(f, a.k, a.r), y = oracle::matches(f, b.k, b.r);
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    const double N = static_cast<double>(n);
    const double cov = sab / N - sa * sb / (N * N);
    return cov / std::sqrt((saa / N - sa * sa / (N * N)) * (sbb / N - sb * sb / (N * N)));
}

}  // namespace

TEST_SUITE("sidelobe_stats")
{
    TEST_CASE("exhaustive counts agree with brute force")
    {
        for (auto [L, M] : {std::pair{3, 2}, {4, 3}, {5, 2}}) {
            for (const GridPoint& p : sidelobe_domain(make_spec(L, M)))
                CHECK(exhaustive_sl_counts(L, M, p.k, p.r) == oracle::brute_force_tally(L, M, p.k, p.r));
        }
        CHECK_THROWS_AS(exhaustive_sl_counts(16, 4, 1, 0), BudgetExceeded);
    }

    TEST_CASE("binomial law is exact where the match events are independent")
    {
        for (auto [L, M] : {std::pair{4, 3}, {6, 2}, {5, 4}}) {
            std::uint64_t total = 1;
            for (int l = 0; l < L; ++l) total *= M;
            for (int k = 1; k < L; ++k) {
                // r = 0 at any lag, and any r at the single-pair lag
                for (int r = -(M - 1); r <= M - 1; ++r) {
                    if (r != 0 && k != L - 1) continue;
                    const auto tally = oracle::brute_force_tally(L, M, k, r);
                    const auto exact = sl_pmf_rational(L, M, k, r);
                    const auto approx = sl_pmf(L, M, k, r);
                    for (int i = 0; i <= L; ++i) {
                        CHECK(exact[i] == boost::multiprecision::cpp_rational(tally[i], total));
                        CHECK(std::abs(approx.pmf()[i] - static_cast<double>(tally[i]) / total) < 1e-14);
                    }
                }
            }
        }
    }

    TEST_CASE("binomial law departs from enumeration for chained nonzero shifts")
    {
        const auto tally = oracle::brute_force_tally(3, 2, 1, 1);
        const auto law = sl_pmf_rational(3, 2, 1, 1);
        // two matches would need f0 - f1 = f1 - f2 = 1, impossible with M = 2
        CHECK(tally[2] == 0);
        CHECK(law[2] > 0);
    }

    TEST_CASE("pmf basics and k = 0 modes")
    {
        const auto d = sl_pmf(5, 3, 2, -1);
        CHECK(d.lattice() == 5);
        CHECK(d.support().size() == 6);
        CHECK(d.pmf()[4] == 0.0);
        CHECK(d.mean() == doctest::Approx(3 * match_probability(3, -1) / 5.0));
        CHECK(match_probability(4, 3) == doctest::Approx(1.0 / 16));

        CHECK(sl_pmf(4, 3, 0, 1).pmf()[0] == 1.0);
        const auto formula = sl_pmf(4, 3, 0, 1, K0Mode::paper_formula);
        CHECK(formula.mean() == doctest::Approx(4 * match_probability(3, 1) / 4.0));
        CHECK(sl_pmf(4, 3, 0, 1, K0Mode::paper_half_row).pmf()[1] == doctest::Approx(formula.pmf()[1]));
        CHECK_THROWS_AS(sl_pmf(4, 3, 0, 0), DomainError);
        CHECK_THROWS_AS(sl_pmf(4, 3, 4, 0), DomainError);
        CHECK_THROWS_AS(sl_pmf(4, 3, 1, 3), DomainError);

        for (auto m : {K0Mode::exact, K0Mode::paper_formula, K0Mode::paper_half_row})
            CHECK(parse_k0_mode(k0_mode_name(m)) == m);
        CHECK_THROWS_AS(parse_k0_mode("bogus"), DomainError);
    }

    TEST_CASE("correlation formulas")
    {
        CHECK(sl_correlation_printed(6, 4, {2, 1}, {3, 1}) == 0.0);
        CHECK(sl_correlation_symmetric(6, 4, {2, 1}, {3, -1}) == 0.0);
        CHECK(sl_correlation_printed(6, 4, {2, 1}, {2, -1}) == doctest::Approx(-3.0 / 13.0));
        const double p = match_probability(4, 0), q = match_probability(4, 2);
        CHECK(sl_correlation_symmetric(6, 4, {2, 0}, {2, 2}) ==
              doctest::Approx(-std::sqrt(p * q / ((1 - p) * (1 - q)))));
        // the printed value depends on the first point's shift only
        CHECK(sl_correlation_printed(6, 4, {2, 0}, {2, 2}) != sl_correlation_printed(6, 4, {2, 2}, {2, 0}));
        CHECK_THROWS_AS(sl_correlation_printed(6, 4, {2, 0}, {2, 0}), DomainError);

        // one pair per point: the symmetric value is exact
        for (auto [r1, r2] : {std::pair{0, 1}, {2, -1}, {-3, 3}})
            CHECK(sl_correlation_symmetric(5, 4, {4, r1}, {4, r2}) ==
                  doctest::Approx(brute_force_correlation(5, 4, {4, r1}, {4, r2})).epsilon(1e-12));
    }

    TEST_CASE("empirical correlation converges to enumeration")
    {
        for (auto [a, b] : {std::pair{GridPoint{1, 0}, GridPoint{1, 1}}, {GridPoint{2, 1}, GridPoint{2, -2}},
                            {GridPoint{1, 0}, GridPoint{2, 0}}}) {
            const auto rep = sl_correlation_empirical(6, 3, a, b, 200000, 7, 2);
            const double truth = brute_force_correlation(6, 3, a, b);
            CHECK(std::abs(rep.empirical_value - truth) < 5 * rep.standard_error + 1e-3);
            CHECK(rep.samples == 200000);
        }
        const auto self = sl_correlation_empirical(6, 3, {1, 0}, {1, 0}, 10000, 1);
        CHECK(self.empirical_value == doctest::Approx(1.0));
        CHECK(self.printed_formula_value == 1.0);
        CHECK_THROWS_AS(sl_correlation_empirical(6, 3, {1, 0}, {1, 1}, 9999, 1), DomainError);

        const auto x = sl_correlation_empirical(6, 3, {1, 0}, {1, 1}, 20000, 3, 1);
        const auto y = sl_correlation_empirical(6, 3, {1, 0}, {1, 1}, 20000, 3, 4);
        CHECK(x.empirical_value == y.empirical_value);
    }

    TEST_CASE("distribution construction and queries")
    {
        const auto d = DiscreteDistribution::from_pmf({0.0, 0.5, 2.0}, {0.25, 0.25, 0.5});
        CHECK(d.cdf_at(-1) == 0.0);
        CHECK(d.cdf_at(0.0) == 0.25);
        CHECK(d.cdf_at(1.0) == 0.5);
        CHECK(d.cdf_at(2.0) == 1.0);
        CHECK(d.quantile(0.25) == 0.0);
        CHECK(d.quantile(0.3) == 0.5);
        CHECK(d.quantile(1.0) == 2.0);
        CHECK(d.mean() == doctest::Approx(1.125));
        CHECK_THROWS_AS(DiscreteDistribution::from_pmf({0.0, 1.0}, {0.5, 0.6}), DomainError);
        CHECK_THROWS_AS(DiscreteDistribution::from_pmf({1.0, 0.0}, {0.5, 0.5}), DomainError);
        CHECK_THROWS_AS(DiscreteDistribution::from_cdf({0.0, 1.0}, {0.6, 0.5}), DomainError);

        const std::vector<double> s{0.5, 0.25, 0.5, 0.75};
        const auto e = DiscreteDistribution::empirical(s);
        CHECK(e.support().size() == 3);
        CHECK(e.cdf_at(0.5) == 0.75);
        const std::vector<std::uint64_t> tally{1, 0, 3};
        const auto el = DiscreteDistribution::empirical_lattice(2, tally);
        CHECK(el.lattice() == 2);
        CHECK(el.cdf_at(0.5) == 0.25);
    }

    TEST_CASE("Wasserstein-1 and horizontal gap")
    {
        const auto a = DiscreteDistribution::from_pmf({0.0}, {1.0});
        const auto b = DiscreteDistribution::from_pmf({0.5}, {1.0});
        CHECK(wasserstein1(a, b) == doctest::Approx(0.5));
        CHECK(wasserstein1(a, a) == 0.0);
        CHECK(horizontal_cdf_gap(a, b) == doctest::Approx(0.5));

        // W1 equals the mean difference when one law stochastically dominates
        const auto c = DiscreteDistribution::lattice_pmf(4, {0.1, 0.2, 0.3, 0.2, 0.2});
        const auto d = DiscreteDistribution::lattice_pmf(4, {0.0, 0.1, 0.3, 0.3, 0.3});
        CHECK(wasserstein1(c, d) == doctest::Approx(d.mean() - c.mean()).epsilon(1e-12));
        CHECK(wasserstein1(c, d) == doctest::Approx(wasserstein1(d, c)));
        CHECK(horizontal_cdf_gap(c, d) == doctest::Approx(0.25));

        // the gap picks up a thin tail that W1 barely sees
        const auto e = DiscreteDistribution::from_pmf({0.0, 1.0}, {0.99, 0.01});
        const auto f = DiscreteDistribution::from_pmf({0.0}, {1.0});
        CHECK(wasserstein1(e, f) == doctest::Approx(0.01));
        CHECK(horizontal_cdf_gap(e, f) == doctest::Approx(1.0));
    }

    TEST_CASE("exhaustive PSL law agrees with brute force")
    {
        for (auto [L, M] : {std::pair{4, 2}, {3, 3}, {5, 3}}) {
            std::uint64_t n = 1;
            for (int l = 0; l < L; ++l) n *= M;
            std::vector<std::uint64_t> tally(L + 1, 0);
            for (std::uint64_t i = 0; i < n; ++i)
                ++tally[static_cast<int>(std::lround(oracle::brute_force_psl(oracle::digits(i, L, M), M) * L))];
            const auto truth = DiscreteDistribution::empirical_lattice(L, tally);
            const auto got = exhaustive_psl_cdf(L, M, nullptr, kDefaultEnumerationBudget, 2);
            CHECK(wasserstein1(truth, got) < 1e-15);
        }
        CHECK_THROWS_AS(exhaustive_psl_cdf(16, 4), BudgetExceeded);
    }

    TEST_CASE("exhaustive PSL with a phase table")
    {
        const auto spec = make_spec(3, 2);
        PhaseTable partial(spec);
        partial.set(std::string("0"), {0, 0, 0});
        CHECK_THROWS_AS(exhaustive_psl_cdf(3, 2, &partial), DomainError);

        OptimizerConfig cfg;
        cfg.restarts = 3;
        std::vector<std::uint64_t> all(8);
        for (std::uint64_t i = 0; i < 8; ++i) all[i] = i;
        const auto table = to_phase_table(spec, batch_optimize(spec, all, cfg));
        const auto before = exhaustive_psl_cdf(3, 2);
        const auto after = exhaustive_psl_cdf(3, 2, &table);
        CHECK(after.lattice() == 0);
        CHECK(after.mean() <= before.mean() + 1e-12);
    }

    TEST_CASE("independent-max approximation")
    {
        const auto exact = approx_psl_cdf(4, 4, K0Mode::exact);
        const auto formula = approx_psl_cdf(4, 4, K0Mode::paper_formula);
        const auto half = approx_psl_cdf(4, 4, K0Mode::paper_half_row);
        // extra factors can only lower the product CDF
        for (int i = 0; i <= 4; ++i) {
            const double x = i / 4.0;
            CHECK(formula.cdf_at(x) <= half.cdf_at(x) + 1e-15);
            CHECK(half.cdf_at(x) <= exact.cdf_at(x) + 1e-15);
        }
        CHECK(exact.cdf_at(1.0) == doctest::Approx(1.0));
        CHECK(exact.cdf_at(0.0) > 0.0);
        CHECK_THROWS_AS(approx_psl_cdf(1, 4), DomainError);

        // product of the per-point CDFs, from the binomial laws directly
        const auto spec = make_spec(3, 2);
        const auto approx = approx_psl_cdf(3, 2);
        for (int i = 0; i <= 3; ++i) {
            double prod = 1.0;
            for (const GridPoint& p : sidelobe_domain(spec)) prod *= sl_pmf(3, 2, p.k, p.r).cdf_at(i / 3.0);
            CHECK(approx.cdf_at(i / 3.0) == doctest::Approx(prod).epsilon(1e-12));
        }
    }

    TEST_CASE("Monte Carlo PSL")
    {
        const auto exact = exhaustive_psl_cdf(6, 3);
        const auto mc = monte_carlo_psl_cdf(6, 3, 40000, 11, {}, 2);
        CHECK(mc.lattice() == 6);
        CHECK(wasserstein1(exact, mc) < 0.01);
        CHECK(wasserstein1(mc, monte_carlo_psl_cdf(6, 3, 40000, 11, {}, 1)) == 0.0);
        CHECK_THROWS_AS(monte_carlo_psl_cdf(6, 3, 999, 1), DomainError);

        MonteCarloPslOptions opt;
        opt.L = 4;
        opt.M = 3;
        opt.samples = 1000;
        opt.seed = 5;
        opt.local_oversampling = 8;
        opt.threads = 2;
        const auto both = monte_carlo_psl(opt);
        REQUIRE(both.local_maxima.size() == 1000);
        for (std::size_t s = 0; s < 1000; ++s) CHECK(both.local_maxima[s] >= both.grid[s] - 1.0 / 32);
        CHECK(both.local_maxima_cdf().mean() >= both.grid_cdf().mean() - 1.0 / 32);

        opt.local_oversampling = 0;
        opt.phases = [](const FskWaveform& w) { return std::vector<double>(w.num_subpulses(), 1.0); };
        const auto flat = monte_carlo_psl(opt);
        auto zero_opt = opt;
        zero_opt.phases = {};
        const auto zero = monte_carlo_psl(zero_opt);
        // a common phase offset leaves every sidelobe unchanged
        for (std::size_t s = 0; s < 1000; ++s) CHECK(std::abs(flat.grid[s] - zero.grid[s]) < 1e-12);
        CHECK_THROWS_AS(flat.local_maxima_cdf(), DomainError);
    }
}
