#include <doctest.h>

#include <cmath>
#include <random>

#include "fskjcr/ambiguity.hpp"
#include "fskjcr/error.hpp"
#include "fskjcr/phase_optimizer.hpp"

using namespace fskjcr;

namespace {

std::vector<double> random_phases(std::mt19937_64& gen, int L)
{
    std::vector<double> th(L);
    for (double& t : th) t = std::uniform_real_distribution<double>(0, kTwoPi)(gen);
    return th;
}

FskWaveform random_freqs(std::mt19937_64& gen, int L, int M)
{
    std::vector<int> f(L);
    for (int& x : f) x = static_cast<int>(gen() % M);
    return FskWaveform(make_spec(L, M), f);
}

}  // namespace

TEST_SUITE("phase_optimizer")
{
    TEST_CASE("objective is the squared grid PSL")
    {
        std::mt19937_64 gen(1);
        for (int i = 0; i < 30; ++i) {
            const auto w = random_freqs(gen, 3 + i % 8, 2 + i % 4);
            const auto th = random_phases(gen, w.num_subpulses());
            const double psl = grid_psl(w.with_phases(th));
            CHECK(objective(w, th) == doctest::Approx(psl * psl).epsilon(1e-12));
            CHECK(SidelobeObjective(w).max_value(th) == doctest::Approx(psl * psl).epsilon(1e-12));
        }
    }

    TEST_CASE("gradients match central differences")
    {
        std::mt19937_64 gen(2);
        const double h = 1e-6;
        for (int i = 0; i < 20; ++i) {
            const auto w = random_freqs(gen, 4 + i % 6, 2 + i % 3);
            const int L = w.num_subpulses();
            const SidelobeObjective obj(w);
            auto th = random_phases(gen, L);
            std::vector<double> grad(L), vals;
            for (std::size_t t = 0; t < obj.num_terms(); ++t) {
                obj.term_gradient(th, t, grad);
                for (int l = 0; l < L; ++l) {
                    auto p = th, m = th;
                    p[l] += h;
                    m[l] -= h;
                    std::vector<double> vp, vm;
                    obj.term_values(p, vp);
                    obj.term_values(m, vm);
                    CHECK(std::abs((vp[t] - vm[t]) / (2 * h) - grad[l]) < 1e-7);
                }
            }
            for (double beta : {10.0, 1e3}) {
                obj.smoothed(th, beta, grad);
                for (int l = 0; l < L; ++l) {
                    auto p = th, m = th;
                    p[l] += h;
                    m[l] -= h;
                    std::vector<double> scratch(L);
                    const double fd = (obj.smoothed(p, beta, scratch) - obj.smoothed(m, beta, scratch)) / (2 * h);
                    CHECK(std::abs(fd - grad[l]) < 1e-6 * std::max(1.0, std::abs(grad[l])));
                }
            }
            const auto g = objective_gradient(w, th);
            CHECK(g.size() == static_cast<std::size_t>(L));
        }
    }

    TEST_CASE("surrogate brackets the true max")
    {
        std::mt19937_64 gen(3);
        const auto w = random_freqs(gen, 8, 4);
        const SidelobeObjective obj(w);
        const auto th = random_phases(gen, 8);
        std::vector<double> grad(8);
        const double mx = obj.max_value(th);
        for (double beta : {1.0, 100.0, 1e4}) {
            const double s = obj.smoothed(th, beta, grad);
            CHECK(s >= mx - 1e-15);
            CHECK(s <= mx + std::log(static_cast<double>(obj.num_terms())) / beta + 1e-12);
        }
    }

    TEST_CASE("optimizer never worsens and pins the first phase")
    {
        std::mt19937_64 gen(4);
        OptimizerConfig cfg;
        cfg.restarts = 4;
        cfg.seed = 9;
        for (int i = 0; i < 15; ++i) {
            const auto w = random_freqs(gen, 4 + i % 5, 2 + i % 3);
            const auto res = optimize_phases(w, cfg);
            REQUIRE(res.phases.size() == static_cast<std::size_t>(w.num_subpulses()));
            CHECK(res.phases[0] == 0.0);
            CHECK(res.psl <= res.pre_psl + 1e-12);
            CHECK(res.pre_psl == doctest::Approx(grid_psl(w)));
            CHECK(res.psl == doctest::Approx(grid_psl(w.with_phases(res.phases))).epsilon(1e-9));
            if (res.winning_restart < 0) CHECK(res.psl == res.pre_psl);
        }
    }

    TEST_CASE("optimizer is deterministic across thread counts")
    {
        std::mt19937_64 gen(5);
        const auto w = random_freqs(gen, 10, 4);
        OptimizerConfig a;
        a.restarts = 5;
        a.seed = 77;
        auto b = a;
        b.threads = 3;
        const auto ra = optimize_phases(w, a), rb = optimize_phases(w, b);
        CHECK(ra.phases == rb.phases);
        CHECK(ra.psl == rb.psl);
        CHECK(ra.winning_restart == rb.winning_restart);
    }

    TEST_CASE("phase coding lowers a constant-frequency ridge")
    {
        const FskWaveform w(make_spec(6, 3), {1, 1, 1, 1, 1, 1});
        OptimizerConfig cfg;
        cfg.restarts = 3;
        const auto res = optimize_phases(w, cfg);
        CHECK(res.pre_psl == doctest::Approx(5.0 / 6.0));
        CHECK(res.psl < res.pre_psl);
        // the lag L-1 sidelobe has a single contributing pair
        CHECK(res.psl >= 1.0 / 6.0 - 1e-12);
    }

    TEST_CASE("small family batch means")
    {
        const auto spec = make_spec(4, 2);
        std::vector<std::uint64_t> all(16);
        for (std::uint64_t i = 0; i < 16; ++i) all[i] = i;
        OptimizerConfig cfg;
        cfg.seed = 1;
        const auto batch = batch_optimize(spec, all, cfg);
        REQUIRE(batch.rows.size() == 16);
        CHECK(batch.all.count == 16);
        CHECK(batch.non_constant.count == 14);
        CHECK(batch.all.mean_pre == doctest::Approx(0.4375));
        CHECK(batch.all.mean_post == doctest::Approx(0.25).epsilon(1e-6));
        CHECK(batch.all.mean_drop == doctest::Approx(batch.all.mean_pre - batch.all.mean_post));
        CHECK(batch.rows[0].constant_frequency);
        CHECK(batch.rows[5].waveform_index == "5");

        const auto table = to_phase_table(spec, batch);
        CHECK(table.complete());
        const auto* ph = table.find(std::string("5"));
        REQUIRE(ph != nullptr);
        CHECK(*ph == batch.rows[5].result.phases);
    }

    TEST_CASE("config validation")
    {
        OptimizerConfig cfg;
        cfg.restarts = 0;
        CHECK_THROWS_AS(cfg.validate(), DomainError);
        cfg = {};
        cfg.beta_scales.clear();
        CHECK_THROWS_AS(cfg.validate(), DomainError);
        cfg = {};
        cfg.tolerance = 0;
        CHECK_THROWS_AS(cfg.validate(), DomainError);
        CHECK_THROWS_AS(optimize_phases(FskWaveform(make_spec(1, 2), {0}), OptimizerConfig{}), DomainError);
    }
}
