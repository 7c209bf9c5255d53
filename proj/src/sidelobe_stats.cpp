#include "fskjcr/sidelobe_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>

#include "fskjcr/error.hpp"
#include "fskjcr/parallel.hpp"
#include "fskjcr/rng.hpp"

namespace fskjcr {

namespace {

constexpr double kMassTol = 1e-12;

void require_point(int L, int M, GridPoint p)
{
    const WaveformSpec spec = make_spec(L, M);
    if (!in_domain(spec, p))
        throw DomainError("(k=" + std::to_string(p.k) + ", r=" + std::to_string(p.r) +
                          ") is outside the sidelobe domain for L=" + std::to_string(L) + ", M=" + std::to_string(M));
}

// Number of binomial trials behind the sidelobe at (k, r); 0 means the
// sidelobe is identically zero under the chosen k = 0 treatment.
int trials_for(int L, int k, int r, K0Mode mode)
{
    if (k > 0) return L - k;
    if (mode == K0Mode::exact) return 0;
    (void)r;
    return L;
}

// Advances base-M digits (most significant first) to the next index.
void next_sequence(std::vector<int>& digits, int M)
{
    for (std::size_t l = digits.size(); l-- > 0;) {
        if (++digits[l] < M) return;
        digits[l] = 0;
    }
}

std::uint64_t checked_count(int L, int M, std::uint64_t budget)
{
    const std::uint64_t count = make_spec(L, M).waveform_count();
    if (count == 0 || count > budget)
        throw BudgetExceeded("enumerating M^L = " + std::to_string(M) + "^" + std::to_string(L) +
                             " waveforms exceeds the budget of " + std::to_string(budget) +
                             "; use the Monte Carlo estimator instead");
    return count;
}

struct CumulativeView {
    std::span<const double> x;
    std::vector<double> F;
};

CumulativeView cumulative(const DiscreteDistribution& d) { return {d.support(), d.cdf()}; }

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> support, std::vector<double> pmf, int lattice)
    : support_(std::move(support)), pmf_(std::move(pmf)), lattice_(lattice)
{
    if (support_.empty() || support_.size() != pmf_.size())
        throw DomainError("distribution: support and masses must be nonempty and of equal length");
    double total = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (!std::isfinite(support_[i])) throw DomainError("distribution: support must be finite");
        if (i > 0 && !(support_[i] > support_[i - 1])) throw DomainError("distribution: support must be increasing");
        if (pmf_[i] < -kMassTol || !std::isfinite(pmf_[i])) throw DomainError("distribution: negative mass");
        pmf_[i] = std::max(pmf_[i], 0.0);
        total += pmf_[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("distribution: masses sum to " + std::to_string(total));
}

DiscreteDistribution DiscreteDistribution::from_pmf(std::vector<double> support, std::vector<double> pmf, int lattice)
{
    return DiscreteDistribution(std::move(support), std::move(pmf), lattice);
}

DiscreteDistribution DiscreteDistribution::from_cdf(std::vector<double> support, std::vector<double> cdf, int lattice)
{
    if (cdf.empty()) throw DomainError("distribution: empty CDF");
    for (std::size_t i = 1; i < cdf.size(); ++i)
        if (cdf[i] < cdf[i - 1] - kMassTol) throw DomainError("distribution: CDF must be nondecreasing");
    if (std::abs(cdf.back() - 1.0) > 1e-9) throw DomainError("distribution: CDF must end at 1");
    std::vector<double> pmf(cdf.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        pmf[i] = cdf[i] - prev;
        prev = cdf[i];
    }
    return DiscreteDistribution(std::move(support), std::move(pmf), lattice);
}

DiscreteDistribution DiscreteDistribution::lattice_pmf(int n, std::vector<double> pmf)
{
    if (n < 1 || pmf.size() != static_cast<std::size_t>(n + 1)) throw DomainError("distribution: lattice size mismatch");
    std::vector<double> support(pmf.size());
    for (int i = 0; i <= n; ++i) support[i] = static_cast<double>(i) / n;
    return DiscreteDistribution(std::move(support), std::move(pmf), n);
}

DiscreteDistribution DiscreteDistribution::lattice_cdf(int n, std::vector<double> cdf)
{
    if (n < 1 || cdf.size() != static_cast<std::size_t>(n + 1)) throw DomainError("distribution: lattice size mismatch");
    std::vector<double> support(cdf.size());
    for (int i = 0; i <= n; ++i) support[i] = static_cast<double>(i) / n;
    return from_cdf(std::move(support), std::move(cdf), n);
}

DiscreteDistribution DiscreteDistribution::empirical(std::span<const double> samples)
{
    if (samples.empty()) throw DomainError("distribution: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> support, pmf;
    const double w = 1.0 / static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        support.push_back(sorted[i]);
        pmf.push_back(static_cast<double>(j - i) * w);
        i = j;
    }
    return DiscreteDistribution(std::move(support), std::move(pmf), 0);
}

DiscreteDistribution DiscreteDistribution::empirical_lattice(int n, std::span<const std::uint64_t> tally)
{
    if (n < 1 || tally.size() != static_cast<std::size_t>(n + 1)) throw DomainError("distribution: lattice size mismatch");
    const std::uint64_t total = std::accumulate(tally.begin(), tally.end(), std::uint64_t{0});
    if (total == 0) throw DomainError("distribution: empty tally");
    std::vector<double> pmf(tally.size());
    for (std::size_t i = 0; i < tally.size(); ++i) pmf[i] = static_cast<double>(tally[i]) / static_cast<double>(total);
    return lattice_pmf(n, std::move(pmf));
}

std::vector<double> DiscreteDistribution::cdf() const
{
    std::vector<double> out(pmf_.size());
    std::partial_sum(pmf_.begin(), pmf_.end(), out.begin());
    out.back() = 1.0;
    return out;
}

double DiscreteDistribution::cdf_at(double x) const
{
    double acc = 0.0;
    for (std::size_t i = 0; i < support_.size() && support_[i] <= x; ++i) acc += pmf_[i];
    return std::min(acc, 1.0);
}

double DiscreteDistribution::quantile(double u) const
{
    double acc = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
        acc += pmf_[i];
        if (acc >= u - kMassTol) return support_[i];
    }
    return support_.back();
}

double DiscreteDistribution::mean() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) m += support_[i] * pmf_[i];
    return m;
}

const char* k0_mode_name(K0Mode mode)
{
    switch (mode) {
    case K0Mode::exact:
        return "exact";
    case K0Mode::paper_formula:
        return "paper-formula";
    case K0Mode::paper_half_row:
        return "paper-half-row";
    }
    return "exact";
}

K0Mode parse_k0_mode(const std::string& name)
{
    if (name == "exact") return K0Mode::exact;
    if (name == "paper-formula" || name == "paper") return K0Mode::paper_formula;
    if (name == "paper-half-row" || name == "half-row") return K0Mode::paper_half_row;
    throw DomainError("unknown k=0 mode '" + name + "' (expected exact, paper-formula or paper-half-row)");
}

double match_probability(int M, int r)
{
    return static_cast<double>(M - std::abs(r)) / (static_cast<double>(M) * M);
}

DiscreteDistribution sl_pmf(int L, int M, int k, int r, K0Mode mode)
{
    require_point(L, M, {k, r});
    const int n = trials_for(L, k, r, mode);
    std::vector<double> pmf(static_cast<std::size_t>(L + 1), 0.0);
    if (n == 0) {
        pmf[0] = 1.0;
    } else {
        const boost::math::binomial_distribution<double> law(n, match_probability(M, r));
        for (int i = 0; i <= n; ++i) pmf[i] = boost::math::pdf(law, i);
    }
    return DiscreteDistribution::lattice_pmf(L, std::move(pmf));
}

std::vector<boost::multiprecision::cpp_rational> sl_pmf_rational(int L, int M, int k, int r, K0Mode mode)
{
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;
    require_point(L, M, {k, r});
    const int n = trials_for(L, k, r, mode);
    std::vector<cpp_rational> pmf(static_cast<std::size_t>(L + 1), cpp_rational(0));
    if (n == 0) {
        pmf[0] = 1;
        return pmf;
    }
    const cpp_int a = M - std::abs(r);
    const cpp_int b = cpp_int(M) * M - a;
    const cpp_int denom = boost::multiprecision::pow(cpp_int(M) * M, static_cast<unsigned>(n));
    cpp_int choose = 1;
    for (int i = 0; i <= n; ++i) {
        if (i > 0) choose = choose * (n - i + 1) / i;
        const cpp_int num = choose * boost::multiprecision::pow(a, static_cast<unsigned>(i)) *
                            boost::multiprecision::pow(b, static_cast<unsigned>(n - i));
        pmf[i] = cpp_rational(num, denom);
    }
    return pmf;
}

std::vector<std::uint64_t> exhaustive_sl_counts(int L, int M, int k, int r, std::uint64_t budget)
{
    require_point(L, M, {k, r});
    const std::uint64_t count = checked_count(L, M, budget);
    std::vector<std::uint64_t> tally(static_cast<std::size_t>(L + 1), 0);
    std::vector<int> digits(static_cast<std::size_t>(L), 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        ++tally[static_cast<std::size_t>(grid_match_count(digits, k, r))];
        next_sequence(digits, M);
    }
    return tally;
}

double sl_correlation_printed(int L, int M, GridPoint a, GridPoint b)
{
    require_point(L, M, a);
    require_point(L, M, b);
    if (a == b) throw DomainError("correlation needs two distinct grid points");
    if (a.k != b.k) return 0.0;
    const double q = M - std::abs(a.r);
    return -q / (static_cast<double>(M) * M - q);
}

double sl_correlation_symmetric(int L, int M, GridPoint a, GridPoint b)
{
    require_point(L, M, a);
    require_point(L, M, b);
    if (a == b) throw DomainError("correlation needs two distinct grid points");
    if (a.k != b.k) return 0.0;
    const double p = match_probability(M, a.r);
    const double q = match_probability(M, b.r);
    return -std::sqrt(p * q / ((1.0 - p) * (1.0 - q)));
}

std::vector<int> sample_freq_sequence(const WaveformSpec& spec, std::uint64_t seed, std::uint64_t index)
{
    Rng rng = Rng::substream(seed, {index});
    std::vector<int> freq(static_cast<std::size_t>(spec.num_subpulses));
    for (int& f : freq) f = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(spec.mod_order)));
    return freq;
}

CorrelationReport sl_correlation_empirical(int L, int M, GridPoint a, GridPoint b, std::uint64_t samples,
                                           std::uint64_t seed, unsigned threads)
{
    require_point(L, M, a);
    require_point(L, M, b);
    if (samples < 10000) throw DomainError("empirical correlation needs at least 10^4 samples");
    const WaveformSpec spec = make_spec(L, M);
    std::vector<int> xa(samples), xb(samples);
    parallel_for(samples, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            const auto freq = sample_freq_sequence(spec, seed, s);
            xa[s] = grid_match_count(freq, a.k, a.r);
            xb[s] = grid_match_count(freq, b.k, b.r);
        }
    });
    const double n = static_cast<double>(samples);
    double ma = 0.0, mb = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        ma += xa[s];
        mb += xb[s];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double da = xa[s] - ma, db = xb[s] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw DomainError("empirical correlation: a sidelobe has zero variance");

    CorrelationReport report;
    report.a = a;
    report.b = b;
    report.samples = samples;
    report.empirical_value = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
    // large-sample normal-theory standard error
    report.standard_error = (1.0 - report.empirical_value * report.empirical_value) / std::sqrt(n - 1.0);
    if (a == b) {
        report.printed_formula_value = 1.0;
        report.symmetric_formula_value = 1.0;
    } else {
        report.printed_formula_value = sl_correlation_printed(L, M, a, b);
        report.symmetric_formula_value = sl_correlation_symmetric(L, M, a, b);
    }
    return report;
}

DiscreteDistribution approx_psl_cdf(int L, int M, K0Mode mode)
{
    if (L < 2) throw DomainError("PSL approximation needs L >= 2");
    const WaveformSpec spec = make_spec(L, M);
    std::vector<double> cdf(static_cast<std::size_t>(L + 1), 1.0);
    for (const GridPoint& p : sidelobe_domain(spec)) {
        if (p.k == 0 && mode == K0Mode::paper_half_row && p.r < 0) continue;
        const int n = trials_for(L, p.k, p.r, mode);
        if (n == 0) continue;
        const boost::math::binomial_distribution<double> law(n, match_probability(M, p.r));
        for (int i = 0; i < n; ++i) cdf[i] *= boost::math::cdf(law, i);
    }
    return DiscreteDistribution::lattice_cdf(L, std::move(cdf));
}

DiscreteDistribution exhaustive_psl_cdf(int L, int M, const PhaseTable* phases, std::uint64_t budget,
                                        unsigned threads)
{
    const WaveformSpec spec = make_spec(L, M);
    const std::uint64_t count = checked_count(L, M, budget);
    if (phases != nullptr) {
        if (!(phases->spec().num_subpulses == L && phases->spec().mod_order == M))
            throw DomainError("phase table belongs to a different waveform family");
        if (!phases->complete()) throw DomainError("exhaustive PSL with phases needs a complete phase table");
        std::vector<double> psl(count);
        parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t idx = begin; idx < end; ++idx) {
                auto freq = index_to_freq_sequence(spec, idx);
                const auto* th = phases->find(freq);
                psl[idx] = grid_psl(FskWaveform(spec, std::move(freq), *th));
            }
        });
        return DiscreteDistribution::empirical(psl);
    }

    const unsigned workers = resolve_threads(threads);
    std::vector<std::vector<std::uint64_t>> tallies(workers, std::vector<std::uint64_t>(L + 1, 0));
    const std::uint64_t chunk = (count + workers - 1) / workers;
    parallel_for(workers, workers, [&](std::size_t wbegin, std::size_t wend) {
        for (std::size_t w = wbegin; w < wend; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(count, begin + chunk);
            if (begin >= end) continue;
            auto digits = index_to_freq_sequence(spec, begin);
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                ++tallies[w][static_cast<std::size_t>(max_grid_match_count(digits, M))];
                next_sequence(digits, M);
            }
        }
    });
    std::vector<std::uint64_t> tally(static_cast<std::size_t>(L + 1), 0);
    for (const auto& t : tallies)
        for (std::size_t i = 0; i < t.size(); ++i) tally[i] += t[i];
    return DiscreteDistribution::empirical_lattice(L, tally);
}

DiscreteDistribution MonteCarloPsl::grid_cdf() const
{
    if (!on_lattice) return DiscreteDistribution::empirical(grid);
    std::vector<std::uint64_t> tally(static_cast<std::size_t>(L + 1), 0);
    for (double v : grid) ++tally[static_cast<std::size_t>(std::lround(v * L))];
    return DiscreteDistribution::empirical_lattice(L, tally);
}

DiscreteDistribution MonteCarloPsl::local_maxima_cdf() const
{
    if (local_maxima.empty()) throw DomainError("local-maxima PSL was not requested");
    return DiscreteDistribution::empirical(local_maxima);
}

MonteCarloPsl monte_carlo_psl(const MonteCarloPslOptions& options)
{
    if (options.samples < 1000) throw DomainError("Monte Carlo PSL needs at least 1000 samples");
    const WaveformSpec spec = make_spec(options.L, options.M);
    MonteCarloPsl out;
    out.L = options.L;
    out.on_lattice = !options.phases;
    out.grid.resize(options.samples);
    const bool local = options.local_oversampling > 0;
    if (local) out.local_maxima.resize(options.samples);
    parallel_for(options.samples, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            FskWaveform w(spec, sample_freq_sequence(spec, options.seed, s));
            if (options.phases) w = w.with_phases(options.phases(w));
            out.grid[s] = grid_psl(w);
            if (local) out.local_maxima[s] = local_maxima_psl(sampled_af_surface(w, options.local_oversampling));
        }
    });
    return out;
}

DiscreteDistribution monte_carlo_psl_cdf(int L, int M, std::uint64_t n, std::uint64_t seed,
                                         const PhaseProvider& phases, unsigned threads)
{
    MonteCarloPslOptions options;
    options.L = L;
    options.M = M;
    options.samples = n;
    options.seed = seed;
    options.phases = phases;
    options.threads = threads;
    return monte_carlo_psl(options).grid_cdf();
}

double wasserstein1(const DiscreteDistribution& a, const DiscreteDistribution& b)
{
    const CumulativeView fa = cumulative(a), fb = cumulative(b);
    std::vector<double> xs(fa.x.begin(), fa.x.end());
    xs.insert(xs.end(), fb.x.begin(), fb.x.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double area = 0.0, Fa = 0.0, Fb = 0.0;
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        while (ia < fa.x.size() && fa.x[ia] <= xs[i]) Fa = fa.F[ia++];
        while (ib < fb.x.size() && fb.x[ib] <= xs[i]) Fb = fb.F[ib++];
        area += std::abs(Fa - Fb) * (xs[i + 1] - xs[i]);
    }
    return area;
}

double horizontal_cdf_gap(const DiscreteDistribution& a, const DiscreteDistribution& b)
{
    std::vector<double> levels{0.0};
    for (double c : a.cdf()) levels.push_back(c);
    for (double c : b.cdf()) levels.push_back(c);
    std::sort(levels.begin(), levels.end());
    double gap = 0.0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        if (levels[i + 1] - levels[i] < 1e-12) continue;
        const double u = 0.5 * (levels[i] + levels[i + 1]);
        gap = std::max(gap, std::abs(a.quantile(u) - b.quantile(u)));
    }
    return gap;
}

}  // namespace fskjcr
