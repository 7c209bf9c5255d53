#pragma once

// Statistics of grid-point sidelobes over a uniformly drawn FSK waveform:
// binomial per-point laws, their correlations, the independent-max PSL
// approximation, exhaustive and Monte Carlo oracles, and Wasserstein-1.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fskjcr/ambiguity.hpp"
#include "fskjcr/phase_table.hpp"

namespace fskjcr {

// Finite distribution given by sorted support points and their masses. When
// lattice() is nonzero the support lies on {i / lattice} and the stored
// points are exactly i / lattice, so two distributions on the same lattice
// share bit-identical breakpoints.
class DiscreteDistribution {
public:
    static DiscreteDistribution from_pmf(std::vector<double> support, std::vector<double> pmf, int lattice = 0);
    static DiscreteDistribution from_cdf(std::vector<double> support, std::vector<double> cdf, int lattice = 0);
    // Masses on {0, 1/n, ..., 1}; `pmf` has n + 1 entries.
    static DiscreteDistribution lattice_pmf(int n, std::vector<double> pmf);
    static DiscreteDistribution lattice_cdf(int n, std::vector<double> cdf);
    // Empirical law with uniform weights; equal values are merged.
    static DiscreteDistribution empirical(std::span<const double> samples);
    // Empirical law of counts c on the lattice, value c / n.
    static DiscreteDistribution empirical_lattice(int n, std::span<const std::uint64_t> tally);

    std::span<const double> support() const { return support_; }
    std::span<const double> pmf() const { return pmf_; }
    std::vector<double> cdf() const;
    int lattice() const { return lattice_; }

    double cdf_at(double x) const;
    // Smallest support point whose CDF reaches u, for u in (0, 1].
    double quantile(double u) const;
    double mean() const;

private:
    DiscreteDistribution(std::vector<double> support, std::vector<double> pmf, int lattice);
    std::vector<double> support_;
    std::vector<double> pmf_;
    int lattice_ = 0;
};

// How the k = 0, r != 0 row of the sidelobe domain enters the statistics.
// exact: those sidelobes are identically zero (same frequency at zero lag).
// paper_formula: the binomial law with k = 0 is used at every (0, r != 0).
// paper_half_row: the binomial law is used at (0, r > 0) only, counting the
//   mirror pair (0, +-r) once.
enum class K0Mode { exact, paper_formula, paper_half_row };

const char* k0_mode_name(K0Mode mode);
K0Mode parse_k0_mode(const std::string& name);

// Bernoulli parameter (M - |r|) / M^2 of a single match.
double match_probability(int M, int r);

// Binomial(L - k, p) scaled onto {i / L}; (k, r) must be in the domain.
DiscreteDistribution sl_pmf(int L, int M, int k, int r, K0Mode mode = K0Mode::exact);

// Same law in exact rational arithmetic, entries i = 0..L.
std::vector<boost::multiprecision::cpp_rational> sl_pmf_rational(int L, int M, int k, int r,
                                                                 K0Mode mode = K0Mode::exact);

// Exhaustive tally over all M^L zero-phase waveforms of the match count at
// (k, r); entry i counts waveforms with i matches.
std::vector<std::uint64_t> exhaustive_sl_counts(int L, int M, int k, int r, std::uint64_t budget = 1u << 24);

// Correlation between the sidelobes at a and b as printed in the closed form:
// 0 for different lags, -(M-|r|) / (M^2 - (M-|r|)) for equal lags.
double sl_correlation_printed(int L, int M, GridPoint a, GridPoint b);
// Variant with a covariance numerator symmetric in r and r':
// -sqrt(p p' / ((1 - p)(1 - p'))).
double sl_correlation_symmetric(int L, int M, GridPoint a, GridPoint b);

struct CorrelationReport {
    GridPoint a;
    GridPoint b;
    double printed_formula_value = 0.0;
    double symmetric_formula_value = 0.0;
    double empirical_value = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

// Pearson correlation of the two zero-phase sidelobes over `samples`
// uniformly drawn waveforms (samples >= 10^4). a == b is allowed as a
// diagnostic and yields 1.
CorrelationReport sl_correlation_empirical(int L, int M, GridPoint a, GridPoint b, std::uint64_t samples,
                                           std::uint64_t seed, unsigned threads = 1);

// Product over the domain of per-point binomial CDFs, on {i / L}.
DiscreteDistribution approx_psl_cdf(int L, int M, K0Mode mode = K0Mode::exact);

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

// Exact grid-PSL law over all M^L waveforms in index order. With a phase
// table every waveform takes its tabulated phases (the table must be
// complete); the support is then off-lattice in general.
DiscreteDistribution exhaustive_psl_cdf(int L, int M, const PhaseTable* phases = nullptr,
                                        std::uint64_t budget = kDefaultEnumerationBudget, unsigned threads = 1);

// Chooses phases for a sampled waveform (e.g. by running the optimizer).
using PhaseProvider = std::function<std::vector<double>(const FskWaveform&)>;

// Uniformly drawn frequency sequence for sample `index` of stream `seed`.
std::vector<int> sample_freq_sequence(const WaveformSpec& spec, std::uint64_t seed, std::uint64_t index);

struct MonteCarloPslOptions {
    int L = 2;
    int M = 2;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
    PhaseProvider phases;        // empty: zero phases
    int local_oversampling = 0;  // > 0: also evaluate the local-maxima PSL
    unsigned threads = 1;
};

struct MonteCarloPsl {
    std::vector<double> grid;          // per sample, in sample order
    std::vector<double> local_maxima;  // empty unless requested
    DiscreteDistribution grid_cdf() const;
    DiscreteDistribution local_maxima_cdf() const;
    int L = 0;
    bool on_lattice = true;
};

MonteCarloPsl monte_carlo_psl(const MonteCarloPslOptions& options);

// Empirical grid-PSL law over n >= 1000 sampled waveforms.
DiscreteDistribution monte_carlo_psl_cdf(int L, int M, std::uint64_t n, std::uint64_t seed,
                                         const PhaseProvider& phases = {}, unsigned threads = 1);

// Integral of |F1 - F2| over the real line.
double wasserstein1(const DiscreteDistribution& a, const DiscreteDistribution& b);

// sup over u in (0, 1) of |F1^{-1}(u) - F2^{-1}(u)|: the largest horizontal
// distance between the two CDF graphs.
double horizontal_cdf_gap(const DiscreteDistribution& a, const DiscreteDistribution& b);

}  // namespace fskjcr
