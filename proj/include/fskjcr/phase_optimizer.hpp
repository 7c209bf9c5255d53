#pragma once

// Min-max initial-phase design: choose theta (theta_0 = 0) to minimize the
// largest squared grid sidelobe of a fixed frequency sequence.
//
// The max is replaced by a log-sum-exp surrogate whose temperature is raised
// over a few stages; each stage runs BFGS with a backtracking line search,
// and a short subgradient pass on the true max polishes the result.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fskjcr/phase_table.hpp"
#include "fskjcr/waveform.hpp"

namespace fskjcr {

struct OptimizerConfig {
    int restarts = 10;
    int max_iterations = 500;  // per surrogate stage
    double tolerance = 1e-10;  // absolute objective change that ends a stage
    // surrogate temperatures, each multiplied by L^2
    std::vector<double> beta_scales{1e2, 1e3, 1e4};
    int polish_iterations = 200;
    std::uint64_t seed = 0;
    unsigned threads = 1;  // restarts run concurrently when > 1

    void validate() const;
};

// psl never exceeds pre_psl by more than rounding (1e-12 in squared PSL).
struct OptimizationResult {
    std::vector<double> phases;  // length L, phases[0] == 0
    double psl = 0.0;
    double pre_psl = 0.0;
    int winning_restart = -1;  // -1: every restart ended above the zero-phase start
    int iterations = 0;        // summed over the winner's stages
    bool converged = false;
};

// Squared grid sidelobes with at least one contributing pair, i.e. the terms
// of the max. Precomputed once per frequency sequence.
class SidelobeObjective {
public:
    explicit SidelobeObjective(const FskWaveform& waveform);

    int num_subpulses() const { return L_; }
    std::size_t num_terms() const { return terms_.size(); }

    // Fills values[t] = |S_t|^2 / L^2 for every term.
    void term_values(std::span<const double> phases, std::vector<double>& values) const;
    double max_value(std::span<const double> phases) const;

    // Gradient of one term with respect to all L phases.
    void term_gradient(std::span<const double> phases, std::size_t term, std::span<double> grad) const;

    // Log-sum-exp surrogate max + log(sum exp(beta (v - max))) / beta and its
    // gradient with respect to all L phases.
    double smoothed(std::span<const double> phases, double beta, std::span<double> grad) const;

private:
    struct Term {
        int k;
        std::vector<int> members;  // l with freq[l-k] - freq[l] == r
    };
    void lag_sums(std::span<const double> phases, std::vector<cplx>& sums) const;

    int L_;
    std::vector<Term> terms_;
};

// Largest squared grid sidelobe of the waveform's frequencies under `phases`.
double objective(const FskWaveform& waveform, std::span<const double> phases);

// Gradient of the active (largest, lowest index on ties) squared sidelobe.
std::vector<double> objective_gradient(const FskWaveform& waveform, std::span<const double> phases);

OptimizationResult optimize_phases(const FskWaveform& waveform, const OptimizerConfig& config);

struct BatchRow {
    std::string waveform_index;
    std::vector<int> freq_indices;
    bool constant_frequency = false;
    OptimizationResult result;
};

struct BatchMeans {
    std::size_t count = 0;
    double mean_pre = 0.0;
    double mean_post = 0.0;
    double mean_drop = 0.0;
};

struct BatchResult {
    std::vector<BatchRow> rows;
    BatchMeans all;
    BatchMeans non_constant;  // constant-frequency waveforms left out
};

BatchResult batch_optimize(const WaveformSpec& spec, const std::vector<std::vector<int>>& freq_sequences,
                           const OptimizerConfig& config);
BatchResult batch_optimize(const WaveformSpec& spec, std::span<const std::uint64_t> indices,
                           const OptimizerConfig& config);

PhaseTable to_phase_table(const WaveformSpec& spec, const BatchResult& batch);

}  // namespace fskjcr
