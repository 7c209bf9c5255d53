#include "fskjcr/phase_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fskjcr/error.hpp"
#include "fskjcr/kernels.hpp"
#include "fskjcr/parallel.hpp"
#include "fskjcr/rng.hpp"

namespace fskjcr {

namespace {

std::uint64_t sequence_key(std::span<const int> freq)
{
    // FNV-1a over the digits
    std::uint64_t h = 1469598103934665603ull;
    for (int f : freq) {
        h ^= static_cast<std::uint64_t>(f) + 1;
        h *= 1099511628211ull;
    }
    return h;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Objective over the L-1 free phases with theta_0 pinned at 0.
struct Reduced {
    const SidelobeObjective& obj;
    mutable std::vector<double> theta;
    mutable std::vector<double> full_grad;

    explicit Reduced(const SidelobeObjective& o)
        : obj(o), theta(static_cast<std::size_t>(o.num_subpulses()), 0.0), full_grad(theta.size())
    {
    }

    void load(std::span<const double> x) const { std::copy(x.begin(), x.end(), theta.begin() + 1); }

    double smoothed(std::span<const double> x, double beta, std::span<double> g) const
    {
        load(x);
        const double f = obj.smoothed(theta, beta, full_grad);
        std::copy(full_grad.begin() + 1, full_grad.end(), g.begin());
        return f;
    }

    double max_value(std::span<const double> x) const
    {
        load(x);
        return obj.max_value(theta);
    }
};

struct StageOutcome {
    int iterations = 0;
    bool converged = false;
};

StageOutcome bfgs_stage(const Reduced& f, std::vector<double>& x, double beta, const OptimizerConfig& cfg)
{
    const std::size_t n = x.size();
    std::vector<double> H(n * n, 0.0), g(n), g_new(n), d(n), x_new(n), s(n), y(n), Hy(n);
    const auto reset = [&](double scale) {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) H[i * n + i] = scale;
    };
    reset(1.0);
    double fx = f.smoothed(x, beta, g);
    bool scaled = false;
    StageOutcome out;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        out.iterations = it + 1;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc -= H[i * n + j] * g[j];
            d[i] = acc;
        }
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            reset(1.0);
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            slope = -dot(g, g);
        }
        if (slope == 0.0) {
            out.converged = true;
            break;
        }
        double step = 1.0, f_new = fx;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
            f_new = f.smoothed(x_new, beta, g_new);
            if (f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // no descent left along any direction we can resolve
            out.converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double change = std::abs(fx - f_new);
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        if (change < cfg.tolerance) {
            out.converged = true;
            break;
        }
        const double ys = dot(y, s);
        if (ys > 1e-300) {
            if (!scaled) {
                reset(ys / dot(y, y));
                scaled = true;
            }
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += H[i * n + j] * y[j];
                Hy[i] = acc;
            }
            const double yHy = dot(y, Hy);
            const double rho = 1.0 / ys;
            const double c = (1.0 + rho * yHy) * rho;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    H[i * n + j] += c * s[i] * s[j] - rho * (Hy[i] * s[j] + s[i] * Hy[j]);
        }
    }
    return out;
}

// Normalized subgradient steps on the true max with a decaying step; keeps
// the best point seen.
void polish(const SidelobeObjective& obj, std::vector<double>& x, int iterations)
{
    if (iterations <= 0 || x.empty()) return;
    const std::size_t L = x.size() + 1;
    std::vector<double> theta(L, 0.0), grad(L), values;
    std::copy(x.begin(), x.end(), theta.begin() + 1);
    std::vector<double> best_x = x;
    obj.term_values(theta, values);
    double best = *std::max_element(values.begin(), values.end());
    for (int it = 0; it < iterations; ++it) {
        obj.term_values(theta, values);
        const auto active = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
        obj.term_gradient(theta, active, grad);
        double norm = 0.0;
        for (std::size_t i = 1; i < L; ++i) norm += grad[i] * grad[i];
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        const double step = 0.02 / (1.0 + it);
        for (std::size_t i = 1; i < L; ++i) theta[i] -= step * grad[i] / norm;
        obj.term_values(theta, values);
        const double v = *std::max_element(values.begin(), values.end());
        if (v < best) {
            best = v;
            std::copy(theta.begin() + 1, theta.end(), best_x.begin());
        }
    }
    x = best_x;
}

struct Candidate {
    std::vector<double> phases;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

Candidate run_restart(const SidelobeObjective& obj, std::span<const int> freq, int restart, const OptimizerConfig& cfg)
{
    const int L = obj.num_subpulses();
    Rng rng = Rng::substream(cfg.seed, {sequence_key(freq), static_cast<std::uint64_t>(restart)});
    std::vector<double> x(static_cast<std::size_t>(L - 1));
    for (double& v : x) v = rng.uniform(0.0, kTwoPi);

    const Reduced f(obj);
    Candidate c;
    for (double scale : cfg.beta_scales) {
        const StageOutcome stage = bfgs_stage(f, x, scale * L * L, cfg);
        c.iterations += stage.iterations;
        c.converged = stage.converged;
    }
    polish(obj, x, cfg.polish_iterations);

    c.phases.assign(static_cast<std::size_t>(L), 0.0);
    for (int l = 1; l < L; ++l) c.phases[l] = wrap_phase(x[l - 1]);
    c.value = obj.max_value(c.phases);
    return c;
}

}  // namespace

void OptimizerConfig::validate() const
{
    if (restarts < 1) throw DomainError("optimizer: restarts must be >= 1");
    if (max_iterations < 1) throw DomainError("optimizer: max_iterations must be >= 1");
    if (!(tolerance > 0.0)) throw DomainError("optimizer: tolerance must be > 0");
    if (beta_scales.empty()) throw DomainError("optimizer: need at least one smoothing stage");
    for (double b : beta_scales)
        if (!(b > 0.0)) throw DomainError("optimizer: smoothing temperatures must be > 0");
    if (polish_iterations < 0) throw DomainError("optimizer: polish_iterations must be >= 0");
}

SidelobeObjective::SidelobeObjective(const FskWaveform& waveform) : L_(waveform.num_subpulses())
{
    const auto freq = waveform.freq_indices();
    const int M = waveform.mod_order();
    for (int k = 1; k < L_; ++k) {
        for (int r = -(M - 1); r <= M - 1; ++r) {
            Term t{k, {}};
            for (int l = k; l < L_; ++l)
                if (freq[l - k] - freq[l] == r) t.members.push_back(l);
            if (!t.members.empty()) terms_.push_back(std::move(t));
        }
    }
}

void SidelobeObjective::lag_sums(std::span<const double> phases, std::vector<cplx>& sums) const
{
    if (phases.size() != static_cast<std::size_t>(L_))
        throw DomainError("objective: expected " + std::to_string(L_) + " phases");
    std::vector<cplx> c(phases.size()), prod(phases.size());
    for (std::size_t l = 0; l < phases.size(); ++l) c[l] = std::polar(1.0, phases[l]);
    sums.assign(terms_.size(), cplx(0.0, 0.0));
    int current_k = 0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        const Term& term = terms_[t];
        if (term.k != current_k) {
            current_k = term.k;
            kernels::lag_products(c, static_cast<std::size_t>(current_k), prod);
        }
        cplx acc(0.0, 0.0);
        for (int l : term.members) acc += prod[static_cast<std::size_t>(l - term.k)];
        sums[t] = acc;
    }
}

void SidelobeObjective::term_values(std::span<const double> phases, std::vector<double>& values) const
{
    std::vector<cplx> sums;
    lag_sums(phases, sums);
    const double inv = 1.0 / (static_cast<double>(L_) * L_);
    values.resize(sums.size());
    for (std::size_t t = 0; t < sums.size(); ++t) values[t] = std::norm(sums[t]) * inv;
}

double SidelobeObjective::max_value(std::span<const double> phases) const
{
    std::vector<double> values;
    term_values(phases, values);
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

void SidelobeObjective::term_gradient(std::span<const double> phases, std::size_t term, std::span<double> grad) const
{
    if (grad.size() != static_cast<std::size_t>(L_)) throw DomainError("objective: gradient size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    if (term >= terms_.size()) throw DomainError("objective: term index out of range");
    const Term& t = terms_[term];
    std::vector<cplx> e;
    cplx sum(0.0, 0.0);
    for (int l : t.members) {
        e.push_back(std::polar(1.0, phases[l] - phases[l - t.k]));
        sum += e.back();
    }
    const double scale = -2.0 / (static_cast<double>(L_) * L_);
    for (std::size_t i = 0; i < t.members.size(); ++i) {
        const double v = scale * (std::conj(sum) * e[i]).imag();
        grad[t.members[i]] += v;
        grad[t.members[i] - t.k] -= v;
    }
}

double SidelobeObjective::smoothed(std::span<const double> phases, double beta, std::span<double> grad) const
{
    std::fill(grad.begin(), grad.end(), 0.0);
    if (terms_.empty()) return 0.0;
    std::vector<cplx> sums;
    lag_sums(phases, sums);
    const double inv = 1.0 / (static_cast<double>(L_) * L_);
    std::vector<double> w(sums.size());
    double vmax = 0.0;
    for (std::size_t t = 0; t < sums.size(); ++t) vmax = std::max(vmax, std::norm(sums[t]) * inv);
    double wsum = 0.0;
    for (std::size_t t = 0; t < sums.size(); ++t) {
        w[t] = std::exp(beta * (std::norm(sums[t]) * inv - vmax));
        wsum += w[t];
    }
    const double scale = -2.0 * inv / wsum;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        if (w[t] == 0.0) continue;
        const Term& term = terms_[t];
        const cplx cs = std::conj(sums[t]) * (w[t] * scale);
        for (int l : term.members) {
            const double v = (cs * std::polar(1.0, phases[l] - phases[l - term.k])).imag();
            grad[l] += v;
            grad[l - term.k] -= v;
        }
    }
    return vmax + std::log(wsum) / beta;
}

double objective(const FskWaveform& waveform, std::span<const double> phases)
{
    return SidelobeObjective(waveform).max_value(phases);
}

std::vector<double> objective_gradient(const FskWaveform& waveform, std::span<const double> phases)
{
    const SidelobeObjective obj(waveform);
    std::vector<double> grad(static_cast<std::size_t>(waveform.num_subpulses()), 0.0);
    std::vector<double> values;
    obj.term_values(phases, values);
    if (values.empty()) return grad;
    const auto active = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    obj.term_gradient(phases, active, grad);
    return grad;
}

namespace {
constexpr double kTieTolerance = 1e-12;
}  // namespace

OptimizationResult optimize_phases(const FskWaveform& waveform, const OptimizerConfig& config)
{
    config.validate();
    const int L = waveform.num_subpulses();
    if (L < 2) throw DomainError("phase optimization needs L >= 2");
    const SidelobeObjective obj(waveform);
    const std::vector<double> zero(static_cast<std::size_t>(L), 0.0);
    const double pre_value = obj.max_value(zero);

    std::vector<Candidate> candidates(static_cast<std::size_t>(config.restarts));
    parallel_for(candidates.size(), config.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r)
            candidates[r] = run_restart(obj, waveform.freq_indices(), static_cast<int>(r), config);
    });

    OptimizationResult result;
    result.pre_psl = std::sqrt(pre_value);
    std::size_t winner = 0;
    bool any_converged = false;
    for (std::size_t r = 0; r < candidates.size(); ++r) {
        any_converged = any_converged || candidates[r].converged;
        if (candidates[r].value < candidates[winner].value) winner = r;
    }
    // Ties with the zero-phase start go to the optimized phases: when the PSL
    // cannot move, nonzero phases still separate the codewords.
    double best = pre_value;
    result.phases = zero;
    result.converged = any_converged;
    if (candidates[winner].value <= pre_value + kTieTolerance) {
        best = candidates[winner].value;
        result.phases = candidates[winner].phases;
        result.winning_restart = static_cast<int>(winner);
        result.iterations = candidates[winner].iterations;
        result.converged = candidates[winner].converged;
    }
    result.psl = std::sqrt(best);
    return result;
}

BatchResult batch_optimize(const WaveformSpec& spec, const std::vector<std::vector<int>>& freq_sequences,
                           const OptimizerConfig& config)
{
    config.validate();
    BatchResult batch;
    batch.rows.resize(freq_sequences.size());
    OptimizerConfig item_config = config;
    item_config.threads = 1;
    parallel_for(freq_sequences.size(), config.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const FskWaveform w(spec, freq_sequences[i]);
            BatchRow& row = batch.rows[i];
            row.waveform_index = freq_sequence_to_index_string(spec, freq_sequences[i]);
            row.freq_indices = freq_sequences[i];
            row.constant_frequency = w.is_constant_frequency();
            row.result = optimize_phases(w, item_config);
        }
    });

    const auto summarize = [&](bool skip_constant) {
        BatchMeans m;
        for (const BatchRow& row : batch.rows) {
            if (skip_constant && row.constant_frequency) continue;
            ++m.count;
            m.mean_pre += row.result.pre_psl;
            m.mean_post += row.result.psl;
        }
        if (m.count > 0) {
            m.mean_pre /= static_cast<double>(m.count);
            m.mean_post /= static_cast<double>(m.count);
        }
        m.mean_drop = m.mean_pre - m.mean_post;
        return m;
    };
    batch.all = summarize(false);
    batch.non_constant = summarize(true);
    return batch;
}

BatchResult batch_optimize(const WaveformSpec& spec, std::span<const std::uint64_t> indices,
                           const OptimizerConfig& config)
{
    std::vector<std::vector<int>> sequences;
    sequences.reserve(indices.size());
    for (std::uint64_t idx : indices) sequences.push_back(index_to_freq_sequence(spec, idx));
    return batch_optimize(spec, sequences, config);
}

PhaseTable to_phase_table(const WaveformSpec& spec, const BatchResult& batch)
{
    PhaseTable table(spec);
    for (const BatchRow& row : batch.rows) table.set(row.freq_indices, row.result.phases);
    return table;
}

}  // namespace fskjcr
