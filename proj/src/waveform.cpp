#include "fskjcr/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "fskjcr/error.hpp"

namespace fskjcr {

void WaveformSpec::validate() const
{
    if (num_subpulses < 1) throw DomainError("waveform spec: L must be >= 1");
    if (mod_order < 2) throw DomainError("waveform spec: M must be >= 2");
    if (!(subpulse_duration > 0.0) || !std::isfinite(subpulse_duration))
        throw DomainError("waveform spec: T must be a positive finite duration");
    if (freq_step_multiple == 0) throw DomainError("waveform spec: frequency step multiple must be nonzero");
}

std::uint64_t WaveformSpec::waveform_count() const
{
    std::uint64_t count = 1;
    const auto m = static_cast<std::uint64_t>(mod_order);
    for (int l = 0; l < num_subpulses; ++l) {
        if (count > std::numeric_limits<std::uint64_t>::max() / m) return 0;
        count *= m;
    }
    return count;
}

WaveformSpec make_spec(int num_subpulses, int mod_order, double subpulse_duration, int freq_step_multiple)
{
    WaveformSpec spec{num_subpulses, mod_order, subpulse_duration, freq_step_multiple};
    spec.validate();
    return spec;
}

double wrap_phase(double theta)
{
    double wrapped = std::fmod(theta, kTwoPi);
    if (wrapped < 0.0) wrapped += kTwoPi;
    // fmod of a tiny negative value can round back up to exactly 2*pi
    if (wrapped >= kTwoPi) wrapped = 0.0;
    return wrapped;
}

FskWaveform::FskWaveform(WaveformSpec spec, std::vector<int> freq_indices, std::vector<double> phases)
    : spec_(spec), freq_indices_(std::move(freq_indices)), phases_(std::move(phases))
{
    spec_.validate();
    const auto L = static_cast<std::size_t>(spec_.num_subpulses);
    if (freq_indices_.size() != L)
        throw DomainError("waveform: expected " + std::to_string(L) + " frequency indices, got " +
                          std::to_string(freq_indices_.size()));
    for (int f : freq_indices_)
        if (f < 0 || f >= spec_.mod_order)
            throw DomainError("waveform: frequency index " + std::to_string(f) + " outside [0, M-1]");
    if (phases_.empty()) phases_.assign(L, 0.0);
    if (phases_.size() != L)
        throw DomainError("waveform: expected " + std::to_string(L) + " phases, got " +
                          std::to_string(phases_.size()));
    for (double& p : phases_) {
        if (!std::isfinite(p)) throw DomainError("waveform: phases must be finite");
        p = wrap_phase(p);
    }
}

bool FskWaveform::has_zero_phases() const
{
    return std::all_of(phases_.begin(), phases_.end(), [](double p) { return p == 0.0; });
}

bool FskWaveform::is_constant_frequency() const
{
    return std::adjacent_find(freq_indices_.begin(), freq_indices_.end(), std::not_equal_to<>()) ==
           freq_indices_.end();
}

FskWaveform FskWaveform::with_phases(std::vector<double> phases) const
{
    return FskWaveform(spec_, freq_indices_, std::move(phases));
}

FskWaveform FskWaveform::without_phases() const { return FskWaveform(spec_, freq_indices_); }

std::vector<int> index_to_freq_sequence(const WaveformSpec& spec, std::uint64_t index)
{
    spec.validate();
    const std::uint64_t count = spec.waveform_count();
    if (count != 0 && index >= count)
        throw DomainError("waveform index " + std::to_string(index) + " outside [0, M^L)");
    std::vector<int> digits(static_cast<std::size_t>(spec.num_subpulses));
    const auto m = static_cast<std::uint64_t>(spec.mod_order);
    for (int l = spec.num_subpulses - 1; l >= 0; --l) {
        digits[static_cast<std::size_t>(l)] = static_cast<int>(index % m);
        index /= m;
    }
    return digits;
}

namespace {

void check_digits(const WaveformSpec& spec, std::span<const int> freq_indices)
{
    spec.validate();
    if (freq_indices.size() != static_cast<std::size_t>(spec.num_subpulses))
        throw DomainError("frequency sequence length does not match L");
    for (int f : freq_indices)
        if (f < 0 || f >= spec.mod_order) throw DomainError("frequency index outside [0, M-1]");
}

}  // namespace

std::uint64_t freq_sequence_to_index(const WaveformSpec& spec, std::span<const int> freq_indices)
{
    check_digits(spec, freq_indices);
    if (spec.waveform_count() == 0)
        throw DomainError("M^L exceeds 64 bits; use the decimal-string index codec");
    std::uint64_t index = 0;
    for (int f : freq_indices) index = index * static_cast<std::uint64_t>(spec.mod_order) + static_cast<std::uint64_t>(f);
    return index;
}

std::string freq_sequence_to_index_string(const WaveformSpec& spec, std::span<const int> freq_indices)
{
    check_digits(spec, freq_indices);
    boost::multiprecision::cpp_int index = 0;
    for (int f : freq_indices) index = index * spec.mod_order + f;
    return index.str();
}

std::vector<int> index_string_to_freq_sequence(const WaveformSpec& spec, const std::string& index)
{
    spec.validate();
    if (index.empty() || !std::all_of(index.begin(), index.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw DomainError("waveform index '" + index + "' is not a nonnegative decimal integer");
    boost::multiprecision::cpp_int value(index);
    boost::multiprecision::cpp_int count = 1;
    for (int l = 0; l < spec.num_subpulses; ++l) count *= spec.mod_order;
    if (value >= count) throw DomainError("waveform index " + index + " outside [0, M^L)");
    std::vector<int> digits(static_cast<std::size_t>(spec.num_subpulses));
    for (int l = spec.num_subpulses - 1; l >= 0; --l) {
        digits[static_cast<std::size_t>(l)] = static_cast<int>(value % spec.mod_order);
        value /= spec.mod_order;
    }
    return digits;
}

FskWaveform waveform_from_index(const WaveformSpec& spec, std::uint64_t index, std::vector<double> phases)
{
    return FskWaveform(spec, index_to_freq_sequence(spec, index), std::move(phases));
}

double SampledEnvelope::energy() const
{
    double sum = 0.0;
    for (const cplx& s : samples) sum += std::norm(s);
    return sum / sample_rate;
}

double min_sample_rate(const WaveformSpec& spec) { return 2.0 * spec.mod_order * std::abs(spec.freq_step()); }

double default_sample_rate(const WaveformSpec& spec)
{
    return std::max(16.0 * std::abs(spec.freq_step()), min_sample_rate(spec));
}

SampledEnvelope sample_envelope(const FskWaveform& waveform, double sample_rate)
{
    const WaveformSpec& spec = waveform.spec();
    if (!(sample_rate >= min_sample_rate(spec) * (1.0 - 1e-12)))
        throw DomainError("sample rate below 2*M*df");
    const double T = spec.subpulse_duration;
    const auto per_pulse = static_cast<std::size_t>(std::ceil(sample_rate * T - 1e-9));
    const double rate = static_cast<double>(per_pulse) / T;
    const double amplitude = std::sqrt(1.0 / spec.duration());

    SampledEnvelope env;
    env.sample_rate = rate;
    env.samples.reserve(per_pulse * static_cast<std::size_t>(spec.num_subpulses));
    const auto freqs = waveform.freq_indices();
    const auto phases = waveform.phases();
    for (int l = 0; l < spec.num_subpulses; ++l) {
        const double omega = spec.omega_step() * freqs[static_cast<std::size_t>(l)];
        const double theta = phases[static_cast<std::size_t>(l)];
        for (std::size_t s = 0; s < per_pulse; ++s) {
            const double t = static_cast<double>(s) / rate;
            env.samples.push_back(std::polar(amplitude, omega * t + theta));
        }
    }
    return env;
}

double papr(std::span<const cplx> samples)
{
    if (samples.empty()) throw DomainError("papr: empty signal");
    double peak = 0.0;
    double total = 0.0;
    for (const cplx& s : samples) {
        const double p = std::norm(s);
        peak = std::max(peak, p);
        total += p;
    }
    if (total == 0.0) throw DomainError("papr: zero-power signal");
    return peak / (total / static_cast<double>(samples.size()));
}

}  // namespace fskjcr
