#pragma once

// FSK waveform families and concrete waveforms.
//
// A waveform is L rectangular sub-pulses of duration T. Sub-pulse l carries the
// tone 2*pi*freq_indices[l]*df with initial phase phases[l], where df = i/T for
// a nonzero integer i. Frequencies stay as integer indices until evaluation so
// the grid-point sidelobe closed forms can be computed exactly.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fskjcr {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct WaveformSpec {
    int num_subpulses = 1;          // L
    int mod_order = 2;              // M
    double subpulse_duration = 1.0;  // T, seconds
    int freq_step_multiple = 1;     // i, with df = i / T

    void validate() const;

    double freq_step() const { return freq_step_multiple / subpulse_duration; }
    double omega_step() const { return kTwoPi * freq_step(); }
    double duration() const { return num_subpulses * subpulse_duration; }

    // M^L, or 0 when it does not fit in 64 bits.
    std::uint64_t waveform_count() const;
    bool operator==(const WaveformSpec&) const = default;
};

// Validated constructor; throws DomainError on bad parameters.
WaveformSpec make_spec(int num_subpulses, int mod_order, double subpulse_duration = 1.0,
                       int freq_step_multiple = 1);

// Wraps an angle onto [0, 2*pi).
double wrap_phase(double theta);

class FskWaveform {
public:
    // Phases default to all zero (the pre-suppression waveform). Phases are
    // stored modulo 2*pi.
    FskWaveform(WaveformSpec spec, std::vector<int> freq_indices, std::vector<double> phases = {});

    const WaveformSpec& spec() const { return spec_; }
    std::span<const int> freq_indices() const { return freq_indices_; }
    std::span<const double> phases() const { return phases_; }
    int num_subpulses() const { return spec_.num_subpulses; }
    int mod_order() const { return spec_.mod_order; }

    bool has_zero_phases() const;
    bool is_constant_frequency() const;

    FskWaveform with_phases(std::vector<double> phases) const;
    FskWaveform without_phases() const;

private:
    WaveformSpec spec_;
    std::vector<int> freq_indices_;
    std::vector<double> phases_;
};

// Base-M digits of index, most-significant digit on sub-pulse 0.
std::vector<int> index_to_freq_sequence(const WaveformSpec& spec, std::uint64_t index);
std::uint64_t freq_sequence_to_index(const WaveformSpec& spec, std::span<const int> freq_indices);

// Same codec with decimal-string indices, valid for any L and M.
std::string freq_sequence_to_index_string(const WaveformSpec& spec, std::span<const int> freq_indices);
std::vector<int> index_string_to_freq_sequence(const WaveformSpec& spec, const std::string& index);

FskWaveform waveform_from_index(const WaveformSpec& spec, std::uint64_t index,
                                std::vector<double> phases = {});

struct SampledEnvelope {
    double sample_rate = 0.0;
    std::vector<cplx> samples;

    double energy() const;
};

// 2*M*df.
double min_sample_rate(const WaveformSpec& spec);
// 16 samples per 1/df, raised to the floor when M > 8.
double default_sample_rate(const WaveformSpec& spec);

// Piecewise single-tone samples on [0, LT) with amplitude sqrt(1/LT). The rate
// is rounded up to a whole number of samples per sub-pulse so the discrete
// energy is exactly one; the returned envelope carries the rate actually used.
SampledEnvelope sample_envelope(const FskWaveform& waveform, double sample_rate);

// Peak instantaneous power over mean power.
double papr(std::span<const cplx> samples);
inline double papr(const SampledEnvelope& envelope) { return papr(envelope.samples); }

}  // namespace fskjcr
