#pragma once

// Communications link at the sufficient-statistic level. Each sub-pulse l
// yields M matched-correlator outputs y[m][l] = mu[m][l] + n[m][l] with
//     mu = sqrt(1/L) |h|^2 exp(j theta_l)   at m = k_l, 0 elsewhere,
//     n  ~ CN(0, |h|^2 N0 / L) i.i.d.
// SNR is per sub-pulse and averaged over fading: gamma = E|h|^2 / (L N0).

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fskjcr/phase_table.hpp"
#include "fskjcr/rng.hpp"
#include "fskjcr/waveform.hpp"

namespace fskjcr {

enum class ChannelKind { awgn, rician };

struct ChannelModel {
    ChannelKind kind = ChannelKind::awgn;
    int num_rx_antennas = 1;
    double rician_k = 1.0;  // Rician only; infinity gives the all-ones channel

    void validate() const;
};

// AWGN: all ones. Rician: sqrt(K/(K+1)) + sqrt(1/(K+1)) g, g ~ CN(0, 1) per
// antenna, so E|h|^2 = N either way.
std::vector<cplx> draw_channel(const ChannelModel& model, Rng& rng);

// N0 for the given per-sub-pulse SNR; +inf dB gives 0.
double noise_psd(int L, int num_rx_antennas, double snr_db);

struct CorrelatorBank {
    int M = 0;
    int L = 0;
    std::vector<cplx> y;  // index m * L + l
    double channel_energy = 0.0;
    double noise_psd = 0.0;

    cplx at(int m, int l) const { return y[static_cast<std::size_t>(m) * L + l]; }
    double noise_variance() const { return channel_energy * noise_psd / L; }
    double mean_amplitude() const { return std::sqrt(1.0 / L) * channel_energy; }
};

// Noise is drawn unrotated and multiplied by exp(j theta_l), which leaves its
// law unchanged but makes runs that differ only in phases share the same
// rotated noise realisation.
CorrelatorBank correlator_bank(const FskWaveform& waveform, std::span<const cplx> h, double snr_db, Rng& rng);
CorrelatorBank correlator_bank_n0(const FskWaveform& waveform, std::span<const cplx> h, double n0, Rng& rng);

// argmax_k Re y[k][l]; lowest index on ties.
int detect_coherent(const CorrelatorBank& bank, int l);
// argmax_k |y[k][l]|; lowest index on ties.
int detect_noncoherent(const CorrelatorBank& bank, int l);

// Per-symbol maximum-likelihood detection marginalizing over every codeword
// whose l-th frequency is k, using the codebook's phases.
class JointMlDetector {
public:
    explicit JointMlDetector(const PhaseTable& codebook, std::uint64_t budget_bits = 24);

    int detect(const CorrelatorBank& bank, int l) const;
    // All L symbols; codeword metrics are shared across symbols.
    std::vector<int> detect_all(const CorrelatorBank& bank) const;

private:
    std::vector<double> codeword_metrics(const CorrelatorBank& bank) const;
    int decide(std::span<const double> metrics, int l, bool hard) const;

    int L_;
    int M_;
    std::vector<int> digits_;  // codeword c, sub-pulse l at c * L + l
    std::vector<cplx> rot_;    // exp(j theta) in the same layout
};

enum class DetectorKind { coherent, noncoherent, joint_ml };

const char* detector_name(DetectorKind kind);
DetectorKind parse_detector(const std::string& name);

// Where transmitted waveforms and their phases come from.
// Without a table: uniform frequency digits, zero phases.
// With a complete table: uniform over all M^L waveforms, tabulated phases.
// With a partial table: uniform over the tabulated waveforms.
// zero_phases keeps the table's waveform pool but transmits zero phases.
struct WaveformSource {
    const PhaseTable* table = nullptr;
    bool zero_phases = false;
};

struct SerPoint {
    double snr_db = 0.0;
    std::uint64_t trials = 0;   // transmitted waveforms
    std::uint64_t symbols = 0;  // trials * L decisions
    std::uint64_t errors = 0;
    double ser = 0.0;
    double ci95 = 0.0;  // Wilson half-width
};

struct SerCurve {
    DetectorKind detector = DetectorKind::coherent;
    std::vector<SerPoint> points;
};

struct SerOptions {
    WaveformSpec spec;
    DetectorKind detector = DetectorKind::coherent;
    ChannelModel channel;
    std::vector<double> snr_db;
    std::uint64_t trials = 1000;  // waveforms per SNR point, >= 1000
    std::uint64_t seed = 0;
    WaveformSource source;
    unsigned threads = 1;
};

SerCurve simulate_ser(const SerOptions& options);

// Per-trial substream; shared by every detector so curves use common noise.
Rng trial_stream(std::uint64_t seed, std::size_t snr_index, std::uint64_t trial);

// Wilson 95% interval half-width for k successes out of n.
double wilson_half_width(std::uint64_t k, std::uint64_t n);

// SNR at which the curve crosses `target`, by linear interpolation of
// log10(SER) against SNR between the bracketing grid points.
std::optional<double> snr_at_ser(const SerCurve& curve, double target);

// snr_at_ser(a) - snr_at_ser(b): positive when a needs more SNR.
std::optional<double> snr_gap_db(const SerCurve& a, const SerCurve& b, double target);

}  // namespace fskjcr
