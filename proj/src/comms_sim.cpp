#include "fskjcr/comms_sim.hpp"

#include <algorithm>
#include <limits>

#include "fskjcr/error.hpp"
#include "fskjcr/parallel.hpp"

namespace fskjcr {

namespace {

void fill_bank(std::span<const int> freq, std::span<const double> phases, std::span<const cplx> h, double n0, Rng& rng,
               int M, CorrelatorBank& bank)
{
    const int L = static_cast<int>(freq.size());
    double energy = 0.0;
    for (const cplx& g : h) energy += std::norm(g);
    bank.M = M;
    bank.L = L;
    bank.channel_energy = energy;
    bank.noise_psd = n0;
    bank.y.assign(static_cast<std::size_t>(M) * L, cplx(0.0, 0.0));
    const double amplitude = std::sqrt(1.0 / L) * energy;
    const double variance = energy * n0 / L;
    for (int l = 0; l < L; ++l) {
        const cplx rot = phases.empty() ? cplx(1.0, 0.0) : std::polar(1.0, phases[l]);
        for (int m = 0; m < M; ++m) {
            cplx v = variance > 0.0 ? rng.complex_normal(variance) : cplx(0.0, 0.0);
            if (m == freq[l]) v += amplitude;
            bank.y[static_cast<std::size_t>(m) * L + l] = rot * v;
        }
    }
}

}  // namespace

void ChannelModel::validate() const
{
    if (num_rx_antennas < 1) throw DomainError("channel: need at least one receive antenna");
    if (kind == ChannelKind::rician && !(rician_k >= 0.0)) throw DomainError("channel: Rician K must be >= 0");
}

std::vector<cplx> draw_channel(const ChannelModel& model, Rng& rng)
{
    model.validate();
    std::vector<cplx> h(static_cast<std::size_t>(model.num_rx_antennas), cplx(1.0, 0.0));
    if (model.kind == ChannelKind::awgn || std::isinf(model.rician_k)) return h;
    const double los = std::sqrt(model.rician_k / (model.rician_k + 1.0));
    const double scatter = std::sqrt(1.0 / (model.rician_k + 1.0));
    for (cplx& g : h) g = los + scatter * rng.complex_normal(1.0);
    return h;
}

double noise_psd(int L, int num_rx_antennas, double snr_db)
{
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    const double gamma = std::pow(10.0, snr_db / 10.0);
    return static_cast<double>(num_rx_antennas) / (L * gamma);
}

CorrelatorBank correlator_bank(const FskWaveform& waveform, std::span<const cplx> h, double snr_db, Rng& rng)
{
    return correlator_bank_n0(waveform, h, noise_psd(waveform.num_subpulses(), static_cast<int>(h.size()), snr_db), rng);
}

CorrelatorBank correlator_bank_n0(const FskWaveform& waveform, std::span<const cplx> h, double n0, Rng& rng)
{
    if (h.empty()) throw DomainError("correlator bank: empty channel vector");
    if (!(n0 >= 0.0)) throw DomainError("correlator bank: noise PSD must be >= 0");
    CorrelatorBank bank;
    fill_bank(waveform.freq_indices(), waveform.phases(), h, n0, rng, waveform.mod_order(), bank);
    return bank;
}

int detect_coherent(const CorrelatorBank& bank, int l)
{
    int best = 0;
    for (int k = 1; k < bank.M; ++k)
        if (bank.at(k, l).real() > bank.at(best, l).real()) best = k;
    return best;
}

int detect_noncoherent(const CorrelatorBank& bank, int l)
{
    int best = 0;
    double best_mag = std::abs(bank.at(0, l));
    for (int k = 1; k < bank.M; ++k) {
        const double mag = std::abs(bank.at(k, l));
        if (mag > best_mag) {
            best = k;
            best_mag = mag;
        }
    }
    return best;
}

JointMlDetector::JointMlDetector(const PhaseTable& codebook, std::uint64_t budget_bits)
    : L_(codebook.spec().num_subpulses), M_(codebook.spec().mod_order)
{
    const std::uint64_t count = codebook.spec().waveform_count();
    if (count == 0 || std::log2(static_cast<double>(count)) > static_cast<double>(budget_bits) + 1e-9)
        throw BudgetExceeded("joint ML detection over M^L codewords exceeds the " + std::to_string(budget_bits) +
                             "-bit budget; use the non-coherent detector");
    if (!codebook.complete()) throw DomainError("joint ML detection needs phases for all M^L waveforms");
    const auto words = codebook.waveforms();
    digits_.reserve(words.size() * L_);
    rot_.reserve(words.size() * L_);
    for (const FskWaveform& w : words)
        for (int l = 0; l < L_; ++l) {
            digits_.push_back(w.freq_indices()[l]);
            rot_.push_back(std::polar(1.0, w.phases()[l]));
        }
}

std::vector<double> JointMlDetector::codeword_metrics(const CorrelatorBank& bank) const
{
    if (bank.L != L_ || bank.M != M_) throw DomainError("joint ML: bank shape does not match the codebook");
    const std::size_t words = digits_.size() / L_;
    const double var = bank.noise_variance();
    // log-likelihood up to a common constant: 2 Re(conj(mu) y) / var, since
    // every codeword has the same |mu|^2
    const double scale = var > 0.0 ? 2.0 * bank.mean_amplitude() / var : 1.0;
    std::vector<double> metrics(words);
    for (std::size_t c = 0; c < words; ++c) {
        double acc = 0.0;
        for (int l = 0; l < L_; ++l) {
            const std::size_t at = c * L_ + l;
            acc += (std::conj(rot_[at]) * bank.at(digits_[at], l)).real();
        }
        metrics[c] = scale * acc;
    }
    return metrics;
}

int JointMlDetector::decide(std::span<const double> metrics, int l, bool hard) const
{
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> peak(static_cast<std::size_t>(M_), ninf), sum(static_cast<std::size_t>(M_), 0.0);
    for (std::size_t c = 0; c < metrics.size(); ++c) {
        const int k = digits_[c * L_ + l];
        peak[k] = std::max(peak[k], metrics[c]);
    }
    if (!hard) {
        for (std::size_t c = 0; c < metrics.size(); ++c) {
            const int k = digits_[c * L_ + l];
            sum[k] += std::exp(metrics[c] - peak[k]);
        }
    }
    int best = 0;
    double best_score = ninf;
    for (int k = 0; k < M_; ++k) {
        const double score = hard ? peak[k] : peak[k] + std::log(sum[k]);
        if (score > best_score) {
            best = k;
            best_score = score;
        }
    }
    return best;
}

int JointMlDetector::detect(const CorrelatorBank& bank, int l) const
{
    return decide(codeword_metrics(bank), l, bank.noise_variance() == 0.0);
}

std::vector<int> JointMlDetector::detect_all(const CorrelatorBank& bank) const
{
    const auto metrics = codeword_metrics(bank);
    const bool hard = bank.noise_variance() == 0.0;
    std::vector<int> out(static_cast<std::size_t>(L_));
    for (int l = 0; l < L_; ++l) out[l] = decide(metrics, l, hard);
    return out;
}

const char* detector_name(DetectorKind kind)
{
    switch (kind) {
    case DetectorKind::coherent:
        return "coherent";
    case DetectorKind::noncoherent:
        return "noncoherent";
    case DetectorKind::joint_ml:
        return "joint-ml";
    }
    return "coherent";
}

DetectorKind parse_detector(const std::string& name)
{
    if (name == "coherent") return DetectorKind::coherent;
    if (name == "noncoherent" || name == "non-coherent") return DetectorKind::noncoherent;
    if (name == "joint-ml" || name == "joint_ml") return DetectorKind::joint_ml;
    throw DomainError("unknown detector '" + name + "' (expected coherent, noncoherent or joint-ml)");
}

Rng trial_stream(std::uint64_t seed, std::size_t snr_index, std::uint64_t trial)
{
    return Rng::substream(seed, {static_cast<std::uint64_t>(snr_index), trial});
}

double wilson_half_width(std::uint64_t k, std::uint64_t n)
{
    if (n == 0) return 0.0;
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    return z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / (1.0 + z * z / nn);
}

SerCurve simulate_ser(const SerOptions& options)
{
    const WaveformSpec& spec = options.spec;
    spec.validate();
    options.channel.validate();
    if (options.trials < 1000) throw DomainError("SER simulation needs at least 1000 trials per SNR point");
    const int L = spec.num_subpulses;
    const int M = spec.mod_order;

    const PhaseTable* table = options.source.table;
    if (table != nullptr && !(table->spec().num_subpulses == L && table->spec().mod_order == M))
        throw DomainError("phase table belongs to a different waveform family");
    if (table != nullptr && table->empty()) throw DomainError("phase table is empty");
    const bool pooled = table != nullptr && !table->complete();
    std::vector<FskWaveform> pool;
    if (pooled) pool = table->waveforms();
    // complete tables are indexed directly by waveform index
    std::vector<std::vector<double>> by_index;
    if (table != nullptr && !pooled) {
        by_index.resize(spec.waveform_count());
        for (const auto& [index, phases] : table->entries())
            by_index[freq_sequence_to_index(spec, index_string_to_freq_sequence(spec, index))] = phases;
    }
    const bool use_phases = table != nullptr && !options.source.zero_phases;

    std::optional<JointMlDetector> joint;
    if (options.detector == DetectorKind::joint_ml) {
        if (table == nullptr || pooled) throw DomainError("joint ML detection needs a complete phase table");
        joint.emplace(*table);
    }
    if (options.detector == DetectorKind::coherent && use_phases)
        throw DomainError("the coherent detector assumes zero phases; pass zero_phases or no table");

    SerCurve curve;
    curve.detector = options.detector;
    const unsigned workers = resolve_threads(options.threads);
    for (std::size_t si = 0; si < options.snr_db.size(); ++si) {
        const double snr = options.snr_db[si];
        const double n0 = noise_psd(L, options.channel.num_rx_antennas, snr);
        std::vector<std::uint64_t> errors(workers, 0);
        const std::uint64_t chunk = (options.trials + workers - 1) / workers;
        parallel_for(workers, workers, [&](std::size_t wb, std::size_t we) {
            CorrelatorBank bank;
            std::vector<int> freq(static_cast<std::size_t>(L));
            const std::vector<double> zero(static_cast<std::size_t>(L), 0.0);
            for (std::size_t w = wb; w < we; ++w) {
                const std::uint64_t begin = w * chunk;
                const std::uint64_t end = std::min<std::uint64_t>(options.trials, begin + chunk);
                for (std::uint64_t t = begin; t < end; ++t) {
                    Rng rng = trial_stream(options.seed, si, t);
                    const auto h = draw_channel(options.channel, rng);
                    std::span<const double> phases = zero;
                    if (pooled) {
                        const FskWaveform& pick = pool[rng.uniform_index(pool.size())];
                        std::copy(pick.freq_indices().begin(), pick.freq_indices().end(), freq.begin());
                        if (use_phases) phases = pick.phases();
                    } else {
                        for (int& f : freq) f = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(M)));
                        if (use_phases) phases = by_index[freq_sequence_to_index(spec, freq)];
                    }
                    fill_bank(freq, phases, h, n0, rng, M, bank);
                    std::uint64_t errs = 0;
                    if (joint) {
                        const auto decided = joint->detect_all(bank);
                        for (int l = 0; l < L; ++l) errs += decided[l] != freq[l];
                    } else if (options.detector == DetectorKind::coherent) {
                        for (int l = 0; l < L; ++l) errs += detect_coherent(bank, l) != freq[l];
                    } else {
                        for (int l = 0; l < L; ++l) errs += detect_noncoherent(bank, l) != freq[l];
                    }
                    errors[w] += errs;
                }
            }
        });
        SerPoint p;
        p.snr_db = snr;
        p.trials = options.trials;
        p.symbols = options.trials * static_cast<std::uint64_t>(L);
        for (std::uint64_t e : errors) p.errors += e;
        p.ser = static_cast<double>(p.errors) / static_cast<double>(p.symbols);
        p.ci95 = wilson_half_width(p.errors, p.symbols);
        curve.points.push_back(p);
    }
    return curve;
}

std::optional<double> snr_at_ser(const SerCurve& curve, double target)
{
    auto pts = curve.points;
    std::sort(pts.begin(), pts.end(), [](const SerPoint& a, const SerPoint& b) { return a.snr_db < b.snr_db; });
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const SerPoint& a = pts[i];
        const SerPoint& b = pts[i + 1];
        if (a.ser >= target && b.ser < target) {
            if (a.ser == target) return a.snr_db;
            if (b.ser <= 0.0) return std::nullopt;
            const double la = std::log10(a.ser), lb = std::log10(b.ser), lt = std::log10(target);
            return a.snr_db + (lt - la) / (lb - la) * (b.snr_db - a.snr_db);
        }
    }
    return std::nullopt;
}

std::optional<double> snr_gap_db(const SerCurve& a, const SerCurve& b, double target)
{
    const auto sa = snr_at_ser(a, target);
    const auto sb = snr_at_ser(b, target);
    if (!sa || !sb) return std::nullopt;
    return *sa - *sb;
}

}  // namespace fskjcr
