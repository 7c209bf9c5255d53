#include "fskjcr/ambiguity.hpp"

#include <algorithm>
#include <cmath>

#include "fskjcr/error.hpp"
#include "fskjcr/kernels.hpp"
#include "fskjcr/parallel.hpp"

namespace fskjcr {

namespace {

// Below this |omega*T| the pulse CAF switches to its omega -> 0 limit.
constexpr double kOmegaEps = 1e-8;

void require_domain_or_origin(const WaveformSpec& spec, GridPoint p)
{
    if (p == GridPoint{0, 0}) return;
    if (!in_domain(spec, p))
        throw DomainError("grid point (" + std::to_string(p.k) + ", " + std::to_string(p.r) +
                          ") outside the sidelobe domain");
}

}  // namespace

bool in_domain(const WaveformSpec& spec, GridPoint p)
{
    if (p.k < 0 || p.k > spec.num_subpulses - 1) return false;
    if (std::abs(p.r) > spec.mod_order - 1) return false;
    return !(p.k == 0 && p.r == 0);
}

std::vector<GridPoint> sidelobe_domain(const WaveformSpec& spec)
{
    std::vector<GridPoint> points;
    points.reserve(static_cast<std::size_t>(spec.num_subpulses * (2 * spec.mod_order - 1) - 1));
    for (int k = 0; k < spec.num_subpulses; ++k)
        for (int r = -(spec.mod_order - 1); r <= spec.mod_order - 1; ++r)
            if (k != 0 || r != 0) points.push_back({k, r});
    return points;
}

cplx pulse_caf(double tau, double omega, double T)
{
    if (std::abs(tau) >= T) return {0.0, 0.0};
    if (std::abs(omega) * T < kOmegaEps) return {T - std::abs(tau), 0.0};
    const cplx j_omega(0.0, omega);
    if (tau < 0.0) return std::exp(cplx(0.0, omega * tau)) * (std::exp(cplx(0.0, omega * T)) - std::exp(cplx(0.0, -omega * tau))) / j_omega;
    return (std::exp(cplx(0.0, omega * T)) - std::exp(cplx(0.0, omega * tau))) / j_omega;
}

cplx complex_af(const FskWaveform& waveform, double tau, double omega)
{
    const WaveformSpec& spec = waveform.spec();
    const double T = spec.subpulse_duration;
    const int L = spec.num_subpulses;
    if (std::abs(tau) >= L * T) return {0.0, 0.0};
    const double dw = spec.omega_step();
    const auto freq = waveform.freq_indices();
    const auto theta = waveform.phases();

    cplx acc(0.0, 0.0);
    for (int l = 0; l < L; ++l) {
        const double w_l = dw * freq[l];
        for (int n = 0; n < L; ++n) {
            const double shifted = tau + (n - l) * T;
            if (std::abs(shifted) >= T) continue;
            const double w_n = dw * freq[n];
            const cplx p = pulse_caf(shifted, omega - w_n + w_l, T);
            const double rot = omega * l * T + w_n * ((n - l) * T + tau) + theta[l] - theta[n];
            acc += p * std::exp(cplx(0.0, rot));
        }
    }
    return acc / (L * T);
}

std::vector<double> zero_doppler_cut(const FskWaveform& waveform, std::span<const double> taus)
{
    std::vector<double> out;
    out.reserve(taus.size());
    for (double tau : taus) out.push_back(std::abs(complex_af(waveform, tau, 0.0)));
    return out;
}

std::vector<double> zero_delay_cut(const WaveformSpec& spec, std::span<const double> omegas)
{
    spec.validate();
    const double T = spec.subpulse_duration;
    const int L = spec.num_subpulses;
    std::vector<double> out;
    out.reserve(omegas.size());
    for (double omega : omegas) {
        cplx geometric(0.0, 0.0);
        for (int l = 0; l < L; ++l) geometric += std::exp(cplx(0.0, omega * l * T));
        out.push_back(std::abs(pulse_caf(0.0, omega, T) * geometric) / (L * T));
    }
    return out;
}

int grid_match_count(std::span<const int> freq_indices, int k, int r)
{
    int count = 0;
    for (std::size_t l = static_cast<std::size_t>(k); l < freq_indices.size(); ++l)
        if (freq_indices[l - k] - freq_indices[l] == r) ++count;
    return count;
}

int max_grid_match_count(std::span<const int> freq_indices, int mod_order)
{
    const int L = static_cast<int>(freq_indices.size());
    std::vector<int> bins(static_cast<std::size_t>(2 * mod_order - 1));
    int best = 0;
    for (int k = 1; k < L; ++k) {
        // L - k pairs at this lag; nothing left can beat the current best
        if (L - k <= best) break;
        std::fill(bins.begin(), bins.end(), 0);
        for (int l = k; l < L; ++l) ++bins[static_cast<std::size_t>(freq_indices[l - k] - freq_indices[l] + mod_order - 1)];
        best = std::max(best, *std::max_element(bins.begin(), bins.end()));
    }
    return best;
}

double grid_sidelobe(const FskWaveform& waveform, GridPoint p)
{
    const WaveformSpec& spec = waveform.spec();
    require_domain_or_origin(spec, p);
    if (p == GridPoint{0, 0}) return 1.0;
    const auto freq = waveform.freq_indices();
    const auto theta = waveform.phases();
    const int L = spec.num_subpulses;
    if (waveform.has_zero_phases()) return static_cast<double>(grid_match_count(freq, p.k, p.r)) / L;

    cplx acc(0.0, 0.0);
    for (int l = p.k; l < L; ++l)
        if (freq[l - p.k] - freq[l] == p.r) acc += std::exp(cplx(0.0, theta[l] - theta[l - p.k]));
    return std::abs(acc) / L;
}

double GridSidelobeMap::at(GridPoint p) const
{
    const auto it = std::lower_bound(points.begin(), points.end(), p);
    if (it == points.end() || *it != p) throw DomainError("grid point not in the sidelobe map");
    return values[static_cast<std::size_t>(it - points.begin())];
}

double GridSidelobeMap::psl() const
{
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

GridSidelobeMap grid_sidelobe_map(const FskWaveform& waveform)
{
    GridSidelobeMap map{waveform.spec(), sidelobe_domain(waveform.spec()), {}};
    map.values.reserve(map.points.size());
    for (const GridPoint& p : map.points) map.values.push_back(grid_sidelobe(waveform, p));
    return map;
}

double grid_psl(const FskWaveform& waveform)
{
    if (waveform.has_zero_phases())
        return static_cast<double>(max_grid_match_count(waveform.freq_indices(), waveform.mod_order())) /
               waveform.num_subpulses();
    return grid_sidelobe_map(waveform).psl();
}

AfSurface::AfSurface(WaveformSpec spec, int oversampling, bool half_plane, std::vector<double> magnitude)
    : spec_(spec),
      oversampling_(oversampling),
      half_plane_(half_plane),
      delay_max_(spec.num_subpulses * oversampling),
      doppler_max_(spec.mod_order * oversampling),
      magnitude_(std::move(magnitude))
{
    if (magnitude_.size() != stored_rows() * cols()) throw DomainError("AF surface: magnitude size mismatch");
}

std::size_t AfSurface::stored_rows() const { return static_cast<std::size_t>(delay_max_ - stored_delay_min() + 1); }

double AfSurface::tau(int i) const { return spec_.subpulse_duration * i / oversampling_; }

double AfSurface::omega(int j) const { return spec_.omega_step() * j / oversampling_; }

double AfSurface::at(int i, int j) const
{
    if (i < -delay_max_ || i > delay_max_ || j < -doppler_max_ || j > doppler_max_)
        throw DomainError("AF surface index out of range");
    if (i < stored_delay_min()) {
        i = -i;
        j = -j;
    }
    const auto row = static_cast<std::size_t>(i - stored_delay_min());
    return magnitude_[row * cols() + static_cast<std::size_t>(j + doppler_max_)];
}

AfSurface sampled_af_surface(const FskWaveform& waveform, int oversampling, bool half_plane, unsigned threads)
{
    if (oversampling < 4) throw DomainError("AF surface: oversampling must be >= 4");
    const WaveformSpec& spec = waveform.spec();
    const int L = spec.num_subpulses;
    const int os = oversampling;
    const int delay_max = L * os;
    const int doppler_max = spec.mod_order * os;
    const int row_min = half_plane ? 0 : -delay_max;
    const auto rows = static_cast<std::size_t>(delay_max - row_min + 1);
    const auto cols = static_cast<std::size_t>(2 * doppler_max + 1);
    const double unit = kTwoPi * spec.freq_step_multiple / os;
    const auto freq = waveform.freq_indices();
    const auto theta = waveform.phases();

    std::vector<double> magnitude(rows * cols);
    parallel_for(rows, threads, [&](std::size_t begin, std::size_t end) {
        kernels::AfRowTerms terms;
        for (std::size_t row = begin; row < end; ++row) {
            const int i = row_min + static_cast<int>(row);
            const double tau = static_cast<double>(i) / os;  // in units of T
            terms.clear();
            for (int l = 0; l < L; ++l) {
                for (int n = 0; n < L; ++n) {
                    const double lo = std::max<double>(l, n + tau);
                    const double hi = std::min<double>(l + 1, n + 1 + tau);
                    if (!(hi > lo)) continue;
                    const double w_n = kTwoPi * spec.freq_step_multiple * freq[n];
                    const cplx coef = std::exp(cplx(0.0, theta[l] - theta[n] + w_n * tau)) / static_cast<double>(L);
                    const std::int64_t g = static_cast<std::int64_t>(os) * spec.freq_step_multiple * (freq[l] - freq[n]) -
                                           doppler_max;
                    terms.push(coef, g, lo, hi);
                }
            }
            kernels::af_row(terms, unit, std::span<double>(magnitude.data() + row * cols, cols));
        }
    });
    return AfSurface(spec, os, half_plane, std::move(magnitude));
}

double local_maxima_psl(const AfSurface& surface)
{
    const int os = surface.oversampling();
    if (os < 8) throw DomainError("local-maxima PSL needs a surface with oversampling >= 8");
    const int dmax = surface.delay_max();
    const int wmax = surface.doppler_max();
    const auto in_mainlobe = [os](int i, int j) { return std::abs(i) < os && std::abs(j) < os; };

    double best = 0.0;
    for (int i = surface.stored_delay_min(); i <= dmax; ++i) {
        for (int j = -wmax; j <= wmax; ++j) {
            if (in_mainlobe(i, j)) continue;
            const double v = surface.at(i, j);
            if (v <= best) continue;
            bool is_peak = true;
            for (int di = -1; di <= 1 && is_peak; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ni = i + di, nj = j + dj;
                    if (ni < -dmax || ni > dmax || nj < -wmax || nj > wmax) continue;
                    if (in_mainlobe(ni, nj)) continue;
                    if (surface.at(ni, nj) > v) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak) best = v;
        }
    }
    return best;
}

}  // namespace fskjcr
