#pragma once

// Ambiguity function of FSK waveforms: the closed-form complex AF, its cuts,
// exact grid-point sidelobes and a sampled surface for local-maxima search.
//
// Doppler enters as exp(+j*omega*t), i.e. the complex AF is
//     integral s(t) s*(t - tau) exp(j omega t) dt,
// which is the form the per-pulse closed form and the grid sidelobe formula
// are written in. The magnitude under the opposite sign convention is the
// mirror image in omega.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "fskjcr/waveform.hpp"

namespace fskjcr {

// Delay k*T, Doppler 2*pi*r*df.
struct GridPoint {
    int k = 0;
    int r = 0;
    auto operator<=>(const GridPoint&) const = default;
};

// k in [0, L-1], |r| <= M-1, excluding the origin.
bool in_domain(const WaveformSpec& spec, GridPoint p);

// All of the sidelobe domain, k-major then r ascending; L*(2M-1) - 1 points.
std::vector<GridPoint> sidelobe_domain(const WaveformSpec& spec);

// Complex AF of a unit-amplitude rectangular pulse on [0, T).
cplx pulse_caf(double tau, double omega, double T);

cplx complex_af(const FskWaveform& waveform, double tau, double omega);

std::vector<double> zero_doppler_cut(const FskWaveform& waveform, std::span<const double> taus);

// Independent of the frequency sequence, so only the spec is needed.
std::vector<double> zero_delay_cut(const WaveformSpec& spec, std::span<const double> omegas);

// Number of l in [k, L) with freq[l-k] - freq[l] == r.
int grid_match_count(std::span<const int> freq_indices, int k, int r);

// Largest match count over the sidelobe domain (k >= 1). The zero-phase
// grid PSL is this count divided by L.
int max_grid_match_count(std::span<const int> freq_indices, int mod_order);

// |(1/L) sum_l X_{k,r}(l) exp(j(theta_l - theta_{l-k}))|. The origin returns 1.
double grid_sidelobe(const FskWaveform& waveform, GridPoint p);

struct GridSidelobeMap {
    WaveformSpec spec;
    std::vector<GridPoint> points;  // sidelobe_domain(spec) order
    std::vector<double> values;

    double at(GridPoint p) const;
    double psl() const;
};

GridSidelobeMap grid_sidelobe_map(const FskWaveform& waveform);
double grid_psl(const FskWaveform& waveform);

// Magnitude samples on a regular delay/Doppler lattice with steps T/os and
// 2*pi*df/os. Doppler always spans |omega| <= 2*pi*M*df. In the half-plane
// form only tau in [0, LT] is stored and negative delays are served through
// A(-tau, -omega) = A(tau, omega).
class AfSurface {
public:
    AfSurface(WaveformSpec spec, int oversampling, bool half_plane, std::vector<double> magnitude);

    const WaveformSpec& spec() const { return spec_; }
    int oversampling() const { return oversampling_; }
    bool half_plane() const { return half_plane_; }

    // Signed lattice ranges: delay index in [delay_min, delay_max], Doppler
    // index in [-doppler_max, doppler_max].
    int delay_min() const { return -delay_max_; }
    int delay_max() const { return delay_max_; }
    int doppler_max() const { return doppler_max_; }
    int stored_delay_min() const { return half_plane_ ? 0 : -delay_max_; }

    double tau(int i) const;
    double omega(int j) const;
    // Any signed index in range; mirrored lookup for the unstored half.
    double at(int i, int j) const;

    std::span<const double> stored() const { return magnitude_; }
    std::size_t stored_rows() const;
    std::size_t cols() const { return static_cast<std::size_t>(2 * doppler_max_ + 1); }

private:
    WaveformSpec spec_;
    int oversampling_;
    bool half_plane_;
    int delay_max_;
    int doppler_max_;
    std::vector<double> magnitude_;  // row-major, stored rows x cols
};

AfSurface sampled_af_surface(const FskWaveform& waveform, int oversampling = 16, bool half_plane = true,
                             unsigned threads = 1);

// Largest sample that is >= each of its 8 lattice neighbours, outside the
// mainlobe cell |tau| < T and |omega| < 2*pi*df. Neighbours inside that cell
// are not compared against, so the shoulder of the mainlobe can still hold a
// sidelobe peak. Requires oversampling >= 8.
double local_maxima_psl(const AfSurface& surface);

}  // namespace fskjcr
