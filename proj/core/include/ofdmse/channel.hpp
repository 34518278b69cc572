#pragma once

#include <complex>
#include <istream>
#include <span>
#include <vector>

#include "ofdmse/grid.hpp"
#include "ofdmse/rng.hpp"

namespace ofdmse {

/// Tapped-delay-line power-delay profile. Delays are in sample periods,
/// strictly increasing from 0; powers are linear and sum to one.
class ChannelProfile {
public:
    /// Throws ConfigError if the invariants do not hold.
    ChannelProfile(std::vector<int> delays, std::vector<double> powers);

    std::span<const int> delays() const noexcept { return delays_; }
    std::span<const double> powers() const noexcept { return powers_; }
    std::size_t taps() const noexcept { return delays_.size(); }
    int max_delay() const noexcept { return delays_.back(); }

private:
    std::vector<int> delays_;
    std::vector<double> powers_;
};

/// The 9-tap typical-urban profile: delays 0..8, powers
/// {2.69, 1.74, 2.89, 1.17, 0.23, 0.58, 0.36, 0.26, 0.08} / 10.
ChannelProfile tux_profile();

/// Reads `delay power` records, one per line; '#' starts a comment.
/// Throws ParseError with the offending line, or ConfigError when the
/// records do not form a valid profile.
ChannelProfile read_channel_profile(std::istream& in);

/// One Rayleigh draw: tap l is CN(0, powers[l]), independent across taps.
std::vector<std::complex<double>> draw_taps(const ChannelProfile& profile, Engine& rng);

/// H_k = sum_l taps[l] exp(-j 2 pi k delay_l / n_fft).
std::complex<double> freq_response(std::span<const std::complex<double>> taps,
                                   const ChannelProfile& profile, int n_fft, int k);

/// Per-subcarrier complex gains for an n_f x n_t block. Column l is the
/// n_fft-point DFT (bins k0 .. k0+n_f-1) of its own independent tap draw.
struct ChannelRealization {
    Grid<std::complex<double>> gains;
    int n_fft = 0;
    int start_subcarrier = 0;
};

ChannelRealization draw_realization(const ChannelProfile& profile, int n_fft, int n_f, int n_t,
                                    int k0, Engine& rng);

/// Linear instantaneous SNR per position, gamma = |H|^2 / noise_var
/// for unit symbol energy.
struct SnrGrid {
    Grid<double> gamma;
};

/// Throws DomainError unless noise_var > 0.
SnrGrid snr_grid(const ChannelRealization& realization, double noise_var);

/// Noise variance whose mean SNR over a unit-power channel is `snr_db`.
double noise_var_for_db(double snr_db) noexcept;

}  // namespace ofdmse
