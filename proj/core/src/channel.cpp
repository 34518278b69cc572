#include "ofdmse/channel.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "line_reader.hpp"
#include "ofdmse/errors.hpp"

namespace ofdmse {

ChannelProfile::ChannelProfile(std::vector<int> delays, std::vector<double> powers)
    : delays_(std::move(delays)), powers_(std::move(powers)) {
    if (delays_.empty()) throw ConfigError("channel profile needs at least one tap");
    if (delays_.size() != powers_.size())
        throw ConfigError("channel profile delay and power lists differ in length");
    if (delays_.front() != 0) throw ConfigError("first tap delay must be 0");
    for (std::size_t i = 1; i < delays_.size(); ++i)
        if (delays_[i] <= delays_[i - 1]) throw ConfigError("tap delays must be strictly increasing");
    for (double p : powers_)
        if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("tap powers must be finite and non-negative");
    const double total = std::accumulate(powers_.begin(), powers_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("tap powers must sum to 1 (got " + std::to_string(total) + ")");
}

ChannelProfile tux_profile() {
    return ChannelProfile({0, 1, 2, 3, 4, 5, 6, 7, 8},
                          {0.269, 0.174, 0.289, 0.117, 0.023, 0.058, 0.036, 0.026, 0.008});
}

ChannelProfile read_channel_profile(std::istream& in) {
    std::vector<int> delays;
    std::vector<double> powers;
    std::size_t last_line = 0;
    detail::for_each_record(in, [&](std::size_t line, const std::vector<std::string>& tok) {
        last_line = line;
        if (tok.size() != 2) throw ParseError(line, "expected `delay power`");
        int delay = 0;
        double power = 0.0;
        const auto& d = tok[0];
        const auto& p = tok[1];
        if (auto r = std::from_chars(d.data(), d.data() + d.size(), delay);
            r.ec != std::errc{} || r.ptr != d.data() + d.size())
            throw ParseError(line, "bad delay '" + d + "'");
        if (auto r = std::from_chars(p.data(), p.data() + p.size(), power);
            r.ec != std::errc{} || r.ptr != p.data() + p.size())
            throw ParseError(line, "bad power '" + p + "'");
        if (!delays.empty() && delay <= delays.back())
            throw ParseError(line, "delays must be strictly increasing");
        if (power < 0.0) throw ParseError(line, "power must be non-negative");
        delays.push_back(delay);
        powers.push_back(power);
    });
    if (delays.empty()) throw ParseError(last_line, "no taps in channel profile");
    return ChannelProfile(std::move(delays), std::move(powers));
}

std::vector<std::complex<double>> draw_taps(const ChannelProfile& profile, Engine& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::complex<double>> taps;
    taps.reserve(profile.taps());
    for (double power : profile.powers()) {
        const double scale = std::sqrt(0.5 * power);
        const double re = normal(rng);
        const double im = normal(rng);
        taps.emplace_back(scale * re, scale * im);
    }
    return taps;
}

namespace {

void check_fft(const ChannelProfile& profile, int n_fft) {
    if (n_fft <= profile.max_delay())
        throw ConfigError("FFT size must exceed the largest tap delay");
}

// exp(-j 2 pi k d / n) with the phase reduced exactly in integers first.
std::complex<double> twiddle(long long k, long long d, long long n) {
    const long long r = (k * d) % n;
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    return std::polar(1.0, angle);
}

}  // namespace

std::complex<double> freq_response(std::span<const std::complex<double>> taps,
                                   const ChannelProfile& profile, int n_fft, int k) {
    check_fft(profile, n_fft);
    if (k < 0 || k >= n_fft) throw ConfigError("subcarrier index outside [0, n_fft)");
    if (taps.size() != profile.taps()) throw ConfigError("tap count does not match the profile");
    std::complex<double> h{0.0, 0.0};
    const auto delays = profile.delays();
    for (std::size_t l = 0; l < taps.size(); ++l) h += taps[l] * twiddle(k, delays[l], n_fft);
    return h;
}

ChannelRealization draw_realization(const ChannelProfile& profile, int n_fft, int n_f, int n_t,
                                    int k0, Engine& rng) {
    check_fft(profile, n_fft);
    if (k0 < 0 || n_f <= 0 || n_t <= 0 || k0 + n_f > n_fft)
        throw ConfigError("resource grid does not fit inside the FFT");

    // Twiddles are shared by every symbol of the block.
    const auto delays = profile.delays();
    std::vector<std::complex<double>> tw(static_cast<std::size_t>(n_f) * profile.taps());
    for (int k = 0; k < n_f; ++k)
        for (std::size_t l = 0; l < profile.taps(); ++l)
            tw[static_cast<std::size_t>(k) * profile.taps() + l] = twiddle(k0 + k, delays[l], n_fft);

    ChannelRealization out{Grid<std::complex<double>>(n_f, n_t), n_fft, k0};
    for (int sym = 0; sym < n_t; ++sym) {
        const auto taps = draw_taps(profile, rng);
        for (int k = 0; k < n_f; ++k) {
            std::complex<double> h{0.0, 0.0};
            for (std::size_t l = 0; l < taps.size(); ++l)
                h += taps[l] * tw[static_cast<std::size_t>(k) * taps.size() + l];
            out.gains.at({k, sym}) = h;
        }
    }
    return out;
}

SnrGrid snr_grid(const ChannelRealization& realization, double noise_var) {
    if (!(noise_var > 0.0)) throw DomainError("noise variance must be positive");
    const auto& g = realization.gains;
    SnrGrid out{Grid<double>(g.n_f(), g.n_t())};
    for (std::size_t i = 0; i < g.size(); ++i) out.gamma[i] = std::norm(g[i]) / noise_var;
    return out;
}

double noise_var_for_db(double snr_db) noexcept { return std::pow(10.0, -snr_db / 10.0); }

}  // namespace ofdmse
