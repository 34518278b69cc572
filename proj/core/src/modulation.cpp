#include "ofdmse/modulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/owens_t.hpp>

#include "ofdmse/errors.hpp"

namespace ofdmse {
namespace {

constexpr std::array<Scheme, kCatalogSize> kCatalog{{
    {Family::Ask, 1}, {Family::Ask, 2}, {Family::Ask, 4}, {Family::Ask, 8},
    {Family::Psk, 1}, {Family::Psk, 2}, {Family::Psk, 4}, {Family::Psk, 8}, {Family::Psk, 16},
    {Family::Qam, 1}, {Family::Qam, 4}, {Family::Qam, 16}, {Family::Qam, 64},
}};

unsigned gray(unsigned i) noexcept { return i ^ (i >> 1); }

int log2_exact(int order) noexcept { return std::countr_zero(static_cast<unsigned>(order)); }

// Bit error probability of L-level Gray PAM with half the level spacing equal
// to `x` noise standard deviations. Levels are indexed left to right and
// labelled gray(i); every transition probability is a difference of Gaussian
// tails taken on the side that avoids cancellation.
double pam_ber_impl(int levels, double x) {
    const int k = log2_exact(levels);
    // tail[m] = Q(m x) for odd m up to 2L - 1.
    std::array<double, 16> tail{};
    for (int m = 1; m < 2 * levels; m += 2) tail[static_cast<std::size_t>(m)] = q_function(m * x);
    double errors = 0.0;
    for (int i = 0; i < levels; ++i) {
        for (int j = 0; j < levels; ++j) {
            if (i == j) continue;
            const auto dist = static_cast<std::size_t>(std::abs(j - i));
            const bool outermost = (j == 0) || (j == levels - 1);
            double p = tail[2 * dist - 1];
            if (!outermost) p -= tail[2 * dist + 1];
            errors += p * std::popcount(gray(static_cast<unsigned>(i)) ^ gray(static_cast<unsigned>(j)));
        }
    }
    return errors / (static_cast<double>(levels) * k);
}

// P(received phase > psi) for a unit PSK point at phase 0, 0 < psi < pi.
// Craig's wedge integral (1 / 2pi) int_0^{pi - psi} exp(-gamma sin^2 psi / sin^2 phi) dphi
// reduces, with t = cot phi, to Q(h) / 2 + T(h, cot psi), h = sqrt(2 gamma) sin psi,
// where T is Owen's T function.
double phase_tail(double psi, double gamma) {
    const double h = std::sqrt(2.0 * gamma) * std::sin(psi);
    const double a = std::cos(psi) / std::sin(psi);
    return 0.5 * q_function(h) + boost::math::owens_t(h, a);
}

// Mean Hamming distance between the labels of points i and i+j (mod M),
// averaged over i. Reflected Gray is not distance-invariant under rotation.
std::vector<double> psk_label_distances(int order) {
    std::vector<double> out(static_cast<std::size_t>(order), 0.0);
    for (int j = 0; j < order; ++j) {
        int sum = 0;
        for (int i = 0; i < order; ++i)
            sum += std::popcount(gray(static_cast<unsigned>(i)) ^
                                 gray(static_cast<unsigned>((i + j) % order)));
        out[static_cast<std::size_t>(j)] = static_cast<double>(sum) / order;
    }
    return out;
}

double psk_ber_sectors_impl(int order, double gamma) {
    static const std::vector<double> d4 = psk_label_distances(4);
    static const std::vector<double> d8 = psk_label_distances(8);
    static const std::vector<double> d16 = psk_label_distances(16);
    const std::vector<double>* dist = nullptr;
    switch (order) {
        case 4: dist = &d4; break;
        case 8: dist = &d8; break;
        case 16: dist = &d16; break;
        default: throw ConfigError("sector BER needs PSK order 4, 8 or 16");
    }
    const int half = order / 2;
    const double step = std::numbers::pi / order;
    // Boundary tails G(psi_j) at psi_j = (2j - 1) pi / M, j = 1 .. M/2.
    std::array<double, 9> tail{};
    for (int j = 1; j <= half; ++j) tail[static_cast<std::size_t>(j)] = phase_tail((2 * j - 1) * step, gamma);

    double errors = 0.0;
    for (int j = 1; j < half; ++j) {
        const double p = tail[static_cast<std::size_t>(j)] - tail[static_cast<std::size_t>(j + 1)];
        errors += 2.0 * std::max(p, 0.0) * (*dist)[static_cast<std::size_t>(j)];
    }
    errors += 2.0 * tail[static_cast<std::size_t>(half)] * (*dist)[static_cast<std::size_t>(half)];
    return errors / log2_exact(order);
}

void require_gamma(double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("SNR must be a non-negative number");
}

}  // namespace

namespace detail {

double pam_ber(int levels, double half_spacing_over_sigma) {
    return pam_ber_impl(levels, half_spacing_over_sigma);
}

double psk_ber_sectors(int order, double gamma) {
    require_gamma(gamma);
    return psk_ber_sectors_impl(order, gamma);
}

}  // namespace detail

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::Ask: return "ASK";
        case Family::Psk: return "PSK";
        case Family::Qam: return "QAM";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
    if (name == "ASK") return Family::Ask;
    if (name == "PSK") return Family::Psk;
    if (name == "QAM") return Family::Qam;
    return std::nullopt;
}

std::span<const Scheme, kCatalogSize> catalog() noexcept { return kCatalog; }

std::optional<std::size_t> catalog_index(Scheme s) noexcept {
    const auto it = std::find(kCatalog.begin(), kCatalog.end(), s);
    if (it == kCatalog.end()) return std::nullopt;
    return static_cast<std::size_t>(it - kCatalog.begin());
}

bool in_catalog(Scheme s) noexcept { return catalog_index(s).has_value(); }

Scheme make_scheme(Family f, int order) {
    const Scheme s{f, order};
    if (!in_catalog(s)) throw ConfigError("not a catalog scheme: " + to_string(s));
    return s;
}

int bits(Scheme s) {
    if (!in_catalog(s)) throw ConfigError("not a catalog scheme: " + to_string(s));
    return log2_exact(s.order);
}

std::string to_string(Scheme s) { return std::string(to_string(s.family)) + std::to_string(s.order); }

std::optional<Scheme> parse_scheme(std::string_view text) noexcept {
    if (text.size() < 4) return std::nullopt;
    const auto family = parse_family(text.substr(0, 3));
    if (!family) return std::nullopt;
    int order = 0;
    for (char c : text.substr(3)) {
        if (c < '0' || c > '9' || order > 1000) return std::nullopt;
        order = order * 10 + (c - '0');
    }
    const Scheme s{*family, order};
    if (!in_catalog(s)) return std::nullopt;
    return s;
}

double q_function(double x) noexcept { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double ber(Scheme s, double gamma) {
    if (!in_catalog(s)) throw ConfigError("not a catalog scheme: " + to_string(s));
    if (s.silent()) throw DomainError("silent scheme has no BER");
    require_gamma(gamma);
    if (std::isinf(gamma)) return 0.0;

    const double m = s.order;
    switch (s.family) {
        case Family::Psk:
            if (s.order == 2) return q_function(std::sqrt(2.0 * gamma));
            if (s.order == 4) return q_function(std::sqrt(gamma));
            return psk_ber_sectors_impl(s.order, gamma);
        case Family::Qam: {
            // Two independent sqrt(M)-PAM axes, each at half-spacing sqrt(3 / (2 (M - 1))).
            const int levels = static_cast<int>(std::lround(std::sqrt(m)));
            return pam_ber_impl(levels, std::sqrt(3.0 * gamma / (m - 1.0)));
        }
        case Family::Ask: {
            // Unipolar levels i * d with d^2 (M - 1)(2M - 1) / 6 = 1; only the
            // in-phase noise component (variance 1 / (2 gamma)) matters.
            const double d = std::sqrt(6.0 / ((m - 1.0) * (2.0 * m - 1.0)));
            return pam_ber_impl(s.order, 0.5 * d * std::sqrt(2.0 * gamma));
        }
    }
    return 0.5;
}

double min_snr_for(Scheme s, double target_ber) {
    if (s.silent()) throw DomainError("silent scheme has no BER");
    if (!(target_ber > 0.0 && target_ber < 0.5))
        throw DomainError("target BER must lie in (0, 0.5)");

    double lo = 0.0;
    double hi = 1.0;
    while (ber(s, hi) > target_ber) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e15) throw DomainError("target BER unreachable");
    }
    for (int iter = 0; iter < 400; ++iter) {
        if (target_ber - ber(s, hi) <= 1e-12) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (ber(s, mid) > target_ber)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

SchemeSet SchemeSet::full() noexcept { return from_mask((1u << kCatalogSize) - 1u); }

SchemeSet SchemeSet::of_family(Family f, int max_order) noexcept {
    SchemeSet out;
    for (std::size_t i = 0; i < kCatalogSize; ++i)
        if (kCatalog[i].family == f && kCatalog[i].order <= max_order)
            out.mask_ = static_cast<std::uint16_t>(out.mask_ | (1u << i));
    return out;
}

SchemeSet SchemeSet::silent_only(Family f) noexcept { return of_family(f, 1); }

SchemeSet SchemeSet::from_mask(std::uint16_t mask) noexcept {
    SchemeSet out;
    out.mask_ = static_cast<std::uint16_t>(mask & ((1u << kCatalogSize) - 1u));
    return out;
}

void SchemeSet::insert(Scheme s) {
    const auto idx = catalog_index(s);
    if (!idx) throw ConfigError("not a catalog scheme: " + to_string(s));
    mask_ = static_cast<std::uint16_t>(mask_ | (1u << *idx));
}

bool SchemeSet::contains(Scheme s) const noexcept {
    const auto idx = catalog_index(s);
    return idx && (mask_ & (1u << *idx));
}

std::size_t SchemeSet::size() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }

bool SchemeSet::has_silent() const noexcept {
    bool found = false;
    for_each([&](Scheme s) { found = found || s.silent(); });
    return found;
}

int SchemeSet::max_bits() const noexcept {
    int best = 0;
    for_each([&](Scheme s) { best = std::max(best, log2_exact(s.order)); });
    return best;
}

Scheme SchemeSet::canonical_silent() const {
    for (const Scheme& s : kCatalog)
        if (s.silent() && contains(s)) return s;
    throw ConfigError("allowed set has no order-1 scheme");
}

std::string to_string(SchemeSet set) {
    std::string out = "{";
    bool first = true;
    set.for_each([&](Scheme s) {
        if (!first) out += ',';
        out += to_string(s);
        first = false;
    });
    return out + "}";
}

}  // namespace ofdmse
