#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace ofdmse {

/// Modulation type. The numeric value is the type index used by the
/// modulation map (1 = ASK, 2 = PSK, 3 = QAM).
enum class Family : std::uint8_t { Ask = 1, Psk = 2, Qam = 3 };

std::string_view to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

/// A (family, order) pair. Order 1 is a silent position: zero bits.
struct Scheme {
    Family family = Family::Psk;
    int order = 1;

    bool silent() const noexcept { return order == 1; }

    friend bool operator==(const Scheme&, const Scheme&) = default;
    friend auto operator<=>(const Scheme&, const Scheme&) = default;
};

inline constexpr std::size_t kCatalogSize = 13;

/// The modulation catalog, ordered by family then order:
/// ASK {1,2,4,8}, PSK {1,2,4,8,16}, QAM {1,4,16,64}.
std::span<const Scheme, kCatalogSize> catalog() noexcept;

/// Position of `s` in catalog(), or nullopt when the pair is not in the catalog.
std::optional<std::size_t> catalog_index(Scheme s) noexcept;
bool in_catalog(Scheme s) noexcept;

/// Throws ConfigError for pairs outside the catalog.
Scheme make_scheme(Family f, int order);

/// log2(order); throws ConfigError for non-catalog pairs.
int bits(Scheme s);

/// "QAM64", "PSK2", "ASK1", ...
std::string to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view text) noexcept;

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x) noexcept;

/// Gray-coded bit error probability of `s` under coherent minimum-distance
/// detection in circularly-symmetric complex AWGN, for a unit-average-energy
/// constellation at linear SNR `gamma` (noise variance 1/gamma).
///
/// Constellations: PSK on the unit circle; square QAM; unipolar ASK with
/// levels {0, d, ..., (M-1)d}. The expressions are exact for the reflected
/// Gray labelling (ASK/QAM via per-axis PAM transition sums, PSK via
/// Craig-form sector probabilities), so they hold over the whole SNR range
/// and not only at high SNR.
///
/// Throws DomainError for silent schemes and for gamma < 0 or NaN.
double ber(Scheme s, double gamma);

/// Smallest linear SNR at which ber(s, gamma) reaches `target_ber`, found by
/// bisection to 1e-12 absolute BER. ber(s, g) <= target_ber for all g >= result.
/// Throws DomainError unless 0 < target_ber < 0.5 and s is not silent.
double min_snr_for(Scheme s, double target_ber);

/// A subset of the catalog, stored as a bitmask over catalog indices.
class SchemeSet {
public:
    constexpr SchemeSet() = default;

    static SchemeSet full() noexcept;
    static SchemeSet of_family(Family f, int max_order = 64) noexcept;
    static SchemeSet silent_only(Family f = Family::Ask) noexcept;

    void insert(Scheme s);
    bool contains(Scheme s) const noexcept;
    bool empty() const noexcept { return mask_ == 0; }
    std::size_t size() const noexcept;
    bool has_silent() const noexcept;
    bool subset_of(SchemeSet other) const noexcept { return (mask_ & ~other.mask_) == 0; }

    /// Largest bits() among members; 0 for an empty set.
    int max_bits() const noexcept;
    /// Silent member of lowest family index. Precondition: has_silent().
    Scheme canonical_silent() const;

    /// Members in catalog order.
    template <class F>
    void for_each(F&& f) const {
        const auto cat = catalog();
        for (std::size_t i = 0; i < kCatalogSize; ++i)
            if (mask_ & (1u << i)) f(cat[i]);
    }

    std::uint16_t mask() const noexcept { return mask_; }
    static SchemeSet from_mask(std::uint16_t mask) noexcept;

    SchemeSet operator|(SchemeSet o) const noexcept { return from_mask(mask_ | o.mask_); }
    SchemeSet operator&(SchemeSet o) const noexcept { return from_mask(mask_ & o.mask_); }
    friend bool operator==(const SchemeSet&, const SchemeSet&) = default;

private:
    std::uint16_t mask_ = 0;
};

std::string to_string(SchemeSet set);

namespace detail {
/// Gray L-PAM bit error probability; argument is half the level spacing in
/// units of the per-axis noise standard deviation.
double pam_ber(int levels, double half_spacing_over_sigma);
/// Exact Gray M-PSK BER from sector probabilities (M in {4, 8, 16}).
double psk_ber_sectors(int order, double gamma);
}  // namespace detail

}  // namespace ofdmse
