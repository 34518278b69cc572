#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ofdmse/modulation.hpp"

namespace ofdmse {

/// Unit-average-energy constellation with reflected-Gray labels.
struct Constellation {
    std::vector<std::complex<double>> points;
    std::vector<unsigned> labels;
    int bits_per_symbol = 0;
};

/// PSK on the unit circle, square QAM with per-axis Gray labels, unipolar
/// equally spaced ASK. Throws DomainError for silent schemes.
Constellation make_constellation(Scheme s);

struct OracleConfig {
    Scheme scheme;
    double gamma = 1.0;
    std::uint64_t n_symbols = 1'000'000;
    std::uint64_t seed = 1;
};

struct OracleResult {
    double ber = 0.0;
    double ci95 = 0.0;  ///< binomial 95% half-width
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
};

/// Symbol-level Monte Carlo: uniform symbols, complex AWGN of variance
/// 1/gamma, minimum-Euclidean-distance detection, bit errors counted on the
/// Gray labels. Batches use seeds derived from (seed, batch), so the error
/// count does not depend on `workers`.
///
/// Throws DomainError for silent schemes, gamma <= 0 or n_symbols < 10^4.
OracleResult simulate_ber(const OracleConfig& cfg, unsigned workers = 1);

struct BerCheck {
    Scheme scheme;
    double gamma = 0.0;
    double analytic = 0.0;
    double empirical = 0.0;
    double ci95 = 0.0;
    std::uint64_t symbols = 0;
    double relative_error = 0.0;
    bool pass = false;
};

struct BerValidationConfig {
    /// Minimum symbols per point; low-BER points get more so that each
    /// point expects at least `min_expected_errors` bit errors.
    std::uint64_t n_symbols = 1'000'000;
    double min_expected_errors = 1000.0;
    double tolerance = 0.10;
    std::uint64_t seed = 20160901;
    unsigned workers = 0;
    /// Analytic BER levels at which each scheme is checked.
    std::vector<double> targets{0.4, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
};

/// Agreement gate between ber() and simulate_ber() for every non-silent
/// catalog scheme at the SNRs where the analytic BER hits each target.
std::vector<BerCheck> validate_ber(const BerValidationConfig& cfg);

}  // namespace ofdmse
