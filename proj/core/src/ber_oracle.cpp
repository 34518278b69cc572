#include "ofdmse/ber_oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ofdmse/errors.hpp"
#include "ofdmse/parallel.hpp"
#include "ofdmse/rng.hpp"

namespace ofdmse {
namespace {

unsigned gray(unsigned i) noexcept { return i ^ (i >> 1); }

constexpr std::uint64_t kBatchSymbols = 1u << 16;

std::uint64_t count_errors(const Constellation& c, double gamma, std::uint64_t n, Engine& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, c.points.size() - 1);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 / gamma));
    std::uint64_t errors = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::size_t tx = pick(rng);
        const double nr = normal(rng);
        const double ni = normal(rng);
        const std::complex<double> rx = c.points[tx] + std::complex<double>(nr, ni);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < c.points.size(); ++j) {
            const double d = std::norm(rx - c.points[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        errors += static_cast<std::uint64_t>(std::popcount(c.labels[tx] ^ c.labels[best]));
    }
    return errors;
}

}  // namespace

Constellation make_constellation(Scheme s) {
    if (!in_catalog(s) || s.silent()) throw DomainError("no constellation for " + to_string(s));
    const int m = s.order;
    Constellation c;
    c.bits_per_symbol = std::countr_zero(static_cast<unsigned>(m));
    switch (s.family) {
        case Family::Psk:
            for (int i = 0; i < m; ++i) {
                c.points.push_back(std::polar(1.0, 2.0 * std::numbers::pi * i / m));
                c.labels.push_back(gray(static_cast<unsigned>(i)));
            }
            break;
        case Family::Ask: {
            const double d = std::sqrt(6.0 / ((m - 1.0) * (2.0 * m - 1.0)));
            for (int i = 0; i < m; ++i) {
                c.points.emplace_back(d * i, 0.0);
                c.labels.push_back(gray(static_cast<unsigned>(i)));
            }
            break;
        }
        case Family::Qam: {
            const int side = static_cast<int>(std::lround(std::sqrt(m)));
            const int half_bits = c.bits_per_symbol / 2;
            double energy = 0.0;
            for (int i = 0; i < side; ++i) {
                for (int q = 0; q < side; ++q) {
                    const std::complex<double> p(2.0 * i - (side - 1), 2.0 * q - (side - 1));
                    c.points.push_back(p);
                    energy += std::norm(p);
                    c.labels.push_back((gray(static_cast<unsigned>(i)) << half_bits) | gray(static_cast<unsigned>(q)));
                }
            }
            const double scale = 1.0 / std::sqrt(energy / m);
            for (auto& p : c.points) p *= scale;
            break;
        }
    }
    return c;
}

OracleResult simulate_ber(const OracleConfig& cfg, unsigned workers) {
    if (cfg.scheme.silent()) throw DomainError("silent scheme carries no data");
    if (!(cfg.gamma > 0.0)) throw DomainError("oracle SNR must be positive");
    if (cfg.n_symbols < 10'000) throw DomainError("oracle needs at least 10^4 symbols");

    const Constellation c = make_constellation(cfg.scheme);
    const std::uint64_t batches = (cfg.n_symbols + kBatchSymbols - 1) / kBatchSymbols;
    std::vector<std::uint64_t> errors(batches, 0);
    parallel_for(batches, workers, [&](std::size_t b) {
        const std::uint64_t first = b * kBatchSymbols;
        const std::uint64_t count = std::min(kBatchSymbols, cfg.n_symbols - first);
        Engine rng = make_engine(cfg.seed, {b});
        errors[b] = count_errors(c, cfg.gamma, count, rng);
    });

    OracleResult out;
    for (std::uint64_t e : errors) out.bit_errors += e;
    out.bits = cfg.n_symbols * static_cast<std::uint64_t>(c.bits_per_symbol);
    const double n = static_cast<double>(out.bits);
    out.ber = static_cast<double>(out.bit_errors) / n;
    out.ci95 = 1.96 * std::sqrt(out.ber * (1.0 - out.ber) / n);
    return out;
}

std::vector<BerCheck> validate_ber(const BerValidationConfig& cfg) {
    if (cfg.n_symbols < 10'000) throw DomainError("validation needs at least 10^4 symbols per point");
    std::vector<BerCheck> out;
    std::uint64_t point = 0;
    for (const Scheme& s : catalog()) {
        if (s.silent()) continue;
        const int k = bits(s);
        for (double target : cfg.targets) {
            BerCheck check{s};
            check.gamma = min_snr_for(s, target);
            check.analytic = ber(s, check.gamma);
            const double wanted = std::ceil(cfg.min_expected_errors / (k * check.analytic));
            check.symbols = std::max<std::uint64_t>(cfg.n_symbols, static_cast<std::uint64_t>(wanted));
            const OracleResult r =
                simulate_ber({s, check.gamma, check.symbols, derive_seed(cfg.seed, {point++})}, cfg.workers);
            check.empirical = r.ber;
            check.ci95 = r.ci95;
            check.relative_error = std::abs(r.ber - check.analytic) / check.analytic;
            check.pass = check.relative_error <= cfg.tolerance;
            out.push_back(check);
        }
    }
    return out;
}

}  // namespace ofdmse
