#include "ofdmse/metrics.hpp"

#include <cmath>

#include "ofdmse/errors.hpp"

namespace ofdmse {

double spectral_efficiency(long n, long n_pilot) {
    if (n <= 0 || n_pilot < 0 || n_pilot > n) throw DomainError("need 0 <= n_pilot <= n and n > 0");
    return 1.0 - static_cast<double>(n_pilot) / static_cast<double>(n);
}

double eta_r(long long bits_system, long long bits_reference) {
    if (bits_reference <= 0) throw DomainError("relative efficiency undefined for a zero-bit reference");
    return static_cast<double>(bits_system) / static_cast<double>(bits_reference);
}

double throughput_per_subcarrier(const Allocation& alloc) {
    return static_cast<double>(alloc.total_bits) / static_cast<double>(alloc.schemes.size());
}

Summary aggregate(std::span<const double> values) {
    if (values.size() < 2) throw DomainError("aggregate needs at least two values");
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, 1.96 * sd / std::sqrt(n)};
}

}  // namespace ofdmse
