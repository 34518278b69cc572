#pragma once

#include <span>

#include "ofdmse/loading.hpp"

namespace ofdmse {

/// Fraction of data-bearing subcarriers, 1 - n_pilot / n.
/// Throws DomainError unless 0 <= n_pilot <= n and n > 0.
double spectral_efficiency(long n, long n_pilot);

/// Relative spectral efficiency as a ratio of total information bits,
/// each operand summed over all trials. Throws DomainError when
/// bits_reference is not positive.
double eta_r(long long bits_system, long long bits_reference);

/// total_bits / (n_f * n_t).
double throughput_per_subcarrier(const Allocation& alloc);

struct Summary {
    double mean = 0.0;
    double ci95_half_width = 0.0;
};

/// Sample mean and 1.96 * s / sqrt(n), folded in index order.
/// Throws DomainError for fewer than two values.
Summary aggregate(std::span<const double> values);

}  // namespace ofdmse
