#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "ofdmse/channel.hpp"
#include "ofdmse/grid.hpp"
#include "ofdmse/modulation.hpp"
#include "ofdmse/systems.hpp"

namespace ofdmse {

/// Instantaneous BER of every catalog scheme at every position of an SNR
/// grid, evaluated once and shared by all allocators that run on the grid.
class BerTable {
public:
    explicit BerTable(const SnrGrid& snr);

    int n_f() const noexcept { return n_f_; }
    int n_t() const noexcept { return n_t_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// BER at position `pos` for catalog entry `idx`; 0 for silent entries.
    double at(std::size_t pos, std::size_t idx) const noexcept { return values_[pos][idx]; }
    double at(std::size_t pos, Scheme s) const;

private:
    int n_f_;
    int n_t_;
    std::vector<std::array<double, kCatalogSize>> values_;
};

struct Allocation {
    Grid<Scheme> schemes;
    long total_bits = 0;
    double avg_ber = 0.0;
};

/// Bit-weighted mean of instantaneous BERs over the active (order > 1)
/// positions; 0 when every position is silent.
double evaluate_avg_ber(const Grid<Scheme>& schemes, const BerTable& table);
double evaluate_avg_ber(const Grid<Scheme>& schemes, const SnrGrid& snr);

long total_bits(const Grid<Scheme>& schemes);

/// Greedy incremental loader. Starts all-silent and repeatedly commits the
/// single-position upgrade with the largest bit gain whose resulting average
/// BER stays <= p_t; ties go to the lower resulting average BER, then the
/// earlier (l, k) position, then the lower family index. Stops when no
/// upgrade is feasible, so the result is locally maximal.
///
/// Throws DomainError unless 0 < p_t < 0.5, ConfigError on shape mismatch
/// or when a position has no order-1 scheme.
Allocation greedy_allocate(const BerTable& table, const ConstraintGrid& constraints, double p_t);
Allocation greedy_allocate(const SnrGrid& snr, const ConstraintGrid& constraints, double p_t);

/// Per-block loader: one scheme for the whole grid. Positions that do not
/// allow the chosen scheme stay silent. Picks the feasible scheme with the
/// most total bits (then lower average BER, then lower family index).
Allocation block_allocate(const BerTable& table, const ConstraintGrid& constraints, double p_t);
Allocation block_allocate(const SnrGrid& snr, const ConstraintGrid& constraints, double p_t);

/// Exhaustive optimum of the bit-loading problem. Silent choices collapse to
/// one canonical scheme per position. Ties: lower average BER, then the
/// lexicographically smaller scheme grid. Throws SearchSpaceError when the
/// number of assignments exceeds `max_assignments`.
Allocation exhaustive_allocate(const SnrGrid& snr, const ConstraintGrid& constraints, double p_t,
                               std::uint64_t max_assignments = 10'000'000);

/// True when no single-position upgrade to an allowed scheme with more bits
/// keeps the average BER (fully recomputed) within p_t.
bool is_locally_maximal(const Grid<Scheme>& schemes, const BerTable& table,
                        const ConstraintGrid& constraints, double p_t);

/// An allocation problem, serializable as JSON for regression fixtures.
struct LoadingInstance {
    SnrGrid snr;
    ConstraintGrid constraints;
    double p_t;
};

void write_instance(std::ostream& out, const LoadingInstance& instance);
/// Throws ParseError (line 0 when the JSON itself is malformed) or ConfigError.
LoadingInstance read_instance(std::istream& in);

}  // namespace ofdmse
