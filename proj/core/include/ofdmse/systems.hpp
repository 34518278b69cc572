#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ofdmse/grid.hpp"
#include "ofdmse/modulation.hpp"

namespace ofdmse {

enum class Role : std::uint8_t { Data, Pilot, AmplitudeData };

std::string_view to_string(Role r) noexcept;

/// Per-position sets of allowed schemes (the time-frequency modulation map).
///
/// Invariants, checked on construction:
///  - every set contains at least one order-1 scheme;
///  - Pilot positions allow order-1 schemes only;
///  - AmplitudeData positions allow ASK schemes only.
class ConstraintGrid {
public:
    ConstraintGrid(Grid<SchemeSet> allowed, Grid<Role> roles);

    int n_f() const noexcept { return allowed_.n_f(); }
    int n_t() const noexcept { return allowed_.n_t(); }
    std::size_t size() const noexcept { return allowed_.size(); }

    SchemeSet allowed(std::size_t i) const { return allowed_[i]; }
    SchemeSet allowed(Position p) const { return allowed_.at(p); }
    Role role(std::size_t i) const { return roles_[i]; }
    Role role(Position p) const { return roles_.at(p); }

    const Grid<SchemeSet>& allowed_grid() const noexcept { return allowed_; }
    const Grid<Role>& role_grid() const noexcept { return roles_; }

    friend bool operator==(const ConstraintGrid&, const ConstraintGrid&) = default;

private:
    Grid<SchemeSet> allowed_;
    Grid<Role> roles_;
};

enum class SystemKind { FB, CM, LTE, MLTE };

std::string_view to_string(SystemKind k) noexcept;
/// Accepts "fb", "cm", "lte", "mlte" in any case ("m-lte" also).
std::optional<SystemKind> parse_system(std::string_view name) noexcept;

struct SystemProfile {
    std::string name;
    ConstraintGrid grid;
};

/// Cell-specific reference signal positions of one normal-CP resource block
/// (antenna port 0): (k, l) = (0,0), (6,0), (3,4), (9,4).
std::vector<Position> lte_pilot_positions();

/// FB: full catalog everywhere. CM: PSK only. LTE: pilots silent, full
/// catalog elsewhere. MLTE: pilots become ASK data and the next subcarrier
/// up (mod n_f) in the same symbol is PSK only.
/// Throws ConfigError when the pilot pattern does not fit the grid.
SystemProfile build_profile(SystemKind kind, int n_f = 12, int n_t = 7);

/// Sum over positions of the largest bits() allowed there.
int saturation_bits(const ConstraintGrid& grid);
inline int saturation_bits(const SystemProfile& p) { return saturation_bits(p.grid); }

/// Parses a modulation-map file:
///
///     name  <identifier>            (optional)
///     grid  <n_f> <n_t>             (required, before any position)
///     <k> <l> <role> <allowed>      (one per position, each exactly once)
///
/// role is data | pilot | amplitude. allowed is a comma list of
/// FAMILY<max order> entries (e.g. `ASK8,PSK16`), `*` for the full catalog,
/// or `-` for silent only. Every listed family includes its order-1 entry.
/// Errors are ParseError carrying the offending line number.
SystemProfile read_system_profile(std::istream& in);

}  // namespace ofdmse
