#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ofdmse/channel.hpp"
#include "ofdmse/systems.hpp"

namespace ofdmse {

enum class Granularity { Subcarrier, Block };

std::string_view to_string(Granularity g) noexcept;
std::optional<Granularity> parse_granularity(std::string_view text) noexcept;

/// Arithmetic SNR grid in dB, inclusive of `stop` when it lies on the grid.
struct SnrRange {
    double start = 0.0;
    double step = 2.0;
    double stop = 40.0;

    std::vector<double> values() const;
};

/// Parses "START:STEP:STOP". Throws ConfigError.
SnrRange parse_snr_range(std::string_view text);

struct SweepConfig {
    std::vector<SystemKind> systems{SystemKind::FB, SystemKind::CM, SystemKind::LTE, SystemKind::MLTE};
    /// Extra system read from a modulation-map file; it defines the grid size.
    std::optional<SystemProfile> custom_profile;
    std::optional<ChannelProfile> channel;  ///< defaults to tux_profile()
    SnrRange snr_db;
    std::vector<double> p_t{1e-3};
    int trials = 1000;
    std::uint64_t seed = 1;
    int n_fft = 128;
    int n_f = 12;
    int n_t = 7;
    int start_subcarrier = 0;
    Granularity granularity = Granularity::Subcarrier;
    unsigned workers = 0;  ///< 0: one per hardware thread
    std::string out_path;
    std::string series_path;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

/// Applies the keys present in a JSON config document on top of `cfg`.
/// Keys mirror the command-line flags: systems, snr_db, p_t, trials, seed,
/// n_fft, n_f, n_t, start_subcarrier, granularity, workers, profile_file,
/// channel_file, out, series. Throws ConfigError.
void apply_config_json(SweepConfig& cfg, std::istream& json);

struct SweepPoint {
    std::string system;
    double snr_db = 0.0;
    double p_t = 0.0;
    int trials = 0;
    double mean_bits_per_subcarrier = 0.0;
    double ci95_half_width = 0.0;  ///< NaN for a single trial
    double eta_r = 0.0;            ///< NaN when the FB reference carries no bits
    long long total_bits = 0;
};

/// Paired Monte Carlo sweep. Trial t draws one channel realization from a
/// stream derived from (seed, t) and reuses it for every SNR point, BER
/// target and system, so systems are compared on identical channels. FB is
/// always evaluated as the eta_r reference. Rows are ordered by p_t, then
/// system, then SNR, and do not depend on the worker count.
std::vector<SweepPoint> run_sweep(const SweepConfig& cfg);

inline constexpr std::string_view kCsvHeader = "system,snr_db,p_t,trials,mean_bits_per_subcarrier,ci95,eta_r";

/// Header plus one row per point, numbers at 6 significant digits.
void write_csv(std::ostream& out, const std::vector<SweepPoint>& points);

/// Wide table for plotting: one row per (p_t, snr_db) with a throughput and
/// an eta_r column per system.
void write_series(std::ostream& out, const std::vector<SweepPoint>& points);

/// %.6g formatting with "nan" for NaN.
std::string format_number(double v);

}  // namespace ofdmse
