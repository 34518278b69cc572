#include "ofdmse/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ofdmse/errors.hpp"
#include "ofdmse/loading.hpp"
#include "ofdmse/metrics.hpp"
#include "ofdmse/parallel.hpp"
#include "ofdmse/rng.hpp"

namespace ofdmse {

std::string_view to_string(Granularity g) noexcept {
    return g == Granularity::Block ? "block" : "subcarrier";
}

std::optional<Granularity> parse_granularity(std::string_view text) noexcept {
    if (text == "subcarrier") return Granularity::Subcarrier;
    if (text == "block") return Granularity::Block;
    return std::nullopt;
}

std::vector<double> SnrRange::values() const {
    std::vector<double> out;
    if (!(step > 0.0) || stop < start) return out;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

SnrRange parse_snr_range(std::string_view text) {
    double parts[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
        if (end == std::string_view::npos) throw ConfigError("SNR range must be START:STEP:STOP");
        const std::string_view field = text.substr(pos, end - pos);
        auto r = std::from_chars(field.data(), field.data() + field.size(), parts[i]);
        if (r.ec != std::errc{} || r.ptr != field.data() + field.size() || field.empty())
            throw ConfigError("bad number '" + std::string(field) + "' in SNR range");
        pos = end + 1;
    }
    SnrRange out{parts[0], parts[1], parts[2]};
    if (!(out.step > 0.0)) throw ConfigError("SNR step must be positive");
    if (out.stop < out.start) throw ConfigError("SNR stop must not be below start");
    return out;
}

void SweepConfig::validate() const {
    if (systems.empty() && !custom_profile) throw ConfigError("no systems selected");
    if (!(snr_db.step > 0.0)) throw ConfigError("SNR step must be positive");
    if (snr_db.values().empty()) throw ConfigError("SNR range is empty");
    if (p_t.empty()) throw ConfigError("no BER targets given");
    for (double p : p_t)
        if (!(p > 0.0 && p < 0.5)) throw ConfigError("BER targets must lie in (0, 0.5)");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    const int grid_f = custom_profile ? custom_profile->grid.n_f() : n_f;
    if (start_subcarrier < 0 || start_subcarrier + grid_f > n_fft)
        throw ConfigError("resource grid does not fit inside the FFT");
    const ChannelProfile ch = channel.value_or(tux_profile());
    if (n_fft <= ch.max_delay()) throw ConfigError("FFT size must exceed the largest tap delay");
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void apply_config_json(SweepConfig& cfg, std::istream& json) {
    nlohmann::json j;
    try {
        json >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const char* const known[] = {"systems", "snr_db", "p_t", "trials", "seed", "n_fft", "n_f", "n_t",
                                        "start_subcarrier", "granularity", "workers", "profile_file",
                                        "channel_file", "out", "series"};
    for (const auto& item : j.items())
        if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known))
            throw ConfigError("unknown config key '" + item.key() + "'");

    try {
        if (j.contains("systems")) {
            cfg.systems.clear();
            for (const auto& name : j["systems"].get<std::vector<std::string>>()) {
                const auto kind = parse_system(name);
                if (!kind) throw ConfigError("unknown system '" + name + "'");
                cfg.systems.push_back(*kind);
            }
        }
        if (j.contains("snr_db")) {
            const auto& s = j["snr_db"];
            if (s.is_string())
                cfg.snr_db = parse_snr_range(s.get<std::string>());
            else
                cfg.snr_db = {s.at("start").get<double>(), s.at("step").get<double>(), s.at("stop").get<double>()};
        }
        if (j.contains("p_t")) {
            const auto& p = j["p_t"];
            cfg.p_t = p.is_array() ? p.get<std::vector<double>>() : std::vector<double>{p.get<double>()};
        }
        if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("n_fft")) cfg.n_fft = j["n_fft"].get<int>();
        if (j.contains("n_f")) cfg.n_f = j["n_f"].get<int>();
        if (j.contains("n_t")) cfg.n_t = j["n_t"].get<int>();
        if (j.contains("start_subcarrier")) cfg.start_subcarrier = j["start_subcarrier"].get<int>();
        if (j.contains("workers")) cfg.workers = j["workers"].get<unsigned>();
        if (j.contains("granularity")) {
            const auto g = parse_granularity(j["granularity"].get<std::string>());
            if (!g) throw ConfigError("granularity must be subcarrier or block");
            cfg.granularity = *g;
        }
        if (j.contains("profile_file")) {
            std::istringstream in(read_file(j["profile_file"].get<std::string>()));
            cfg.custom_profile = read_system_profile(in);
        }
        if (j.contains("channel_file")) {
            std::istringstream in(read_file(j["channel_file"].get<std::string>()));
            cfg.channel = read_channel_profile(in);
        }
        if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
        if (j.contains("series")) cfg.series_path = j["series"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

std::vector<SweepPoint> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const ChannelProfile channel = cfg.channel.value_or(tux_profile());
    const int n_f = cfg.custom_profile ? cfg.custom_profile->grid.n_f() : cfg.n_f;
    const int n_t = cfg.custom_profile ? cfg.custom_profile->grid.n_t() : cfg.n_t;

    // Evaluated systems: FB first (the reference), then the requested ones.
    std::vector<SystemProfile> profiles;
    profiles.push_back(build_profile(SystemKind::FB, n_f, n_t));
    std::vector<std::size_t> reported;
    for (SystemKind kind : cfg.systems) {
        if (kind == SystemKind::FB) {
            if (std::find(reported.begin(), reported.end(), 0u) == reported.end()) reported.push_back(0);
            continue;
        }
        const auto name = to_string(kind);
        const bool seen = std::any_of(profiles.begin(), profiles.end(),
                                      [&](const SystemProfile& p) { return p.name == name; });
        if (seen) continue;
        profiles.push_back(build_profile(kind, n_f, n_t));
        reported.push_back(profiles.size() - 1);
    }
    if (cfg.custom_profile) {
        profiles.push_back(*cfg.custom_profile);
        reported.push_back(profiles.size() - 1);
    }

    const std::vector<double> snrs = cfg.snr_db.values();
    const std::size_t n_pt = cfg.p_t.size();
    const std::size_t n_snr = snrs.size();
    const std::size_t n_sys = profiles.size();
    const auto n_trials = static_cast<std::size_t>(cfg.trials);
    auto slot = [&](std::size_t pt, std::size_t snr, std::size_t sys, std::size_t trial) {
        return ((pt * n_snr + snr) * n_sys + sys) * n_trials + trial;
    };
    std::vector<long> bits(n_pt * n_snr * n_sys * n_trials, 0);

    parallel_for(n_trials, cfg.workers, [&](std::size_t trial) {
        Engine rng = make_engine(cfg.seed, {0x6368616eull, trial});
        const ChannelRealization real =
            draw_realization(channel, cfg.n_fft, n_f, n_t, cfg.start_subcarrier, rng);
        for (std::size_t si = 0; si < n_snr; ++si) {
            const BerTable table(snr_grid(real, noise_var_for_db(snrs[si])));
            for (std::size_t pi = 0; pi < n_pt; ++pi) {
                for (std::size_t y = 0; y < n_sys; ++y) {
                    const Allocation a = cfg.granularity == Granularity::Block
                                             ? block_allocate(table, profiles[y].grid, cfg.p_t[pi])
                                             : greedy_allocate(table, profiles[y].grid, cfg.p_t[pi]);
                    bits[slot(pi, si, y, trial)] = a.total_bits;
                }
            }
        }
    });

    const double positions = static_cast<double>(n_f) * static_cast<double>(n_t);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<SweepPoint> out;
    std::vector<double> per_trial(n_trials);
    for (std::size_t pi = 0; pi < n_pt; ++pi) {
        for (std::size_t y : reported) {
            for (std::size_t si = 0; si < n_snr; ++si) {
                long long sum = 0;
                long long ref = 0;
                for (std::size_t t = 0; t < n_trials; ++t) {
                    sum += bits[slot(pi, si, y, t)];
                    ref += bits[slot(pi, si, 0, t)];
                    per_trial[t] = static_cast<double>(bits[slot(pi, si, y, t)]) / positions;
                }
                SweepPoint p;
                p.system = profiles[y].name;
                p.snr_db = snrs[si];
                p.p_t = cfg.p_t[pi];
                p.trials = cfg.trials;
                p.total_bits = sum;
                if (n_trials >= 2) {
                    const Summary s = aggregate(per_trial);
                    p.mean_bits_per_subcarrier = s.mean;
                    p.ci95_half_width = s.ci95_half_width;
                } else {
                    p.mean_bits_per_subcarrier = per_trial[0];
                    p.ci95_half_width = nan;
                }
                p.eta_r = ref > 0 ? eta_r(sum, ref) : nan;
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << kCsvHeader << '\n';
    for (const SweepPoint& p : points) {
        out << p.system << ',' << format_number(p.snr_db) << ',' << format_number(p.p_t) << ',' << p.trials << ','
            << format_number(p.mean_bits_per_subcarrier) << ',' << format_number(p.ci95_half_width) << ','
            << format_number(p.eta_r) << '\n';
    }
}

void write_series(std::ostream& out, const std::vector<SweepPoint>& points) {
    std::vector<std::string> systems;
    for (const SweepPoint& p : points)
        if (std::find(systems.begin(), systems.end(), p.system) == systems.end()) systems.push_back(p.system);

    // (p_t, snr) rows in first-seen order.
    std::vector<std::pair<double, double>> keys;
    std::map<std::pair<double, double>, std::map<std::string, const SweepPoint*>> cells;
    for (const SweepPoint& p : points) {
        const auto key = std::make_pair(p.p_t, p.snr_db);
        if (!cells.contains(key)) keys.push_back(key);
        cells[key][p.system] = &p;
    }
    std::sort(keys.begin(), keys.end());

    out << "p_t,snr_db";
    for (const auto& s : systems) out << ',' << s << "_throughput," << s << "_eta_r";
    out << '\n';
    for (const auto& key : keys) {
        out << format_number(key.first) << ',' << format_number(key.second);
        for (const auto& s : systems) {
            const auto it = cells[key].find(s);
            if (it == cells[key].end())
                out << ",,";
            else
                out << ',' << format_number(it->second->mean_bits_per_subcarrier) << ','
                    << format_number(it->second->eta_r);
        }
        out << '\n';
    }
}

}  // namespace ofdmse
