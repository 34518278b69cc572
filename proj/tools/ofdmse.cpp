// Command-line front end: `sweep` runs the paired Monte Carlo spectral
// efficiency sweep and writes CSV; `validate-ber` runs the analytic-vs-
// simulated BER agreement gate.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofdmse/ber_oracle.hpp"
#include "ofdmse/errors.hpp"
#include "ofdmse/sweep.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct SweepFlags {
    std::string config;
    std::string systems;
    std::string snr_db;
    std::string p_t;
    int trials = 0;
    std::uint64_t seed = 0;
    int n_fft = 0;
    std::string granularity;
    std::string profile_file;
    std::string channel_file;
    std::string out;
    std::string series;
    unsigned workers = 0;
};

ofdmse::SweepConfig build_config(const CLI::App& cmd, const SweepFlags& f) {
    using namespace ofdmse;
    SweepConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("cannot open config '" + f.config + "'");
        apply_config_json(cfg, in);
    }
    auto given = [&](const char* name) { return cmd.count(name) > 0; };

    if (given("--systems")) {
        cfg.systems.clear();
        for (const auto& name : split_list(f.systems)) {
            const auto kind = parse_system(name);
            if (!kind) throw ConfigError("unknown system '" + name + "' (fb, cm, lte, mlte)");
            cfg.systems.push_back(*kind);
        }
    }
    if (given("--snr-db")) cfg.snr_db = parse_snr_range(f.snr_db);
    if (given("--pt")) {
        cfg.p_t.clear();
        for (const auto& item : split_list(f.p_t)) {
            try {
                std::size_t used = 0;
                cfg.p_t.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw ConfigError("bad BER target '" + item + "'");
            }
        }
    }
    if (given("--trials")) cfg.trials = f.trials;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--nfft")) cfg.n_fft = f.n_fft;
    if (given("--workers")) cfg.workers = f.workers;
    if (given("--granularity")) {
        const auto g = parse_granularity(f.granularity);
        if (!g) throw ConfigError("granularity must be subcarrier or block");
        cfg.granularity = *g;
    }
    if (given("--profile-file")) {
        std::ifstream in(f.profile_file);
        if (!in) throw ConfigError("cannot open profile file '" + f.profile_file + "'");
        cfg.custom_profile = read_system_profile(in);
    }
    if (given("--channel-file")) {
        std::ifstream in(f.channel_file);
        if (!in) throw ConfigError("cannot open channel file '" + f.channel_file + "'");
        cfg.channel = read_channel_profile(in);
    }
    if (given("--out")) cfg.out_path = f.out;
    if (given("--series")) cfg.series_path = f.series;
    cfg.validate();
    return cfg;
}

int write_to(const std::string& path, const auto& writer) {
    if (path.empty() || path == "-") {
        writer(std::cout);
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return kExitIo;
    }
    writer(out);
    out.flush();
    if (!out) {
        std::cerr << "error: write to '" << path << "' failed\n";
        return kExitIo;
    }
    return 0;
}

int run_sweep_command(const CLI::App& cmd, const SweepFlags& flags) {
    ofdmse::SweepConfig cfg;
    try {
        cfg = build_config(cmd, flags);
    } catch (const ofdmse::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto points = ofdmse::run_sweep(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "sweep: %zu rows, %d trials, %.1f s\n", points.size(), cfg.trials, secs);

    if (int rc = write_to(cfg.out_path, [&](std::ostream& o) { ofdmse::write_csv(o, points); }); rc != 0)
        return rc;
    if (!cfg.series_path.empty())
        return write_to(cfg.series_path, [&](std::ostream& o) { ofdmse::write_series(o, points); });
    return 0;
}

int run_validate_command(std::uint64_t symbols, double min_errors, double tolerance, std::uint64_t seed,
                         unsigned workers) {
    using namespace ofdmse;
    if (symbols < 10'000) {
        std::cerr << "error: --symbols must be at least 10000\n";
        return kExitUsage;
    }
    BerValidationConfig cfg;
    cfg.n_symbols = symbols;
    cfg.min_expected_errors = min_errors;
    cfg.tolerance = tolerance;
    cfg.seed = seed;
    cfg.workers = workers;

    const auto checks = validate_ber(cfg);
    std::printf("%-6s %12s %12s %12s %10s %10s %s\n", "scheme", "snr", "analytic", "empirical", "ci95",
                "rel_err", "result");
    std::size_t failed = 0;
    for (const BerCheck& c : checks) {
        std::printf("%-6s %12.5g %12.5g %12.5g %10.3g %10.4f %s\n", to_string(c.scheme).c_str(), c.gamma,
                    c.analytic, c.empirical, c.ci95, c.relative_error, c.pass ? "pass" : "FAIL");
        if (!c.pass) ++failed;
    }
    std::printf("%zu/%zu points pass (tolerance %.3g)\n", checks.size() - failed, checks.size(), tolerance);
    return failed == 0 ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM spectral efficiency under modulation-type constraints"};
    app.require_subcommand(1);

    SweepFlags sf;
    auto* sweep = app.add_subcommand("sweep", "Paired Monte Carlo throughput / relative efficiency sweep");
    sweep->add_option("--config", sf.config, "JSON config file; flags override its values");
    sweep->add_option("--systems", sf.systems, "Comma list of fb,cm,lte,mlte");
    sweep->add_option("--snr-db", sf.snr_db, "SNR grid START:STEP:STOP in dB");
    sweep->add_option("--pt", sf.p_t, "Comma list of average BER targets");
    sweep->add_option("--trials", sf.trials, "Channel draws per SNR point");
    sweep->add_option("--seed", sf.seed, "Master seed");
    sweep->add_option("--nfft", sf.n_fft, "FFT size");
    sweep->add_option("--granularity", sf.granularity, "subcarrier or block");
    sweep->add_option("--profile-file", sf.profile_file, "Extra modulation-map file to evaluate");
    sweep->add_option("--channel-file", sf.channel_file, "Power-delay profile file (default TUx)");
    sweep->add_option("--out", sf.out, "CSV output path ('-' for stdout)");
    sweep->add_option("--series", sf.series, "Optional per-SNR wide table for plotting");
    sweep->add_option("--workers", sf.workers, "Worker threads (0 = hardware threads)");

    std::uint64_t symbols = 1'000'000;
    double tolerance = 0.10;
    double min_errors = 1000.0;
    std::uint64_t vseed = 20160901;
    unsigned vworkers = 0;
    auto* validate = app.add_subcommand("validate-ber", "Check analytic BER models against simulation");
    validate->add_option("--symbols", symbols, "Minimum symbols per point")->capture_default_str();
    validate->add_option("--min-errors", min_errors, "Raise symbols so each point expects this many bit errors")
        ->capture_default_str();
    validate->add_option("--tolerance", tolerance, "Relative error tolerance")->capture_default_str();
    validate->add_option("--seed", vseed, "Master seed")->capture_default_str();
    validate->add_option("--workers", vworkers, "Worker threads (0 = hardware threads)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (sweep->parsed()) return run_sweep_command(*sweep, sf);
    return run_validate_command(symbols, min_errors, tolerance, vseed, vworkers);
}
