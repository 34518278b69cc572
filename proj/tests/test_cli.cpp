#include <doctest.h>

#include <sys/wait.h>

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// Runs the CLI through the shell, capturing stdout; stderr is discarded.
Run run(const std::string& args) {
    const std::string cmd = std::string("'") + OFDMSE_CLI_PATH + "' " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / ("ofdmse_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("sweep writes the CSV") {
        const fs::path dir = scratch_dir();
        const fs::path csv = dir / "out.csv";
        const fs::path series = dir / "series.csv";
        const Run r = run("sweep --systems fb,lte --snr-db 0:20:40 --trials 20 --workers 2 --out '" + csv.string() +
                          "' --series '" + series.string() + "'");
        CHECK(r.status == 0);
        const std::string text = slurp(csv);
        CHECK(text.rfind("system,snr_db,p_t,trials,mean_bits_per_subcarrier,ci95,eta_r\n", 0) == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') == 7);
        CHECK(text.find("\nfb,40,0.001,20,") != std::string::npos);
        CHECK(slurp(series).rfind("p_t,snr_db,fb_throughput,fb_eta_r,lte_throughput,lte_eta_r\n", 0) == 0);

        // Stdout output and flag-over-config precedence.
        const fs::path cfg = dir / "cfg.json";
        std::ofstream(cfg) << R"({"systems": ["cm"], "snr_db": "10:10:30", "trials": 500})";
        const Run piped = run("sweep --config '" + cfg.string() + "' --trials 3 --out -");
        CHECK(piped.status == 0);
        CHECK(std::count(piped.out.begin(), piped.out.end(), '\n') == 4);
        CHECK(piped.out.find("cm,30,0.001,3,") != std::string::npos);
        fs::remove_all(dir);
    }

    TEST_CASE("sweep output is byte-identical across worker counts") {
        const Run a = run("sweep --snr-db 0:8:40 --trials 12 --workers 1 --out -");
        const Run b = run("sweep --snr-db 0:8:40 --trials 12 --workers 3 --out -");
        CHECK(a.status == 0);
        CHECK(a.out == b.out);
        CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 1 + 4 * 6);
    }

    TEST_CASE("profile and channel files") {
        const Run r = run(std::string("sweep --systems fb --snr-db 30:1:30 --trials 4 --profile-file ") +
                          OFDMSE_DATA_DIR "/map_4x4.txt --channel-file " OFDMSE_DATA_DIR "/tux.txt --out -");
        CHECK(r.status == 0);
        CHECK(r.out.find("\nmap4x4,30,") != std::string::npos);
    }

    TEST_CASE("usage errors exit with status 2") {
        CHECK(run("").status == 2);
        CHECK(run("sweep --systems wifi").status == 2);
        CHECK(run("sweep --snr-db 0:0:10").status == 2);
        CHECK(run("sweep --pt 0.7").status == 2);
        CHECK(run("sweep --pt abc").status == 2);
        CHECK(run("sweep --trials 0").status == 2);
        CHECK(run("sweep --granularity symbol").status == 2);
        CHECK(run("sweep --config /nonexistent.json").status == 2);
        CHECK(run("sweep --profile-file /nonexistent.txt").status == 2);
        CHECK(run("sweep --bogus").status == 2);
        CHECK(run("validate-ber --symbols 100").status == 2);
        CHECK(run("--help").status == 0);
    }

    TEST_CASE("unwritable output exits with status 3") {
        CHECK(run("sweep --systems fb --snr-db 0:1:0 --trials 2 --out /nonexistent/dir/out.csv").status == 3);
    }

    TEST_CASE("validate-ber with zero tolerance fails") {
        const Run r = run("validate-ber --symbols 10000 --min-errors 0 --tolerance 0");
        CHECK(r.status == 1);
        CHECK(r.out.find("FAIL") != std::string::npos);
    }
}
