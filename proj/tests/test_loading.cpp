#include <doctest.h>

#include <sstream>

#include "ofdmse/errors.hpp"
#include "ofdmse/loading.hpp"
#include "ofdmse/metrics.hpp"
#include "support.hpp"

using namespace ofdmse;
using ofdmse::testing::random_constraints;
using ofdmse::testing::tux_snr;
using ofdmse::testing::uniform_constraints;

namespace {

SnrGrid constant_snr(int n_f, int n_t, double gamma) { return {Grid<double>(n_f, n_t, gamma)}; }

// Direct bit-weighted mean, written independently of the library's sums.
double reference_avg_ber(const Grid<Scheme>& schemes, const SnrGrid& snr) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        if (schemes[i].silent()) continue;
        const double b = std::log2(schemes[i].order);
        num += b * ber(schemes[i], snr.gamma[i]);
        den += b;
    }
    return den == 0.0 ? 0.0 : num / den;
}

void check_valid(const Allocation& a, const SnrGrid& snr, const ConstraintGrid& c, double p_t) {
    long b = 0;
    for (std::size_t i = 0; i < a.schemes.size(); ++i) {
        CHECK(c.allowed(i).contains(a.schemes[i]));
        b += bits(a.schemes[i]);
    }
    CHECK(a.total_bits == b);
    CHECK(a.avg_ber <= p_t);
    const double ref = reference_avg_ber(a.schemes, snr);
    CHECK(std::abs(a.avg_ber - ref) <= 1e-12 * std::max(ref, 1e-300));
}

}  // namespace

TEST_SUITE("loading") {
    TEST_CASE("average BER examples") {
        const SnrGrid snr{Grid<double>(2, 1, 1.0)};
        Grid<Scheme> g(2, 1, Scheme{Family::Psk, 1});
        CHECK(evaluate_avg_ber(g, snr) == 0.0);
        CHECK(total_bits(g) == 0);

        g[0] = {Family::Psk, 2};
        CHECK(evaluate_avg_ber(g, snr) == doctest::Approx(0.0786496035251425653).epsilon(1e-12));

        SnrGrid two{Grid<double>(2, 1)};
        two.gamma[0] = 0.7;
        two.gamma[1] = 3.0;
        g[1] = {Family::Psk, 2};
        const double p1 = ber({Family::Psk, 2}, 0.7);
        const double p2 = ber({Family::Psk, 2}, 3.0);
        CHECK(evaluate_avg_ber(g, two) == doctest::Approx((p1 + p2) / 2).epsilon(1e-14));

        g[1] = {Family::Qam, 16};
        const double q2 = ber({Family::Qam, 16}, 3.0);
        CHECK(evaluate_avg_ber(g, two) == doctest::Approx((p1 + 4 * q2) / 5).epsilon(1e-14));
        CHECK(total_bits(g) == 5);
        CHECK_THROWS_AS(evaluate_avg_ber(Grid<Scheme>(1, 1, Scheme{Family::Psk, 2}), two), ConfigError);
    }

    TEST_CASE("BER table") {
        Engine rng = make_engine(1, {});
        const SnrGrid snr = tux_snr(3, 2, 10.0, rng);
        const BerTable t(snr);
        CHECK(t.size() == 6);
        for (std::size_t v = 0; v < t.size(); ++v)
            for (std::size_t i = 0; i < kCatalogSize; ++i) {
                const Scheme s = catalog()[i];
                CHECK(t.at(v, i) == (s.silent() ? 0.0 : ber(s, snr.gamma[v])));
            }
        CHECK_THROWS_AS(t.at(0, Scheme{Family::Qam, 8}), ConfigError);
    }

    TEST_CASE("greedy saturates at very high SNR and is silent at zero SNR") {
        const auto fb = build_profile(SystemKind::FB);
        const auto hi = greedy_allocate(constant_snr(12, 7, 1e6), fb.grid, 1e-3);
        CHECK(hi.total_bits == 504);
        for (const Scheme& s : hi.schemes.cells()) CHECK(s == Scheme{Family::Qam, 64});
        CHECK(throughput_per_subcarrier(hi) == 6.0);

        const auto zero = greedy_allocate(constant_snr(12, 7, 0.0), fb.grid, 1e-3);
        CHECK(zero.total_bits == 0);
        CHECK(zero.avg_ber == 0.0);
        CHECK(throughput_per_subcarrier(zero) == 0.0);
        for (const Scheme& s : zero.schemes.cells()) CHECK(s == fb.grid.allowed(std::size_t{0}).canonical_silent());

        const auto lte = greedy_allocate(constant_snr(12, 7, 1e6), build_profile(SystemKind::LTE).grid, 1e-3);
        CHECK(lte.total_bits == 480);
        CHECK(throughput_per_subcarrier(lte) == doctest::Approx(480.0 / 84.0));
        const auto mlte = greedy_allocate(constant_snr(12, 7, 1e6), build_profile(SystemKind::MLTE).grid, 1e-3);
        CHECK(mlte.total_bits == 484);
    }

    TEST_CASE("greedy argument errors") {
        const auto c = uniform_constraints(2, 2);
        const SnrGrid snr = constant_snr(2, 2, 10.0);
        CHECK_THROWS_AS(greedy_allocate(snr, c, 0.0), DomainError);
        CHECK_THROWS_AS(greedy_allocate(snr, c, 0.5), DomainError);
        CHECK_THROWS_AS(greedy_allocate(constant_snr(3, 2, 10.0), c, 1e-3), ConfigError);
        CHECK_THROWS_AS(exhaustive_allocate(snr, c, -1.0), DomainError);
        CHECK_THROWS_AS(block_allocate(snr, c, 0.7), DomainError);
    }

    TEST_CASE("single position: BPSK chosen when feasible; greedy matches the optimum") {
        Grid<SchemeSet> allowed(1, 1, SchemeSet::of_family(Family::Psk, 2));
        const ConstraintGrid c(allowed, Grid<Role>(1, 1, Role::Data));
        const double g = min_snr_for({Family::Psk, 2}, 1e-3) * 1.1;
        const auto ex = exhaustive_allocate(constant_snr(1, 1, g), c, 1e-3);
        CHECK(ex.total_bits == 1);
        CHECK(ex.schemes[0] == Scheme{Family::Psk, 2});

        Engine rng = make_engine(77, {});
        std::uniform_real_distribution<double> db(-5.0, 45.0);
        for (int i = 0; i < 200; ++i) {
            const SnrGrid snr = constant_snr(1, 1, std::pow(10.0, db(rng) / 10.0));
            const auto rc = random_constraints(1, 1, rng);
            for (double p_t : {1e-2, 1e-3}) {
                const auto gr = greedy_allocate(snr, rc, p_t);
                const auto opt = exhaustive_allocate(snr, rc, p_t);
                CHECK(gr.total_bits == opt.total_bits);
                CHECK(gr.avg_ber == opt.avg_ber);
            }
        }
    }

    TEST_CASE("greedy versus exhaustive on random 2x2 instances") {
        Engine rng = make_engine(2024, {});
        std::uniform_real_distribution<double> db(0.0, 40.0);
        long gap = 0;
        int instances = 0;
        for (int i = 0; i < 60; ++i) {
            const SnrGrid snr = tux_snr(2, 2, db(rng), rng);
            const ConstraintGrid c = (i % 2 == 0) ? uniform_constraints(2, 2) : random_constraints(2, 2, rng);
            const BerTable table(snr);
            for (double p_t : {1e-2, 1e-3}) {
                const auto gr = greedy_allocate(table, c, p_t);
                const auto opt = exhaustive_allocate(snr, c, p_t);
                check_valid(gr, snr, c, p_t);
                check_valid(opt, snr, c, p_t);
                CHECK(is_locally_maximal(gr.schemes, table, c, p_t));
                CHECK(gr.total_bits <= opt.total_bits);
                gap += opt.total_bits - gr.total_bits;
                ++instances;
            }
        }
        MESSAGE("mean greedy optimality gap: " << static_cast<double>(gap) / instances << " bits");
    }

    TEST_CASE("greedy on full resource blocks is feasible and locally maximal") {
        Engine rng = make_engine(5, {});
        for (SystemKind kind : {SystemKind::FB, SystemKind::CM, SystemKind::LTE, SystemKind::MLTE}) {
            const auto profile = build_profile(kind);
            for (double db : {0.0, 8.0, 20.0, 32.0}) {
                const SnrGrid snr = tux_snr(12, 7, db, rng);
                const BerTable table(snr);
                for (double p_t : {1e-2, 1e-3, 1e-4}) {
                    const auto a = greedy_allocate(table, profile.grid, p_t);
                    check_valid(a, snr, profile.grid, p_t);
                    CHECK(is_locally_maximal(a.schemes, table, profile.grid, p_t));
                    CHECK(greedy_allocate(table, profile.grid, p_t).schemes == a.schemes);
                }
            }
        }
    }

    TEST_CASE("oracle monotonicity: constraint relaxation and BER target") {
        Engine rng = make_engine(31, {});
        std::uniform_real_distribution<double> db(0.0, 35.0);
        for (int i = 0; i < 25; ++i) {
            const SnrGrid snr = tux_snr(2, 2, db(rng), rng);
            const ConstraintGrid narrow = random_constraints(2, 2, rng);
            const ConstraintGrid wide = uniform_constraints(2, 2);
            const auto a = exhaustive_allocate(snr, narrow, 1e-3);
            const auto b = exhaustive_allocate(snr, wide, 1e-3);
            CHECK(b.total_bits >= a.total_bits);
            long prev = -1;
            for (double p_t : {1e-5, 1e-4, 1e-3, 1e-2, 0.1}) {
                const auto r = exhaustive_allocate(snr, wide, p_t);
                CHECK(r.total_bits >= prev);
                prev = r.total_bits;
            }
        }
    }

    TEST_CASE("exhaustive search refuses oversized problems") {
        const auto fb = build_profile(SystemKind::FB);
        CHECK_THROWS_AS(exhaustive_allocate(constant_snr(12, 7, 10.0), fb.grid, 1e-3), SearchSpaceError);
        CHECK_THROWS_AS(exhaustive_allocate(constant_snr(2, 2, 10.0), uniform_constraints(2, 2), 1e-3, 1000),
                        SearchSpaceError);
        CHECK_NOTHROW(exhaustive_allocate(constant_snr(2, 2, 10.0), uniform_constraints(2, 2), 1e-3, 11 * 11 * 11 * 11));
    }

    TEST_CASE("exhaustive places a lone bit on the stronger position") {
        SnrGrid snr{Grid<double>(2, 1)};
        snr.gamma[0] = 2.0;
        snr.gamma[1] = 50.0;
        Grid<SchemeSet> allowed(2, 1, SchemeSet::of_family(Family::Psk, 2));
        const ConstraintGrid c(allowed, Grid<Role>(2, 1, Role::Data));
        const double p_t = ber({Family::Psk, 2}, 2.0) / 2.0 + 1e-6;
        const auto both = exhaustive_allocate(snr, c, p_t);
        CHECK(both.total_bits == 2);
        const auto one = exhaustive_allocate(snr, c, ber({Family::Psk, 2}, 2.0) / 4.0);
        CHECK(one.total_bits == 1);
        CHECK(one.schemes[1] == Scheme{Family::Psk, 2});
    }

    TEST_CASE("block allocation uses one scheme for the grid") {
        const auto fb = build_profile(SystemKind::FB);
        const auto hi = block_allocate(constant_snr(12, 7, 1e6), fb.grid, 1e-3);
        CHECK(hi.total_bits == 504);

        const auto lte = block_allocate(constant_snr(12, 7, 1e6), build_profile(SystemKind::LTE).grid, 1e-3);
        CHECK(lte.total_bits == 480);

        Engine rng = make_engine(9, {});
        for (double db : {5.0, 15.0, 25.0}) {
            const SnrGrid snr = tux_snr(12, 7, db, rng);
            const auto b = block_allocate(snr, fb.grid, 1e-3);
            check_valid(b, snr, fb.grid, 1e-3);
            std::optional<Scheme> used;
            for (const Scheme& s : b.schemes.cells()) {
                if (s.silent()) continue;
                if (!used) used = s;
                CHECK(s == *used);
            }
            CHECK(b.total_bits <= greedy_allocate(snr, fb.grid, 1e-3).total_bits + 84);
        }
        const auto zero = block_allocate(constant_snr(12, 7, 0.0), fb.grid, 1e-3);
        CHECK(zero.total_bits == 0);
    }

    TEST_CASE("instance JSON round trip") {
        Engine rng = make_engine(4, {});
        const auto mlte = build_profile(SystemKind::MLTE);
        const LoadingInstance inst{tux_snr(12, 7, 12.0, rng), mlte.grid, 1e-3};
        std::stringstream buf;
        write_instance(buf, inst);
        const LoadingInstance back = read_instance(buf);
        CHECK(back.p_t == inst.p_t);
        CHECK(back.constraints == inst.constraints);
        CHECK(back.snr.gamma == inst.snr.gamma);
        CHECK(greedy_allocate(back.snr, back.constraints, back.p_t).schemes ==
              greedy_allocate(inst.snr, inst.constraints, inst.p_t).schemes);
    }

    TEST_CASE("instance JSON errors") {
        std::istringstream malformed("{ not json");
        CHECK_THROWS_AS(read_instance(malformed), ParseError);
        std::istringstream short_arrays(
            R"({"n_f":2,"n_t":1,"p_t":0.001,"gamma":[1.0],"roles":["data","data"],"allowed":["PSK2","PSK2"]})");
        CHECK_THROWS_AS(read_instance(short_arrays), std::exception);
        std::istringstream bad_scheme(
            R"({"n_f":1,"n_t":1,"p_t":0.001,"gamma":[1.0],"roles":["data"],"allowed":["PSK1,QAM8"]})");
        CHECK_THROWS_AS(read_instance(bad_scheme), ParseError);
        std::istringstream ok(
            R"({"n_f":1,"n_t":1,"p_t":0.001,"gamma":[100.0],"roles":["data"],"allowed":["PSK1,PSK2,PSK4"]})");
        const auto inst = read_instance(ok);
        CHECK(greedy_allocate(inst.snr, inst.constraints, inst.p_t).total_bits == 2);
    }
}
