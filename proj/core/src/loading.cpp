#include "ofdmse/loading.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "ofdmse/errors.hpp"

namespace ofdmse {
namespace {

void check_p_t(double p_t) {
    if (!(p_t > 0.0 && p_t < 0.5)) throw DomainError("BER target must lie in (0, 0.5)");
}

void check_shape(int n_f, int n_t, const ConstraintGrid& constraints) {
    if (n_f != constraints.n_f() || n_t != constraints.n_t())
        throw ConfigError("SNR grid and constraint grid differ in shape");
}

std::size_t index_of(Scheme s) {
    const auto idx = catalog_index(s);
    if (!idx) throw ConfigError("not a catalog scheme: " + to_string(s));
    return *idx;
}

// Bit-weighted BER sums in position order; every feasibility decision that
// is close to the threshold goes through this one summation.
struct Sums {
    long bits = 0;
    double weighted = 0.0;

    double average() const noexcept { return bits == 0 ? 0.0 : weighted / static_cast<double>(bits); }
};

Sums ordered_sums(std::span<const std::size_t> choice, const BerTable& table) {
    const auto cat = catalog();
    Sums s;
    for (std::size_t v = 0; v < choice.size(); ++v) {
        const int b = bits(cat[choice[v]]);
        if (b == 0) continue;
        s.bits += b;
        s.weighted += b * table.at(v, choice[v]);
    }
    return s;
}

Allocation make_allocation(std::span<const std::size_t> choice, const BerTable& table) {
    const auto cat = catalog();
    Allocation out{Grid<Scheme>(table.n_f(), table.n_t()), 0, 0.0};
    for (std::size_t v = 0; v < choice.size(); ++v) out.schemes[v] = cat[choice[v]];
    const Sums s = ordered_sums(choice, table);
    out.total_bits = s.bits;
    out.avg_ber = s.average();
    return out;
}

std::vector<std::size_t> silent_choice(const ConstraintGrid& constraints) {
    std::vector<std::size_t> choice(constraints.size());
    for (std::size_t v = 0; v < choice.size(); ++v)
        choice[v] = index_of(constraints.allowed(v).canonical_silent());
    return choice;
}

struct Option {
    std::size_t idx;
    int bits;
    double weighted;  // bits * ber
};

}  // namespace

BerTable::BerTable(const SnrGrid& snr)
    : n_f_(snr.gamma.n_f()), n_t_(snr.gamma.n_t()), values_(snr.gamma.size()) {
    const auto cat = catalog();
    for (std::size_t v = 0; v < values_.size(); ++v)
        for (std::size_t i = 0; i < kCatalogSize; ++i)
            values_[v][i] = cat[i].silent() ? 0.0 : ber(cat[i], snr.gamma[v]);
}

double BerTable::at(std::size_t pos, Scheme s) const { return values_.at(pos)[index_of(s)]; }

long total_bits(const Grid<Scheme>& schemes) {
    long total = 0;
    for (const Scheme& s : schemes.cells()) total += bits(s);
    return total;
}

double evaluate_avg_ber(const Grid<Scheme>& schemes, const BerTable& table) {
    if (schemes.n_f() != table.n_f() || schemes.n_t() != table.n_t())
        throw ConfigError("scheme grid and SNR grid differ in shape");
    std::vector<std::size_t> choice(schemes.size());
    for (std::size_t v = 0; v < choice.size(); ++v) choice[v] = index_of(schemes[v]);
    return ordered_sums(choice, table).average();
}

double evaluate_avg_ber(const Grid<Scheme>& schemes, const SnrGrid& snr) {
    return evaluate_avg_ber(schemes, BerTable(snr));
}

Allocation greedy_allocate(const BerTable& table, const ConstraintGrid& constraints, double p_t) {
    check_p_t(p_t);
    check_shape(table.n_f(), table.n_t(), constraints);
    const auto cat = catalog();
    const std::size_t n = table.size();

    std::vector<std::vector<Option>> options(n);
    for (std::size_t v = 0; v < n; ++v) {
        constraints.allowed(v).for_each([&](Scheme s) {
            if (s.silent()) return;
            const std::size_t idx = *catalog_index(s);
            const int b = bits(s);
            options[v].push_back({idx, b, b * table.at(v, idx)});
        });
    }

    std::vector<std::size_t> choice = silent_choice(constraints);
    std::vector<int> cur_bits(n, 0);
    std::vector<double> cur_weighted(n, 0.0);

    // Candidates whose incremental average lands this close to p_t are
    // re-decided by the ordered summation used for the returned avg_ber.
    const double borderline = 1e-9 * p_t;

    for (;;) {
        long bits_sum = 0;
        double weighted_sum = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            bits_sum += cur_bits[v];
            weighted_sum += cur_weighted[v];
        }

        struct Best {
            std::size_t v;
            const Option* opt;
            int gain;
            double avg;
        };
        std::optional<Best> best;

        for (std::size_t v = 0; v < n; ++v) {
            for (const Option& o : options[v]) {
                const int gain = o.bits - cur_bits[v];
                if (gain <= 0) continue;
                if (best && gain < best->gain) continue;
                const long nb = bits_sum + gain;
                double avg = (weighted_sum - cur_weighted[v] + o.weighted) / static_cast<double>(nb);
                if (std::abs(avg - p_t) <= borderline) {
                    const std::size_t saved = choice[v];
                    choice[v] = o.idx;
                    avg = ordered_sums(choice, table).average();
                    choice[v] = saved;
                }
                if (!(avg <= p_t)) continue;
                // Positions are visited in (l, k) order, so an equal-gain,
                // equal-average candidate at a later position never wins.
                if (best) {
                    if (gain == best->gain && avg > best->avg) continue;
                    if (gain == best->gain && avg == best->avg) {
                        if (v != best->v) continue;
                        if (cat[o.idx].family >= cat[best->opt->idx].family) continue;
                    }
                }
                best = Best{v, &o, gain, avg};
            }
        }
        if (!best) break;
        choice[best->v] = best->opt->idx;
        cur_bits[best->v] = best->opt->bits;
        cur_weighted[best->v] = best->opt->weighted;
    }
    return make_allocation(choice, table);
}

Allocation greedy_allocate(const SnrGrid& snr, const ConstraintGrid& constraints, double p_t) {
    return greedy_allocate(BerTable(snr), constraints, p_t);
}

Allocation block_allocate(const BerTable& table, const ConstraintGrid& constraints, double p_t) {
    check_p_t(p_t);
    check_shape(table.n_f(), table.n_t(), constraints);
    const std::vector<std::size_t> silent = silent_choice(constraints);

    SchemeSet candidates;
    for (std::size_t v = 0; v < constraints.size(); ++v) candidates = candidates | constraints.allowed(v);

    std::vector<std::size_t> best_choice = silent;
    Sums best_sums = ordered_sums(best_choice, table);
    std::vector<std::size_t> choice(silent.size());
    candidates.for_each([&](Scheme s) {
        if (s.silent()) return;
        const std::size_t idx = *catalog_index(s);
        for (std::size_t v = 0; v < choice.size(); ++v)
            choice[v] = constraints.allowed(v).contains(s) ? idx : silent[v];
        const Sums sums = ordered_sums(choice, table);
        if (!(sums.average() <= p_t)) return;
        // Candidates arrive in catalog (family) order, so equal keys keep the earlier family.
        if (sums.bits > best_sums.bits ||
            (sums.bits == best_sums.bits && sums.average() < best_sums.average())) {
            best_choice = choice;
            best_sums = sums;
        }
    });
    return make_allocation(best_choice, table);
}

Allocation block_allocate(const SnrGrid& snr, const ConstraintGrid& constraints, double p_t) {
    return block_allocate(BerTable(snr), constraints, p_t);
}

Allocation exhaustive_allocate(const SnrGrid& snr, const ConstraintGrid& constraints, double p_t,
                               std::uint64_t max_assignments) {
    check_p_t(p_t);
    check_shape(snr.gamma.n_f(), snr.gamma.n_t(), constraints);
    const std::size_t n = constraints.size();

    std::vector<std::vector<std::size_t>> options(n);
    std::uint64_t space = 1;
    for (std::size_t v = 0; v < n; ++v) {
        options[v].push_back(*catalog_index(constraints.allowed(v).canonical_silent()));
        constraints.allowed(v).for_each([&](Scheme s) {
            if (!s.silent()) options[v].push_back(*catalog_index(s));
        });
        // Options are ascending in catalog order, matching Scheme ordering.
        std::sort(options[v].begin(), options[v].end());
        if (space > max_assignments / options[v].size())
            throw SearchSpaceError("exhaustive search space exceeds " + std::to_string(max_assignments));
        space *= options[v].size();
    }

    const BerTable table(snr);
    std::vector<std::size_t> digit(n, 0);
    std::vector<std::size_t> choice(n);
    std::optional<std::vector<std::size_t>> best;
    Sums best_sums;

    for (std::uint64_t it = 0; it < space; ++it) {
        for (std::size_t v = 0; v < n; ++v) choice[v] = options[v][digit[v]];
        const Sums sums = ordered_sums(choice, table);
        if (sums.average() <= p_t) {
            // The odometer enumerates in lexicographic order of the scheme
            // grid (position 0 most significant), so among exact ties the
            // first one seen is kept.
            const bool better = !best || sums.bits > best_sums.bits ||
                                (sums.bits == best_sums.bits && sums.average() < best_sums.average());
            if (better) {
                best = choice;
                best_sums = sums;
            }
        }
        for (std::size_t v = n; v-- > 0;) {
            if (++digit[v] < options[v].size()) break;
            digit[v] = 0;
        }
    }
    return make_allocation(*best, table);
}

bool is_locally_maximal(const Grid<Scheme>& schemes, const BerTable& table,
                        const ConstraintGrid& constraints, double p_t) {
    check_shape(table.n_f(), table.n_t(), constraints);
    std::vector<std::size_t> choice(schemes.size());
    for (std::size_t v = 0; v < choice.size(); ++v) choice[v] = index_of(schemes[v]);
    for (std::size_t v = 0; v < choice.size(); ++v) {
        const int current = bits(schemes[v]);
        bool upgradable = false;
        constraints.allowed(v).for_each([&](Scheme s) {
            if (upgradable || bits(s) <= current) return;
            const std::size_t saved = choice[v];
            choice[v] = *catalog_index(s);
            upgradable = ordered_sums(choice, table).average() <= p_t;
            choice[v] = saved;
        });
        if (upgradable) return false;
    }
    return true;
}

namespace {

std::string members(SchemeSet set) {
    std::string out;
    set.for_each([&](Scheme s) {
        if (!out.empty()) out += ',';
        out += to_string(s);
    });
    return out;
}

SchemeSet parse_members(const std::string& text) {
    SchemeSet out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, comma - start);
        const auto s = parse_scheme(item);
        if (!s) throw ParseError(0, "unknown scheme '" + item + "'");
        out.insert(*s);
        start = comma + 1;
    }
    return out;
}

}  // namespace

void write_instance(std::ostream& out, const LoadingInstance& instance) {
    const auto& g = instance.snr.gamma;
    check_shape(g.n_f(), g.n_t(), instance.constraints);
    nlohmann::json j;
    j["n_f"] = g.n_f();
    j["n_t"] = g.n_t();
    j["p_t"] = instance.p_t;
    j["gamma"] = std::vector<double>(g.cells().begin(), g.cells().end());
    auto& roles = j["roles"] = nlohmann::json::array();
    auto& allowed = j["allowed"] = nlohmann::json::array();
    for (std::size_t v = 0; v < g.size(); ++v) {
        roles.push_back(std::string(to_string(instance.constraints.role(v))));
        allowed.push_back(members(instance.constraints.allowed(v)));
    }
    out << j.dump(2) << '\n';
}

LoadingInstance read_instance(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("malformed instance JSON: ") + e.what());
    }
    try {
        const int n_f = j.at("n_f").get<int>();
        const int n_t = j.at("n_t").get<int>();
        const auto gamma = j.at("gamma").get<std::vector<double>>();
        const auto roles = j.at("roles").get<std::vector<std::string>>();
        const auto allowed = j.at("allowed").get<std::vector<std::string>>();
        SnrGrid snr{Grid<double>(n_f, n_t)};
        Grid<Role> role_grid(n_f, n_t);
        Grid<SchemeSet> allowed_grid(n_f, n_t);
        if (gamma.size() != snr.gamma.size() || roles.size() != snr.gamma.size() ||
            allowed.size() != snr.gamma.size())
            throw ConfigError("instance arrays must have n_f * n_t entries");
        for (std::size_t v = 0; v < gamma.size(); ++v) {
            if (!(gamma[v] >= 0.0)) throw ConfigError("SNR values must be non-negative");
            snr.gamma[v] = gamma[v];
            if (roles[v] == "data") role_grid[v] = Role::Data;
            else if (roles[v] == "pilot") role_grid[v] = Role::Pilot;
            else if (roles[v] == "amplitude") role_grid[v] = Role::AmplitudeData;
            else throw ConfigError("unknown role '" + roles[v] + "'");
            allowed_grid[v] = parse_members(allowed[v]);
        }
        return {std::move(snr), ConstraintGrid(std::move(allowed_grid), std::move(role_grid)),
                j.at("p_t").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("invalid instance: ") + e.what());
    }
}

}  // namespace ofdmse
