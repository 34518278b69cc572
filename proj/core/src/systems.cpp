#include "ofdmse/systems.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>

#include "line_reader.hpp"
#include "ofdmse/errors.hpp"

namespace ofdmse {

std::string_view to_string(Role r) noexcept {
    switch (r) {
        case Role::Data: return "data";
        case Role::Pilot: return "pilot";
        case Role::AmplitudeData: return "amplitude";
    }
    return "?";
}

ConstraintGrid::ConstraintGrid(Grid<SchemeSet> allowed, Grid<Role> roles)
    : allowed_(std::move(allowed)), roles_(std::move(roles)) {
    if (!allowed_.same_shape(roles_)) throw ConfigError("allowed and role grids differ in shape");
    const SchemeSet ask = SchemeSet::of_family(Family::Ask);
    for (std::size_t i = 0; i < allowed_.size(); ++i) {
        const SchemeSet s = allowed_[i];
        const Position p = allowed_.position(i);
        const std::string where = " at (" + std::to_string(p.k) + "," + std::to_string(p.l) + ")";
        if (!s.has_silent()) throw ConfigError("allowed set lacks an order-1 scheme" + where);
        if (roles_[i] == Role::Pilot && s.max_bits() != 0)
            throw ConfigError("pilot position must be silent" + where);
        if (roles_[i] == Role::AmplitudeData && !s.subset_of(ask))
            throw ConfigError("amplitude position must allow ASK only" + where);
    }
}

std::string_view to_string(SystemKind k) noexcept {
    switch (k) {
        case SystemKind::FB: return "fb";
        case SystemKind::CM: return "cm";
        case SystemKind::LTE: return "lte";
        case SystemKind::MLTE: return "mlte";
    }
    return "?";
}

std::optional<SystemKind> parse_system(std::string_view name) noexcept {
    std::string lower;
    for (char c : name)
        if (c != '-') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "fb") return SystemKind::FB;
    if (lower == "cm") return SystemKind::CM;
    if (lower == "lte") return SystemKind::LTE;
    if (lower == "mlte") return SystemKind::MLTE;
    return std::nullopt;
}

std::vector<Position> lte_pilot_positions() { return {{0, 0}, {6, 0}, {3, 4}, {9, 4}}; }

SystemProfile build_profile(SystemKind kind, int n_f, int n_t) {
    const SchemeSet full = SchemeSet::full();
    const SchemeSet psk = SchemeSet::of_family(Family::Psk);
    Grid<SchemeSet> allowed(n_f, n_t, kind == SystemKind::CM ? psk : full);
    Grid<Role> roles(n_f, n_t, Role::Data);

    if (kind == SystemKind::LTE || kind == SystemKind::MLTE) {
        const auto pilots = lte_pilot_positions();
        for (Position p : pilots)
            if (!allowed.contains(p))
                throw ConfigError("LTE pilot pattern needs a grid of at least 10 x 5");
        for (Position p : pilots) {
            if (kind == SystemKind::LTE) {
                allowed.at(p) = SchemeSet::silent_only(Family::Psk);
                roles.at(p) = Role::Pilot;
            } else {
                allowed.at(p) = SchemeSet::of_family(Family::Ask);
                roles.at(p) = Role::AmplitudeData;
                const Position neighbour{(p.k + 1) % n_f, p.l};
                if (roles.at(neighbour) == Role::Data) allowed.at(neighbour) = psk;
            }
        }
    }
    return {std::string(to_string(kind)), ConstraintGrid(std::move(allowed), std::move(roles))};
}

int saturation_bits(const ConstraintGrid& grid) {
    int total = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) total += grid.allowed(i).max_bits();
    return total;
}

namespace {

int parse_int(std::size_t line, const std::string& tok, const char* what) {
    int v = 0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size())
        throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
    return v;
}

SchemeSet parse_allowed(std::size_t line, const std::string& tok) {
    if (tok == "*") return SchemeSet::full();
    if (tok == "-") return SchemeSet::silent_only(Family::Psk);
    SchemeSet out;
    std::size_t start = 0;
    while (start <= tok.size()) {
        const std::size_t comma = std::min(tok.find(',', start), tok.size());
        const std::string item = tok.substr(start, comma - start);
        const auto top = parse_scheme(item);
        if (!top) throw ParseError(line, "unknown modulation '" + item + "' (want e.g. PSK16)");
        out = out | SchemeSet::of_family(top->family, top->order);
        start = comma + 1;
    }
    return out;
}

}  // namespace

SystemProfile read_system_profile(std::istream& in) {
    std::string name = "custom";
    std::optional<Grid<SchemeSet>> allowed;
    std::optional<Grid<Role>> roles;
    std::vector<std::size_t> defined_on;
    std::size_t last_line = 0;

    detail::for_each_record(in, [&](std::size_t line, const std::vector<std::string>& tok) {
        last_line = line;
        if (tok[0] == "name") {
            if (tok.size() != 2) throw ParseError(line, "expected `name <identifier>`");
            name = tok[1];
            return;
        }
        if (tok[0] == "grid") {
            if (tok.size() != 3) throw ParseError(line, "expected `grid <n_f> <n_t>`");
            if (allowed) throw ParseError(line, "grid declared twice");
            const int n_f = parse_int(line, tok[1], "n_f");
            const int n_t = parse_int(line, tok[2], "n_t");
            if (n_f <= 0 || n_t <= 0) throw ParseError(line, "grid dimensions must be positive");
            allowed.emplace(n_f, n_t);
            roles.emplace(n_f, n_t, Role::Data);
            defined_on.assign(allowed->size(), 0);
            return;
        }
        if (!allowed) throw ParseError(line, "position record before `grid` declaration");
        if (tok.size() != 4) throw ParseError(line, "expected `<k> <l> <role> <allowed>`");
        const Position p{parse_int(line, tok[0], "k"), parse_int(line, tok[1], "l")};
        if (!allowed->contains(p)) throw ParseError(line, "position outside the grid");
        const std::size_t idx = allowed->index(p);
        if (defined_on[idx] != 0)
            throw ParseError(line, "position already defined on line " + std::to_string(defined_on[idx]));

        Role role;
        if (tok[2] == "data") role = Role::Data;
        else if (tok[2] == "pilot") role = Role::Pilot;
        else if (tok[2] == "amplitude") role = Role::AmplitudeData;
        else throw ParseError(line, "unknown role '" + tok[2] + "' (data|pilot|amplitude)");

        const SchemeSet set = parse_allowed(line, tok[3]);
        if (role == Role::Pilot && set.max_bits() != 0)
            throw ParseError(line, "pilot positions must be silent (use `-`)");
        if (role == Role::AmplitudeData && !set.subset_of(SchemeSet::of_family(Family::Ask)))
            throw ParseError(line, "amplitude positions allow ASK only");
        (*allowed)[idx] = set;
        (*roles)[idx] = role;
        defined_on[idx] = line;
    });

    if (!allowed) throw ParseError(last_line, "missing `grid` declaration");
    for (std::size_t i = 0; i < defined_on.size(); ++i) {
        if (defined_on[i] == 0) {
            const Position p = allowed->position(i);
            throw ParseError(last_line, "position (" + std::to_string(p.k) + "," + std::to_string(p.l) +
                                            ") is never defined");
        }
    }
    return {name, ConstraintGrid(std::move(*allowed), std::move(*roles))};
}

}  // namespace ofdmse
