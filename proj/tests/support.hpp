#pragma once

#include <random>

#include "ofdmse/channel.hpp"
#include "ofdmse/rng.hpp"
#include "ofdmse/systems.hpp"

namespace ofdmse::testing {

/// TUx-faded SNR grid at mean SNR `snr_db`.
inline SnrGrid tux_snr(int n_f, int n_t, double snr_db, Engine& rng) {
    return snr_grid(draw_realization(tux_profile(), 128, n_f, n_t, 0, rng), noise_var_for_db(snr_db));
}

inline ConstraintGrid uniform_constraints(int n_f, int n_t, SchemeSet set = SchemeSet::full()) {
    return ConstraintGrid(Grid<SchemeSet>(n_f, n_t, set), Grid<Role>(n_f, n_t, Role::Data));
}

/// Random allowed sets: each non-silent catalog entry kept with probability
/// 1/2, plus one order-1 entry.
inline ConstraintGrid random_constraints(int n_f, int n_t, Engine& rng) {
    Grid<SchemeSet> allowed(n_f, n_t);
    std::bernoulli_distribution keep(0.5);
    for (SchemeSet& set : allowed.cells()) {
        for (const Scheme& s : catalog())
            if (!s.silent() && keep(rng)) set.insert(s);
        set.insert({Family::Psk, 1});
    }
    return ConstraintGrid(std::move(allowed), Grid<Role>(n_f, n_t, Role::Data));
}

}  // namespace ofdmse::testing
