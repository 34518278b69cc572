#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ofdmse/errors.hpp"

namespace ofdmse {

/// A resource-element position: subcarrier index k, OFDM symbol index l.
struct Position {
    int k = 0;
    int l = 0;

    friend bool operator==(const Position&, const Position&) = default;
    /// Lexicographic in (l, k), the storage order of Grid.
    friend auto operator<=>(const Position& a, const Position& b) {
        if (auto c = a.l <=> b.l; c != 0) return c;
        return a.k <=> b.k;
    }
};

/// Dense n_f x n_t time-frequency grid stored symbol-major: index = l * n_f + k.
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(int n_f, int n_t, const T& fill = T{})
        : n_f_(n_f), n_t_(n_t), cells_(checked_size(n_f, n_t), fill) {}

    int n_f() const noexcept { return n_f_; }
    int n_t() const noexcept { return n_t_; }
    std::size_t size() const noexcept { return cells_.size(); }

    bool contains(Position p) const noexcept {
        return p.k >= 0 && p.k < n_f_ && p.l >= 0 && p.l < n_t_;
    }
    std::size_t index(Position p) const noexcept {
        return static_cast<std::size_t>(p.l) * static_cast<std::size_t>(n_f_) +
               static_cast<std::size_t>(p.k);
    }
    Position position(std::size_t index) const noexcept {
        return {static_cast<int>(index % static_cast<std::size_t>(n_f_)),
                static_cast<int>(index / static_cast<std::size_t>(n_f_))};
    }

    T& operator[](std::size_t i) { return cells_[i]; }
    const T& operator[](std::size_t i) const { return cells_[i]; }
    T& at(Position p) { return cells_.at(checked_index(p)); }
    const T& at(Position p) const { return cells_.at(checked_index(p)); }

    std::span<T> cells() noexcept { return cells_; }
    std::span<const T> cells() const noexcept { return cells_; }

    template <class U>
    bool same_shape(const Grid<U>& other) const noexcept {
        return n_f_ == other.n_f() && n_t_ == other.n_t();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static std::size_t checked_size(int n_f, int n_t) {
        if (n_f <= 0 || n_t <= 0) throw ConfigError("grid dimensions must be positive");
        return static_cast<std::size_t>(n_f) * static_cast<std::size_t>(n_t);
    }
    std::size_t checked_index(Position p) const {
        if (!contains(p)) throw std::out_of_range("grid position out of range");
        return index(p);
    }

    int n_f_ = 0;
    int n_t_ = 0;
    std::vector<T> cells_;
};

}  // namespace ofdmse
