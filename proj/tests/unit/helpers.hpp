#pragma once

#include <cmath>
#include <vector>

#include "shearnet/dictionary.hpp"
#include "shearnet/random.hpp"
#include "shearnet/signal.hpp"

namespace testutil {

inline std::vector<double> dense(const shearnet::Atom& g, std::size_t size) {
    std::vector<double> v(size, 0.0);
    for (const auto& e : g.support) v[e.index] = e.value;
    return v;
}

inline shearnet::Signal random_signal(shearnet::Grid grid, std::uint64_t seed) {
    return shearnet::gen_noise(grid.n, grid.dims, {seed, 77});
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Atom from a dense vector, normalized.
inline shearnet::Atom atom_from(const std::vector<double>& v, std::size_t id) {
    shearnet::SparseVector s;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) s.push_back({static_cast<std::uint32_t>(i), v[i]});
    return shearnet::Atom{shearnet::IndexParams{id}, shearnet::unit_normalize(s), 1.0};
}

}  // namespace testutil
