#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "shearnet/random.hpp"

namespace shearnet {

// A 1D grid of n points or a 2D grid of n x n points. Grid points are
// addressed 1..n per axis; storage index of point i is i - 1, and in 2D the
// flat index of (i1, i2) is (i1 - 1) * n + (i2 - 1).
struct Grid {
    int n = 0;
    int dims = 1;

    Grid() = default;
    Grid(int n, int dims);

    std::size_t size() const {
        return dims == 1 ? static_cast<std::size_t>(n)
                         : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    }

    friend bool operator==(const Grid&, const Grid&) = default;
};

// Real values on a Grid. All values are finite.
class Signal {
public:
    explicit Signal(Grid grid);  // zero signal
    Signal(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double norm() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

// i.i.d. N(0, 1) draws, bit-reproducible given (seed, stream).
Signal gen_noise(int n, int dims, NoiseSeed seed);

// Overwrites out with fresh noise; reuses its storage.
void fill_noise(Signal& out, NoiseSeed seed);

Signal add(const Signal& feature, const Signal& noise);

namespace feature {

struct None {};

struct HaarJump {
    int scale = 1;
    int shift = 1;
};

// Half-open [lo, hi) over 1-based grid points.
struct Interval {
    int lo = 1;
    int hi = 2;
};

struct ShearletAtom {
    int scale = 1;
    int shear = 0;
    int t1 = 1;
    int t2 = 1;
    int quadrature = 4;
};

}  // namespace feature

struct FeatureSpec {
    std::variant<feature::None, feature::HaarJump, feature::Interval, feature::ShearletAtom> kind;
    double amplitude = 0.0;
};

// amplitude * (unit-norm atom or indicator named by spec).
Signal synthesize(const FeatureSpec& spec, int n);

}  // namespace shearnet
