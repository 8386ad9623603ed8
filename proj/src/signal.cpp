#include "shearnet/signal.hpp"

#include <cmath>
#include <string>

#include "shearnet/error.hpp"
#include "shearnet/haar.hpp"
#include "shearnet/shearlet.hpp"

namespace shearnet {

Grid::Grid(int n_, int dims_) : n(n_), dims(dims_) {
    if (n < 2) throw InvalidDimension("grid size must be >= 2, got " + std::to_string(n));
    if (dims != 1 && dims != 2)
        throw InvalidDimension("grid dims must be 1 or 2, got " + std::to_string(dims));
}

Signal::Signal(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Signal::Signal(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw InvalidDimension("signal has " + std::to_string(values_.size()) +
                               " values, grid needs " + std::to_string(grid_.size()));
    for (const double v : values_)
        if (!std::isfinite(v)) throw ParameterError("signal values must be finite");
}

double Signal::norm() const {
    double s = 0.0;
    for (const double v : values_) s += v * v;
    return std::sqrt(s);
}

void fill_noise(Signal& out, NoiseSeed seed) {
    RandomStream rng(seed);
    for (double& v : out.values()) v = rng.normal();
}

Signal gen_noise(int n, int dims, NoiseSeed seed) {
    Signal out(Grid(n, dims));
    fill_noise(out, seed);
    return out;
}

Signal add(const Signal& feature, const Signal& noise) {
    if (feature.grid() != noise.grid()) throw GridMismatch("add: signals live on different grids");
    Signal out = feature;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += noise[i];
    return out;
}

namespace {

Signal from_atom(const Atom& atom, Grid grid, double amplitude) {
    Signal out(grid);
    for (const auto& e : atom.support) out[e.index] = amplitude * e.value;
    return out;
}

struct Synthesizer {
    int n;
    double amplitude;

    Signal operator()(const feature::None&) const { return Signal(Grid(n, 1)); }

    Signal operator()(const feature::HaarJump& f) const {
        return from_atom(haar_atom({f.scale, f.shift}, n), Grid(n, 1), amplitude);
    }

    Signal operator()(const feature::Interval& f) const {
        if (f.lo < 1 || f.hi > n + 1 || f.lo >= f.hi)
            throw ParameterError("interval [" + std::to_string(f.lo) + ", " + std::to_string(f.hi) +
                                 ") is not a nonempty subset of [1, n+1)");
        Signal out(Grid(n, 1));
        const double v = amplitude / std::sqrt(static_cast<double>(f.hi - f.lo));
        for (int i = f.lo; i < f.hi; ++i) out[static_cast<std::size_t>(i - 1)] = v;
        return out;
    }

    Signal operator()(const feature::ShearletAtom& f) const {
        const ShearletParams p{f.scale, f.shear, f.t1, f.t2};
        return from_atom(digitize_atom(p, n, f.quadrature), Grid(n, 2), amplitude);
    }
};

}  // namespace

Signal synthesize(const FeatureSpec& spec, int n) {
    if (!std::isfinite(spec.amplitude) || spec.amplitude < 0.0)
        throw ParameterError("feature amplitude must be finite and >= 0");
    if (n < 2) throw InvalidDimension("grid size must be >= 2");
    return std::visit(Synthesizer{n, spec.amplitude}, spec.kind);
}

}  // namespace shearnet
