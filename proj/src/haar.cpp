#include "shearnet/haar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shearnet/error.hpp"

namespace shearnet {

namespace {

void check_params(HaarParams p, int n) {
    if (n < 2) throw InvalidDimension("haar grid size must be >= 2");
    if (p.scale < 1 || 2 * p.scale > n)
        throw ParameterError("haar scale " + std::to_string(p.scale) + " outside [1, n/2] for n=" +
                             std::to_string(n));
    if (p.shift < 1 || p.shift > n)
        throw ParameterError("haar shift " + std::to_string(p.shift) + " outside [1, n]");
}

Provenance haar_provenance(std::string variant, int n, nlohmann::json params) {
    params["n"] = n;
    return {"haar", std::move(variant), std::move(params)};
}

Dictionary assemble(int n, const std::vector<int>& scales, Provenance prov) {
    const Grid grid(n, 1);
    std::vector<Slice> slices;
    slices.reserve(scales.size());
    for (const int a : scales) {
        Slice s{haar_atom({a, n}, n), {}};
        s.members.reserve(static_cast<std::size_t>(n));
        for (int t = 1; t <= n; ++t) s.members.push_back({Shift{t % n, 0}, HaarParams{a, t}});
        slices.push_back(std::move(s));
    }
    return Dictionary(grid, std::move(prov), std::move(slices));
}

}  // namespace

Atom haar_atom(HaarParams p, int n) {
    check_params(p, n);
    const double v = 1.0 / std::sqrt(2.0 * p.scale);
    SparseVector support;
    support.reserve(static_cast<std::size_t>(2 * p.scale));
    for (int i = 1; i <= n; ++i) {
        const int m = ((i - p.shift + p.scale) % n + n) % n;
        if (m < p.scale)
            support.push_back({static_cast<std::uint32_t>(i - 1), v});
        else if (m < 2 * p.scale)
            support.push_back({static_cast<std::uint32_t>(i - 1), -v});
    }
    return Atom{p, unit_normalize(std::move(support)), 1.0};
}

std::vector<int> haar_subsampled_scales(int n, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ParameterError("epsilon must be > 0");
    if (n < 4) throw InvalidDimension("subsampled haar needs n >= 4");
    const int kmax = static_cast<int>(std::ceil((std::log2(static_cast<double>(n)) - 1.0) / epsilon - 1e-9));
    std::vector<int> scales;
    for (int k = 1; k <= kmax; ++k) {
        const auto a = static_cast<int>(std::lround(std::exp2(epsilon * k)));
        scales.push_back(std::clamp(a, 1, n / 2));
    }
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    return scales;
}

Dictionary build_full_haar(int n) {
    if (n < 4 || n % 2 != 0)
        throw InvalidDimension("full haar system needs even n >= 4, got " + std::to_string(n));
    std::vector<int> scales(static_cast<std::size_t>(n / 2));
    for (int a = 1; a <= n / 2; ++a) scales[static_cast<std::size_t>(a - 1)] = a;
    return assemble(n, scales, haar_provenance("full", n, nlohmann::json::object()));
}

Dictionary build_subsampled_haar(int n, double epsilon) {
    const auto scales = haar_subsampled_scales(n, epsilon);
    return assemble(n, scales, haar_provenance("subsampled", n, {{"epsilon", epsilon}, {"scales", scales}}));
}

std::vector<double> haar_orthobasis_transform(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2 || n % 2 != 0) throw InvalidDimension("orthobasis transform needs even n, got " + std::to_string(n));
    const std::size_t half = n / 2;
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<double> out(n);
    for (std::size_t m = 0; m < half; ++m) {
        out[m] = r * (x[2 * m] - x[2 * m + 1]);
        out[half + m] = r * (x[2 * m] + x[2 * m + 1]);
    }
    return out;
}

std::vector<double> haar_orthobasis_transform(const Signal& x) {
    if (x.grid().dims != 1) throw InvalidDimension("orthobasis transform is 1D");
    return haar_orthobasis_transform(x.values());
}

std::vector<double> haar_orthobasis_matrix(int n) {
    if (n < 2 || n % 2 != 0) throw InvalidDimension("orthobasis needs even n");
    const auto un = static_cast<std::size_t>(n);
    const std::size_t half = un / 2;
    std::vector<double> g(un * un, 0.0);
    for (std::size_t m = 0; m < half; ++m) {
        // Difference row m is psi_{1, 2m+2}.
        const Atom d = haar_atom({1, static_cast<int>(2 * m + 2)}, n);
        for (const auto& e : d.support) g[m * un + e.index] = e.value;
        const double r = 1.0 / std::sqrt(2.0);
        g[(half + m) * un + 2 * m] = r;
        g[(half + m) * un + 2 * m + 1] = r;
    }
    return g;
}

}  // namespace shearnet
