#include "shearnet/shearlet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "shearnet/error.hpp"

namespace shearnet {

namespace {

// Ceiling that ignores float noise just above an integer.
int ceil_tol(double x) { return static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)))); }
int floor_tol(double x) { return static_cast<int>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x)))); }

// 0 maps to n; values are already >= 0.
int wrap_translation(int v, int n) { return ((v - 1) % n + n) % n + 1; }

int positive_mod(long long v, int n) { return static_cast<int>(((v % n) + n) % n); }

void check_subsampling(const ShearSubsampling& sub) {
    for (const double v : {sub.delta, sub.omega, sub.nu})
        if (!(v > 0.0) || !std::isfinite(v))
            throw ParameterError("subsampling parameters delta, omega, nu must be > 0");
}

// Origin atom (t = (n, n), i.e. zero translation), before normalization.
SparseVector digitize_origin(int a, int s, int n, int q, double& raw_norm) {
    const double dn = n;
    const double sqrt_an = std::sqrt(a / dn);
    const double sqrt_na = std::sqrt(dn / a);
    // Support of the continuous atom: M [0,1]^2 with M = S_{s/n} A_{a/n}.
    const double shear_off = (s / dn) * sqrt_an;
    const double y1_lo = std::min(0.0, shear_off);
    const double y1_hi = a / dn + std::max(0.0, shear_off);
    const double y2_lo = 0.0;
    const double y2_hi = sqrt_an;
    const int j1_lo = static_cast<int>(std::ceil(dn * y1_lo - 0.5)) - 1;
    const int j1_hi = static_cast<int>(std::floor(dn * y1_hi + 0.5)) + 1;
    const int j2_lo = static_cast<int>(std::ceil(dn * y2_lo - 0.5)) - 1;
    const int j2_hi = static_cast<int>(std::floor(dn * y2_hi + 0.5)) + 1;

    std::vector<double> offsets(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) offsets[static_cast<std::size_t>(k)] = ((k + 0.5) / q - 0.5) / dn;

    const double scale = std::pow(dn, 1.25) * std::pow(static_cast<double>(a), -0.75) / (dn * dn * q * q);
    std::vector<double> dense(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    const LipschitzShearlet psi;
    for (int j1 = j1_lo; j1 <= j1_hi; ++j1) {
        const int r = positive_mod(static_cast<long long>(j1) - 1, n);
        for (int j2 = j2_lo; j2 <= j2_hi; ++j2) {
            const int c = positive_mod(static_cast<long long>(j2) - 1, n);
            double acc = 0.0;
            for (const double o1 : offsets) {
                const double y1 = j1 / dn + o1;
                for (const double o2 : offsets) {
                    const double y2 = j2 / dn + o2;
                    acc += psi((dn * y1 - s * y2) / a, sqrt_na * y2);
                }
            }
            dense[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] +=
                acc * scale;
        }
    }
    SparseVector out;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) {
            out.push_back({static_cast<std::uint32_t>(i), dense[i]});
            norm2 += dense[i] * dense[i];
        }
    }
    raw_norm = std::sqrt(norm2);
    return out;
}

Atom origin_atom(int a, int s, int n, int q) {
    if (q < 1) throw ParameterError("quadrature order must be >= 1");
    double raw = 0.0;
    SparseVector v = digitize_origin(a, s, n, q, raw);
    // Cell entries are bounded by n^{5/4} a^{-3/4} / n^2; anything far below
    // that is cancellation noise around an exact zero.
    const double entry_scale = std::pow(static_cast<double>(n), -0.75) * std::pow(static_cast<double>(a), -0.75);
    if (!(raw > 1e-10 * entry_scale))
        throw DegenerateAtom("shearlet (a=" + std::to_string(a) + ", s=" + std::to_string(s) + ") at n=" +
                             std::to_string(n) + " digitizes to zero");
    return Atom{ShearletParams{a, s, n, n}, unit_normalize(std::move(v)), raw};
}

}  // namespace

double LipschitzShearlet::tent(double u) {
    if (u < 0.0 || u > 1.0) return 0.0;
    return std::max(0.0, 1.0 - std::abs(2.0 * u - 1.0));
}

double LipschitzShearlet::wave(double u) { return tent(2.0 * u) - tent(2.0 * u - 1.0); }

double generator_eval(double x1, double x2) { return LipschitzShearlet{}(x1, x2); }

void validate_shearlet_params(const ShearletParams& p, int n) {
    if (n < 2) throw InvalidDimension("shearlet grid size must be >= 2");
    if (p.scale < 1 || p.scale > n)
        throw ParameterError("shearlet scale " + std::to_string(p.scale) + " outside [1, n]");
    if (p.shear < -(n / 2) || p.shear > n / 2)
        throw ParameterError("shearlet shear " + std::to_string(p.shear) + " outside [-n/2, n/2]");
    if (p.t1 < 1 || p.t1 > n || p.t2 < 1 || p.t2 > n)
        throw ParameterError("shearlet translation outside [1, n]^2");
}

Atom digitize_atom(const ShearletParams& p, int n, int quadrature) {
    validate_shearlet_params(p, n);
    const Atom origin = origin_atom(p.scale, p.shear, n, quadrature);
    return translate(origin, Member{Shift{p.t1 % n, p.t2 % n}, p}, Grid(n, 2));
}

std::size_t full_cdsh_cardinality(int n) {
    const auto un = static_cast<std::size_t>(n);
    return un * static_cast<std::size_t>(2 * (n / 2) + 1) * un * un;
}

Dictionary build_full_cdsh(int n, int quadrature) {
    if (n < 2) throw InvalidDimension("shearlet grid size must be >= 2");
    if (n > kFullCdshCap) {
        std::ostringstream msg;
        msg << "full CDSH at n=" << n << " has " << full_cdsh_cardinality(n)
            << " atoms (n^4 (n+1)/n); refusing above n=" << kFullCdshCap;
        throw CapExceeded(msg.str());
    }
    const Grid grid(n, 2);
    std::vector<Slice> slices;
    for (int a = 1; a <= n; ++a) {
        for (int s = -(n / 2); s <= n / 2; ++s) {
            Slice slice{origin_atom(a, s, n, quadrature), {}};
            slice.members.reserve(grid.size());
            for (int t1 = 1; t1 <= n; ++t1)
                for (int t2 = 1; t2 <= n; ++t2)
                    slice.members.push_back({Shift{t1 % n, t2 % n}, ShearletParams{a, s, t1, t2}});
            slices.push_back(std::move(slice));
        }
    }
    return Dictionary(grid, {"shearlet", "full", {{"n", n}, {"quadrature", quadrature}}}, std::move(slices));
}

std::vector<double> subsampled_scales(int n, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("delta must be > 0");
    const int kmax = ceil_tol(std::log2(static_cast<double>(n)) / delta);
    std::vector<double> out;
    for (int k = 0; k <= kmax; ++k) out.push_back(std::exp2(delta * k));
    return out;
}

std::vector<SubsampledSlice> subsampled_cdsh_index(int n, const ShearSubsampling& sub) {
    if (n < 2) throw InvalidDimension("shearlet grid size must be >= 2");
    check_subsampling(sub);
    const double dn = n;
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> keyed;
    for (const double ak : subsampled_scales(n, sub.delta)) {
        const int a = std::clamp(ceil_tol(ak), 1, n);
        const int lmax = floor_tol(std::sqrt(dn) / (std::sqrt(ak) * sub.omega));
        const double shear_step = sub.omega * std::sqrt(ak * dn);

        std::vector<int> t1s, t2s;
        const int r1max = floor_tol(dn / (ak * sub.nu));
        for (int r = 0; r <= r1max; ++r) t1s.push_back(wrap_translation(ceil_tol(sub.nu * ak * r), n));
        const int r2max = floor_tol(std::sqrt(dn) / (std::sqrt(ak) * sub.nu));
        for (int r = 0; r <= r2max; ++r)
            t2s.push_back(wrap_translation(ceil_tol(sub.nu * std::sqrt(ak * dn) * r), n));
        std::sort(t1s.begin(), t1s.end());
        t1s.erase(std::unique(t1s.begin(), t1s.end()), t1s.end());
        std::sort(t2s.begin(), t2s.end());
        t2s.erase(std::unique(t2s.begin(), t2s.end()), t2s.end());

        std::vector<int> shears;
        for (int l = -lmax; l <= lmax; ++l) shears.push_back(std::clamp(ceil_tol(shear_step * l), -(n / 2), n / 2));
        std::sort(shears.begin(), shears.end());
        shears.erase(std::unique(shears.begin(), shears.end()), shears.end());

        for (const int s : shears) {
            auto& ts = keyed[{a, s}];
            for (const int t1 : t1s)
                for (const int t2 : t2s) ts.emplace_back(t1, t2);
        }
    }
    std::vector<SubsampledSlice> out;
    out.reserve(keyed.size());
    for (auto& [key, ts] : keyed) {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        out.push_back({key.first, key.second, std::move(ts)});
    }
    return out;
}

std::size_t subsampled_cdsh_cardinality(int n, const ShearSubsampling& sub) {
    std::size_t total = 0;
    for (const auto& s : subsampled_cdsh_index(n, sub)) total += s.translations.size();
    return total;
}

Dictionary build_subsampled_cdsh(int n, const ShearSubsampling& sub, int quadrature) {
    const auto index = subsampled_cdsh_index(n, sub);
    std::vector<Slice> slices;
    slices.reserve(index.size());
    for (const auto& key : index) {
        Slice slice{origin_atom(key.scale, key.shear, n, quadrature), {}};
        slice.members.reserve(key.translations.size());
        for (const auto& [t1, t2] : key.translations)
            slice.members.push_back({Shift{t1 % n, t2 % n}, ShearletParams{key.scale, key.shear, t1, t2}});
        slices.push_back(std::move(slice));
    }
    Provenance prov{"shearlet",
                    "subsampled",
                    {{"n", n}, {"delta", sub.delta}, {"omega", sub.omega}, {"nu", sub.nu}, {"quadrature", quadrature}}};
    return Dictionary(Grid(n, 2), std::move(prov), std::move(slices));
}

double epsilon_bound(double delta, double omega, double nu, double lipschitz) {
    for (const double v : {delta, omega, nu, lipschitz})
        if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("epsilon_bound arguments must be >= 0");
    return 2.0 * delta / 3.0 + 3.0 * lipschitz * delta + omega + 3.0 * lipschitz * nu;
}

}  // namespace shearnet
