#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "shearnet/dictionary.hpp"

namespace shearnet {

// Piecewise-linear generator supported in [0,1]^2:
//   psi(x1, x2) = w(x1) T(x2),  T(u) = max(0, 1 - |2u - 1|),  w(u) = T(2u) - T(2u - 1).
// w has one vanishing moment. |T'| = 2, |w'| = 4 and |T|, |w| <= 1, so
//   |psi(x) - psi(y)| <= 4|x1 - y1| + 2|x2 - y2| <= 6 |x - y|_inf.
struct LipschitzShearlet {
    static constexpr double lipschitz_inf = 6.0;
    static constexpr double sup_norm = 1.0;

    static double tent(double u);
    static double wave(double u);
    double operator()(double x1, double x2) const { return wave(x1) * tent(x2); }
};

double generator_eval(double x1, double x2);

void validate_shearlet_params(const ShearletParams& p, int n);

// Cell integrals of psi(A_{a/n}^{-1} S_{s/n}^{-1}(x - t/n)) over the pixel
// cells (side 1/n, centered at i/n), q x q midpoint rule, periodized mod n
// on both axes, scaled by n^{5/4} a^{-3/4}, then unit-normalized. raw_norm
// keeps the scaled pre-normalization norm.
Atom digitize_atom(const ShearletParams& p, int n, int quadrature = 4);

// Full CDSH: a = 1..n, s = -n/2..n/2, all n^2 translations.
inline constexpr int kFullCdshCap = 32;
std::size_t full_cdsh_cardinality(int n);
Dictionary build_full_cdsh(int n, int quadrature = 4);

struct ShearSubsampling {
    double delta = 1.0;  // scale step: a_k = 2^{delta k}
    double omega = 1.0;  // shear step: omega sqrt(a_k n)
    double nu = 1.0;     // translation steps: (nu a_k, nu sqrt(a_k n))
};

// a_k = 2^{delta k} for k = 0..ceil(log2(n) / delta); the grid reaches a = n
// so that every scale of the full system is bracketed.
std::vector<double> subsampled_scales(int n, double delta);

// Rounded index set of CDSH^{delta,omega,nu}, grouped by (scale, shear).
// Translations are 1-based, sorted, deduplicated.
struct SubsampledSlice {
    int scale = 1;
    int shear = 0;
    std::vector<std::pair<int, int>> translations;
};
std::vector<SubsampledSlice> subsampled_cdsh_index(int n, const ShearSubsampling& sub);

std::size_t subsampled_cdsh_cardinality(int n, const ShearSubsampling& sub);

Dictionary build_subsampled_cdsh(int n, const ShearSubsampling& sub, int quadrature = 4);

// 2 delta / 3 + 3 C delta + omega + 3 C nu.
double epsilon_bound(double delta, double omega, double nu, double lipschitz);

}  // namespace shearnet
