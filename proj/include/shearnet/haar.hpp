#pragma once

#include <span>
#include <vector>

#include "shearnet/dictionary.hpp"

namespace shearnet {

// psi_{a,t}(i) = (chi_[0,a)(m) - chi_[a,2a)(m)) / sqrt(2a), m = (i - t + a) mod n.
// Half-open indicators keep integer-scale atoms exactly unit norm.
Atom haar_atom(HaarParams p, int n);

// Scales of W_eps: round(2^{eps k}) for k = 1..ceil((log2 n - 1) / eps),
// clamped to [1, n/2], deduplicated, ascending.
std::vector<int> haar_subsampled_scales(int n, double epsilon);

// All integer scales 1..n/2 crossed with all shifts; n^2/2 atoms.
Dictionary build_full_haar(int n);

Dictionary build_subsampled_haar(int n, double epsilon);

// Coefficients in the orthonormal basis of pairwise differences and pairwise
// averages on (2m, 2m+1), m = 0..n/2-1 (storage indices). Layout:
// [d_0 .. d_{n/2-1}, c_0 .. c_{n/2-1}], where d_m = <psi_{1, 2m+2}, x>.
std::vector<double> haar_orthobasis_transform(std::span<const double> x);
std::vector<double> haar_orthobasis_transform(const Signal& x);

// Basis vectors as rows of an n x n row-major matrix, in coefficient order.
std::vector<double> haar_orthobasis_matrix(int n);

}  // namespace shearnet
