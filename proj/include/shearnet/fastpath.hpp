#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "shearnet/dictionary.hpp"

namespace shearnet {

using Spectrum = std::vector<std::complex<double>>;

// Real-to-complex transforms on a circular 1D or 2D grid.
class FourierGrid {
public:
    explicit FourierGrid(Grid grid);

    const Grid& grid() const { return grid_; }
    std::size_t spectrum_size() const { return spectrum_size_; }

    Spectrum forward(std::span<const double> values) const;
    Spectrum forward(const SparseVector& atom) const;
    // Unnormalized inverse; `spectrum` is consumed as scratch.
    void inverse(Spectrum& spectrum, std::span<double> out) const;

private:
    struct Plans;
    static std::shared_ptr<const Plans> cached_plans(const Grid& grid, std::size_t spectrum_size);
    Grid grid_;
    std::size_t spectrum_size_ = 0;
    std::shared_ptr<const Plans> plans_;
};

// Spectra of every slice origin of a dictionary, computed once.
class SliceSpectra {
public:
    explicit SliceSpectra(const Dictionary& dict);

    const FourierGrid& fourier() const { return fourier_; }
    std::size_t size() const { return spectra_.size(); }
    const Spectrum& operator[](std::size_t slice) const { return spectra_[slice]; }

private:
    FourierGrid fourier_;
    std::vector<Spectrum> spectra_;
};

// Circular cross-correlation of atoms against one signal:
//   out[t] = <translate(atom, t), x> = sum_i atom(i - t) x(i).
class CorrelationPlan {
public:
    explicit CorrelationPlan(const Signal& x);
    CorrelationPlan(const Signal& x, std::shared_ptr<const SliceSpectra> slices);

    const Grid& grid() const { return fourier_.grid(); }

    std::vector<double> correlate_slice(const Atom& atom_at_origin) const;

    // Uses the cached spectrum of slice `slice`; out has grid().size() entries.
    void correlate_cached(std::size_t slice, std::span<double> out) const;

private:
    void correlate_spectrum(const Spectrum& atom_spectrum, std::span<double> out) const;

    FourierGrid fourier_;
    Spectrum signal_spectrum_;
    std::shared_ptr<const SliceSpectra> slices_;
};

}  // namespace shearnet
