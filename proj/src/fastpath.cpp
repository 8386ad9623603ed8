#include "shearnet/fastpath.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "shearnet/error.hpp"

namespace shearnet {

// FFTW planning is not thread-safe; execution on distinct arrays is. Plans are
// created once per grid under a global lock and executed with the new-array
// interface (FFTW_UNALIGNED because std::vector storage is used).
struct FourierGrid::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;

    Plans(const Grid& grid, std::size_t spectrum_size) {
        std::vector<double> real(grid.size());
        Spectrum cplx(spectrum_size);
        auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        if (grid.dims == 1) {
            forward = fftw_plan_dft_r2c_1d(grid.n, real.data(), c, flags);
            inverse = fftw_plan_dft_c2r_1d(grid.n, c, real.data(), flags);
        } else {
            forward = fftw_plan_dft_r2c_2d(grid.n, grid.n, real.data(), c, flags);
            inverse = fftw_plan_dft_c2r_2d(grid.n, grid.n, c, real.data(), flags);
        }
        if (!forward || !inverse) throw Error("FFTW failed to create a plan");
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
    ~Plans() {
        std::lock_guard lock(mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(inverse);
    }

    static std::mutex& mutex() {
        static std::mutex m;
        return m;
    }
};

FourierGrid::FourierGrid(Grid grid) : grid_(grid) {
    spectrum_size_ = grid.dims == 1 ? static_cast<std::size_t>(grid.n / 2 + 1)
                                    : static_cast<std::size_t>(grid.n) * static_cast<std::size_t>(grid.n / 2 + 1);
    plans_ = cached_plans(grid_, spectrum_size_);
}

Spectrum FourierGrid::forward(std::span<const double> values) const {
    if (values.size() != grid_.size()) throw GridMismatch("forward transform: size does not match the grid");
    std::vector<double> in(values.begin(), values.end());
    Spectrum out(spectrum_size_);
    fftw_execute_dft_r2c(plans_->forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

Spectrum FourierGrid::forward(const SparseVector& atom) const {
    std::vector<double> dense(grid_.size(), 0.0);
    for (const auto& e : atom) {
        if (e.index >= dense.size()) throw GridMismatch("atom support exceeds the grid");
        dense[e.index] = e.value;
    }
    return forward(dense);
}

void FourierGrid::inverse(Spectrum& spectrum, std::span<double> out) const {
    if (spectrum.size() != spectrum_size_ || out.size() != grid_.size())
        throw GridMismatch("inverse transform: size does not match the grid");
    fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(spectrum.data()), out.data());
}

std::shared_ptr<const FourierGrid::Plans> FourierGrid::cached_plans(const Grid& grid, std::size_t spectrum_size) {
    static std::map<std::pair<int, int>, std::weak_ptr<const FourierGrid::Plans>> cache;
    std::lock_guard lock(FourierGrid::Plans::mutex());
    auto& slot = cache[{grid.n, grid.dims}];
    if (auto p = slot.lock()) return p;
    auto p = std::make_shared<const FourierGrid::Plans>(grid, spectrum_size);
    slot = p;
    return p;
}

SliceSpectra::SliceSpectra(const Dictionary& dict) : fourier_(dict.grid()) {
    spectra_.reserve(dict.slices().size());
    for (const auto& s : dict.slices()) spectra_.push_back(fourier_.forward(s.origin.support));
}

CorrelationPlan::CorrelationPlan(const Signal& x) : fourier_(x.grid()), signal_spectrum_(fourier_.forward(x.values())) {}

CorrelationPlan::CorrelationPlan(const Signal& x, std::shared_ptr<const SliceSpectra> slices)
    : fourier_(x.grid()), signal_spectrum_(fourier_.forward(x.values())), slices_(std::move(slices)) {
    if (slices_ && slices_->fourier().grid() != x.grid())
        throw GridMismatch("correlation plan: cached spectra belong to another grid");
}

std::vector<double> CorrelationPlan::correlate_slice(const Atom& atom_at_origin) const {
    std::vector<double> out(grid().size());
    correlate_spectrum(fourier_.forward(atom_at_origin.support), out);
    return out;
}

void CorrelationPlan::correlate_cached(std::size_t slice, std::span<double> out) const {
    if (!slices_ || slice >= slices_->size()) throw ParameterError("correlation plan has no cached slice " + std::to_string(slice));
    correlate_spectrum((*slices_)[slice], out);
}

void CorrelationPlan::correlate_spectrum(const Spectrum& atom_spectrum, std::span<double> out) const {
    Spectrum product(signal_spectrum_.size());
    for (std::size_t k = 0; k < product.size(); ++k) product[k] = std::conj(atom_spectrum[k]) * signal_spectrum_[k];
    fourier_.inverse(product, out);
    const double scale = 1.0 / static_cast<double>(grid().size());
    for (double& v : out) v *= scale;
}

}  // namespace shearnet
