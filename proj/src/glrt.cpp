#include "shearnet/glrt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shearnet/error.hpp"
#include "shearnet/parallel.hpp"

namespace shearnet {

namespace {

constexpr double kTieTolerance = 1e-12;

// Running max with tolerant first-occurrence argmax.
struct ArgmaxTracker {
    double value = -1.0;
    std::size_t index = 0;

    void offer(double v, std::size_t j) {
        if (v > value * (1.0 + kTieTolerance) + 1e-300) {
            value = v;
            index = j;
        } else if (v > value) {
            value = v;
        }
    }
};

void check_grid(const Dictionary& dict, const Signal& x) {
    if (dict.grid() != x.grid()) throw GridMismatch("signal grid does not match the dictionary grid");
}

}  // namespace

TestStatistic statistic_naive(const Dictionary& dict, const Signal& x) {
    check_grid(dict, x);
    ArgmaxTracker best;
    std::size_t j = 0;
    for (const auto& s : dict.slices()) {
        for (const auto& m : s.members) {
            best.offer(std::abs(inner_translated(s.origin.support, m.shift, x)), j);
            ++j;
        }
    }
    return {best.value, best.index, dict.params(best.index)};
}

FastStatistic::FastStatistic(const Dictionary& dict) : dict_(&dict) {
    if (!dict.translation_structured())
        throw NotTranslationStructured("dictionary is not built from translation slices; use statistic_naive");
    spectra_ = std::make_shared<const SliceSpectra>(dict);
}

TestStatistic FastStatistic::operator()(const Signal& x) const {
    check_grid(*dict_, x);
    const CorrelationPlan plan(x, spectra_);
    const Grid& grid = x.grid();
    std::vector<double> corr(grid.size());
    ArgmaxTracker best;
    for (std::size_t si = 0; si < dict_->slices().size(); ++si) {
        plan.correlate_cached(si, corr);
        const auto& members = dict_->slices()[si].members;
        const std::size_t base = dict_->slice_offset(si);
        for (std::size_t mi = 0; mi < members.size(); ++mi) {
            const Shift d = members[mi].shift;
            const std::size_t t = grid.dims == 1 ? static_cast<std::size_t>(d.d1)
                                                 : static_cast<std::size_t>(d.d1) * static_cast<std::size_t>(grid.n) +
                                                       static_cast<std::size_t>(d.d2);
            best.offer(std::abs(corr[t]), base + mi);
        }
    }
    return {best.value, best.index, dict_->params(best.index)};
}

TestStatistic statistic_fft(const Dictionary& dict, const Signal& x) { return FastStatistic(dict)(x); }

double analytic_threshold(double eta, double exponent, int n) {
    if (!(eta > -1.0)) throw ParameterError("threshold slack eta must be > -1");
    if (!(exponent > 0.0)) throw ParameterError("dictionary exponent must be > 0");
    if (n < 2) throw InvalidDimension("threshold needs n >= 2");
    return std::sqrt(2.0 * (1.0 + eta) * exponent * std::log(static_cast<double>(n)));
}

double quantile_midpoint(std::vector<double> values, double q) {
    if (values.empty()) throw ParameterError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("quantile level must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    if (lo == hi) return values[lo];
    return 0.5 * (values[lo] + values[hi]);
}

std::vector<double> null_statistics(const Dictionary& dict, int trials, std::uint64_t seed) {
    if (trials < 1) throw ParameterError("null simulation needs >= 1 trial");
    std::vector<double> out(static_cast<std::size_t>(trials));
    const Grid grid = dict.grid();
    if (dict.translation_structured()) {
        const FastStatistic stat(dict);
        parallel_for(out.size(), [&](std::size_t i) {
            Signal z(grid);
            fill_noise(z, {seed, derive_stream({kCalibrationTag, i})});
            out[i] = stat(z).value;
        });
    } else {
        parallel_for(out.size(), [&](std::size_t i) {
            Signal z(grid);
            fill_noise(z, {seed, derive_stream({kCalibrationTag, i})});
            out[i] = statistic_naive(dict, z).value;
        });
    }
    return out;
}

namespace {

struct ThresholdResolver {
    int n;
    const Dictionary* dict;

    double operator()(const threshold_mode::Analytic& a) const { return analytic_threshold(a.eta, a.exponent, n); }

    double operator()(const threshold_mode::Calibrated& c) const {
        if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ParameterError("calibration level alpha must lie in (0, 1)");
        if (c.trials < 10) throw ParameterError("calibration needs >= 10 trials");
        if (!dict) throw ParameterError("calibrated threshold needs a dictionary");
        if (dict->grid().n != n) throw GridMismatch("calibration dictionary has a different grid size");
        return quantile_midpoint(null_statistics(*dict, c.trials, c.seed), 1.0 - c.alpha);
    }
};

}  // namespace

double threshold(const ThresholdSpec& spec, int n, const Dictionary* dict) {
    return std::visit(ThresholdResolver{n, dict}, spec.mode);
}

Decision decide(const TestStatistic& stat, double threshold) {
    return stat.value >= threshold ? Decision::Reject : Decision::Accept;
}

const char* to_string(Decision d) { return d == Decision::Reject ? "reject" : "accept"; }

double effective_distance(const Dictionary& full, const Dictionary& sub, const Signal& x) {
    if (full.grid() != sub.grid()) throw GridMismatch("effective_distance: dictionaries on different grids");
    check_grid(sub, x);
    const double top = statistic_naive(full, x).value;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sub.slices())
        for (const auto& m : s.members)
            best = std::min(best, std::abs(top - std::abs(inner_translated(s.origin.support, m.shift, x))));
    return best;
}

nlohmann::json detection_json(const TestStatistic& stat, double threshold, Decision decision, const Dictionary& dict,
                              std::uint64_t seed) {
    return {
        {"value", stat.value},
        {"argmax", params_json(stat.argmax_params)},
        {"threshold", threshold},
        {"decision", to_string(decision)},
        {"dictionary", dict.manifest()},
        {"seed", seed},
    };
}

}  // namespace shearnet
