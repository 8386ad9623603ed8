#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shearnet/dictionary.hpp"
#include "shearnet/fastpath.hpp"

namespace shearnet {

// max over the dictionary of |<g, x>|. Values within a relative 1e-12 of each
// other count as ties and resolve to the earlier atom, so the naive and FFT
// paths agree on the argmax despite rounding differences.
struct TestStatistic {
    double value = 0.0;
    std::size_t argmax = 0;
    AtomParams argmax_params;
};

TestStatistic statistic_naive(const Dictionary& dict, const Signal& x);
TestStatistic statistic_fft(const Dictionary& dict, const Signal& x);

// Reusable FFT statistic for one dictionary: slice spectra are computed once.
class FastStatistic {
public:
    explicit FastStatistic(const Dictionary& dict);

    TestStatistic operator()(const Signal& x) const;
    const Dictionary& dictionary() const { return *dict_; }

private:
    const Dictionary* dict_;
    std::shared_ptr<const SliceSpectra> spectra_;
};

namespace threshold_mode {

// sqrt(2 (1 + eta) e ln n).
struct Analytic {
    double eta = 0.0;
    double exponent = 1.0;
};

// Empirical (1 - alpha) quantile of `trials` null statistics.
struct Calibrated {
    double alpha = 0.05;
    int trials = 1000;
    std::uint64_t seed = 0;
};

}  // namespace threshold_mode

struct ThresholdSpec {
    std::variant<threshold_mode::Analytic, threshold_mode::Calibrated> mode;
};

double analytic_threshold(double eta, double exponent, int n);

// Midpoint quantile: h = (m - 1) q; s[h] if h is integral, otherwise the mean
// of the two neighbouring order statistics.
double quantile_midpoint(std::vector<double> values, double q);

// Null statistics for calibration; trial i draws noise from
// NoiseSeed{seed, derive_stream({kCalibrationTag, i})}.
inline constexpr std::uint64_t kCalibrationTag = 0xca11b4a7e;
std::vector<double> null_statistics(const Dictionary& dict, int trials, std::uint64_t seed);

// Calibrated mode requires dict.
double threshold(const ThresholdSpec& spec, int n, const Dictionary* dict = nullptr);

enum class Decision { Accept, Reject };

// Reject iff stat.value >= threshold.
Decision decide(const TestStatistic& stat, double threshold);

const char* to_string(Decision d);

// min over sub of | G_full(x) - |<g, x>| |.
double effective_distance(const Dictionary& full, const Dictionary& sub, const Signal& x);

nlohmann::json detection_json(const TestStatistic& stat, double threshold, Decision decision,
                              const Dictionary& dict, std::uint64_t seed);

}  // namespace shearnet
