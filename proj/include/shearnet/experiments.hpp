#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shearnet/dictionary.hpp"
#include "shearnet/shearlet.hpp"

namespace shearnet {

struct DictionaryConfig {
    std::string family = "haar";         // haar | shearlet
    std::string variant = "subsampled";  // full | subsampled
    double epsilon = 1.0;                // haar scale step
    ShearSubsampling shear;              // shearlet steps
    int quadrature = 4;
};

Dictionary build_dictionary(const DictionaryConfig& cfg, int n);

// Cardinality growth exponent e of the family: 1 for haar, 2 for shearlet.
double default_exponent(const std::string& family);

struct ThresholdConfig {
    std::string mode = "analytic";  // analytic | calibrated
    double eta = 0.1;
    double alpha = 0.05;
    int calibration_trials = 500;
};

struct ExperimentConfig {
    std::vector<int> grid_sizes;
    std::vector<double> multipliers;  // amplitude A = c sqrt(2 e ln n)
    int trials = 200;
    DictionaryConfig dictionary;
    std::string feature;              // planted family; empty = dictionary family
    ThresholdConfig threshold;
    std::optional<double> exponent;   // overrides default_exponent
    std::uint64_t seed = 0;
};

// Strict JSON mapping; unknown keys are rejected with ParameterError.
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DictionaryConfig& cfg);
DictionaryConfig dictionary_config_from_json(const nlohmann::json& j);

struct ReportRow {
    int n = 0;
    double c = 0.0;
    double amplitude = 0.0;
    double threshold = 0.0;
    double type1 = 0.0;
    std::optional<double> type2;  // empty for null-only runs
    double se_type1 = 0.0;
    std::optional<double> se_type2;
    int trials = 0;
    std::uint64_t seed = 0;

    std::optional<double> error_sum() const {
        if (!type2) return std::nullopt;
        return type1 + *type2;
    }
    std::optional<double> power() const {
        if (!type2) return std::nullopt;
        return 1.0 - *type2;
    }
};

struct ExperimentReport {
    std::string kind;  // fwer | power | scaling | baseline
    ExperimentConfig config;
    std::vector<ReportRow> rows;
    double runtime_seconds = 0.0;  // not exported; exports are deterministic

    const ReportRow& row(int n, double c) const;
};

// Monte Carlo standard error sqrt(p (1 - p) / trials).
double mc_standard_error(double p, int trials);

ExperimentReport run_null_fwer(const ExperimentConfig& cfg);
ExperimentReport run_power_curve(const ExperimentConfig& cfg);
ExperimentReport run_error_sum_scaling(const ExperimentConfig& cfg);
// Orthobasis needle problem; the dictionary block of cfg is ignored.
ExperimentReport run_needle_baseline(const ExperimentConfig& cfg);

struct MaxBoundResult {
    std::size_t m = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double threshold = 0.0;  // sqrt(2 ln m)
    double rate = 0.0;       // empirical P(max > threshold)
    double se = 0.0;
    double bound = 0.0;      // 1 / sqrt(4 pi ln m)
};

MaxBoundResult run_gaussian_max_bound(std::size_t m, int trials, std::uint64_t seed);

// Columns: n,c,type1,type2,error_sum,se_type1,se_type2,trials,seed.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
nlohmann::json report_json(const ExperimentReport& report);
void write_maxbound_csv(std::ostream& out, const MaxBoundResult& r);
nlohmann::json maxbound_json(const MaxBoundResult& r);

// Power (1 - type2) against c, one polyline per n.
std::string render_power_svg(const ExperimentReport& report);

}  // namespace shearnet
