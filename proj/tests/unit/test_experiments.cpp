#include <doctest.h>

#include <cmath>
#include <sstream>

#include "shearnet/error.hpp"
#include "shearnet/experiments.hpp"

using namespace shearnet;

namespace {

ExperimentConfig small_haar(std::vector<int> ns, std::vector<double> cs, int trials = 60) {
    ExperimentConfig cfg;
    cfg.grid_sizes = std::move(ns);
    cfg.multipliers = std::move(cs);
    cfg.trials = trials;
    cfg.dictionary.family = "haar";
    cfg.dictionary.variant = "subsampled";
    cfg.dictionary.epsilon = 1.0;
    cfg.seed = 1234;
    return cfg;
}

std::string csv_of(const ExperimentReport& r) {
    std::ostringstream out;
    write_report_csv(out, r);
    return out.str();
}

}  // namespace

TEST_CASE("null fwer report") {
    const auto cfg = small_haar({32, 64}, {0.0});
    const auto r = run_null_fwer(cfg);
    CHECK(r.kind == "fwer");
    REQUIRE(r.rows.size() == 2);
    for (const auto& row : r.rows) {
        CHECK(row.c == 0.0);
        CHECK(row.type1 >= 0.0);
        CHECK(row.type1 <= 1.0);
        CHECK_FALSE(row.type2.has_value());
        CHECK(row.se_type1 == doctest::Approx(std::sqrt(row.type1 * (1 - row.type1) / row.trials)));
    }
    CHECK(csv_of(r) == csv_of(run_null_fwer(cfg)));
    CHECK(csv_of(run_null_fwer(small_haar({32, 64}, {}))) == csv_of(r));

    auto bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(run_null_fwer(bad), ParameterError);
    bad.trials = 9;
    CHECK_THROWS_AS(run_null_fwer(bad), ParameterError);
    CHECK_THROWS_AS(run_null_fwer(small_haar({32}, {0.0, 1.0})), ParameterError);
}

TEST_CASE("reports do not depend on the worker count") {
    const auto cfg = small_haar({32}, {0.5, 1.5}, 40);
    setenv("SHEARNET_THREADS", "1", 1);
    const std::string one = csv_of(run_power_curve(cfg));
    setenv("SHEARNET_THREADS", "3", 1);
    const std::string three = csv_of(run_power_curve(cfg));
    unsetenv("SHEARNET_THREADS");
    CHECK(one == three);
}

TEST_CASE("power curve") {
    auto cfg = small_haar({64}, {0.0, 0.5, 1.0, 2.0}, 200);
    const auto r = run_power_curve(cfg);
    REQUIRE(r.rows.size() == 4);
    for (const auto& row : r.rows) {
        REQUIRE(row.type2.has_value());
        CHECK(*row.error_sum() == row.type1 + *row.type2);
        CHECK(*row.error_sum() >= 0.0);
        CHECK(*row.error_sum() <= 2.0);
        CHECK(row.amplitude == doctest::Approx(row.c * std::sqrt(2.0 * std::log(64.0))));
    }
    // c = 0 is the null hypothesis.
    const auto& zero = r.row(64, 0.0);
    const double se = std::sqrt(zero.type1 * (1 - zero.type1) / zero.trials) + 1e-3;
    CHECK(std::abs(*zero.power() - zero.type1) <= 3.0 * std::sqrt(2.0) * se);
    // Power is nondecreasing in c up to MC error.
    for (std::size_t k = 1; k < r.rows.size(); ++k) {
        const auto& a = r.rows[k - 1];
        const auto& b = r.rows[k];
        CHECK(*b.power() >= *a.power() - 3.0 * (*a.se_type2 + *b.se_type2));
    }
    CHECK(*r.row(64, 2.0).power() > 0.9);

    cfg.feature = "shearlet";
    CHECK_THROWS_AS(run_power_curve(cfg), ParameterError);
    cfg.feature = "haar";
    CHECK_NOTHROW(run_power_curve(small_haar({16}, {1.0}, 10)));
    CHECK_THROWS_AS(run_power_curve(small_haar({16}, {}, 10)), ParameterError);
    CHECK_THROWS_AS(run_power_curve(small_haar({16}, {-1.0}, 10)), ParameterError);
}

TEST_CASE("error-sum scaling needs two grid sizes") {
    CHECK_THROWS_AS(run_error_sum_scaling(small_haar({64}, {1.0})), ParameterError);
    const auto r = run_error_sum_scaling(small_haar({32, 64}, {1.0}, 20));
    CHECK(r.kind == "scaling");
    CHECK(r.rows.size() == 2);
    const auto j = report_json(r);
    CHECK(j["config"]["seed"] == 1234);
    CHECK(j["config"]["grid_sizes"] == std::vector<int>{32, 64});
    CHECK(j["rows"][0]["seed"] == 1234);
}

TEST_CASE("needle baseline") {
    const auto cfg = small_haar({64}, {0.0, 2.0}, 100);
    const auto r = run_needle_baseline(cfg);
    CHECK(r.kind == "baseline");
    CHECK(r.rows.size() == 2);
    CHECK(r.rows[0].threshold == doctest::Approx(std::sqrt(2.2 * std::log(64.0))));
    CHECK(*r.rows[1].power() > 0.8);
    CHECK_THROWS_AS(run_needle_baseline(small_haar({63}, {1.0})), InvalidDimension);
}

TEST_CASE("shearlet power curve runs on a small grid") {
    ExperimentConfig cfg;
    cfg.grid_sizes = {8};
    cfg.multipliers = {0.0, 3.0};
    cfg.trials = 20;
    cfg.dictionary.family = "shearlet";
    cfg.dictionary.shear = {1.0, 1.0, 1.0};
    const auto r = run_power_curve(cfg);
    CHECK(r.rows.size() == 2);
    CHECK(r.rows[0].threshold == doctest::Approx(std::sqrt(2.0 * 1.1 * 2.0 * std::log(8.0))));
    CHECK(*r.rows[1].power() >= *r.rows[0].power());
}

TEST_CASE("calibrated threshold gives level alpha") {
    auto cfg = small_haar({64}, {0.0}, 1000);
    cfg.threshold.mode = "calibrated";
    cfg.threshold.alpha = 0.1;
    cfg.threshold.calibration_trials = 4000;
    const auto r = run_null_fwer(cfg);
    const double se = std::sqrt(0.1 * 0.9 / 1000);
    CHECK(std::abs(r.rows[0].type1 - 0.1) <= 3.0 * se);
    auto bad = cfg;
    bad.threshold.alpha = 1.5;
    CHECK_THROWS_AS(run_null_fwer(bad), ParameterError);
    bad = cfg;
    bad.threshold.mode = "magic";
    CHECK_THROWS_AS(run_null_fwer(bad), ParameterError);
}

TEST_CASE("gaussian max bound") {
    const auto r = run_gaussian_max_bound(100, 500, 3);
    CHECK(r.bound == doctest::Approx(0.1315).epsilon(1e-3));
    CHECK(r.threshold == doctest::Approx(std::sqrt(2.0 * std::log(100.0))));
    CHECK(r.rate >= 0.0);
    CHECK(r.rate <= 1.0);
    const auto again = run_gaussian_max_bound(100, 500, 3);
    CHECK(again.rate == r.rate);
    CHECK_THROWS_AS(run_gaussian_max_bound(1, 10, 3), ParameterError);
    std::ostringstream csv;
    write_maxbound_csv(csv, r);
    CHECK(csv.str().rfind("m,trials,seed,threshold,rate,se,bound\n", 0) == 0);
}

TEST_CASE("csv layout") {
    const auto f = run_null_fwer(small_haar({16}, {0.0}, 10));
    const std::string fcsv = csv_of(f);
    CHECK(fcsv.rfind("n,c,type1,type2,error_sum,se_type1,se_type2,trials,seed\n", 0) == 0);
    const std::string row = fcsv.substr(fcsv.find('\n') + 1);
    CHECK(row.rfind("16,0,", 0) == 0);
    CHECK(row.find(",,") != std::string::npos);  // empty type2 and error_sum

    const auto p = run_power_curve(small_haar({16}, {0.0, 0.6, 1.0, 1.5}, 10));
    const std::string pcsv = csv_of(p);
    CHECK(std::count(pcsv.begin(), pcsv.end(), '\n') == 5);
}

TEST_CASE("config json round trip and strictness") {
    auto cfg = small_haar({16, 32}, {0.5, 1.5}, 25);
    cfg.exponent = 1.5;
    cfg.threshold.mode = "calibrated";
    cfg.dictionary.shear = {0.25, 0.5, 0.75};
    const auto j = to_json(cfg);
    const auto back = experiment_config_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.exponent == 1.5);

    auto extra = j;
    extra["bogus"] = 1;
    CHECK_THROWS_AS(experiment_config_from_json(extra), ParameterError);
    auto nested = j;
    nested["dictionary"]["bogus"] = 1;
    CHECK_THROWS_AS(experiment_config_from_json(nested), ParameterError);
    auto wrong_type = j;
    wrong_type["trials"] = "many";
    CHECK_THROWS_AS(experiment_config_from_json(wrong_type), ParameterError);
}

TEST_CASE("svg plot") {
    const auto r = run_power_curve(small_haar({16, 32}, {0.0, 1.0}, 10));
    const std::string svg = render_power_svg(r);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(std::count(svg.begin(), svg.end(), 'p') > 0);
    std::size_t lines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++lines;
        ++pos;
    }
    CHECK(lines == 2);
}

TEST_CASE("build_dictionary dispatch") {
    DictionaryConfig d;
    d.family = "haar";
    d.variant = "full";
    CHECK(build_dictionary(d, 8).size() == 32);
    d.family = "shearlet";
    CHECK(build_dictionary(d, 4).size() == 320);
    d.family = "wavelet";
    CHECK_THROWS_AS(build_dictionary(d, 8), ParameterError);
    d.family = "haar";
    d.variant = "half";
    CHECK_THROWS_AS(build_dictionary(d, 8), ParameterError);
    CHECK(default_exponent("haar") == 1.0);
    CHECK(default_exponent("shearlet") == 2.0);
}
