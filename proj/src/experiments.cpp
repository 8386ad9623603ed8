#include "shearnet/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "shearnet/error.hpp"
#include "shearnet/glrt.hpp"
#include "shearnet/haar.hpp"
#include "shearnet/parallel.hpp"

namespace shearnet {

namespace {

constexpr std::uint64_t kNullCell = 0xffffffffULL;
constexpr std::uint64_t kCalibrationCell = 0xfffffffeULL;

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const char* where) {
    if (!j.is_object()) throw ParameterError(std::string(where) + " must be a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.contains(key)) throw ParameterError(std::string("unknown field '") + key + "' in " + where);
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("field '") + key + "': " + e.what());
    }
}

// Everything one cell of the Monte Carlo grid needs.
struct TrialModel {
    Grid grid;
    std::function<double(const Signal&)> statistic;
    // Writes amplitude * (random unit feature) into `x`, drawing from rng.
    std::function<void(RandomStream&, double, Signal&)> plant;
};

void add_atom(Signal& x, const Atom& g, double amplitude) {
    for (const auto& e : g.support) x[e.index] += amplitude * e.value;
}

double resolve_threshold(const ExperimentConfig& cfg, const TrialModel& model, double exponent, std::size_t n_idx) {
    const int n = model.grid.n;
    if (cfg.threshold.mode == "analytic") return analytic_threshold(cfg.threshold.eta, exponent, n);
    const auto& t = cfg.threshold;
    if (!(t.alpha > 0.0 && t.alpha < 1.0)) throw ParameterError("calibration level alpha must lie in (0, 1)");
    if (t.calibration_trials < 10) throw ParameterError("calibration needs >= 10 trials");
    // Same seeding as null_statistics(dict, trials, cal_seed).
    const std::uint64_t cal_seed = derive_stream({cfg.seed, n_idx, kCalibrationCell});
    std::vector<double> stats(static_cast<std::size_t>(t.calibration_trials));
    parallel_for(stats.size(), [&](std::size_t i) {
        Signal z(model.grid);
        fill_noise(z, {cal_seed, derive_stream({kCalibrationTag, i})});
        stats[i] = model.statistic(z);
    });
    return quantile_midpoint(std::move(stats), 1.0 - t.alpha);
}

// Fraction of trials rejecting at `threshold`. amplitude < 0 means pure noise.
double rejection_rate(const ExperimentConfig& cfg, const TrialModel& model, double threshold, double amplitude,
                      std::size_t n_idx, std::uint64_t cell) {
    std::vector<unsigned char> rejected(static_cast<std::size_t>(cfg.trials), 0);
    parallel_for(rejected.size(), [&](std::size_t i) {
        RandomStream rng({cfg.seed, derive_stream({n_idx, cell, i})});
        Signal x(model.grid);
        if (amplitude >= 0.0) model.plant(rng, amplitude, x);
        for (double& v : x.values()) v += rng.normal();
        rejected[i] = model.statistic(x) >= threshold ? 1 : 0;
    });
    std::size_t count = 0;
    for (const auto r : rejected) count += r;
    return static_cast<double>(count) / static_cast<double>(cfg.trials);
}

void validate_common(const ExperimentConfig& cfg) {
    if (cfg.trials < 10) throw ParameterError("experiments need >= 10 trials per cell, got " + std::to_string(cfg.trials));
    if (cfg.grid_sizes.empty()) throw ParameterError("experiment needs at least one grid size");
    for (const double c : cfg.multipliers)
        if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("amplitude multipliers must be finite and >= 0");
    if (cfg.threshold.mode != "analytic" && cfg.threshold.mode != "calibrated")
        throw ParameterError("threshold mode must be 'analytic' or 'calibrated'");
}

double exponent_of(const ExperimentConfig& cfg) {
    return cfg.exponent ? *cfg.exponent : default_exponent(cfg.dictionary.family);
}

struct GlrtModel {
    std::unique_ptr<Dictionary> dict;
    std::unique_ptr<FastStatistic> fast;
    TrialModel model;
};

GlrtModel make_glrt_model(const ExperimentConfig& cfg, int n) {
    GlrtModel g;
    g.dict = std::make_unique<Dictionary>(build_dictionary(cfg.dictionary, n));
    const Dictionary* dict = g.dict.get();
    if (dict->translation_structured()) {
        g.fast = std::make_unique<FastStatistic>(*dict);
        const FastStatistic* fast = g.fast.get();
        g.model.statistic = [fast](const Signal& x) { return (*fast)(x).value; };
    } else {
        g.model.statistic = [dict](const Signal& x) { return statistic_naive(*dict, x).value; };
    }
    g.model.grid = dict->grid();
    const int q = cfg.dictionary.quadrature;
    if (cfg.dictionary.family == "haar") {
        g.model.plant = [n](RandomStream& rng, double amp, Signal& x) {
            const auto a = static_cast<int>(rng.uniform_int(1, n / 2));
            const auto t = static_cast<int>(rng.uniform_int(1, n));
            add_atom(x, haar_atom({a, t}, n), amp);
        };
    } else {
        g.model.plant = [n, q](RandomStream& rng, double amp, Signal& x) {
            ShearletParams p;
            p.scale = static_cast<int>(rng.uniform_int(1, n));
            p.shear = static_cast<int>(rng.uniform_int(-(n / 2), n / 2));
            p.t1 = static_cast<int>(rng.uniform_int(1, n));
            p.t2 = static_cast<int>(rng.uniform_int(1, n));
            add_atom(x, digitize_atom(p, n, q), amp);
        };
    }
    return g;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Shared driver for power / scaling / baseline: per n, one null cell and one
// planted cell per multiplier.
template <typename ModelFactory>
ExperimentReport run_grid(const ExperimentConfig& cfg, std::string kind, double exponent, ModelFactory&& factory) {
    const auto t0 = Clock::now();
    ExperimentReport report{std::move(kind), cfg, {}, 0.0};
    for (std::size_t ni = 0; ni < cfg.grid_sizes.size(); ++ni) {
        const int n = cfg.grid_sizes[ni];
        auto holder = factory(n);
        const TrialModel& model = holder.model;
        const double thr = resolve_threshold(cfg, model, exponent, ni);
        const double type1 = rejection_rate(cfg, model, thr, -1.0, ni, kNullCell);
        for (std::size_t ci = 0; ci < cfg.multipliers.size(); ++ci) {
            const double c = cfg.multipliers[ci];
            const double amp = c * std::sqrt(2.0 * exponent * std::log(static_cast<double>(n)));
            const double power = rejection_rate(cfg, model, thr, amp, ni, ci);
            ReportRow row;
            row.n = n;
            row.c = c;
            row.amplitude = amp;
            row.threshold = thr;
            row.type1 = type1;
            row.type2 = 1.0 - power;
            row.se_type1 = mc_standard_error(type1, cfg.trials);
            row.se_type2 = mc_standard_error(power, cfg.trials);
            row.trials = cfg.trials;
            row.seed = cfg.seed;
            report.rows.push_back(row);
        }
    }
    report.runtime_seconds = seconds_since(t0);
    return report;
}

// Shortest representation that round-trips.
std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

Dictionary build_dictionary(const DictionaryConfig& cfg, int n) {
    if (cfg.family == "haar") {
        if (cfg.variant == "full") return build_full_haar(n);
        if (cfg.variant == "subsampled") return build_subsampled_haar(n, cfg.epsilon);
    } else if (cfg.family == "shearlet") {
        if (cfg.variant == "full") return build_full_cdsh(n, cfg.quadrature);
        if (cfg.variant == "subsampled") return build_subsampled_cdsh(n, cfg.shear, cfg.quadrature);
    } else {
        throw ParameterError("dictionary family must be 'haar' or 'shearlet', got '" + cfg.family + "'");
    }
    throw ParameterError("dictionary variant must be 'full' or 'subsampled', got '" + cfg.variant + "'");
}

double default_exponent(const std::string& family) {
    if (family == "haar") return 1.0;
    if (family == "shearlet") return 2.0;
    throw ParameterError("unknown dictionary family '" + family + "'");
}

nlohmann::json to_json(const DictionaryConfig& cfg) {
    return {
        {"family", cfg.family}, {"variant", cfg.variant}, {"epsilon", cfg.epsilon}, {"delta", cfg.shear.delta},
        {"omega", cfg.shear.omega}, {"nu", cfg.shear.nu}, {"quadrature", cfg.quadrature},
    };
}

DictionaryConfig dictionary_config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"family", "variant", "epsilon", "delta", "omega", "nu", "quadrature"}, "dictionary");
    DictionaryConfig cfg;
    read_field(j, "family", cfg.family);
    read_field(j, "variant", cfg.variant);
    read_field(j, "epsilon", cfg.epsilon);
    read_field(j, "delta", cfg.shear.delta);
    read_field(j, "omega", cfg.shear.omega);
    read_field(j, "nu", cfg.shear.nu);
    read_field(j, "quadrature", cfg.quadrature);
    return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j{
        {"grid_sizes", cfg.grid_sizes},
        {"multipliers", cfg.multipliers},
        {"trials", cfg.trials},
        {"dictionary", to_json(cfg.dictionary)},
        {"feature", cfg.feature},
        {"threshold",
         {{"mode", cfg.threshold.mode},
          {"eta", cfg.threshold.eta},
          {"alpha", cfg.threshold.alpha},
          {"calibration_trials", cfg.threshold.calibration_trials}}},
        {"seed", cfg.seed},
    };
    j["exponent"] = cfg.exponent ? nlohmann::json(*cfg.exponent) : nlohmann::json();
    return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"grid_sizes", "multipliers", "trials", "dictionary", "feature", "threshold", "exponent", "seed"},
                        "experiment config");
    ExperimentConfig cfg;
    read_field(j, "grid_sizes", cfg.grid_sizes);
    read_field(j, "multipliers", cfg.multipliers);
    read_field(j, "trials", cfg.trials);
    read_field(j, "feature", cfg.feature);
    read_field(j, "seed", cfg.seed);
    if (j.contains("dictionary")) cfg.dictionary = dictionary_config_from_json(j.at("dictionary"));
    if (j.contains("threshold")) {
        const auto& t = j.at("threshold");
        reject_unknown_keys(t, {"mode", "eta", "alpha", "calibration_trials"}, "threshold");
        read_field(t, "mode", cfg.threshold.mode);
        read_field(t, "eta", cfg.threshold.eta);
        read_field(t, "alpha", cfg.threshold.alpha);
        read_field(t, "calibration_trials", cfg.threshold.calibration_trials);
    }
    if (j.contains("exponent") && !j.at("exponent").is_null()) {
        double e = 0.0;
        read_field(j, "exponent", e);
        cfg.exponent = e;
    }
    return cfg;
}

const ReportRow& ExperimentReport::row(int n, double c) const {
    for (const auto& r : rows)
        if (r.n == n && r.c == c) return r;
    throw ParameterError("report has no row for n=" + std::to_string(n) + ", c=" + format_double(c));
}

double mc_standard_error(double p, int trials) {
    if (trials < 1) throw ParameterError("standard error needs >= 1 trial");
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / trials);
}

ExperimentReport run_null_fwer(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    if (cfg.multipliers.empty()) cfg.multipliers = {0.0};
    validate_common(cfg);
    if (cfg.multipliers != std::vector<double>{0.0}) throw ParameterError("fwer run takes multipliers = [0] only");
    const auto t0 = Clock::now();
    const double e = exponent_of(cfg);
    ExperimentReport report{"fwer", cfg, {}, 0.0};
    for (std::size_t ni = 0; ni < cfg.grid_sizes.size(); ++ni) {
        const int n = cfg.grid_sizes[ni];
        auto g = make_glrt_model(cfg, n);
        const double thr = resolve_threshold(cfg, g.model, e, ni);
        const double type1 = rejection_rate(cfg, g.model, thr, -1.0, ni, kNullCell);
        ReportRow row;
        row.n = n;
        row.threshold = thr;
        row.type1 = type1;
        row.se_type1 = mc_standard_error(type1, cfg.trials);
        row.trials = cfg.trials;
        row.seed = cfg.seed;
        report.rows.push_back(row);
    }
    report.runtime_seconds = seconds_since(t0);
    return report;
}

ExperimentReport run_power_curve(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.multipliers.empty()) throw ParameterError("power curve needs amplitude multipliers");
    if (!cfg.feature.empty() && cfg.feature != cfg.dictionary.family)
        throw ParameterError("feature family '" + cfg.feature + "' does not match dictionary family '" +
                             cfg.dictionary.family + "'");
    return run_grid(cfg, "power", exponent_of(cfg), [&](int n) { return make_glrt_model(cfg, n); });
}

ExperimentReport run_error_sum_scaling(const ExperimentConfig& cfg) {
    if (cfg.grid_sizes.size() < 2) throw ParameterError("error-sum scaling needs at least two grid sizes");
    auto report = run_power_curve(cfg);
    report.kind = "scaling";
    return report;
}

ExperimentReport run_needle_baseline(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.multipliers.empty()) throw ParameterError("needle baseline needs amplitude multipliers");
    for (const int n : cfg.grid_sizes)
        if (n < 2 || n % 2 != 0) throw InvalidDimension("needle baseline needs even n, got " + std::to_string(n));
    struct Holder {
        TrialModel model;
    };
    return run_grid(cfg, "baseline", 1.0, [](int n) {
        Holder h;
        h.model.grid = Grid(n, 1);
        h.model.statistic = [](const Signal& x) {
            double best = 0.0;
            for (const double v : haar_orthobasis_transform(x)) best = std::max(best, std::abs(v));
            return best;
        };
        h.model.plant = [n](RandomStream& rng, double amp, Signal& x) {
            const auto t = static_cast<int>(rng.uniform_int(1, n / 2));
            add_atom(x, haar_atom({1, 2 * t}, n), amp);
        };
        return h;
    });
}

MaxBoundResult run_gaussian_max_bound(std::size_t m, int trials, std::uint64_t seed) {
    if (m < 2) throw ParameterError("Gaussian max bound needs m >= 2");
    if (trials < 1) throw ParameterError("Gaussian max bound needs >= 1 trial");
    MaxBoundResult r;
    r.m = m;
    r.trials = trials;
    r.seed = seed;
    const double lm = std::log(static_cast<double>(m));
    r.threshold = std::sqrt(2.0 * lm);
    r.bound = 1.0 / std::sqrt(4.0 * std::numbers::pi * lm);
    std::vector<unsigned char> exceed(static_cast<std::size_t>(trials), 0);
    parallel_for(exceed.size(), [&](std::size_t i) {
        RandomStream rng({seed, derive_stream({m, i})});
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < m; ++k) mx = std::max(mx, rng.normal());
        exceed[i] = mx > r.threshold ? 1 : 0;
    });
    std::size_t count = 0;
    for (const auto e : exceed) count += e;
    r.rate = static_cast<double>(count) / trials;
    r.se = mc_standard_error(r.rate, trials);
    return r;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "n,c,type1,type2,error_sum,se_type1,se_type2,trials,seed\n";
    for (const auto& r : report.rows) {
        out << r.n << ',' << format_double(r.c) << ',' << format_double(r.type1) << ',' << format_optional(r.type2)
            << ',' << format_optional(r.error_sum()) << ',' << format_double(r.se_type1) << ','
            << format_optional(r.se_type2) << ',' << r.trials << ',' << r.seed << '\n';
    }
}

nlohmann::json report_json(const ExperimentReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({
            {"n", r.n},
            {"c", r.c},
            {"amplitude", r.amplitude},
            {"threshold", r.threshold},
            {"type1", r.type1},
            {"type2", optional_json(r.type2)},
            {"error_sum", optional_json(r.error_sum())},
            {"se_type1", r.se_type1},
            {"se_type2", optional_json(r.se_type2)},
            {"trials", r.trials},
            {"seed", r.seed},
        });
    }
    return {{"experiment", report.kind}, {"config", to_json(report.config)}, {"rows", rows}};
}

void write_maxbound_csv(std::ostream& out, const MaxBoundResult& r) {
    out << "m,trials,seed,threshold,rate,se,bound\n";
    out << r.m << ',' << r.trials << ',' << r.seed << ',' << format_double(r.threshold) << ','
        << format_double(r.rate) << ',' << format_double(r.se) << ',' << format_double(r.bound) << '\n';
}

nlohmann::json maxbound_json(const MaxBoundResult& r) {
    return {{"experiment", "maxbound"}, {"m", r.m},       {"trials", r.trials}, {"seed", r.seed},
            {"threshold", r.threshold}, {"rate", r.rate}, {"se", r.se},         {"bound", r.bound}};
}

std::string render_power_svg(const ExperimentReport& report) {
    constexpr double W = 640, H = 400, L = 60, R = 20, T = 30, B = 50;
    double cmax = 0.0;
    std::vector<int> ns;
    for (const auto& r : report.rows) {
        cmax = std::max(cmax, r.c);
        if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
    }
    if (cmax <= 0.0) cmax = 1.0;
    const auto px = [&](double c) { return L + (W - L - R) * c / cmax; };
    const auto py = [&](double p) { return H - B - (H - T - B) * p; };
    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << W - R << "\" y2=\"" << py(0)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << L << "\" y2=\"" << py(1)
        << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double p = k / 4.0;
        svg << "<text x=\"" << L - 8 << "\" y=\"" << py(p) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << p
            << "</text>\n";
        const double c = cmax * k / 4.0;
        svg << "<text x=\"" << px(c) << "\" y=\"" << py(0) + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
            << format_double(std::round(c * 1000) / 1000) << "</text>\n";
    }
    svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">amplitude multiplier c</text>\n";
    svg << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
        << (T + H - B) / 2 << ")\" text-anchor=\"middle\">power</text>\n";
    svg << "<text x=\"" << L << "\" y=\"18\" font-size=\"13\">" << report.kind << ": " << report.config.dictionary.family
        << " " << report.config.dictionary.variant << "</text>\n";
    for (std::size_t k = 0; k < ns.size(); ++k) {
        const char* color = colors[k % std::size(colors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& r : report.rows)
            if (r.n == ns[k] && r.power()) svg << px(r.c) << ',' << py(*r.power()) << ' ';
        svg << "\"/>\n";
        svg << "<text x=\"" << W - R - 70 << "\" y=\"" << T + 16 * (k + 1) << "\" font-size=\"11\" fill=\"" << color
            << "\">n=" << ns[k] << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace shearnet
