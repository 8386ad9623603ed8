// shearnet command-line driver. Exit codes: 0 success, 1 runtime/data error,
// 2 usage/config error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "shearnet/dictionary.hpp"
#include "shearnet/error.hpp"
#include "shearnet/experiments.hpp"
#include "shearnet/glrt.hpp"
#include "shearnet/haar.hpp"
#include "shearnet/shearlet.hpp"
#include "shearnet/signal.hpp"
#include "shearnet/signal_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace shearnet;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!allowed.contains(k)) throw ConfigError("unknown field '" + k + "' in " + where);
}

template <typename T>
void take(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

// Settings shared by dict / detect / calibrate. Loaded from --config, then
// overridden by any flag given on the command line.
struct RunConfig {
    DictionaryConfig dict;
    std::optional<int> n;
    ThresholdConfig threshold;
    std::optional<double> exponent;
    std::uint64_t seed = 0;
    std::string input;
    std::string out;
};

struct RunFlags {
    std::string config;
    std::string family, variant, mode, input, out;
    int n = 0, quadrature = 4, trials = 0;
    double epsilon = 0, delta = 0, omega = 0, nu = 0, eta = 0, alpha = 0, exponent = 0;
    std::uint64_t seed = 0;
    std::map<std::string, CLI::Option*> opts;

    bool given(const std::string& name) const {
        auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }
};

void add_dict_flags(CLI::App* cmd, RunFlags& f) {
    f.opts["config"] = cmd->add_option("--config", f.config, "JSON config file");
    f.opts["family"] = cmd->add_option("--family", f.family, "haar | shearlet");
    f.opts["variant"] = cmd->add_option("--variant", f.variant, "full | subsampled");
    f.opts["n"] = cmd->add_option("-n,--n", f.n, "grid size");
    f.opts["epsilon"] = cmd->add_option("--epsilon", f.epsilon, "haar scale step");
    f.opts["delta"] = cmd->add_option("--delta", f.delta, "shearlet scale step");
    f.opts["omega"] = cmd->add_option("--omega", f.omega, "shearlet shear step");
    f.opts["nu"] = cmd->add_option("--nu", f.nu, "shearlet translation step");
    f.opts["quadrature"] = cmd->add_option("--quadrature", f.quadrature, "quadrature order per pixel axis");
    f.opts["out"] = cmd->add_option("--out", f.out, "output directory");
}

void add_threshold_flags(CLI::App* cmd, RunFlags& f) {
    f.opts["mode"] = cmd->add_option("--threshold-mode", f.mode, "analytic | calibrated");
    f.opts["eta"] = cmd->add_option("--eta", f.eta, "analytic threshold slack");
    f.opts["alpha"] = cmd->add_option("--alpha", f.alpha, "calibration level");
    f.opts["trials"] = cmd->add_option("--trials", f.trials, "calibration trials");
    f.opts["exponent"] = cmd->add_option("--exponent", f.exponent, "cardinality exponent e");
    f.opts["seed"] = cmd->add_option("--seed", f.seed, "master seed");
}

RunConfig resolve_run_config(const RunFlags& f) {
    RunConfig rc;
    if (!f.config.empty()) {
        const json j = load_json_file(f.config);
        check_keys(j, {"family", "variant", "n", "epsilon", "delta", "omega", "nu", "quadrature", "threshold", "exponent",
                       "seed", "input", "out"},
                   "config");
        take(j, "family", rc.dict.family);
        take(j, "variant", rc.dict.variant);
        if (j.contains("n")) {
            int n = 0;
            take(j, "n", n);
            rc.n = n;
        }
        take(j, "epsilon", rc.dict.epsilon);
        take(j, "delta", rc.dict.shear.delta);
        take(j, "omega", rc.dict.shear.omega);
        take(j, "nu", rc.dict.shear.nu);
        take(j, "quadrature", rc.dict.quadrature);
        if (j.contains("exponent")) {
            double e = 0;
            take(j, "exponent", e);
            rc.exponent = e;
        }
        take(j, "seed", rc.seed);
        take(j, "input", rc.input);
        take(j, "out", rc.out);
        if (j.contains("threshold")) {
            const json& t = j.at("threshold");
            check_keys(t, {"mode", "eta", "alpha", "calibration_trials"}, "threshold");
            take(t, "mode", rc.threshold.mode);
            take(t, "eta", rc.threshold.eta);
            take(t, "alpha", rc.threshold.alpha);
            take(t, "calibration_trials", rc.threshold.calibration_trials);
        }
    }
    if (f.given("family")) rc.dict.family = f.family;
    if (f.given("variant")) rc.dict.variant = f.variant;
    if (f.given("n")) rc.n = f.n;
    if (f.given("epsilon")) rc.dict.epsilon = f.epsilon;
    if (f.given("delta")) rc.dict.shear.delta = f.delta;
    if (f.given("omega")) rc.dict.shear.omega = f.omega;
    if (f.given("nu")) rc.dict.shear.nu = f.nu;
    if (f.given("quadrature")) rc.dict.quadrature = f.quadrature;
    if (f.given("mode")) rc.threshold.mode = f.mode;
    if (f.given("eta")) rc.threshold.eta = f.eta;
    if (f.given("alpha")) rc.threshold.alpha = f.alpha;
    if (f.given("trials")) rc.threshold.calibration_trials = f.trials;
    if (f.given("exponent")) rc.exponent = f.exponent;
    if (f.given("seed")) rc.seed = f.seed;
    if (f.given("input")) rc.input = f.input;
    if (f.given("out")) rc.out = f.out;

    if (rc.dict.family != "haar" && rc.dict.family != "shearlet")
        throw ConfigError("family must be 'haar' or 'shearlet'");
    if (rc.dict.variant != "full" && rc.dict.variant != "subsampled")
        throw ConfigError("variant must be 'full' or 'subsampled'");
    if (rc.threshold.mode != "analytic" && rc.threshold.mode != "calibrated")
        throw ConfigError("threshold mode must be 'analytic' or 'calibrated'");
    return rc;
}

int require_n(const RunConfig& rc) {
    if (!rc.n) throw ConfigError("grid size is required: pass -n <size> or set \"n\" in the config");
    return *rc.n;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string manifest_file_name(const RunConfig& rc, int n) {
    return rc.dict.family + "_" + rc.dict.variant + "_n" + std::to_string(n) + ".json";
}

int cmd_dict_build(const RunFlags& f) {
    const RunConfig rc = resolve_run_config(f);
    const int n = require_n(rc);
    if (rc.dict.family == "shearlet" && rc.dict.variant == "subsampled") {
        // Count first: huge grids would otherwise digitize every atom.
        std::cout << "atoms: " << subsampled_cdsh_cardinality(n, rc.dict.shear) << "\n";
    }
    const Dictionary dict = build_dictionary(rc.dict, n);
    json manifest = dict.manifest();
    if (rc.dict.family == "shearlet") manifest["parameters"]["quadrature"] = rc.dict.quadrature;
    if (!(rc.dict.family == "shearlet" && rc.dict.variant == "subsampled")) std::cout << "atoms: " << dict.size() << "\n";
    if (!rc.out.empty()) {
        const fs::path path = fs::path(rc.out) / manifest_file_name(rc, n);
        write_text(path, manifest.dump(2) + "\n");
        std::cout << "manifest: " << path.string() << "\n";
    } else {
        std::cout << manifest.dump(2) << "\n";
    }
    return 0;
}

int cmd_epsnet_check(const RunFlags& f) {
    const RunConfig rc = resolve_run_config(f);
    const int n = require_n(rc);
    double eps = 0.0;
    std::optional<Dictionary> full;
    std::optional<Dictionary> sub;
    if (rc.dict.family == "haar") {
        full.emplace(build_full_haar(n));
        eps = rc.dict.epsilon;
    } else {
        if (n > kFullCdshCap) {
            throw CapExceeded("full shearlet system at n=" + std::to_string(n) + " has " +
                              std::to_string(full_cdsh_cardinality(n)) + " atoms; brute-force check is capped at n=" +
                              std::to_string(kFullCdshCap));
        }
        const auto& s = rc.dict.shear;
        eps = epsilon_bound(s.delta, s.omega, s.nu, LipschitzShearlet::lipschitz_inf);
        full.emplace(build_full_cdsh(n, rc.dict.quadrature));
    }
    if (rc.dict.variant == "subsampled") sub.emplace(build_dictionary(rc.dict, n));
    const Dictionary& subd = sub ? *sub : *full;
    const double pairs = static_cast<double>(full->size()) * static_cast<double>(subd.size());
    if (pairs > kBruteForcePairCap) {
        std::ostringstream msg;
        msg << "brute-force check would compare " << full->size() << " x " << subd.size() << " = " << pairs
            << " atom pairs (cap " << kBruteForcePairCap << ")";
        throw CapExceeded(msg.str());
    }
    const NetResult r = epsnet_maxmin(*full, subd);
    const bool haar = rc.dict.family == "haar";
    const bool pass = haar ? r.value < eps : r.value <= eps;
    std::ostringstream line;
    line.precision(6);
    line << (pass ? "PASS" : "FAIL") << " maxmin=" << r.value << (pass ? (haar ? " < " : " <= ") : (haar ? " >= " : " > "))
         << eps;
    std::cout << line.str() << "\n";
    std::cout << "witness: " << to_string(r.witness_params) << "\n";
    std::cout << "analytic_epsilon: " << eps << "\n";
    std::cout << "full_atoms: " << full->size() << " sub_atoms: " << subd.size() << "\n";
    if (!rc.out.empty()) {
        json j{{"family", rc.dict.family}, {"variant", rc.dict.variant}, {"n", n},
               {"maxmin", r.value},        {"analytic_epsilon", eps},     {"pass", pass},
               {"witness", params_json(r.witness_params)},
               {"full_atoms", full->size()}, {"sub_atoms", subd.size()}, {"sub", to_json(rc.dict)}};
        write_text(fs::path(rc.out) / "epsnet.json", j.dump(2) + "\n");
    }
    return 0;
}

double resolve_threshold(const RunConfig& rc, const Dictionary& dict) {
    const int n = dict.grid().n;
    if (rc.threshold.mode == "analytic") {
        const double e = rc.exponent ? *rc.exponent : default_exponent(rc.dict.family);
        return threshold({threshold_mode::Analytic{rc.threshold.eta, e}}, n);
    }
    return threshold({threshold_mode::Calibrated{rc.threshold.alpha, rc.threshold.calibration_trials, rc.seed}}, n, &dict);
}

int cmd_detect(const RunFlags& f) {
    const RunConfig rc = resolve_run_config(f);
    if (rc.input.empty()) throw ConfigError("detect needs an input signal: --input <file>");
    const Signal x = load_signal(rc.input);
    const int want_dims = rc.dict.family == "haar" ? 1 : 2;
    if (x.grid().dims != want_dims)
        throw GridMismatch("signal is " + std::to_string(x.grid().dims) + "D but the " + rc.dict.family +
                           " dictionary needs " + std::to_string(want_dims) + "D");
    if (rc.n && *rc.n != x.grid().n)
        throw GridMismatch("signal has n=" + std::to_string(x.grid().n) + " but config asks for n=" +
                           std::to_string(*rc.n));
    const Dictionary dict = build_dictionary(rc.dict, x.grid().n);
    const TestStatistic stat = dict.translation_structured() ? statistic_fft(dict, x) : statistic_naive(dict, x);
    const double thr = resolve_threshold(rc, dict);
    const Decision d = decide(stat, thr);
    const std::string text = detection_json(stat, thr, d, dict, rc.seed).dump(2) + "\n";
    if (!rc.out.empty()) {
        const fs::path path = fs::path(rc.out) / "detection.json";
        write_text(path, text);
        std::cout << "decision: " << to_string(d) << "\ndetection: " << path.string() << "\n";
    } else {
        std::cout << text;
    }
    return 0;
}

int cmd_calibrate(RunFlags f) {
    RunConfig rc = resolve_run_config(f);
    rc.threshold.mode = "calibrated";
    const int n = require_n(rc);
    const Dictionary dict = build_dictionary(rc.dict, n);
    const double thr = resolve_threshold(rc, dict);
    json j{{"threshold", thr},
           {"mode", "calibrated"},
           {"alpha", rc.threshold.alpha},
           {"trials", rc.threshold.calibration_trials},
           {"seed", rc.seed},
           {"dictionary", dict.manifest()}};
    std::cout.precision(17);
    std::cout << "threshold: " << thr << "\n";
    if (!rc.out.empty()) write_text(fs::path(rc.out) / "calibration.json", j.dump(2) + "\n");
    return 0;
}

// ---- experiments -----------------------------------------------------------

struct ExperimentFlags {
    std::string config, out, family, variant, mode, feature;
    std::vector<int> grid_sizes;
    std::vector<double> multipliers;
    int trials = 0, quadrature = 4, calibration_trials = 0;
    double epsilon = 0, delta = 0, omega = 0, nu = 0, eta = 0, alpha = 0, exponent = 0;
    std::uint64_t seed = 0, m = 0;
    bool svg = false;
    std::map<std::string, CLI::Option*> opts;

    bool given(const std::string& name) const {
        auto it = opts.find(name);
        return it != opts.end() && it->second->count() > 0;
    }
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool maxbound) {
    f.opts["config"] = cmd->add_option("--config", f.config, "JSON experiment config");
    f.opts["seed"] = cmd->add_option("--seed", f.seed, "master seed");
    f.opts["out"] = cmd->add_option("--out", f.out, "output directory");
    f.opts["trials"] = cmd->add_option("--trials", f.trials, "Monte Carlo trials per cell");
    if (maxbound) {
        f.opts["m"] = cmd->add_option("--m", f.m, "number of Gaussian variables");
        return;
    }
    f.opts["svg"] = cmd->add_flag("--svg", f.svg, "also write an SVG power plot");
    f.opts["grid_sizes"] = cmd->add_option("--grid-sizes", f.grid_sizes, "grid sizes n")->delimiter(',');
    f.opts["multipliers"] = cmd->add_option("--multipliers", f.multipliers, "amplitude multipliers c")->delimiter(',');
    f.opts["family"] = cmd->add_option("--family", f.family, "haar | shearlet");
    f.opts["variant"] = cmd->add_option("--variant", f.variant, "full | subsampled");
    f.opts["feature"] = cmd->add_option("--feature", f.feature, "planted feature family");
    f.opts["epsilon"] = cmd->add_option("--epsilon", f.epsilon, "haar scale step");
    f.opts["delta"] = cmd->add_option("--delta", f.delta, "shearlet scale step");
    f.opts["omega"] = cmd->add_option("--omega", f.omega, "shearlet shear step");
    f.opts["nu"] = cmd->add_option("--nu", f.nu, "shearlet translation step");
    f.opts["quadrature"] = cmd->add_option("--quadrature", f.quadrature, "quadrature order");
    f.opts["mode"] = cmd->add_option("--threshold-mode", f.mode, "analytic | calibrated");
    f.opts["eta"] = cmd->add_option("--eta", f.eta, "analytic threshold slack");
    f.opts["alpha"] = cmd->add_option("--alpha", f.alpha, "calibration level");
    f.opts["calibration_trials"] = cmd->add_option("--calibration-trials", f.calibration_trials, "calibration trials");
    f.opts["exponent"] = cmd->add_option("--exponent", f.exponent, "cardinality exponent e");
}

ExperimentConfig resolve_experiment_config(const ExperimentFlags& f) {
    ExperimentConfig cfg;
    if (!f.config.empty()) {
        try {
            cfg = experiment_config_from_json(load_json_file(f.config));
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
    }
    if (f.given("seed")) cfg.seed = f.seed;
    if (f.given("trials")) cfg.trials = f.trials;
    if (f.given("grid_sizes")) cfg.grid_sizes = f.grid_sizes;
    if (f.given("multipliers")) cfg.multipliers = f.multipliers;
    if (f.given("family")) cfg.dictionary.family = f.family;
    if (f.given("variant")) cfg.dictionary.variant = f.variant;
    if (f.given("feature")) cfg.feature = f.feature;
    if (f.given("epsilon")) cfg.dictionary.epsilon = f.epsilon;
    if (f.given("delta")) cfg.dictionary.shear.delta = f.delta;
    if (f.given("omega")) cfg.dictionary.shear.omega = f.omega;
    if (f.given("nu")) cfg.dictionary.shear.nu = f.nu;
    if (f.given("quadrature")) cfg.dictionary.quadrature = f.quadrature;
    if (f.given("mode")) cfg.threshold.mode = f.mode;
    if (f.given("eta")) cfg.threshold.eta = f.eta;
    if (f.given("alpha")) cfg.threshold.alpha = f.alpha;
    if (f.given("calibration_trials")) cfg.threshold.calibration_trials = f.calibration_trials;
    if (f.given("exponent")) cfg.exponent = f.exponent;
    return cfg;
}

void emit_report(const ExperimentReport& report, const ExperimentFlags& f) {
    std::ostringstream csv;
    write_report_csv(csv, report);
    if (f.out.empty()) {
        std::cout << csv.str();
        return;
    }
    const fs::path dir(f.out);
    write_text(dir / (report.kind + ".csv"), csv.str());
    write_text(dir / (report.kind + ".json"), report_json(report).dump(2) + "\n");
    if (f.svg) write_text(dir / (report.kind + ".svg"), render_power_svg(report));
    std::cout << "wrote " << (dir / (report.kind + ".csv")).string() << " (" << report.rows.size() << " rows, "
              << report.runtime_seconds << " s)\n";
}

int cmd_experiment(const std::string& kind, const ExperimentFlags& f) {
    if (kind == "maxbound") {
        std::uint64_t m = 10000, seed = 0;
        int trials = 2000;
        if (!f.config.empty()) {
            const json j = load_json_file(f.config);
            check_keys(j, {"m", "trials", "seed"}, "maxbound config");
            take(j, "m", m);
            take(j, "trials", trials);
            take(j, "seed", seed);
        }
        if (f.given("m")) m = f.m;
        if (f.given("trials")) trials = f.trials;
        if (f.given("seed")) seed = f.seed;
        const MaxBoundResult r = run_gaussian_max_bound(m, trials, seed);
        std::ostringstream csv;
        write_maxbound_csv(csv, r);
        if (f.out.empty()) {
            std::cout << csv.str();
        } else {
            write_text(fs::path(f.out) / "maxbound.csv", csv.str());
            write_text(fs::path(f.out) / "maxbound.json", maxbound_json(r).dump(2) + "\n");
            std::cout << "rate " << r.rate << " bound " << r.bound << "\n";
        }
        return 0;
    }
    const ExperimentConfig cfg = resolve_experiment_config(f);
    ExperimentReport report;
    if (kind == "fwer") report = run_null_fwer(cfg);
    else if (kind == "power") report = run_power_curve(cfg);
    else if (kind == "scaling") report = run_error_sum_scaling(cfg);
    else report = run_needle_baseline(cfg);
    emit_report(report, f);
    return 0;
}

// ---- signal synth ----------------------------------------------------------

struct SynthFlags {
    std::string kind = "haar", out;
    int n = 0, scale = 1, shift = 1, shear = 0, t1 = 1, t2 = 1, lo = 1, hi = 2, quadrature = 4;
    double amplitude = 1.0;
    bool noise = false;
    std::uint64_t seed = 0, stream = 0;
};

int cmd_signal_synth(const SynthFlags& f) {
    FeatureSpec spec;
    spec.amplitude = f.amplitude;
    if (f.kind == "haar") spec.kind = feature::HaarJump{f.scale, f.shift};
    else if (f.kind == "interval") spec.kind = feature::Interval{f.lo, f.hi};
    else if (f.kind == "shearlet") spec.kind = feature::ShearletAtom{f.scale, f.shear, f.t1, f.t2, f.quadrature};
    else if (f.kind == "zero") spec.kind = feature::None{};
    else throw ConfigError("feature kind must be haar | interval | shearlet | zero");
    Signal x = synthesize(spec, f.n);
    if (f.noise) x = add(x, gen_noise(x.grid().n, x.grid().dims, {f.seed, f.stream}));
    save_signal(f.out, x);
    std::cout << "wrote " << f.out << " (" << x.grid().dims << "D, n=" << x.grid().n << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shearnet: Haar and shearlet dictionaries, epsilon-nets and max-coefficient detection"};
    app.require_subcommand(1);

    auto* dict = app.add_subcommand("dict", "dictionary construction and net checks");
    dict->require_subcommand(1);
    RunFlags build_flags, net_flags, detect_flags, calib_flags;
    auto* build = dict->add_subcommand("build", "build a dictionary and write its manifest");
    add_dict_flags(build, build_flags);
    auto* net = dict->add_subcommand("epsnet-check", "brute-force max-min distance of a subsampled system");
    add_dict_flags(net, net_flags);

    auto* detect = app.add_subcommand("detect", "run the max-coefficient test on a signal file");
    add_dict_flags(detect, detect_flags);
    add_threshold_flags(detect, detect_flags);
    detect_flags.opts["input"] = detect->add_option("--input,-i", detect_flags.input, "signal file (.csv or SIG1 binary)");

    auto* calibrate = app.add_subcommand("calibrate", "Monte Carlo null quantile threshold");
    add_dict_flags(calibrate, calib_flags);
    add_threshold_flags(calibrate, calib_flags);

    auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiments");
    experiment->require_subcommand(1);
    std::map<std::string, ExperimentFlags> exp_flags;
    std::map<std::string, CLI::App*> exp_cmds;
    for (const char* kind : {"fwer", "power", "scaling", "baseline", "maxbound"}) {
        auto* cmd = experiment->add_subcommand(kind);
        add_experiment_flags(cmd, exp_flags[kind], std::string(kind) == "maxbound");
        exp_cmds[kind] = cmd;
    }

    auto* signal = app.add_subcommand("signal", "signal utilities");
    signal->require_subcommand(1);
    SynthFlags synth_flags;
    auto* synth = signal->add_subcommand("synth", "write amplitude * feature (+ optional noise) to a file");
    synth->add_option("--kind", synth_flags.kind, "haar | interval | shearlet | zero");
    synth->add_option("-n,--n", synth_flags.n, "grid size")->required();
    synth->add_option("--scale", synth_flags.scale);
    synth->add_option("--shift", synth_flags.shift);
    synth->add_option("--shear", synth_flags.shear);
    synth->add_option("--t1", synth_flags.t1);
    synth->add_option("--t2", synth_flags.t2);
    synth->add_option("--lo", synth_flags.lo);
    synth->add_option("--hi", synth_flags.hi);
    synth->add_option("--quadrature", synth_flags.quadrature);
    synth->add_option("--amplitude", synth_flags.amplitude);
    synth->add_flag("--noise", synth_flags.noise, "add N(0,1) noise");
    synth->add_option("--seed", synth_flags.seed);
    synth->add_option("--stream", synth_flags.stream);
    synth->add_option("--out", synth_flags.out, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (build->parsed()) return cmd_dict_build(build_flags);
        if (net->parsed()) return cmd_epsnet_check(net_flags);
        if (detect->parsed()) return cmd_detect(detect_flags);
        if (calibrate->parsed()) return cmd_calibrate(calib_flags);
        for (const auto& [kind, cmd] : exp_cmds)
            if (cmd->parsed()) return cmd_experiment(kind, exp_flags[kind]);
        if (synth->parsed()) return cmd_signal_synth(synth_flags);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const InvalidDimension& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const CapExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
