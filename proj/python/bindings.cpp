#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shearnet/dictionary.hpp"
#include "shearnet/error.hpp"
#include "shearnet/experiments.hpp"
#include "shearnet/glrt.hpp"
#include "shearnet/haar.hpp"
#include "shearnet/shearlet.hpp"
#include "shearnet/signal.hpp"

namespace py = pybind11;
using namespace shearnet;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(std::span<const double> v, const Grid& g) {
    std::vector<py::ssize_t> shape;
    if (g.dims == 1) shape = {g.n};
    else shape = {g.n, g.n};
    Array out(shape);
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Array dense(const Atom& atom, const Grid& g) {
    std::vector<double> v(g.size(), 0.0);
    for (const auto& e : atom.support) v[e.index] = e.value;
    return to_array(v, g);
}

Signal to_signal(const Array& x) {
    const auto info = x.request();
    if (info.ndim == 1) {
        const int n = static_cast<int>(info.shape[0]);
        return Signal(Grid(n, 1), std::vector<double>(x.data(), x.data() + n));
    }
    if (info.ndim == 2 && info.shape[0] == info.shape[1]) {
        const int n = static_cast<int>(info.shape[0]);
        return Signal(Grid(n, 2), std::vector<double>(x.data(), x.data() + static_cast<std::size_t>(n) * n));
    }
    throw InvalidDimension("signal must be a 1D array or a square 2D array");
}

py::tuple stat_tuple(const TestStatistic& s) { return py::make_tuple(s.value, s.argmax, to_string(s.argmax_params)); }

}  // namespace

PYBIND11_MODULE(_shearnet, m) {
    m.doc() = "Haar and shearlet dictionaries, epsilon-nets and max-coefficient detection";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<InvalidDimension>(m, "InvalidDimension", base.ptr());
    py::register_exception<DegenerateAtom>(m, "DegenerateAtom", base.ptr());
    py::register_exception<GridMismatch>(m, "GridMismatch", base.ptr());
    py::register_exception<EmptyDictionary>(m, "EmptyDictionary", base.ptr());
    py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
    py::register_exception<NotTranslationStructured>(m, "NotTranslationStructured", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());

    m.def(
        "gen_noise",
        [](int n, int dims, std::uint64_t seed, std::uint64_t stream) {
            const Signal z = gen_noise(n, dims, {seed, stream});
            return to_array(z.values(), z.grid());
        },
        py::arg("n"), py::arg("dims") = 1, py::arg("seed") = 0, py::arg("stream") = 0);

    m.def(
        "haar_atom", [](int a, int t, int n) { return dense(haar_atom({a, t}, n), Grid(n, 1)); }, py::arg("scale"),
        py::arg("shift"), py::arg("n"));
    m.def("haar_subsampled_scales", &haar_subsampled_scales, py::arg("n"), py::arg("epsilon"));
    m.def(
        "haar_orthobasis_transform",
        [](const Array& x) {
            const Signal s = to_signal(x);
            return haar_orthobasis_transform(s);
        },
        py::arg("x"));

    m.def("generator_eval", &generator_eval, py::arg("x1"), py::arg("x2"));
    m.def(
        "digitize_atom",
        [](int a, int s, int t1, int t2, int n, int q) {
            return dense(digitize_atom({a, s, t1, t2}, n, q), Grid(n, 2));
        },
        py::arg("scale"), py::arg("shear"), py::arg("t1"), py::arg("t2"), py::arg("n"), py::arg("quadrature") = 4);
    m.def("epsilon_bound", &epsilon_bound, py::arg("delta"), py::arg("omega"), py::arg("nu"),
          py::arg("lipschitz") = LipschitzShearlet::lipschitz_inf);
    m.def("full_cdsh_cardinality", &full_cdsh_cardinality, py::arg("n"));
    m.def(
        "subsampled_cdsh_cardinality",
        [](int n, double delta, double omega, double nu) { return subsampled_cdsh_cardinality(n, {delta, omega, nu}); },
        py::arg("n"), py::arg("delta"), py::arg("omega"), py::arg("nu"));

    py::class_<Dictionary>(m, "Dictionary")
        .def_property_readonly("n", [](const Dictionary& d) { return d.grid().n; })
        .def_property_readonly("dims", [](const Dictionary& d) { return d.grid().dims; })
        .def("__len__", &Dictionary::size)
        .def("params", [](const Dictionary& d, std::size_t j) { return to_string(d.params(j)); })
        .def("atom", [](const Dictionary& d, std::size_t j) { return dense(d.atom(j), d.grid()); })
        .def("manifest_json", [](const Dictionary& d) { return d.manifest().dump(); });

    m.def("build_full_haar", &build_full_haar, py::arg("n"));
    m.def("build_subsampled_haar", &build_subsampled_haar, py::arg("n"), py::arg("epsilon"));
    m.def("build_full_cdsh", &build_full_cdsh, py::arg("n"), py::arg("quadrature") = 4);
    m.def(
        "build_subsampled_cdsh",
        [](int n, double delta, double omega, double nu, int q) { return build_subsampled_cdsh(n, {delta, omega, nu}, q); },
        py::arg("n"), py::arg("delta"), py::arg("omega"), py::arg("nu"), py::arg("quadrature") = 4);

    m.def(
        "statistic",
        [](const Dictionary& d, const Array& x, const std::string& method) {
            const Signal s = to_signal(x);
            py::gil_scoped_release release;
            if (method == "fft") return statistic_fft(d, s);
            if (method == "naive") return statistic_naive(d, s);
            throw ParameterError("method must be 'fft' or 'naive'");
        },
        py::arg("dictionary"), py::arg("x"), py::arg("method") = "fft");
    py::class_<TestStatistic>(m, "TestStatistic")
        .def_readonly("value", &TestStatistic::value)
        .def_readonly("argmax", &TestStatistic::argmax)
        .def_property_readonly("argmax_params", [](const TestStatistic& s) { return to_string(s.argmax_params); })
        .def("__iter__", [](const TestStatistic& s) { return py::iter(stat_tuple(s)); });

    m.def(
        "epsnet_maxmin",
        [](const Dictionary& full, const Dictionary& sub) {
            NetResult r;
            {
                py::gil_scoped_release release;
                r = epsnet_maxmin(full, sub);
            }
            return py::make_tuple(r.value, r.witness, to_string(r.witness_params));
        },
        py::arg("full"), py::arg("sub"));
    m.def(
        "effective_distance",
        [](const Dictionary& full, const Dictionary& sub, const Array& x) {
            return effective_distance(full, sub, to_signal(x));
        },
        py::arg("full"), py::arg("sub"), py::arg("x"));

    m.def("analytic_threshold", &analytic_threshold, py::arg("eta"), py::arg("exponent"), py::arg("n"));
    m.def(
        "calibrated_threshold",
        [](const Dictionary& d, double alpha, int trials, std::uint64_t seed) {
            py::gil_scoped_release release;
            return threshold({threshold_mode::Calibrated{alpha, trials, seed}}, d.grid().n, &d);
        },
        py::arg("dictionary"), py::arg("alpha"), py::arg("trials"), py::arg("seed") = 0);
    m.def("quantile_midpoint", &quantile_midpoint, py::arg("values"), py::arg("q"));
    m.def(
        "decide", [](double value, double thr) { return value >= thr ? "reject" : "accept"; }, py::arg("value"),
        py::arg("threshold"));

    m.def(
        "run_experiment",
        [](const std::string& kind, const std::string& config_json) {
            const ExperimentConfig cfg = experiment_config_from_json(nlohmann::json::parse(config_json));
            ExperimentReport r;
            {
                py::gil_scoped_release release;
                if (kind == "fwer") r = run_null_fwer(cfg);
                else if (kind == "power") r = run_power_curve(cfg);
                else if (kind == "scaling") r = run_error_sum_scaling(cfg);
                else if (kind == "baseline") r = run_needle_baseline(cfg);
                else throw ParameterError("unknown experiment '" + kind + "'");
            }
            return report_json(r).dump();
        },
        py::arg("kind"), py::arg("config_json"));
    m.def(
        "run_gaussian_max_bound",
        [](std::size_t mm, int trials, std::uint64_t seed) { return maxbound_json(run_gaussian_max_bound(mm, trials, seed)).dump(); },
        py::arg("m"), py::arg("trials"), py::arg("seed") = 0);
}
