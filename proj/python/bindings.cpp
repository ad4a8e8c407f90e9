#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mutwalk/exact.hpp"
#include "mutwalk/montecarlo.hpp"
#include "mutwalk/oracle.hpp"
#include "mutwalk/rational.hpp"

namespace py = pybind11;

namespace {

std::vector<std::string> exact_strings(const std::vector<mutwalk::rational::Rational>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(mutwalk::rational::to_string(x));
    return out;
}

mutwalk::SimConfig make_config(std::uint64_t seed, std::int64_t trials,
                               std::int64_t max_steps, int threads) {
    mutwalk::SimConfig cfg;
    cfg.seed = seed;
    cfg.n_trials = trials;
    cfg.max_steps_per_trial = max_steps;
    cfg.n_threads = threads;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    using namespace mutwalk;

    m.doc() = "mean passage times of the site-mutation random walk on "
              "Hamming classes: closed forms, series, linear-solve oracle, "
              "exact rationals, Monte Carlo";

    py::register_exception<NonConvergence>(m, "NonConvergenceError");
    py::register_exception<SingularSystem>(m, "SingularSystemError");
    py::register_exception<AllCensored>(m, "AllCensoredError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DomainError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<int, double>(), py::arg("n_sites"), py::arg("mut_prob"))
        .def_property_readonly("n_sites", &ModelParams::n_sites)
        .def_property_readonly("mut_prob", &ModelParams::mut_prob)
        .def_property_readonly("step_correlation", &ModelParams::step_correlation)
        .def("__repr__", [](const ModelParams& p) {
            std::ostringstream s;
            s << "ModelParams(n_sites=" << p.n_sites()
              << ", mut_prob=" << p.mut_prob() << ")";
            return s.str();
        });

    py::class_<SeriesControl>(m, "SeriesControl")
        .def(py::init([](double abs_tol, int max_terms, int min_terms) {
                 SeriesControl c{abs_tol, max_terms, min_terms};
                 c.validate();
                 return c;
             }),
             py::arg("abs_tol") = 1e-12, py::arg("max_terms") = 100000,
             py::arg("min_terms") = 8)
        .def_readwrite("abs_tol", &SeriesControl::abs_tol)
        .def_readwrite("max_terms", &SeriesControl::max_terms)
        .def_readwrite("min_terms", &SeriesControl::min_terms);

    py::class_<PassageTimeReport>(m, "PassageTimeReport")
        .def_readonly("from_class", &PassageTimeReport::from_class)
        .def_readonly("to_class", &PassageTimeReport::to_class)
        .def_readonly("value", &PassageTimeReport::value)
        .def_property_readonly(
            "method",
            [](const PassageTimeReport& r) { return to_string(r.method); })
        .def_readonly("error_bound", &PassageTimeReport::error_bound)
        .def_readonly("terms_used", &PassageTimeReport::terms_used)
        .def("__repr__", [](const PassageTimeReport& r) {
            std::ostringstream s;
            s << "PassageTimeReport(from_class=" << r.from_class
              << ", to_class=" << r.to_class << ", value=" << r.value
              << ", method='" << to_string(r.method) << "')";
            return s.str();
        });

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_readonly("mean", &EstimateReport::mean)
        .def_readonly("std_error", &EstimateReport::std_error)
        .def_readonly("ci95_low", &EstimateReport::ci95_low)
        .def_readonly("ci95_high", &EstimateReport::ci95_high)
        .def_readonly("n_trials", &EstimateReport::n_trials)
        .def_readonly("n_censored", &EstimateReport::n_censored)
        .def("__repr__", [](const EstimateReport& r) {
            std::ostringstream s;
            s << "EstimateReport(mean=" << r.mean << ", std_error="
              << r.std_error << ", n_trials=" << r.n_trials
              << ", n_censored=" << r.n_censored << ")";
            return s.str();
        });

    m.def("traversal_time", &traversal_time, py::arg("params"));
    m.def("return_time_zero", &return_time_zero, py::arg("params"));
    m.def("return_time_class", &return_time_class, py::arg("params"),
          py::arg("j"));
    m.def("passage_time_explicit", &passage_time_explicit, py::arg("params"),
          py::arg("i"), py::arg("j"), py::arg("ctrl") = SeriesControl{});
    m.def("passage_time_kac_series", &passage_time_kac_series,
          py::arg("params"), py::arg("i"), py::arg("j"),
          py::arg("ctrl") = SeriesControl{});
    m.def("phi", &phi, py::arg("params"), py::arg("k"), py::arg("z"));
    m.def("f_generating", &f_generating, py::arg("params"), py::arg("i"),
          py::arg("j"), py::arg("z"), py::arg("ctrl") = SeriesControl{});
    m.def("g_generating", &g_generating, py::arg("params"), py::arg("i"),
          py::arg("j"), py::arg("z"), py::arg("ctrl") = SeriesControl{});
    m.def("vandermonde_check", &vandermonde_check, py::arg("n"), py::arg("j"));

    m.def(
        "class_distribution",
        [](const ModelParams& p, int start, int n) {
            return class_distribution(p, start, n).probs();
        },
        py::arg("params"), py::arg("start_class"), py::arg("n"));
    m.def(
        "transition_matrix",
        [](const ModelParams& p) {
            const TransitionMatrix t = transition_matrix(p);
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < t.size(); ++i) rows.push_back(t.row(i).probs());
            return rows;
        },
        py::arg("params"));

    m.def(
        "hitting_times",
        [](const ModelParams& p, int j) {
            return hitting_times_solve(transition_matrix(p), j);
        },
        py::arg("params"), py::arg("j"),
        "linear-solve mean hitting times to class j from every start class");
    m.def(
        "lempot_residual",
        [](const ModelParams& p, int j) {
            return lempot_residual(transition_matrix(p), j);
        },
        py::arg("params"), py::arg("j"));
    m.def(
        "stationary",
        [](const ModelParams& p) {
            return stationary_distribution(transition_matrix(p)).probs();
        },
        py::arg("params"));
    m.def(
        "ergodic_residual",
        [](const ModelParams& p, int n) {
            return ergodic_limit_residual(transition_matrix(p), n);
        },
        py::arg("params"), py::arg("n"));
    m.def(
        "ehrenfest_hitting_times",
        [](int n_sites, int j) {
            return hitting_times_solve(ehrenfest_matrix(n_sites), j);
        },
        py::arg("n_sites"), py::arg("j"));

    m.def(
        "hitting_times_exact",
        [](int n_sites, const std::string& p_text, int j) {
            const auto p = rational::parse_rational(p_text, true);
            return exact_strings(rational::hitting_times_solve(
                rational::transition_matrix(n_sites, p), j));
        },
        py::arg("n_sites"), py::arg("p"), py::arg("j"),
        "exact hitting times as lowest-terms fraction strings");
    m.def(
        "lempot_residual_exact",
        [](int n_sites, const std::string& p_text, int j) {
            const auto p = rational::parse_rational(p_text, true);
            return rational::to_string(rational::lempot_residual(
                rational::transition_matrix(n_sites, p), j));
        },
        py::arg("n_sites"), py::arg("p"), py::arg("j"));
    m.def(
        "stationary_exact",
        [](int n_sites, const std::string& p_text) {
            const auto p = rational::parse_rational(p_text, true);
            return exact_strings(rational::stationary_distribution(
                rational::transition_matrix(n_sites, p)));
        },
        py::arg("n_sites"), py::arg("p"));
    m.def(
        "ehrenfest_hitting_times_exact",
        [](int n_sites, int j) {
            return exact_strings(rational::hitting_times_solve(
                rational::ehrenfest_matrix(n_sites), j));
        },
        py::arg("n_sites"), py::arg("j"));

    m.def(
        "estimate_hitting_time",
        [](const ModelParams& p, int start, int target, std::uint64_t seed,
           std::int64_t trials, std::int64_t max_steps, int threads) {
            return estimate_hitting_time(
                p, start, target, make_config(seed, trials, max_steps, threads));
        },
        py::arg("params"), py::arg("start_class"), py::arg("target_class"),
        py::arg("seed") = 0, py::arg("trials") = 10000,
        py::arg("max_steps") = std::int64_t(1) << 20, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "lumping_consistency",
        [](const ModelParams& p, int start, int n, std::uint64_t seed,
           std::int64_t trials, int threads) {
            return lumping_consistency(
                p, start, n,
                make_config(seed, trials, std::int64_t(1) << 20, threads));
        },
        py::arg("params"), py::arg("start_class"), py::arg("n"),
        py::arg("seed") = 0, py::arg("trials") = 10000, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

    m.attr("__version__") = "0.1.0";
}
