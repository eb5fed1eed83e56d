#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "snu/asymptotic.hpp"
#include "snu/experiments.hpp"
#include "snu/metrics.hpp"
#include "snu/profile_io.hpp"
#include "snu/sequence_io.hpp"

namespace py = pybind11;
using namespace snu;

namespace {

double extreal_out(ExtReal v) { return v.raw(); } // -inf encodes NEG_INF

py::dict report_to_dict(const ExperimentReport& rep) {
    py::dict d;
    d["name"] = rep.name;
    py::list rows;
    for (const auto& r : rep.rows) rows.append(py::make_tuple(r.key, r.measured, r.theory));
    d["rows"] = rows;
    d["fitted_exponent"] = rep.fitted_exponent ? py::object(py::float_(*rep.fitted_exponent))
                                               : py::object(py::none());
    d["theory_exponent"] = rep.theory_exponent ? py::object(py::float_(*rep.theory_exponent))
                                               : py::object(py::none());
    d["pass"] = rep.pass;
    d["tolerance"] = rep.tolerance;
    d["details"] = rep.details;
    d["json"] = rep.to_json().dump(2);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multiscale sequence space toolkit";

    py::register_exception<Error>(m, "SnuError");

    py::class_<ProfileSegment>(m, "ProfileSegment")
        .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("value"),
             py::arg("slope"))
        .def_readonly("alpha", &ProfileSegment::alpha)
        .def_readonly("value", &ProfileSegment::value)
        .def_readonly("slope", &ProfileSegment::slope)
        .def("__repr__", [](const ProfileSegment& s) {
            return "ProfileSegment(alpha=" + std::to_string(s.alpha) +
                   ", value=" + std::to_string(s.value) + ", slope=" + std::to_string(s.slope) +
                   ")";
        });

    py::class_<Profile>(m, "Profile")
        .def(py::init<std::vector<ProfileSegment>>(), py::arg("segments"))
        .def_static(
            "from_json",
            [](const std::string& text) { return profile_from_json(nlohmann::json::parse(text)); },
            py::arg("text"))
        .def("to_json", [](const Profile& p) { return profile_to_json(p).dump(2); })
        .def_property_readonly("alpha_min", &Profile::alpha_min)
        .def_property_readonly("alpha_max", &Profile::alpha_max)
        .def_property_readonly("segments", &Profile::segments)
        .def("eval", [](const Profile& p, double a) { return extreal_out(p.eval(a)); },
             py::arg("alpha"))
        .def("right_inf_derivative", &Profile::right_inf_derivative, py::arg("alpha"))
        .def("convexity_index", &Profile::convexity_index)
        .def("is_concave", [](const Profile& p) { return p.is_concave(); });

    m.def("load_profile", &load_profile, py::arg("path"));
    m.def("save_profile", &save_profile, py::arg("profile"), py::arg("path"));
    m.def("alpha_bounds", &alpha_bounds, py::arg("profile"));
    m.def(
        "clamp", [](double beta) { return extreal_out(clamp(ExtReal(beta))); }, py::arg("beta"),
        "projection onto {-inf} u [0, 1]");
    m.def("concave_conjugate", &concave_conjugate, py::arg("profile"), py::arg("p"));
    m.def(
        "inverse_conjugate",
        [](const std::function<double(double)>& eta, const std::vector<double>& grid,
           double alpha) { return inverse_conjugate(eta, grid, alpha); },
        py::arg("eta"), py::arg("p_grid"), py::arg("alpha"));
    m.def("dual_profile", &dual_profile, py::arg("profile"));
    m.def("shifted_dual", &shifted_dual, py::arg("profile"), py::arg("eps"));
    m.def("dual_conjugate", &dual_conjugate, py::arg("profile"), py::arg("p_prime"));
    m.def("dual_from_conjugate", &dual_from_conjugate, py::arg("profile"),
          py::arg("alpha_prime"));
    m.def("mean_value_equivalence", &mean_value_equivalence, py::arg("profile"), py::arg("p"));
    m.def(
        "check_dual_properties",
        [](const Profile& nu, double grid_step, double tol) {
            auto rep = check_dual_properties(nu, grid_step, tol);
            py::dict d;
            d["right_continuous"] = rep.right_continuous;
            d["duality"] = rep.duality;
            d["touching"] = rep.touching;
            d["slope"] = rep.slope;
            d["edge_min"] = rep.edge_min;
            d["edge_max"] = rep.edge_max;
            d["all"] = rep.all();
            d["detail"] = rep.detail;
            return d;
        },
        py::arg("profile"), py::arg("grid_step") = 1e-3, py::arg("tol") = 1e-9);

    py::class_<TreeSequence>(m, "TreeSequence")
        .def(py::init<std::uint32_t>(), py::arg("max_scale"))
        .def_property_readonly("max_scale", &TreeSequence::max_scale)
        .def("level",
             [](const TreeSequence& x, std::uint32_t j) {
                 auto lvl = x.level(j);
                 return std::vector<std::complex<double>>(lvl.begin(), lvl.end());
             },
             py::arg("j"))
        .def("__getitem__",
             [](const TreeSequence& x, std::pair<std::uint32_t, std::uint64_t> jk) {
                 return x.at(jk.first, jk.second);
             })
        .def("__setitem__",
             [](TreeSequence& x, std::pair<std::uint32_t, std::uint64_t> jk,
                std::complex<double> v) { x.at(jk.first, jk.second) = v; })
        .def("nonzero_count", &TreeSequence::nonzero_count, py::arg("j"))
        .def("__eq__", [](const TreeSequence& a, const TreeSequence& b) { return a == b; });

    m.def("unit_sequence", &unit_sequence, py::arg("max_scale"), py::arg("j"), py::arg("k"));
    m.def("spike_sequence", &spike_sequence, py::arg("max_scale"), py::arg("m"), py::arg("alpha"),
          py::arg("amplitude") = 1.0);
    m.def("staircase_sequence", &staircase_sequence, py::arg("profile"), py::arg("max_scale"),
          py::arg("alpha"), py::arg("amplitude") = 1.0);
    m.def("disjoint_translates", &disjoint_translates, py::arg("base"), py::arg("n_copies"),
          py::arg("j0"));
    m.def("random_sequence", &random_sequence, py::arg("profile"), py::arg("max_scale"),
          py::arg("seed") = 0);
    m.def(
        "linear_combine",
        [](const std::vector<std::complex<double>>& coeffs, const std::vector<TreeSequence>& xs) {
            return linear_combine(coeffs, xs);
        },
        py::arg("coeffs"), py::arg("sequences"));

    m.def("write_sequence", &write_sequence, py::arg("sequence"), py::arg("path"));
    m.def("read_sequence", &read_sequence, py::arg("path"));
    m.def("write_sequence_csv", &write_sequence_csv, py::arg("sequence"), py::arg("path"));
    m.def("read_sequence_csv", &read_sequence_csv, py::arg("path"));

    m.def(
        "distance_d",
        [](const TreeSequence& x, double alpha, double beta) {
            return distance_d(x, alpha, ExtReal(beta));
        },
        py::arg("sequence"), py::arg("alpha"), py::arg("beta"),
        "d_{alpha,beta}; pass beta=float('-inf') for the sup metric");
    m.def(
        "besov_norm",
        [](const TreeSequence& x, double alpha, double p) { return besov_norm(x, alpha, p); },
        py::arg("sequence"), py::arg("alpha"), py::arg("p"));
    m.def(
        "besov_sup",
        [](const TreeSequence& x, double alpha) { return besov_sup(x, alpha); },
        py::arg("sequence"), py::arg("alpha"));

    py::class_<SplitResult>(m, "SplitResult")
        .def_readonly("x_prime", &SplitResult::x_prime)
        .def_readonly("x_dblprime", &SplitResult::x_dblprime)
        .def_readonly("threshold", &SplitResult::threshold)
        .def_readonly("total", &SplitResult::total);
    m.def("interp_pnorm", &interp_pnorm, py::arg("sequence"), py::arg("profile"),
          py::arg("alpha"), py::arg("eps"));
    m.def(
        "besov_dominates_d",
        [](const TreeSequence& x, double alpha, double beta, double s, double p) {
            auto w = besov_dominates_d(x, alpha, beta, s, p);
            return py::make_tuple(w.holds, w.lhs, w.rhs);
        },
        py::arg("sequence"), py::arg("alpha"), py::arg("beta"), py::arg("s"), py::arg("p"));

    m.def("counting_function", &counting_function, py::arg("sequence"), py::arg("alpha"),
          py::arg("eps"), py::arg("j"));
    py::class_<ProfileEstimate>(m, "ProfileEstimate")
        .def_readonly("alpha_grid", &ProfileEstimate::alpha_grid)
        .def_readonly("eps_schedule", &ProfileEstimate::eps_schedule)
        .def_readonly("j_window", &ProfileEstimate::j_window)
        .def_readonly("values", &ProfileEstimate::values)
        .def_readonly("limit_values", &ProfileEstimate::limit_values);
    m.def(
        "estimate_profile",
        [](const TreeSequence& x, const std::vector<double>& grid,
           const std::vector<double>& eps, std::pair<std::uint32_t, std::uint32_t> window) {
            return estimate_profile(x, grid, eps, window);
        },
        py::arg("sequence"), py::arg("alpha_grid"), py::arg("eps_schedule"), py::arg("j_window"));
    m.def("write_estimate_csv", &write_estimate_csv, py::arg("estimate"), py::arg("path"));
    m.def(
        "membership_report",
        [](const TreeSequence& x, const Profile& nu, double tol) {
            auto rep = membership_report(x, nu, tol, default_alpha_grid(nu),
                                         default_eps_schedule(), default_j_window(x.max_scale()));
            py::dict d;
            d["pass"] = rep.pass;
            d["tol"] = rep.tol;
            py::list rows;
            for (const auto& r : rep.rows)
                rows.append(py::dict(py::arg("alpha") = r.alpha, py::arg("nu_hat") = r.nu_hat,
                                     py::arg("nu_value") = r.nu_value, py::arg("pass") = r.pass,
                                     py::arg("witness_scale") = r.witness_scale,
                                     py::arg("witness_count") = r.witness_count));
            d["rows"] = rows;
            return d;
        },
        py::arg("sequence"), py::arg("profile"), py::arg("tol") = 0.1);
    m.def("default_alpha_grid", &default_alpha_grid, py::arg("profile"));
    m.def("default_eps_schedule", &default_eps_schedule);

    m.def(
        "pairing",
        [](const TreeSequence& x, const TreeSequence& y, bool weighted) {
            auto r = pairing(x, y, weighted);
            return py::make_tuple(r.per_scale, r.total);
        },
        py::arg("x"), py::arg("y"), py::arg("weighted") = false,
        "per-scale partial sums and their total");

    m.def(
        "nonconvexity_witness",
        [](const Profile& nu, double p, double alpha, double alpha_prime, double eps,
           double lambda, const std::vector<std::uint32_t>& n_list, std::uint32_t max_scale) {
            ConvexityConfig cfg{nu, p, alpha, alpha_prime, eps, lambda, n_list};
            return report_to_dict(nonconvexity_witness(cfg, max_scale));
        },
        py::arg("profile"), py::arg("p"), py::arg("alpha"), py::arg("alpha_prime"),
        py::arg("eps"), py::arg("lam"), py::arg("n_list"), py::arg("max_scale"));
    m.def(
        "convexity_boundedness",
        [](const Profile& nu, double m_bound, double eps, double alpha, std::uint32_t n,
           std::uint32_t trials, std::uint64_t seed, std::uint32_t max_scale) {
            BoundednessConfig cfg{nu, m_bound, eps, alpha, n, trials, seed, max_scale};
            return report_to_dict(convexity_boundedness(cfg));
        },
        py::arg("profile"), py::arg("bound") = 1.0, py::arg("eps") = 0.2, py::arg("alpha") = 0.5,
        py::arg("n_elements") = 8, py::arg("trials") = 100, py::arg("seed") = 0,
        py::arg("max_scale") = 14);
    m.def(
        "nonnormability_witness",
        [](const Profile& nu, double alpha_n, double alpha_prime, double delta0,
           const std::vector<std::pair<double, double>>& ladder,
           const std::vector<std::uint32_t>& m_list, std::uint32_t max_scale) {
            NonnormabilityConfig cfg{nu, alpha_n, alpha_prime, delta0, ladder, m_list, max_scale};
            return report_to_dict(nonnormability_witness(cfg));
        },
        py::arg("profile"), py::arg("alpha_n"), py::arg("alpha_prime"), py::arg("delta0"),
        py::arg("ladder"), py::arg("m_list"), py::arg("max_scale") = 16);
    m.def(
        "divergence_witness",
        [](const TreeSequence& y, const Profile& nu, const std::vector<double>& eps_schedule,
           std::uint32_t max_scale) {
            auto res = divergence_witness(y, nu, eps_schedule, max_scale);
            return py::make_tuple(res.x, report_to_dict(res.report));
        },
        py::arg("y"), py::arg("profile"), py::arg("eps_schedule"), py::arg("max_scale"));
    m.def(
        "boundedness_experiment",
        [](const Profile& nu, double eps, std::uint64_t y_seed, std::uint32_t trials,
           std::uint64_t x_seed, std::uint32_t max_scale) {
            DualityBoundConfig cfg{nu, eps, y_seed, trials, x_seed, max_scale};
            return report_to_dict(boundedness_experiment(cfg));
        },
        py::arg("profile"), py::arg("eps") = 0.4, py::arg("y_seed") = 1, py::arg("trials") = 50,
        py::arg("x_seed") = 2, py::arg("max_scale") = 14);
    m.def(
        "symmetry_probe",
        [](const Profile& nu, const std::vector<double>& grid) {
            return report_to_dict(symmetry_probe(nu, grid));
        },
        py::arg("profile"), py::arg("alpha_grid"));
    m.def("symmetry_default_grid", &symmetry_default_grid, py::arg("profile"));
}
