#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sga/barycenter.hpp"
#include "sga/c_transform.hpp"
#include "sga/oracles.hpp"
#include "sga/ot.hpp"
#include "sga/poisson.hpp"
#include "sga/transport.hpp"

namespace py = pybind11;
using namespace sga;

namespace {

GridSpec grid_from_array(const py::array_t<double>& a) {
    if (a.ndim() < 1 || a.ndim() > 3)
        throw py::value_error("expected a 1D, 2D, or 3D array");
    std::vector<int> shape(a.ndim());
    for (py::ssize_t j = 0; j < a.ndim(); ++j) shape[j] = static_cast<int>(a.shape(j));
    return GridSpec::make(shape);
}

std::vector<double> values_from_array(const py::array_t<double>& a) {
    auto c = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(a);
    return std::vector<double>(c.data(), c.data() + c.size());
}

py::array_t<double> array_from_field(const GridSpec& g, const std::vector<double>& v) {
    std::vector<py::ssize_t> shape(g.dim);
    for (int j = 0; j < g.dim; ++j) shape[j] = g.shape[j];
    py::array_t<double> out(shape);
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

DensityField density_from_array(const py::array_t<double>& a, double floor) {
    auto g = grid_from_array(a);
    return normalize_density(values_from_array(a), g, floor);
}

py::dict log_to_dict(const ConvergenceLog& log) {
    py::list t, value, grad, eta;
    for (const auto& r : log.records) {
        t.append(r.t);
        value.append(r.value);
        grad.append(r.grad_h1);
        eta.append(r.eta);
    }
    py::dict d;
    d["t"] = t;
    d["value"] = value;
    d["grad_h1"] = grad;
    d["eta"] = eta;
    d["best_index"] = log.best_index;
    return d;
}

StepSchedule schedule_of(const std::string& kind, double step) {
    if (kind == "constant") return StepSchedule::constant(step);
    if (kind == "annealing") return StepSchedule::annealing(step);
    throw py::value_error("schedule must be 'constant' or 'annealing'");
}

SweepScheme scheme_of(const std::string& s) {
    if (s == "parallel") return SweepScheme::parallel;
    if (s == "sequential") return SweepScheme::sequential;
    if (s == "random") return SweepScheme::random;
    throw py::value_error("scheme must be 'parallel', 'sequential', or 'random'");
}

} // namespace

PYBIND11_MODULE(_sga, m) {
    m.doc() = "Sobolev gradient ascent solvers for exact Wasserstein barycenters on grids";

    py::register_exception<Error>(m, "SgaError");

    m.def(
        "normalize_density",
        [](const py::array_t<double>& raw, double floor) {
            auto d = density_from_array(raw, floor);
            return array_from_field(d.grid, d.values);
        },
        py::arg("raw"), py::arg("floor") = 0.0,
        "Rescale nonnegative values to a unit-integral density on [0,1]^d.");

    m.def(
        "c_transform",
        [](const py::array_t<double>& f) {
            PotentialField pf(grid_from_array(f), values_from_array(f));
            auto ct = c_transform_fast(pf);
            py::array_t<std::int32_t> am(static_cast<py::ssize_t>(ct.argmin.size()));
            std::copy(ct.argmin.begin(), ct.argmin.end(), am.mutable_data());
            return py::make_tuple(array_from_field(pf.grid, ct.fc.values), am);
        },
        py::arg("f"),
        "Exact discrete c-transform; returns (f^c, flat argmin indices).");

    m.def(
        "solve_neumann",
        [](const py::array_t<double>& rho) {
            PotentialField pf(grid_from_array(rho), values_from_array(rho));
            auto g = solve_neumann(pf);
            return array_from_field(g.grid, g.values);
        },
        py::arg("rho"),
        "Zero-Neumann Poisson solve of -lap g = rho for zero-mean rho.");

    m.def(
        "h1_norm",
        [](const py::array_t<double>& phi) {
            PotentialField pf(grid_from_array(phi), values_from_array(phi));
            return h1_norm(pf);
        },
        py::arg("phi"));

    m.def(
        "w2_distance",
        [](const py::array_t<double>& a, const py::array_t<double>& b, int iterations,
           double step, double floor) {
            W2Config cfg;
            cfg.iterations = iterations;
            cfg.schedule = StepSchedule::constant(step);
            return w2_distance(density_from_array(a, floor), density_from_array(b, floor), cfg);
        },
        py::arg("a"), py::arg("b"), py::arg("iterations") = 300, py::arg("step") = 0.1,
        py::arg("floor") = 0.0,
        "W2 distance via the back-and-forth two-marginal baseline.");

    m.def(
        "sga_ot",
        [](const py::array_t<double>& mu, const py::array_t<double>& nu, int iterations,
           const std::string& schedule, double step, double floor) {
            auto res = sga_two_marginal(density_from_array(mu, floor),
                                        density_from_array(nu, floor),
                                        schedule_of(schedule, step), iterations);
            py::dict d;
            d["f_best"] = array_from_field(res.f_best.grid, res.f_best.values);
            d["I_best"] = res.I_best;
            d["w2"] = res.w2;
            d["diverged"] = res.diverged;
            d["log"] = log_to_dict(res.log);
            return d;
        },
        py::arg("mu"), py::arg("nu"), py::arg("iterations") = 500,
        py::arg("schedule") = "constant", py::arg("step") = 0.1, py::arg("floor") = 0.0,
        "Two-marginal Sobolev gradient ascent (no c-concavity projection).");

    m.def(
        "sga_barycenter",
        [](const std::vector<py::array_t<double>>& marginals,
           const std::vector<double>& weights, int sweeps, const std::string& scheme,
           const std::string& schedule, double step, std::uint64_t seed, double floor,
           bool compute_primal) {
            std::vector<DensityField> dens;
            dens.reserve(marginals.size());
            for (const auto& a : marginals) dens.push_back(density_from_array(a, floor));
            std::vector<double> w = weights;
            if (w.empty()) w.assign(dens.size(), 1.0 / static_cast<double>(dens.size()));
            auto prob = BarycenterProblem::make(std::move(dens), Weights::make(w));
            BarycenterOptions opts;
            opts.compute_primal = compute_primal;
            auto res = sga_barycenter(prob, scheme_of(scheme), schedule_of(schedule, step),
                                      sweeps, seed, opts);
            py::dict d;
            d["barycenter"] = array_from_field(res.barycenter.grid, res.barycenter.values);
            d["D_best"] = res.D_best;
            d["B_value"] = res.B_value;
            d["gap"] = res.gap;
            d["diverged"] = res.diverged;
            d["log"] = log_to_dict(res.log);
            return d;
        },
        py::arg("marginals"), py::arg("weights") = std::vector<double>{},
        py::arg("sweeps") = 300, py::arg("scheme") = "parallel",
        py::arg("schedule") = "constant", py::arg("step") = 0.1, py::arg("seed") = 0,
        py::arg("floor") = 0.0, py::arg("compute_primal") = false,
        "Wasserstein barycenter via constraint-free Sobolev gradient ascent.");

    m.def(
        "quantile_w2_1d",
        [](const py::array_t<double>& a, const py::array_t<double>& b, int K) {
            return oracle::quantile_w2_1d(density_from_array(a, 0.0),
                                          density_from_array(b, 0.0), K);
        },
        py::arg("a"), py::arg("b"), py::arg("K") = 0,
        "Closed-form 1D W2 oracle from quantile functions.");
}
