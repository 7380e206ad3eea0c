#include "synlat/bloch.hpp"
#include "synlat/dynamics.hpp"
#include "synlat/errors.hpp"
#include "synlat/lattice.hpp"
#include "synlat/sweep.hpp"
#include "synlat/transfer.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace synlat;
namespace sw = synlat::sweep;

namespace {

std::string run_json(const std::string& subcommand, const std::string& config) {
    const auto result = sw::run(subcommand, nlohmann::json::parse(config));
    auto out = sw::manifest(result);
    out["data"] = nlohmann::json::object();
    for (const auto& t : result.tables) out["data"][t.name] = t.to_json();
    return out.dump();
}

std::string reproduce_json(const std::string& figure) {
    const auto result = sw::reproduce(figure);
    auto out = sw::manifest(result);
    out["data"] = nlohmann::json::object();
    for (const auto& t : result.tables) out["data"][t.name] = t.to_json();
    return out.dump();
}

} // namespace

PYBIND11_MODULE(_synlat, m) {
    m.doc() = "Synthetic-lattice simulations of facilitated Rydberg ladders";
    m.attr("__version__") = std::string(sw::kToolVersion);

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

    m.def(
        "bands",
        [](const std::string& lattice, int n) {
            const auto syn = synthesize(build_real_lattice(lattice_kind_from_string(lattice)));
            const auto grid = zone_grid(syn, n);
            const auto bs = band_structure(syn, grid);
            Eigen::MatrixXd k(static_cast<Eigen::Index>(grid.size()), 2);
            for (std::size_t i = 0; i < grid.size(); ++i) k.row(static_cast<Eigen::Index>(i)) = grid[i].transpose();
            return py::make_tuple(k, bs.bands, count_flat_bands(bs));
        },
        py::arg("lattice"), py::arg("n") = 32,
        "(k points, bands, flat band count) on an n-point (1D) or n x n (2D) zone grid");
    m.def("ladder_hamiltonian", py::overload_cast<int>(&ladder_hamiltonian), py::arg("length"));
    m.def(
        "psi_loc", [](int length, int rung) { return Eigen::VectorXd(psi_loc(length, rung).amplitudes.real()); },
        py::arg("length"), py::arg("rung"));
    m.def("clean_exponents", &clean_exponents, py::arg("energy"));
    m.def("run_json", &run_json, py::arg("subcommand"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("reproduce_json", &reproduce_json, py::arg("figure"), py::call_guard<py::gil_scoped_release>());
}
