#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orbint/campaign.hpp"
#include "orbint/jordan.hpp"
#include "orbint/orbital.hpp"
#include "orbint/report.hpp"

namespace py = pybind11;
using namespace orbint;

namespace {

PAdic make(std::int64_t p, int r, std::int64_t u) { return PAdic::from_parts(p, r, u, PAdic::default_precision(p)); }

}  // namespace

PYBIND11_MODULE(_orbint, m) {
  m.doc() = "Exact p-adic orbital integrals";

  m.def("kloosterman", [](std::int64_t p, int r, std::int64_t u) { return value_json(kloosterman(p, r, u)).dump(); },
        py::arg("p"), py::arg("r"), py::arg("u") = 1);
  m.def("j_unit_closed", [](std::int64_t p, int r, std::int64_t u) { return value_json(j_unit_closed(make(p, r, u))).dump(); },
        py::arg("p"), py::arg("r"), py::arg("u") = 1);
  m.def("j_orbital_unit",
        [](std::int64_t p, int r, std::int64_t u) { return value_json(j_orbital(make(p, r, u), unit_fprime(p))).dump(); },
        py::arg("p"), py::arg("r"), py::arg("u") = 1);
  m.def("algebra_table", [](int id) { return model_algebra(id).to_json(); }, py::arg("model"));
  m.def("verify_fl", [](const std::string& config_json) {
    CommandResult res = cmd_verify_fl(Config::from_json(config_json));
    return py::make_tuple(res.exit_code, res.report.dump(), res.csv);
  });
  m.def("germ", [](const std::string& phi, std::optional<std::string> phiprime, int model, int r_probe) {
    CommandResult res = cmd_germ(Config{}, phi, phiprime, model, r_probe);
    return py::make_tuple(res.exit_code, res.report.dump());
  }, py::arg("phi"), py::arg("phiprime") = py::none(), py::arg("model") = 0, py::arg("r_probe") = 4);
  m.def("transfer", [](const std::string& target, int model, bool kuznetsov) {
    CommandResult res = cmd_transfer(Config{}, target, model, kuznetsov);
    return py::make_tuple(res.exit_code, res.report.dump());
  }, py::arg("target"), py::arg("model") = 1, py::arg("kuznetsov") = false);

  py::register_exception<Error>(m, "OrbintError");
}
