// Copyright 2026 The ptdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ptdd/commands.h"
#include "ptdd/errors.h"

namespace py = pybind11;

namespace {

using Array = py::array_t<std::complex<double>>;

Array to_array(const ptdd::Operator2 &a) {
    Array out({2, 2});
    auto m = out.mutable_unchecked<2>();
    m(0, 0) = a.a00;
    m(0, 1) = a.a01;
    m(1, 0) = a.a10;
    m(1, 1) = a.a11;
    return out;
}

ptdd::Operator2 from_array(const py::array_t<std::complex<double>, py::array::forcecast> &a) {
    if (a.ndim() != 2 || a.shape(0) != 2 || a.shape(1) != 2) {
        throw py::value_error("expected a 2x2 matrix");
    }
    auto m = a.unchecked<2>();
    return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

py::dict table_to_dict(const ptdd::ResultTable &t) {
    py::dict d;
    d["header"] = t.header;
    d["columns"] = t.columns;
    d["rows"] = t.rows;
    d["csv"] = t.to_csv();
    return d;
}

py::dict report_to_dict(const ptdd::Report &r) {
    py::list checks;
    for (const auto &c : r.checks) {
        checks.append(py::make_tuple(c.name, c.pass, c.detail));
    }
    py::dict d;
    d["text"] = r.text;
    d["checks"] = checks;
    d["passed"] = r.pass();
    return d;
}

ptdd::ExperimentConfig config_from(const std::string &preset, const std::string &config,
                                   const std::map<std::string, std::string> &overrides) {
    ptdd::ExperimentConfig cfg = preset.empty() ? ptdd::parse_config(config) : ptdd::preset_config(preset);
    if (!preset.empty() && !config.empty()) {
        throw ptdd::ConfigError("give either a preset or a config text, not both");
    }
    for (const auto &[key, value] : overrides) {
        ptdd::apply_setting(cfg, key, value);
    }
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dynamical decoupling under PT-symmetric qubit Hamiltonians";

    auto error = py::register_exception<ptdd::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ptdd::ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<ptdd::DomainError>(m, "DomainError", error.ptr());
    py::register_exception<ptdd::RangeError>(m, "RangeError", error.ptr());
    py::register_exception<ptdd::DegenerateStateError>(m, "DegenerateStateError", error.ptr());
    py::register_exception<ptdd::InvalidPulseError>(m, "InvalidPulseError", error.ptr());

    m.attr("__version__") = PTDD_VERSION;
    m.attr("UNIT_CONVENTION") = std::string(ptdd::kUnitConvention);

    py::class_<ptdd::PTParams>(m, "PTParams")
        .def(py::init<double, double>(), py::arg("coupling"), py::arg("loss"))
        .def_property_readonly("coupling", &ptdd::PTParams::coupling)
        .def_property_readonly("loss", &ptdd::PTParams::loss)
        .def("__repr__", [](const ptdd::PTParams &p) {
            return "PTParams(coupling=" + ptdd::format_real(p.coupling()) + ", loss=" + ptdd::format_real(p.loss()) +
                   ")";
        });

    m.def("phase", [](const ptdd::PTParams &p) { return std::string(ptdd::to_string(ptdd::classify_phase(p))); });
    m.def("not_gate_time", &ptdd::not_gate_time, py::arg("params"));
    m.def("ideal_period", &ptdd::ideal_period, py::arg("params"));
    m.def("h_pt", [](const ptdd::PTParams &p) { return to_array(ptdd::h_pt(p)); });
    m.def("h_pt_passive", [](const ptdd::PTParams &p) { return to_array(ptdd::h_pt_passive(p)); });
    m.def(
        "h_total",
        [](const ptdd::PTParams &p, double detuning, double loss_shift) {
            return to_array(ptdd::h_total(p, ptdd::NoiseFields{detuning, loss_shift, 0.0}));
        },
        py::arg("params"), py::arg("detuning") = 0.0, py::arg("loss_shift") = 0.0);
    m.def(
        "expm", [](const Array &a, double t) { return to_array(ptdd::expm_closed(from_array(a), t)); }, py::arg("a"),
        py::arg("t"), "exp(-i a t), closed form");
    m.def(
        "expm_series", [](const Array &a, double t) { return to_array(ptdd::expm_series(from_array(a), t)); },
        py::arg("a"), py::arg("t"), "exp(-i a t), scaling and squaring");
    m.def(
        "ideal_density",
        [](const ptdd::PTParams &p, double t, const std::string &state) {
            return to_array(ptdd::ideal_density(p, t, ptdd::parse_initial_state(state)).matrix());
        },
        py::arg("params"), py::arg("t"), py::arg("initial_state") = "1");

    m.def("presets", []() {
        py::dict d;
        for (const auto &p : ptdd::presets()) {
            d[py::str(p.name)] = p.config;
        }
        return d;
    });
    m.def(
        "format_config",
        [](const std::string &preset, const std::string &config, const std::map<std::string, std::string> &overrides) {
            return ptdd::format_config(config_from(preset, config, overrides));
        },
        py::arg("preset") = "", py::arg("config") = "", py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "simulate",
        [](const std::string &preset, const std::string &config, const std::map<std::string, std::string> &overrides) {
            auto cfg = config_from(preset, config, overrides);
            ptdd::ResultTable table;
            {
                py::gil_scoped_release release;
                table = ptdd::cmd_simulate(cfg);
            }
            return table_to_dict(table);
        },
        py::arg("preset") = "", py::arg("config") = "", py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "sweep",
        [](const std::string &preset, const std::string &config, const std::map<std::string, std::string> &overrides) {
            auto cfg = config_from(preset, config, overrides);
            ptdd::ResultTable table;
            {
                py::gil_scoped_release release;
                table = ptdd::cmd_sweep(cfg);
            }
            return table_to_dict(table);
        },
        py::arg("preset") = "", py::arg("config") = "", py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "magnus",
        [](const std::string &preset, const std::string &config, const std::map<std::string, std::string> &overrides) {
            return report_to_dict(ptdd::cmd_magnus(config_from(preset, config, overrides)));
        },
        py::arg("preset") = "", py::arg("config") = "", py::arg("overrides") = std::map<std::string, std::string>{});
    m.def("selftest", []() { return report_to_dict(ptdd::cmd_selftest()); });
    m.def(
        "main",
        [](const std::vector<std::string> &args) {
            std::vector<const char *> argv{"ptdd"};
            for (const auto &a : args) {
                argv.push_back(a.c_str());
            }
            std::ostringstream out;
            std::ostringstream err;
            int code;
            {
                py::gil_scoped_release release;
                code = ptdd::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            auto sys = py::module_::import("sys");
            sys.attr("stdout").attr("write")(out.str());
            sys.attr("stderr").attr("write")(err.str());
            return code;
        },
        py::arg("args"), "run the command-line interface; returns the exit code");
}
