#include "ncchern/cli.hpp"
#include "ncchern/clutching.hpp"
#include "ncchern/errors.hpp"
#include "ncchern/exactseq.hpp"
#include "ncchern/fgab.hpp"
#include "ncchern/forms_io.hpp"
#include "ncchern/report.hpp"
#include "ncchern/sphere.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ncchern;

namespace {

IntMatrix to_matrix(const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size(), c = r ? rows.front().size() : 0;
    std::vector<Integer> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c)
            throw ValidationError("matrix rows must have equal length");
        for (long long v : row)
            entries.emplace_back(v);
    }
    return IntMatrix(r, c, std::move(entries));
}

// Results cross the boundary as JSON text; the Python wrapper decodes them.
std::string dump(const Json& j) { return j.dump(); }

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact K-theory and Chern character computations for the cosphere bundle of S^2";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto parse = py::register_exception<ParseError>(m, "ParseError", error.ptr());
    auto validation = py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
    auto refusal = py::register_exception<Refusal>(m, "Refusal", error.ptr());
    auto guard = py::register_exception<NumericalGuard>(m, "NumericalGuard", error.ptr());
    py::register_exception<IncompleteDiagram>(m, "IncompleteDiagram", validation.ptr());
    py::register_exception<MissingFact>(m, "MissingFact", refusal.ptr());
    py::register_exception<AmbiguousExtension>(m, "AmbiguousExtension", refusal.ptr());
    py::register_exception<ZeroSample>(m, "ZeroSample", guard.ptr());
    (void)parse;

    m.def("snf_json", [](const std::vector<std::vector<long long>>& rows) {
        const IntMatrix a = to_matrix(rows);
        return dump(smith_json({a, snf(a)}));
    });
    m.def("normal_form", [](const std::string& text) { return parse_group(text).to_string(); },
          "Normal form of a group written as Z^r + Z/d + ...");
    m.def("cokernel", [](const std::vector<std::vector<long long>>& rows) {
        const IntMatrix a = to_matrix(rows);
        return cokernel(GroupHom(FgAbGroup::free(a.cols()), FgAbGroup::free(a.rows()), a)).to_string();
    });
    m.def("solve_diagram_json", [](const std::string& text) { return dump(diagram_solution_json(solve_diagram(parse_diagram(text)))); });
    m.def(
        "winding_number",
        [](const std::vector<std::complex<double>>& samples, double zero_tolerance, double max_phase_step) {
            WindingOptions opt;
            opt.zero_tolerance = zero_tolerance;
            opt.max_phase_step = max_phase_step;
            return winding_number(LoopSample(samples), opt);
        },
        py::arg("samples"), py::arg("zero_tolerance") = 1e-12, py::arg("max_phase_step") = WindingOptions{}.max_phase_step);
    m.def(
        "transition_json",
        [](bool identity_chart, std::size_t grid, std::size_t winding_samples, std::size_t emit) {
            TransitionReportOptions opt;
            opt.identity_chart = identity_chart;
            opt.grid = grid;
            opt.winding_samples = winding_samples;
            opt.emit = emit;
            return dump(transition_report(opt));
        },
        py::arg("identity_chart") = false, py::arg("grid") = 64, py::arg("winding_samples") = 1024,
        py::arg("emit") = 0);
    m.def("chern_json", [](const std::string& problem) { return dump(chern_report(parse_chern_problem(problem))); });
    m.def(
        "sphere_report_json",
        [](std::size_t L, std::size_t M, std::size_t F, double normalization, bool index_map_surjective,
           bool vanishing_trace) {
            SphereReportOptions opt;
            opt.quad.L = L;
            opt.quad.M = M;
            opt.quad.F = F;
            opt.quad.normalization = normalization;
            opt.vanishing_trace = vanishing_trace;
            if (index_map_surjective)
                opt.facts.emplace(kIndexMapSurjective, index_map_surjective_fact());
            return dump(sphere_report(opt));
        },
        py::arg("L") = 32, py::arg("M") = 64, py::arg("F") = 64, py::arg("normalization") = 1.0,
        py::arg("index_map_surjective") = false, py::arg("vanishing_trace") = false);
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Run the command line in-process; returns (exit_code, stdout, stderr).");
}
