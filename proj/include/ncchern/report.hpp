#pragma once

// JSON views of the library's results. Key order is fixed (ordered_json) and
// numbers print in round-trip form, so equal inputs give identical bytes.

#include "ncchern/clutching.hpp"
#include "ncchern/exactseq.hpp"
#include "ncchern/fgab.hpp"
#include "ncchern/sphere.hpp"

#include <json.hpp>

namespace ncchern {

using Json = nlohmann::ordered_json;

// Integers that fit in 64 bits are numbers, larger ones decimal strings.
Json integer_json(const Integer& x);
Json matrix_json(const IntMatrix& m);
// {"text": "Z + Z/2", "free_rank": 1, "torsion": [2]}
Json group_json(const FgAbGroup& g);
Json hom_json(const GroupHom& h);

Json diagram_solution_json(const DiagramSolution& s);

struct SmithReport {
    IntMatrix input;
    SmithForm form;
};
Json smith_json(const SmithReport& r);

Json ktheory_json(const KTheoryReport& r);

struct SphereReportOptions {
    QuadratureSpec quad;
    FactSet facts;
    bool vanishing_trace = false;
    CosphereOptions cosphere;
};

/// The full pipeline: cosphere K-theory, the operator algebra (or the
/// refusal when the index-map fact is missing), tau(I) and the character image.
Json sphere_report(const SphereReportOptions& options);

struct TransitionReportOptions {
    bool identity_chart = false;
    std::size_t grid = 64;
    std::size_t winding_samples = 1024;
    // Points of the sampled map written to the report, on an n x n subgrid.
    std::size_t emit = 8;
};

/// Transition map from the chart change, its deviation from (z, -z^2 conj(w)),
/// K1 matrix and the Mayer-Vietoris difference maps it induces.
Json transition_report(const TransitionReportOptions& options);

} // namespace ncchern
