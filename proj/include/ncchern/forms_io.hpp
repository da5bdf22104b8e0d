#pragma once

// JSON problem files for the Chern character engine (format in docs/formats.md).

#include "ncchern/forms.hpp"
#include "ncchern/report.hpp"

#include <string>

namespace ncchern {

struct ChernProblem {
    SmoothAlgebra algebra;
    Projection projection;
    TraceFunctional trace;
    std::size_t k_max = 1;
    double tolerance = 1e-12;      // construction-time validation
    double identity_tolerance = 1e-10; // derived identities
};

/// Throws ParseError for malformed JSON or wrong field types and
/// ValidationError when the data violate an invariant.
ChernProblem parse_chern_problem(const std::string& text);

/// Character cochains of every even degree up to 2 k_max, with each check
/// that was run and its deviation. Indices in the output are 1-based.
Json chern_report(const ChernProblem& problem);

} // namespace ncchern
