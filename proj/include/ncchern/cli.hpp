#pragma once

// The `ncchern` command line: subcommands, their configuration and the
// exit-code taxonomy.

#include "ncchern/sphere.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ncchern::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kParse = 2,      // malformed input file or command line
    kValidation = 3, // invariant violated, incomplete diagram, failed check
    kRefusal = 4,    // ambiguous extension, missing fact, loop through zero
    kNumerical = 5,  // undersampled loop, singular Jacobian
};

struct RunConfig {
    std::string subcommand;
    std::string input;
    std::optional<std::string> output; // --json PATH; stdout otherwise
    bool compact = false;

    // winding
    double zero_tolerance = 1e-12;
    double max_phase_step = 1.5707963267948966;
    // transition and sphere-report
    std::size_t transition_grid = 64;
    std::size_t winding_samples = 1024;
    std::size_t emit = 8;
    bool identity_chart = false;
    // sphere-report
    QuadratureSpec quad;
    bool fact_index_map_surjective = false;
    bool vanishing_trace = false;

    // Throws ValidationError unless tolerances are positive and sample
    // counts meet their minima (16 winding samples, a 4 x 4 transition grid).
    void validate() const;
};

/// Runs one configured subcommand, writing the result to `out` or to the
/// output file. Library errors propagate.
void execute(const RunConfig& config, std::ostream& out);

/// Exit code for the exception currently being handled, with a one-line
/// message on `err`.
int report_current_exception(std::ostream& err);

/// Parses `args` (without the program name), runs, and maps errors to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ncchern::cli
