#include "ncchern/cli.hpp"

#include "ncchern/clutching.hpp"
#include "ncchern/errors.hpp"
#include "ncchern/exactseq.hpp"
#include "ncchern/forms_io.hpp"
#include "ncchern/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ncchern::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read input file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Blank out '#' comments so line numbers in parse errors stay right.
std::string strip_comments(const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        out += hash == std::string::npos ? line : line.substr(0, hash);
        out += '\n';
    }
    return out;
}

void emit(const RunConfig& c, const Json& j, std::ostream& out, const std::string& summary = {}) {
    const std::string text = (c.compact ? j.dump() : j.dump(2)) + "\n";
    if (!c.output) {
        out << text;
        return;
    }
    std::ofstream f(*c.output, std::ios::binary);
    if (!f)
        throw ValidationError("cannot write output file '" + *c.output + "'");
    f << text;
    if (!f)
        throw ValidationError("failed writing output file '" + *c.output + "'");
    if (!summary.empty())
        out << summary << "\n";
}

LoopSample read_loop(const std::string& text) {
    std::vector<Complex> samples;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("expected 're,im'", line_no, 1);
        double parts[2];
        const std::string fields[2] = {line.substr(0, comma), line.substr(comma + 1)};
        for (int f = 0; f < 2; ++f) {
            std::size_t used = 0;
            try {
                parts[f] = std::stod(fields[f], &used);
            } catch (const std::exception&) {
                throw ParseError("not a number: '" + fields[f] + "'", line_no, f == 0 ? 1 : comma + 2);
            }
            if (fields[f].find_first_not_of(" \t\r", used) != std::string::npos)
                throw ParseError("trailing text after number", line_no, f == 0 ? used + 1 : comma + 2 + used);
        }
        samples.emplace_back(parts[0], parts[1]);
    }
    return LoopSample(std::move(samples));
}

void cmd_snf(const RunConfig& c, std::ostream& out) {
    const IntMatrix m = parse_matrix(strip_comments(read_file(c.input)));
    const SmithReport r{m, snf(m)};
    if (c.output) {
        emit(c, smith_json(r), out);
        return;
    }
    out << "S = " << r.form.diagonal.to_string() << "\n"
        << "U = " << r.form.left.to_string() << "\n"
        << "V = " << r.form.right.to_string() << "\n";
}

void cmd_solve(const RunConfig& c, std::ostream& out) {
    const DiagramSolution s = solve_diagram(parse_diagram(read_file(c.input)));
    emit(c, diagram_solution_json(s), out);
}

void cmd_winding(const RunConfig& c, std::ostream& out) {
    const LoopSample loop = read_loop(read_file(c.input));
    WindingOptions opt;
    opt.zero_tolerance = c.zero_tolerance;
    opt.max_phase_step = c.max_phase_step;
    Json j;
    j["samples"] = loop.size();
    j["winding_number"] = winding_number(loop, opt);
    emit(c, j, out);
}

void cmd_transition(const RunConfig& c, std::ostream& out) {
    TransitionReportOptions opt;
    opt.identity_chart = c.identity_chart;
    opt.grid = c.transition_grid;
    opt.winding_samples = c.winding_samples;
    opt.emit = c.emit;
    emit(c, transition_report(opt), out);
}

void cmd_chern(const RunConfig& c, std::ostream& out) {
    const Json j = chern_report(parse_chern_problem(read_file(c.input)));
    emit(c, j, out);
    if (!j["all_checks_ok"].get<bool>())
        throw ValidationError("chern: at least one check failed (see the report)");
}

void cmd_sphere_report(const RunConfig& c, std::ostream& out) {
    SphereReportOptions opt;
    opt.quad = c.quad;
    opt.vanishing_trace = c.vanishing_trace;
    opt.cosphere.transition_grid = c.transition_grid;
    opt.cosphere.winding_samples = c.winding_samples;
    opt.cosphere.identity_clutching = c.identity_chart;
    if (c.fact_index_map_surjective)
        opt.facts.emplace(kIndexMapSurjective, index_map_surjective_fact());
    const Json j = sphere_report(opt);
    const auto& k = j["ktheory"];
    std::string summary = "K0(C(S*S^2)) = " + k["cosphere"]["k0"]["group"]["text"].get<std::string>() +
                          ", K1(C(S*S^2)) = " + k["cosphere"]["k1"]["group"]["text"].get<std::string>();
    if (k["algebra"]["status"] == "solved")
        summary += ", K0(A) = " + k["algebra"]["k0"]["group"]["text"].get<std::string>() +
                   ", K1(A) = " + k["algebra"]["k1"]["group"]["text"].get<std::string>();
    else
        summary += ", K*(A) refused (missing fact " + std::string(kIndexMapSurjective) + ")";
    summary += "; wrote " + c.output.value_or("");
    emit(c, j, out, summary);
}

} // namespace

void RunConfig::validate() const {
    if (!(zero_tolerance > 0.0) || !(max_phase_step > 0.0))
        throw ValidationError("tolerances must be positive");
    if (winding_samples < 16)
        throw ValidationError("at least 16 winding samples are needed");
    if (transition_grid < 4)
        throw ValidationError("the transition grid must be at least 4 x 4");
    quad.validate();
}

void execute(const RunConfig& config, std::ostream& out) {
    config.validate();
    const std::string& s = config.subcommand;
    if (s == "snf")
        cmd_snf(config, out);
    else if (s == "solve")
        cmd_solve(config, out);
    else if (s == "winding")
        cmd_winding(config, out);
    else if (s == "transition")
        cmd_transition(config, out);
    else if (s == "chern")
        cmd_chern(config, out);
    else if (s == "sphere-report")
        cmd_sphere_report(config, out);
    else
        throw ParseError("unknown subcommand '" + s + "'");
}

int report_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ParseError& e) {
        err << "ncchern: parse error: " << e.what() << "\n";
        return kParse;
    } catch (const AmbiguousExtension& e) {
        err << "ncchern: refused: " << e.what() << "\n";
        return kRefusal;
    } catch (const Refusal& e) {
        err << "ncchern: refused: " << e.what() << "\n";
        return kRefusal;
    } catch (const ZeroSample& e) {
        err << "ncchern: refused: " << e.what() << "\n";
        return kRefusal;
    } catch (const NumericalGuard& e) {
        err << "ncchern: numerical guard: " << e.what() << "\n";
        return kNumerical;
    } catch (const IncompleteDiagram& e) {
        err << "ncchern: incomplete diagram: " << e.what() << "\n";
        return kValidation;
    } catch (const ValidationError& e) {
        err << "ncchern: invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "ncchern: internal error: " << e.what() << "\n";
        return kInternal;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact K-theory and Chern character computations for the cosphere bundle of S^2", "ncchern"};
    app.require_subcommand(1);
    RunConfig c;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--json", c.output, "write the JSON result to this file instead of stdout");
        sub->add_flag("--compact", c.compact, "single-line JSON");
    };
    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--grid", c.transition_grid, "transition map validation grid size")->capture_default_str();
        sub->add_option("--samples", c.winding_samples, "samples per winding loop")->capture_default_str();
        sub->add_flag("--identity-chart", c.identity_chart, "use the identity chart change (trivial bundle)");
    };

    auto* snf_cmd = app.add_subcommand("snf", "Smith normal form S = U M V of an integer matrix file");
    snf_cmd->add_option("matrix", c.input, "file with [[a, b], [c, d]]")->required();
    add_output(snf_cmd);

    auto* solve_cmd = app.add_subcommand("solve", "fill the unknown nodes of a six-term diagram file");
    solve_cmd->add_option("diagram", c.input, "diagram file")->required();
    add_output(solve_cmd);

    auto* winding_cmd = app.add_subcommand("winding", "winding number of a sampled loop (CSV of re,im)");
    winding_cmd->add_option("loop", c.input, "CSV file")->required();
    winding_cmd->add_option("--zero-tolerance", c.zero_tolerance, "refuse samples this close to 0")
        ->capture_default_str();
    winding_cmd->add_option("--max-step", c.max_phase_step, "largest phase step in radians")->capture_default_str();
    add_output(winding_cmd);

    auto* transition_cmd = app.add_subcommand("transition", "torus transition map and its K1 matrix");
    add_sampling(transition_cmd);
    transition_cmd->add_option("--emit", c.emit, "write an n x n subgrid of samples")->capture_default_str();
    add_output(transition_cmd);

    auto* chern_cmd = app.add_subcommand("chern", "Chern character cochains of a JSON problem");
    chern_cmd->add_option("problem", c.input, "problem file")->required();
    add_output(chern_cmd);

    auto* sphere_cmd = app.add_subcommand("sphere-report", "the full cosphere pipeline");
    std::string quad;
    sphere_cmd->add_option("--quad", quad, "quadrature grid L,M,F (default 32,64,64)");
    sphere_cmd->add_option("--normalization", c.quad.normalization, "trace normalization")->capture_default_str();
    std::vector<std::string> facts;
    sphere_cmd->add_option("--fact", facts, "assert an input fact (index_map_surjective)");
    sphere_cmd->add_flag("--vanishing-trace", c.vanishing_trace, "take the trace to vanish on the identity");
    add_sampling(sphere_cmd);
    add_output(sphere_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParse;
    }

    try {
        c.subcommand = app.get_subcommands().front()->get_name();
        if (!quad.empty()) {
            std::size_t vals[3];
            char sep1 = 0, sep2 = 0;
            std::istringstream in(quad);
            if (!(in >> vals[0] >> sep1 >> vals[1] >> sep2 >> vals[2]) || sep1 != ',' || sep2 != ',' ||
                !(in >> std::ws).eof() || quad.find('-') != std::string::npos)
                throw ParseError("--quad expects L,M,F, got '" + quad + "'");
            c.quad.L = vals[0];
            c.quad.M = vals[1];
            c.quad.F = vals[2];
        }
        for (const auto& f : facts)
            if (f == kIndexMapSurjective)
                c.fact_index_map_surjective = true;
            else
                throw ParseError("unknown fact '" + f + "'");
        execute(c, out);
        return kOk;
    } catch (...) {
        return report_current_exception(err);
    }
}

} // namespace ncchern::cli
