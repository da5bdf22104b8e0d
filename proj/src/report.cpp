#include "ncchern/report.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ncchern {

namespace {

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json strings_json(const std::vector<std::string>& v) {
    Json out = Json::array();
    for (const auto& s : v)
        out.push_back(s);
    return out;
}

Json named_group_json(const NamedGroup& g) {
    Json out;
    out["name"] = g.name;
    out["group"] = group_json(g.group);
    out["generators"] = strings_json(g.generators);
    out["provenance"] = strings_json(g.provenance);
    return out;
}

} // namespace

Json integer_json(const Integer& x) {
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
        return x.convert_to<std::int64_t>();
    return x.str();
}

Json matrix_json(const IntMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(integer_json(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

Json group_json(const FgAbGroup& g) {
    Json out;
    out["text"] = g.to_string();
    out["free_rank"] = g.free_rank();
    Json torsion = Json::array();
    for (const auto& d : g.invariant_factors())
        torsion.push_back(integer_json(d));
    out["torsion"] = std::move(torsion);
    return out;
}

Json hom_json(const GroupHom& h) {
    Json out;
    out["domain"] = h.domain().to_string();
    out["codomain"] = h.codomain().to_string();
    out["matrix"] = matrix_json(h.matrix());
    return out;
}

Json diagram_solution_json(const DiagramSolution& s) {
    const SixTermDiagram& d = s.diagram;
    Json nodes = Json::array();
    for (std::size_t i = 0; i < SixTermDiagram::size; ++i) {
        Json n;
        n["index"] = i;
        n["name"] = d.labels[i];
        n["group"] = group_json(*d.nodes[i]);
        n["generators"] = strings_json(d.generator_labels[i]);
        nodes.push_back(std::move(n));
    }
    Json arrows = Json::array();
    for (std::size_t i = 0; i < SixTermDiagram::size; ++i) {
        Json a;
        a["index"] = i;
        a["name"] = d.arrow_labels[i];
        a["matrix"] = matrix_json(d.arrows[i]->matrix());
        arrows.push_back(std::move(a));
    }
    Json solved = Json::array();
    for (const auto& n : s.solved) {
        Json j;
        j["node"] = n.node;
        j["group"] = group_json(n.group);
        j["cokernel_part"] = group_json(n.cokernel_part);
        j["kernel_part"] = group_json(n.kernel_part);
        j["split"] = n.split;
        j["generators"] = strings_json(n.generator_labels);
        j["provenance"] = strings_json(n.steps);
        solved.push_back(std::move(j));
    }
    Json out;
    out["nodes"] = std::move(nodes);
    out["arrows"] = std::move(arrows);
    out["solved"] = std::move(solved);
    out["exactness_verified"] = d.verified;
    return out;
}

Json smith_json(const SmithReport& r) {
    Json out;
    out["input"] = matrix_json(r.input);
    out["S"] = matrix_json(r.form.diagonal);
    out["U"] = matrix_json(r.form.left);
    out["V"] = matrix_json(r.form.right);
    Json diag = Json::array();
    for (std::size_t i = 0; i < std::min(r.form.diagonal.rows(), r.form.diagonal.cols()); ++i)
        diag.push_back(integer_json(r.form.diagonal(i, i)));
    out["diagonal"] = std::move(diag);
    out["cokernel"] = group_json(cokernel(GroupHom(FgAbGroup::free(r.input.cols()), FgAbGroup::free(r.input.rows()),
                                                   r.input)));
    return out;
}

Json ktheory_json(const KTheoryReport& r) {
    Json out;
    out["algebra"] = r.algebra;
    out["k0"] = named_group_json(r.k0);
    out["k1"] = named_group_json(r.k1);
    if (r.transition_k1_matrix)
        out["transition_k1_matrix"] = matrix_json(*r.transition_k1_matrix);
    if (r.difference_k0)
        out["difference_k0"] = hom_json(*r.difference_k0);
    if (r.difference_k1)
        out["difference_k1"] = hom_json(*r.difference_k1);
    if (!r.sign_convention.empty())
        out["sign_convention"] = r.sign_convention;
    out["exactness_verified"] = r.exactness_verified;
    out["facts_used"] = strings_json(r.facts_used);
    return out;
}

Json sphere_report(const SphereReportOptions& options) {
    options.quad.validate();
    const KTheoryReport cos = reproduce_cosphere_ktheory(options.cosphere);

    Json algebra;
    try {
        const KTheoryReport a = reproduce_algebra_ktheory(options.facts, cos);
        algebra["status"] = "solved";
        const Json body = ktheory_json(a);
        for (const auto& [key, value] : body.items())
            algebra[key] = value;
    } catch (const MissingFact& e) {
        algebra["status"] = "refused";
        algebra["algebra"] = "A";
        algebra["reason"] = e.what();
        algebra["missing_fact"] = kIndexMapSurjective;
    }

    const ChernImageReport ch = chern_image_report(options.quad, options.vanishing_trace);

    Json out;
    out["ktheory"]["cosphere"] = ktheory_json(cos);
    out["ktheory"]["algebra"] = std::move(algebra);

    Json& trace = out["trace"];
    trace["tau_of_identity"] = ch.tau_of_identity;
    trace["analytic_tau_of_identity"] = ch.analytic_tau_of_identity;
    trace["normalization"] = options.quad.normalization;
    trace["quadrature"] = {{"L", options.quad.L}, {"M", options.quad.M}, {"F", options.quad.F}};

    Json& character = out["character"];
    character["degree0"] = ch.degree0;
    character["higher_degrees_vanish"] = ch.higher_degrees_vanish;
    character["image"] = ch.image;
    character["vanishing_trace_flag"] = ch.vanishing_trace_flag;
    character["notes"] = strings_json(ch.notes);
    return out;
}

Json transition_report(const TransitionReportOptions& options) {
    const ChartChange chart = options.identity_chart ? ChartChange::identity() : ChartChange::stereographic();
    const TorusMap t = transition_from_chart_change(chart, options.grid);
    const TorusMap closed = options.identity_chart ? TorusMap::identity() : TorusMap::stereographic_closed_form();

    // Off-grid points, so the check does not reuse the validation grid.
    constexpr std::size_t kCheck = 100;
    const double two_pi = 2.0 * std::numbers::pi;
    double sup = 0.0;
    for (std::size_t a = 0; a < kCheck; ++a)
        for (std::size_t b = 0; b < kCheck; ++b) {
            const Complex z = std::polar(1.0, two_pi * (a + 0.37) / kCheck);
            const Complex w = std::polar(1.0, two_pi * (b + 0.61) / kCheck);
            const auto [p1, p2] = t(z, w);
            const auto [q1, q2] = closed(z, w);
            sup = std::max({sup, std::abs(p1 - q1), std::abs(p2 - q2)});
        }

    Json samples = Json::array();
    for (std::size_t a = 0; a < options.emit; ++a)
        for (std::size_t b = 0; b < options.emit; ++b) {
            const Complex z = std::polar(1.0, two_pi * a / options.emit);
            const Complex w = std::polar(1.0, two_pi * b / options.emit);
            const auto [p1, p2] = t(z, w);
            samples.push_back({{"z", complex_json(z)}, {"w", complex_json(w)},
                               {"image", Json::array({complex_json(p1), complex_json(p2)})}});
        }

    const IntMatrix m = torus_map_k1_matrix(t, options.winding_samples);
    const IntMatrix doubled = torus_map_k1_matrix(t, 2 * options.winding_samples);
    const GroupHom diff = assemble_mv_k1_map(m);

    Json out;
    out["chart"] = options.identity_chart ? "identity" : "stereographic";
    out["grid"] = options.grid;
    out["closed_form"] = options.identity_chart ? "(z, w)" : "(z, -z^2 conj(w))";
    out["sup_error_vs_closed_form"] = sup;
    out["check_points"] = kCheck * kCheck;
    out["samples"] = std::move(samples);
    out["winding_samples"] = options.winding_samples;
    out["k1_matrix"] = matrix_json(m);
    out["k1_matrix_stable_under_doubling"] = m == doubled;
    out["difference_k0"] = hom_json(assemble_mv_k0_map());
    out["difference_k1"] = hom_json(diff);
    out["difference_k1_cokernel"] = group_json(cokernel(diff));
    out["difference_k1_kernel"] = group_json(kernel(diff).group);
    return out;
}

} // namespace ncchern
