#include "ncchern/exactseq.hpp"

#include <sstream>

namespace ncchern {

namespace {

std::string node_name(const SixTermDiagram& d, std::size_t i) {
    return d.labels[i].empty() ? "node " + std::to_string(i) : d.labels[i];
}

std::string arrow_name(const SixTermDiagram& d, std::size_t i) {
    return d.arrow_labels[i].empty() ? "arrow " + std::to_string(i) : d.arrow_labels[i];
}

std::vector<std::string> labels_or_default(const SixTermDiagram& d, std::size_t node) {
    if (!d.generator_labels[node].empty())
        return d.generator_labels[node];
    std::vector<std::string> out;
    const std::size_t n = d.nodes[node] ? d.nodes[node]->generator_count() : 0;
    for (std::size_t j = 0; j < n; ++j)
        out.push_back("e" + std::to_string(j));
    return out;
}

// Difference (x, y) -> second(y) - first(x) on the normal form of the sum of
// the two domains.
std::pair<FgAbGroup, GroupHom> difference_map(const RestrictionPair& p) {
    if (!(p.first.codomain() == p.second.codomain()))
        throw ValidationError("mayer_vietoris_assemble: restrictions land in different groups " +
                              p.first.codomain().to_string() + " and " + p.second.codomain().to_string());
    const std::vector<FgAbGroup> summands{p.first.domain(), p.second.domain()};
    const Quotient sum = direct_sum_presentation(summands);
    const IntMatrix concat = (-p.first.matrix()).hconcat(p.second.matrix());
    return {sum.group, GroupHom(sum.group, p.first.codomain(), concat * sum.lift)};
}

IntMatrix vstack(const IntMatrix& top, const IntMatrix& bottom) {
    return top.transpose().hconcat(bottom.transpose()).transpose();
}

} // namespace

void SixTermDiagram::validate() const {
    for (std::size_t i = 0; i < size; ++i) {
        if (!arrows[i])
            continue;
        if (nodes[i] && !(arrows[i]->domain() == *nodes[i]))
            throw ValidationError("arrow " + std::to_string(i) + " starts at " + arrows[i]->domain().to_string() +
                                  " but node " + std::to_string(i) + " is " + nodes[i]->to_string());
        const std::size_t j = next(i);
        if (nodes[j] && !(arrows[i]->codomain() == *nodes[j]))
            throw ValidationError("arrow " + std::to_string(i) + " ends at " + arrows[i]->codomain().to_string() +
                                  " but node " + std::to_string(j) + " is " + nodes[j]->to_string());
    }
}

bool SixTermDiagram::complete() const {
    for (std::size_t i = 0; i < size; ++i)
        if (!nodes[i] || !arrows[i])
            return false;
    return true;
}

FactFlag index_map_surjective_fact() {
    return {kIndexMapSurjective,
            "the index map K1(quotient) -> K0(ideal) is surjective (there is a Fredholm operator of index 1)"};
}

AmbiguousExtension::AmbiguousExtension(FgAbGroup sub, FgAbGroup quotient)
    : Refusal("ambiguous extension: 0 -> " + sub.to_string() + " -> X -> " + quotient.to_string() +
              " -> 0 does not split automatically (quotient has torsion)"),
      sub_(std::move(sub)), quotient_(std::move(quotient)) {}

SixTermDiagram mayer_vietoris_assemble(const RestrictionPair& k0, const RestrictionPair& k1,
                                       const std::string& algebra_name) {
    auto [sum0, diff0] = difference_map(k0);
    auto [sum1, diff1] = difference_map(k1);

    SixTermDiagram d;
    d.labels = {"K0(" + algebra_name + ")", "K0(B1)+K0(B2)", "K0(B)",
                "K1(" + algebra_name + ")", "K1(B1)+K1(B2)", "K1(B)"};
    d.arrow_labels = {"(p1*,p2*)_0", "(pi2*-pi1*)_0", "delta_0", "(p1*,p2*)_1", "(pi2*-pi1*)_1", "delta_1"};
    d.nodes[1] = sum0;
    d.nodes[2] = k0.first.codomain();
    d.nodes[4] = sum1;
    d.nodes[5] = k1.first.codomain();
    d.arrows[1] = diff0;
    d.arrows[4] = diff1;
    d.validate();
    return d;
}

bool ExactnessReport::all_exact() const {
    for (const auto& n : nodes)
        if (!n.exact)
            return false;
    return true;
}

ExactnessReport verify_exactness(const SixTermDiagram& d) {
    for (std::size_t i = 0; i < SixTermDiagram::size; ++i) {
        if (!d.nodes[i])
            throw IncompleteDiagram("verify_exactness: node " + std::to_string(i) + " (" + node_name(d, i) +
                                    ") is unknown");
        if (!d.arrows[i])
            throw IncompleteDiagram("verify_exactness: arrow " + std::to_string(i) + " (" + arrow_name(d, i) +
                                    ") is unknown");
    }
    d.validate();

    ExactnessReport report;
    for (std::size_t i = 0; i < SixTermDiagram::size; ++i) {
        const GroupHom& in = *d.arrows[SixTermDiagram::prev(i)];
        const GroupHom& out = *d.arrows[i];
        NodeExactness& n = report.nodes[i];
        n.node = i;
        n.image_in_kernel = compose(out, in).is_zero();
        const Kernel k = kernel(out);
        n.kernel_in_image = true;
        for (std::size_t g = 0; g < k.group.generator_count() && n.kernel_in_image; ++g)
            n.kernel_in_image = in_image(in, k.inclusion.matrix().column(g));
        n.exact = n.image_in_kernel && n.kernel_in_image;
    }
    return report;
}

SixTermDiagram mark_verified(SixTermDiagram d) {
    const ExactnessReport r = verify_exactness(d);
    for (const auto& n : r.nodes)
        if (!n.exact)
            throw ValidationError("diagram is not exact at node " + std::to_string(n.node) + " (" +
                                  node_name(d, n.node) + ")");
    d.verified = true;
    return d;
}

std::string describe_combination(std::span<const Integer> coeffs, const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        const Integer& c = coeffs[j];
        if (c == 0)
            continue;
        const std::string name = j < labels.size() ? labels[j] : "e" + std::to_string(j);
        const Integer mag = abs(c);
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (mag != 1)
            out += mag.str() + "*";
        out += name;
    }
    return out.empty() ? "0" : out;
}

SolvedNode solve_unknown(const SixTermDiagram& d, std::size_t node) {
    if (node >= SixTermDiagram::size)
        throw ValidationError("solve_unknown: node index out of range");
    d.validate();
    const std::size_t before = SixTermDiagram::prev(node);
    const std::size_t after = SixTermDiagram::next(node);
    const std::size_t a_idx = SixTermDiagram::prev(before);
    const std::size_t b_idx = after;
    if (!d.arrows[a_idx])
        throw IncompleteDiagram("solve_unknown(" + std::to_string(node) + "): arrow " + std::to_string(a_idx) + " (" +
                                arrow_name(d, a_idx) + ") is unknown");
    if (!d.arrows[b_idx])
        throw IncompleteDiagram("solve_unknown(" + std::to_string(node) + "): arrow " + std::to_string(b_idx) + " (" +
                                arrow_name(d, b_idx) + ") is unknown");
    const GroupHom& a = *d.arrows[a_idx];
    const GroupHom& b = *d.arrows[b_idx];

    const Quotient coker = cokernel_presentation(a);
    const Kernel ker = kernel(b);

    SolvedNode s;
    s.node = node;
    s.cokernel_part = coker.group;
    s.kernel_part = ker.group;
    s.steps.push_back("coker(" + arrow_name(d, a_idx) + ") = " + coker.group.to_string() + " via SNF of " +
                      a.matrix().to_string());
    s.steps.push_back("ker(" + arrow_name(d, b_idx) + ") = " + ker.group.to_string() + " via SNF of " +
                      b.matrix().to_string());
    s.steps.push_back("exactness: 0 -> " + coker.group.to_string() + " -> " + node_name(d, node) + " -> " +
                      ker.group.to_string() + " -> 0");
    if (!ker.group.is_free()) {
        s.steps.push_back("quotient has torsion: extension not decided");
        throw AmbiguousExtension(coker.group, ker.group);
    }

    const std::vector<FgAbGroup> parts{coker.group, ker.group};
    const Quotient sum = direct_sum_presentation(parts);
    const std::size_t nc = coker.group.generator_count();
    const std::size_t nk = ker.group.generator_count();
    s.group = sum.group;
    s.split = true;
    s.steps.push_back("quotient is free, so the sequence splits: " + node_name(d, node) + " = " +
                      sum.group.to_string());

    // Split maps: node-1 -> coker(a) + 0, and 0 + ker(b) -> node+1.
    const FgAbGroup& before_group = a.codomain();
    const FgAbGroup& after_group = b.domain();
    const IntMatrix in_concat = vstack(coker.projection, IntMatrix::zero(nk, before_group.generator_count()));
    s.incoming = GroupHom(before_group, s.group, sum.projection * in_concat);
    const IntMatrix out_concat = IntMatrix::zero(after_group.generator_count(), nc).hconcat(ker.inclusion.matrix());
    s.outgoing = GroupHom(s.group, after_group, out_concat * sum.lift);

    const auto before_labels = labels_or_default(d, before);
    const auto after_labels = labels_or_default(d, after);
    for (std::size_t g = 0; g < sum.group.generator_count(); ++g) {
        const std::vector<Integer> col = sum.lift.column(g);
        std::vector<Integer> cpart(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(nc));
        std::vector<Integer> kpart(col.begin() + static_cast<std::ptrdiff_t>(nc), col.end());
        const std::vector<Integer> from_before = coker.lift.apply(cpart);
        const std::vector<Integer> to_after = ker.inclusion.matrix().apply(kpart);
        std::string label;
        if (!coker.group.is_zero_element(cpart))
            label = arrow_name(d, before) + "(" + describe_combination(from_before, before_labels) + ")";
        bool k_nonzero = false;
        for (const auto& v : kpart)
            k_nonzero = k_nonzero || v != 0;
        if (k_nonzero) {
            if (!label.empty())
                label += " + ";
            label += "lift(" + describe_combination(to_after, after_labels) + ")";
        }
        s.generator_labels.push_back(label.empty() ? "0" : label);
    }
    return s;
}

SixTermDiagram apply_solution(SixTermDiagram d, const SolvedNode& s) {
    d.nodes[s.node] = s.group;
    d.arrows[SixTermDiagram::prev(s.node)] = s.incoming;
    d.arrows[s.node] = s.outgoing;
    d.generator_labels[s.node] = s.generator_labels;
    d.verified = false;
    d.validate();
    return d;
}

DiagramSolution solve_diagram(SixTermDiagram d) {
    d.validate();
    DiagramSolution out;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < SixTermDiagram::size; ++i) {
            if (d.nodes[i])
                continue;
            try {
                SolvedNode s = solve_unknown(d, i);
                d = apply_solution(std::move(d), s);
                out.solved.push_back(std::move(s));
                progress = true;
            } catch (const AmbiguousExtension&) {
                throw;
            } catch (const IncompleteDiagram&) {
            }
        }
    }
    for (std::size_t i = 0; i < SixTermDiagram::size; ++i)
        if (!d.nodes[i])
            throw IncompleteDiagram("solve_diagram: node " + std::to_string(i) +
                                    " cannot be reached from the known arrows");
    if (!d.complete())
        throw IncompleteDiagram("solve_diagram: every node is known but some arrow is not");
    out.diagram = mark_verified(std::move(d));
    return out;
}

IdealSequenceSolution solve_ideal_sequence(const std::pair<FgAbGroup, FgAbGroup>& k_ideal,
                                           const std::pair<FgAbGroup, FgAbGroup>& k_quotient, const FactSet& facts) {
    const auto& [k0_ideal, k1_ideal] = k_ideal;
    const auto& [k0_quot, k1_quot] = k_quotient;
    IdealSequenceSolution out;
    auto& log = out.steps;
    log.push_back("six-term sequence: K0(I)=" + k0_ideal.to_string() + " -> K0(E) -> K0(Q)=" + k0_quot.to_string() +
                  " -> K1(I)=" + k1_ideal.to_string() + " -> K1(E) -> K1(Q)=" + k1_quot.to_string() +
                  " -> K0(I)");

    if (!k1_ideal.is_trivial())
        throw Refusal("solve_ideal_sequence: only K1(ideal) = 0 is decided, got " + k1_ideal.to_string());
    log.push_back("K1(I) = 0, so the exponential map K0(Q) -> K1(I) vanishes: sigma*_0 is onto and sigma*_1 is "
                  "injective");

    if (k0_ideal.is_trivial()) {
        log.push_back("K0(I) = 0, so sigma* is an isomorphism in both degrees");
        out.k0 = k0_quot;
        out.k1 = k1_quot;
        return out;
    }

    const auto fact = facts.find(kIndexMapSurjective);
    if (fact == facts.end())
        throw MissingFact("solve_ideal_sequence: the index map delta_1: K1(Q)=" + k1_quot.to_string() +
                          " -> K0(I)=" + k0_ideal.to_string() +
                          " is unresolved; supply the fact flag '" + kIndexMapSurjective + "'");
    log.push_back("fact " + fact->second.name + ": " + fact->second.assertion);
    log.push_back("delta_1 onto, so K0(I) -> K0(E) is zero and sigma*_0 is injective: K0(E) = K0(Q) = " +
                  k0_quot.to_string());
    out.k0 = k0_quot;

    if (!k0_ideal.is_free())
        throw Refusal("solve_ideal_sequence: K0(ideal) = " + k0_ideal.to_string() +
                      " has torsion; the kernel of the index map is not determined");
    const std::size_t n = k0_ideal.free_rank();
    if (k1_quot.free_rank() < n)
        throw ValidationError("solve_ideal_sequence: no surjection " + k1_quot.to_string() + " -> " +
                              k0_ideal.to_string() + " exists; the fact flag contradicts the groups");
    out.k1 = FgAbGroup(k1_quot.free_rank() - n, k1_quot.invariant_factors());
    log.push_back("K1(E) = ker(delta_1); a surjection onto the free group " + k0_ideal.to_string() +
                  " splits, so K1(E) = " + out.k1.to_string());
    if (n == k1_quot.free_rank() && k1_quot.is_free())
        log.push_back("delta_1: " + k1_quot.to_string() + " -> " + k0_ideal.to_string() +
                      " onto between free groups of equal rank, hence injective");
    return out;
}

} // namespace ncchern
