#pragma once

// Cyclic six-term exact sequences: Mayer-Vietoris assembly from a pullback
// square, exactness audits, and recovery of unknown groups.

#include "ncchern/errors.hpp"
#include "ncchern/fgab.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ncchern {

/// Six nodes and six arrows; arrow i maps node i to node (i + 1) mod 6.
/// Either may be unknown.
struct SixTermDiagram {
    std::array<std::optional<FgAbGroup>, 6> nodes;
    std::array<std::optional<GroupHom>, 6> arrows;
    std::array<std::string, 6> labels;
    std::array<std::string, 6> arrow_labels;
    // Optional display names of the generators of each known node.
    std::array<std::vector<std::string>, 6> generator_labels;
    bool verified = false;

    static constexpr std::size_t size = 6;
    static std::size_t next(std::size_t i) { return (i + 1) % size; }
    static std::size_t prev(std::size_t i) { return (i + size - 1) % size; }

    // Throws ValidationError if a present arrow's endpoints disagree with
    // present nodes.
    void validate() const;
    bool complete() const;
};

/// A named input fact that the solver may not derive itself.
struct FactFlag {
    std::string name;
    std::string assertion;
};

using FactSet = std::map<std::string, FactFlag>;

inline constexpr const char* kIndexMapSurjective = "index_map_surjective";

FactFlag index_map_surjective_fact();

class AmbiguousExtension : public Refusal {
public:
    AmbiguousExtension(FgAbGroup sub, FgAbGroup quotient);

    const FgAbGroup& sub() const { return sub_; }
    const FgAbGroup& quotient() const { return quotient_; }

private:
    FgAbGroup sub_;
    FgAbGroup quotient_;
};

/// pi_1*, pi_2* in one K-degree: K(B1) -> K(B) and K(B2) -> K(B).
struct RestrictionPair {
    GroupHom first;
    GroupHom second;
};

/// Builds the Mayer-Vietoris diagram with nodes
///   0 K0(A), 1 K0(B1)+K0(B2), 2 K0(B), 3 K1(A), 4 K1(B1)+K1(B2), 5 K1(B)
/// and difference arrows (x, y) -> pi_2*(y) - pi_1*(x) at 1 and 4. The
/// corners K*(A) and the arrows touching them stay unknown.
SixTermDiagram mayer_vietoris_assemble(const RestrictionPair& k0, const RestrictionPair& k1,
                                       const std::string& algebra_name = "A");

struct NodeExactness {
    std::size_t node = 0;
    bool exact = false;
    bool image_in_kernel = false;
    bool kernel_in_image = false;
};

struct ExactnessReport {
    std::array<NodeExactness, 6> nodes;
    bool all_exact() const;
};

/// Exact check of image(arrow i-1) == kernel(arrow i) at every node.
/// Throws IncompleteDiagram unless all nodes and arrows are present.
ExactnessReport verify_exactness(const SixTermDiagram& d);

/// Runs verify_exactness and sets `verified`; throws ValidationError on failure.
SixTermDiagram mark_verified(SixTermDiagram d);

/// Result of filling one unknown node from its neighbours.
struct SolvedNode {
    std::size_t node = 0;
    FgAbGroup group;
    FgAbGroup cokernel_part; // coker of the arrow two steps before
    FgAbGroup kernel_part;   // ker of the arrow one step after
    bool split = false;
    GroupHom incoming;       // node-1 -> node
    GroupHom outgoing;       // node -> node+1
    std::vector<std::string> generator_labels;
    std::vector<std::string> steps;
};

/// 0 -> coker(a) -> X -> ker(b) -> 0 with a = arrow node-2 and b = arrow
/// node+1. Returns X = coker(a) + ker(b) when ker(b) is free, together with
/// the split maps; throws AmbiguousExtension when ker(b) has torsion and
/// IncompleteDiagram when a, b or their endpoints are unknown.
SolvedNode solve_unknown(const SixTermDiagram& d, std::size_t node);

/// Installs the group and the two adjacent arrows.
SixTermDiagram apply_solution(SixTermDiagram d, const SolvedNode& s);

struct DiagramSolution {
    SixTermDiagram diagram;
    std::vector<SolvedNode> solved; // in the order they were filled
};

/// Fills unknown nodes until none is left, sweeping in index order while
/// some node can be solved, then verifies exactness. Throws
/// IncompleteDiagram if an unknown remains that no sweep can reach.
DiagramSolution solve_diagram(SixTermDiagram d);

struct IdealSequenceSolution {
    FgAbGroup k0;
    FgAbGroup k1;
    std::vector<std::string> steps;
};

/// Middle K-groups of 0 -> I -> E -> Q -> 0 from K*(I), K*(Q) and the fact
/// that the index map K1(Q) -> K0(I) is onto. Decides only K1(I) = 0 with a
/// free K0(I); everything else is refused.
IdealSequenceSolution solve_ideal_sequence(const std::pair<FgAbGroup, FgAbGroup>& k_ideal,
                                           const std::pair<FgAbGroup, FgAbGroup>& k_quotient, const FactSet& facts);

/// Human-readable combination of generator labels, e.g. "[z]_1 - 2*[w]_1".
std::string describe_combination(std::span<const Integer> coeffs, const std::vector<std::string>& labels);

// Diagram file format (see docs/formats.md).
SixTermDiagram parse_diagram(const std::string& text);
std::string format_diagram(const SixTermDiagram& d);
IntMatrix parse_matrix(const std::string& text, std::size_t line = 1, std::size_t column = 1);

} // namespace ncchern
