#pragma once

// Finitely generated abelian groups and their homomorphisms, computed exactly
// through Smith normal forms of integer matrices.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ncchern {

using Integer = boost::multiprecision::cpp_int;

/// Dense row-major matrix of arbitrary-precision integers. Zero-sized
/// dimensions are legal.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries);
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Integer& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const Integer> entries() const { return entries_; }

    std::vector<Integer> column(std::size_t j) const;
    std::vector<Integer> row(std::size_t i) const;
    IntMatrix transpose() const;
    bool is_zero() const;

    // Horizontal concatenation [*this | other]; row counts must match.
    IntMatrix hconcat(const IntMatrix& other) const;
    // Columns [first, first + count).
    IntMatrix columns(std::size_t first, std::size_t count) const;
    IntMatrix rows_range(std::size_t first, std::size_t count) const;

    std::vector<Integer> apply(std::span<const Integer> x) const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator-(const IntMatrix& a);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

    // Bracketed rows, e.g. [[0,-2],[-1,-1]]. Zero rows print as [].
    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> entries_;
};

/// Exact determinant (Bareiss fraction-free elimination). Square input only.
Integer determinant(const IntMatrix& m);

struct SmithForm {
    IntMatrix diagonal;    // S, same shape as the input
    IntMatrix left;        // U, rows x rows, unimodular
    IntMatrix right;       // V, cols x cols, unimodular
    IntMatrix left_inverse; // U^-1
};

/// U * M * V == S with S diagonal, nonnegative, s_1 | s_2 | ..., zeros last.
SmithForm snf(const IntMatrix& m);

/// Finitely generated abelian group Z^r + Z/d_1 + ... + Z/d_m with
/// d_i >= 2 and d_i | d_{i+1}. Generators are ordered free first, then the
/// torsion generators in divisor-chain order.
class FgAbGroup {
public:
    FgAbGroup() = default;
    // Throws ValidationError if the factors are not a proper divisor chain.
    FgAbGroup(std::size_t free_rank, std::vector<Integer> invariant_factors);

    static FgAbGroup trivial() { return {}; }
    static FgAbGroup free(std::size_t rank) { return FgAbGroup(rank, {}); }
    static FgAbGroup cyclic(const Integer& order);
    // Normalizes an arbitrary list of cyclic orders; 0 means infinite cyclic
    // and 1 contributes nothing.
    static FgAbGroup from_cyclic_orders(std::span<const Integer> orders);

    std::size_t free_rank() const { return free_rank_; }
    const std::vector<Integer>& invariant_factors() const { return factors_; }

    std::size_t generator_count() const { return free_rank_ + factors_.size(); }
    // 0 for a free generator.
    Integer generator_order(std::size_t j) const;
    bool is_trivial() const { return generator_count() == 0; }
    bool is_free() const { return factors_.empty(); }

    // Relation columns d_i e_{r+i}: the group is Z^n modulo their span.
    IntMatrix relations() const;

    // Reduces coordinates of torsion generators into [0, d).
    void reduce(std::span<Integer> coords) const;
    bool is_zero_element(std::span<const Integer> coords) const;

    // `Z^r + Z/d1 + Z/d2`, or `0` for the trivial group.
    std::string to_string() const;

    friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;

private:
    std::size_t free_rank_ = 0;
    std::vector<Integer> factors_;
};

/// Homomorphism given by its action on the normal-form generators.
class GroupHom {
public:
    // The zero map 0 -> 0.
    GroupHom() = default;
    // Validates the shape and that torsion relations are respected, then
    // reduces the matrix modulo the codomain torsion.
    GroupHom(FgAbGroup domain, FgAbGroup codomain, IntMatrix matrix);

    static GroupHom zero(const FgAbGroup& domain, const FgAbGroup& codomain);
    static GroupHom identity(const FgAbGroup& group);

    const FgAbGroup& domain() const { return domain_; }
    const FgAbGroup& codomain() const { return codomain_; }
    const IntMatrix& matrix() const { return matrix_; }

    std::vector<Integer> apply(std::span<const Integer> x) const;
    bool is_zero() const { return matrix_.is_zero(); }

    friend bool operator==(const GroupHom&, const GroupHom&) = default;

private:
    FgAbGroup domain_;
    FgAbGroup codomain_;
    IntMatrix matrix_;
};

/// Z^n modulo the column span of a relation matrix, in normal form, with
/// the change of coordinates in both directions.
struct Quotient {
    FgAbGroup group;
    IntMatrix projection; // group generators x n: coordinates of the class of x
    IntMatrix lift;       // n x group generators: a representative of each generator
};

Quotient quotient_of_lattice(std::size_t n, const IntMatrix& relations);

struct Kernel {
    FgAbGroup group;
    GroupHom inclusion;
};

/// Codomain modulo the image, with the quotient map.
Quotient cokernel_presentation(const GroupHom& h);
FgAbGroup cokernel(const GroupHom& h);
Kernel kernel(const GroupHom& h);
FgAbGroup image(const GroupHom& h);

/// g o h. Throws ValidationError unless codomain(h) == domain(g).
GroupHom compose(const GroupHom& g, const GroupHom& h);

FgAbGroup direct_sum(std::span<const FgAbGroup> groups);
FgAbGroup direct_sum(std::initializer_list<FgAbGroup> groups);

/// Normal form of the direct sum together with coordinate maps from and to
/// the concatenated generators of the summands.
Quotient direct_sum_presentation(std::span<const FgAbGroup> groups);

bool iso_check(const FgAbGroup& a, const FgAbGroup& b);

/// Whether x (coordinates in the codomain) lies in the image of h.
bool in_image(const GroupHom& h, std::span<const Integer> x);

/// Parses `Z^r + Z/d + ...`, `Z`, `0`; input need not be normalized.
FgAbGroup parse_group(const std::string& text);

} // namespace ncchern
