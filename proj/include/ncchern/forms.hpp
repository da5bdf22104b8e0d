#pragma once

// Lie-algebra-valued differential forms with coefficients in a matrix
// algebra carrying inner derivations, and the Chern character of a
// projection built from them.

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace ncchern {

using CMatrix = Eigen::MatrixXcd;

/// Finite-dimensional real Lie algebra, [e_i, e_j] = sum_k c(i,j,k) e_k.
class LieAlgebra {
public:
    static constexpr std::size_t kMaxDim = 12;

    // `c` has dim^3 entries indexed (i * dim + j) * dim + k. Throws
    // ValidationError unless antisymmetry and the Jacobi identity hold to `tol`.
    LieAlgebra(std::size_t dim, std::vector<double> c, std::string name = "g", double tol = 1e-12);

    // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2.
    static LieAlgebra so3();
    static LieAlgebra abelian(std::size_t dim);

    std::size_t dim() const { return dim_; }
    double c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }
    const std::string& name() const { return name_; }

    // Matrix of ad_X in the basis e_k.
    Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;

private:
    std::size_t dim_;
    std::vector<double> c_;
    std::string name_;
};

/// M_n(C) with the inner derivations delta_i(a) = [rho_i, a].
class SmoothAlgebra {
public:
    // Throws ValidationError unless the rho_i are n x n and
    // [rho_i, rho_j] - sum_k c(i,j,k) rho_k is central, to `tol`.
    SmoothAlgebra(LieAlgebra g, std::vector<CMatrix> rho, double tol = 1e-12);

    // Spin-j representation of so(3), rho_k = -i J_k, of size 2j + 1.
    static SmoothAlgebra spin(double j);
    // n x n matrices with every derivation zero.
    static SmoothAlgebra trivial(LieAlgebra g, std::size_t n);

    const LieAlgebra& lie() const { return g_; }
    std::size_t n() const { return n_; }
    const std::vector<CMatrix>& rho() const { return rho_; }
    CMatrix delta(std::size_t i, const CMatrix& a) const;
    CMatrix unit() const { return CMatrix::Identity(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_)); }

private:
    LieAlgebra g_;
    std::size_t n_;
    std::vector<CMatrix> rho_;
};

/// Hermitian angular momentum matrices (J_x, J_y, J_z) for spin j, basis m = j, j-1, ..., -j.
std::vector<CMatrix> spin_matrices(double j);

/// Element of M_n(C) (x) Lambda^k g*. Coefficients live on increasing
/// multi-indices, encoded as bitmasks with k bits set.
class Form {
public:
    Form() = default;
    // The zero form. Throws ValidationError if degree > dim.
    Form(std::size_t dim, std::size_t n, std::size_t degree);
    static Form zero_form(std::size_t dim, const CMatrix& a);
    static Form scalar(std::size_t dim, std::size_t degree, const std::vector<std::complex<double>>& values);

    std::size_t dim() const { return dim_; }
    std::size_t n() const { return n_; }
    std::size_t degree() const { return degree_; }

    // Increasing multi-indices of this degree, in lexicographic order.
    const std::vector<std::uint32_t>& masks() const { return masks_; }
    std::size_t component_count() const { return masks_.size(); }
    CMatrix& component(std::size_t slot) { return coeffs_[slot]; }
    const CMatrix& component(std::size_t slot) const { return coeffs_[slot]; }
    CMatrix& at(std::uint32_t mask);
    const CMatrix& at(std::uint32_t mask) const;

    // w(e_{i_1}, ..., e_{i_k}) for arbitrary indices, with the permutation sign.
    CMatrix eval(const std::vector<std::size_t>& indices) const;
    // Scalar value of a 1 x 1 form.
    std::complex<double> value(const std::vector<std::size_t>& indices) const;

    Form& operator+=(const Form& other);
    Form& operator-=(const Form& other);
    Form& operator*=(std::complex<double> s);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(std::complex<double> s, Form a) { return a *= s; }

    double max_abs() const;

private:
    std::size_t slot(std::uint32_t mask) const;

    std::size_t dim_ = 0;
    std::size_t n_ = 0;
    std::size_t degree_ = 0;
    std::vector<std::uint32_t> masks_;
    std::vector<CMatrix> coeffs_;
};

/// Sorted indices of the bits of `mask`.
std::vector<std::size_t> mask_indices(std::uint32_t mask);

/// Chevalley-Eilenberg differential with coefficients in the algebra.
/// Throws ValidationError for top-degree input.
Form ce_differential(const Form& w, const SmoothAlgebra& alg);
/// Same with trivial coefficients, for scalar cochains of any size n.
Form ce_differential(const Form& w, const LieAlgebra& g);

/// Shuffle product with matrix multiplication of coefficients. Throws
/// ValidationError if the degrees add up past dim.
Form wedge(const Form& a, const Form& b);

/// Left multiplication of every coefficient.
Form left_multiply(const CMatrix& a, const Form& w);

/// Self-adjoint idempotent.
class Projection {
public:
    explicit Projection(CMatrix p, double tol = 1e-12);
    // Spectral projector onto the positive eigenspace of a hermitian matrix.
    static Projection positive_part(const CMatrix& hermitian);
    const CMatrix& matrix() const { return p_; }

private:
    CMatrix p_;
};

Form grassmannian_curvature(const Projection& p, const SmoothAlgebra& alg);

/// Curvature of nabla = p d + omega on the right module p M_n, evaluated from
/// the commutator definition on the spanning set p E_ab. Throws
/// ValidationError unless p omega p = omega.
Form curvature_from_connection(const Projection& p, const Form& omega, const SmoothAlgebra& alg, double tol = 1e-12);

/// tau(a) = c tr(W a).
class TraceFunctional {
public:
    // Plain matrix trace scaled by `normalization`.
    explicit TraceFunctional(std::size_t n, double normalization = 1.0);
    TraceFunctional(CMatrix weight, double normalization);

    std::complex<double> operator()(const CMatrix& a) const;
    double normalization() const { return c_; }
    std::size_t n() const { return static_cast<std::size_t>(w_.rows()); }

    // Traciality, positivity and invariance under the algebra's
    // derivations, on `samples` seeded random matrices. Throws ValidationError.
    void validate(const SmoothAlgebra& alg, double tol = 1e-12, int samples = 20, unsigned seed = 1) const;

private:
    CMatrix w_;
    double c_;
};

/// Coefficient-wise trace: M_n (x) Lambda^k -> Lambda^k (1 x 1 coefficients).
Form apply_trace(const Form& w, const TraceFunctional& tau);

/// tau(a_1 ... a_k) w_1 ^ ... ^ w_k, extended linearly; k = 0 needs a
/// single degree-0 form.
Form tau_k(const std::vector<Form>& ws, const TraceFunctional& tau);

/// Degree 2k entry is (2 pi i)^-k / k! tau(p (dp ^ dp)^k), k = 0..k_max.
/// Throws ValidationError if 2 k_max > dim.
std::vector<Form> chern_character(const Projection& p, const TraceFunctional& tau, const SmoothAlgebra& alg,
                                  std::size_t k_max);

struct CheckResult {
    bool ok = false;
    double deviation = 0.0; // the quantity compared against the tolerance
};

/// max |Im(i^k tau(p (dp ^ dp)^k))| over all multi-indices.
CheckResult reality_check(const Projection& p, const TraceFunctional& tau, const SmoothAlgebra& alg, std::size_t k,
                          double tol = 1e-10);

/// Scalar cochain closed under the trivial-coefficient differential; top
/// degree is closed by definition.
CheckResult closedness_check(const Form& cochain, const LieAlgebra& g, double tol = 1e-10);

/// Whether a - b = d(c) for some cochain c of one degree less, by least
/// squares on the matrix of d. `deviation` is the residual norm.
CheckResult same_class(const Form& a, const Form& b, const LieAlgebra& g, double tol = 1e-10);

/// (A^* w)(e_{i_1}, ..., e_{i_k}) = w(A e_{i_1}, ..., A e_{i_k}).
Form pullback(const Form& w, const Eigen::MatrixXd& a);

/// Seeded random form with coefficients uniform in the unit square.
Form random_form(std::size_t dim, std::size_t n, std::size_t degree, std::uint64_t seed);

} // namespace ncchern
