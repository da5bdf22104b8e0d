#include "ncchern/forms.hpp"

#include "ncchern/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

namespace ncchern {

namespace {

using cd = std::complex<double>;

struct MaskTable {
    std::vector<std::uint32_t> masks;
    std::vector<int> slot_of; // indexed by mask, -1 when the popcount differs
};

void combos(std::size_t dim, std::size_t k, std::size_t start, std::uint32_t cur, std::vector<std::uint32_t>& out) {
    if (k == 0) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i + k <= dim; ++i)
        combos(dim, k - 1, i + 1, cur | (1u << i), out);
}

const MaskTable& mask_table(std::size_t dim, std::size_t k) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, MaskTable> cache;
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.try_emplace({dim, k});
    if (inserted) {
        combos(dim, k, 0, 0, it->second.masks);
        it->second.slot_of.assign(std::size_t{1} << dim, -1);
        for (std::size_t s = 0; s < it->second.masks.size(); ++s)
            it->second.slot_of[it->second.masks[s]] = static_cast<int>(s);
    }
    return it->second;
}

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

CMatrix zero_matrix(std::size_t n) { return CMatrix::Zero(idx(n), idx(n)); }

// Sign of the shuffle that lists the bits of a before those of b.
int shuffle_sign(std::uint32_t a, std::uint32_t b) {
    int inversions = 0;
    for (std::uint32_t rest = a; rest; rest &= rest - 1) {
        const int bit = std::countr_zero(rest);
        inversions += std::popcount(b & ((1u << bit) - 1));
    }
    return inversions % 2 ? -1 : 1;
}

CMatrix product(const CMatrix& a, const CMatrix& b) {
    if (a.rows() == 1 && a.cols() == 1)
        return a(0, 0) * b;
    if (b.rows() == 1 && b.cols() == 1)
        return a * b(0, 0);
    return a * b;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// d with an optional coefficient action; `delta` may be null.
Form differential(const Form& w, const LieAlgebra& g, const SmoothAlgebra* alg) {
    const std::size_t dim = g.dim();
    if (w.dim() != dim)
        throw ValidationError("ce_differential: form over dimension " + std::to_string(w.dim()) +
                              ", Lie algebra has dimension " + std::to_string(dim));
    if (w.degree() >= dim)
        throw ValidationError("ce_differential: degree " + std::to_string(w.degree()) +
                              " is the top degree; d would leave the complex");
    if (alg && alg->n() != w.n())
        throw ValidationError("ce_differential: coefficient size mismatch");
    const std::size_t k = w.degree();
    Form out(dim, w.n(), k + 1);
    for (std::size_t s = 0; s < out.component_count(); ++s) {
        const std::uint32_t mask = out.masks()[s];
        const std::vector<std::size_t> x = mask_indices(mask);
        CMatrix& acc = out.component(s);
        if (alg)
            for (std::size_t i = 0; i <= k; ++i) {
                const CMatrix term = alg->delta(x[i], w.at(mask & ~(1u << x[i])));
                acc += (i % 2 ? -1.0 : 1.0) * term;
            }
        for (std::size_t i = 0; i <= k; ++i)
            for (std::size_t j = i + 1; j <= k; ++j) {
                std::vector<std::size_t> args(1);
                for (std::size_t t = 0; t <= k; ++t)
                    if (t != i && t != j)
                        args.push_back(x[t]);
                const double sign = (i + j) % 2 ? -1.0 : 1.0;
                for (std::size_t m = 0; m < dim; ++m) {
                    const double c = g.c(x[i], x[j], m);
                    if (c == 0.0)
                        continue;
                    args[0] = m;
                    acc += (sign * c) * w.eval(args);
                }
            }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------- LieAlgebra

LieAlgebra::LieAlgebra(std::size_t dim, std::vector<double> c, std::string name, double tol)
    : dim_(dim), c_(std::move(c)), name_(std::move(name)) {
    if (dim_ > kMaxDim)
        throw ValidationError("LieAlgebra: dimension " + std::to_string(dim_) + " exceeds " + std::to_string(kMaxDim));
    if (c_.size() != dim_ * dim_ * dim_)
        throw ValidationError("LieAlgebra: expected " + std::to_string(dim_ * dim_ * dim_) +
                              " structure constants, got " + std::to_string(c_.size()));
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t k = 0; k < dim_; ++k)
                if (std::abs(this->c(i, j, k) + this->c(j, i, k)) > tol)
                    throw ValidationError("LieAlgebra: bracket is not antisymmetric at (" + std::to_string(i + 1) +
                                          "," + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            for (std::size_t k = 0; k < dim_; ++k)
                for (std::size_t l = 0; l < dim_; ++l) {
                    double s = 0.0;
                    for (std::size_t m = 0; m < dim_; ++m)
                        s += this->c(i, j, m) * this->c(m, k, l) + this->c(j, k, m) * this->c(m, i, l) +
                             this->c(k, i, m) * this->c(m, j, l);
                    if (std::abs(s) > tol)
                        throw ValidationError("LieAlgebra: Jacobi identity fails for (" + std::to_string(i + 1) +
                                              "," + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                              "), residual " + std::to_string(s));
                }
}

LieAlgebra LieAlgebra::so3() {
    std::vector<double> c(27, 0.0);
    auto set = [&](std::size_t i, std::size_t j, std::size_t k) {
        c[(i * 3 + j) * 3 + k] = 1.0;
        c[(j * 3 + i) * 3 + k] = -1.0;
    };
    set(0, 1, 2);
    set(1, 2, 0);
    set(2, 0, 1);
    return LieAlgebra(3, std::move(c), "so(3)");
}

LieAlgebra LieAlgebra::abelian(std::size_t dim) {
    return LieAlgebra(dim, std::vector<double>(dim * dim * dim, 0.0), "R^" + std::to_string(dim));
}

Eigen::MatrixXd LieAlgebra::ad(const Eigen::VectorXd& x) const {
    if (static_cast<std::size_t>(x.size()) != dim_)
        throw ValidationError("LieAlgebra::ad: vector has the wrong dimension");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(idx(dim_), idx(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < dim_; ++k)
            for (std::size_t j = 0; j < dim_; ++j)
                m(idx(j), idx(k)) += x[idx(i)] * c(i, k, j);
    return m;
}

// ---------------------------------------------------------------- SmoothAlgebra

SmoothAlgebra::SmoothAlgebra(LieAlgebra g, std::vector<CMatrix> rho, double tol)
    : g_(std::move(g)), n_(rho.empty() ? 0 : static_cast<std::size_t>(rho.front().rows())), rho_(std::move(rho)) {
    if (rho_.size() != g_.dim())
        throw ValidationError("SmoothAlgebra: " + std::to_string(rho_.size()) + " representation matrices for a " +
                              std::to_string(g_.dim()) + "-dimensional Lie algebra");
    for (const auto& r : rho_)
        if (static_cast<std::size_t>(r.rows()) != n_ || static_cast<std::size_t>(r.cols()) != n_)
            throw ValidationError("SmoothAlgebra: representation matrices must all be " + std::to_string(n_) + "x" +
                                  std::to_string(n_));
    for (std::size_t i = 0; i < g_.dim(); ++i)
        for (std::size_t j = 0; j < g_.dim(); ++j) {
            CMatrix defect = rho_[i] * rho_[j] - rho_[j] * rho_[i];
            for (std::size_t k = 0; k < g_.dim(); ++k)
                defect -= g_.c(i, j, k) * rho_[k];
            // Central means a multiple of the identity in M_n.
            if (n_ > 0)
                defect -= (defect.trace() / static_cast<double>(n_)) * unit();
            if (max_abs(defect) > tol)
                throw ValidationError("SmoothAlgebra: delta does not realize [e" + std::to_string(i + 1) + ", e" +
                                      std::to_string(j + 1) + "], defect " + std::to_string(max_abs(defect)));
        }
}

std::vector<CMatrix> spin_matrices(double j) {
    const double twice = 2.0 * j;
    if (j < 0.0 || std::abs(twice - std::round(twice)) > 1e-12)
        throw ValidationError("spin_matrices: j must be a nonnegative half-integer");
    const std::size_t n = static_cast<std::size_t>(std::lround(twice)) + 1;
    CMatrix jz = zero_matrix(n), jp = zero_matrix(n);
    for (std::size_t a = 0; a < n; ++a) {
        const double m = j - static_cast<double>(a);
        jz(idx(a), idx(a)) = m;
        if (a > 0)
            jp(idx(a - 1), idx(a)) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    const CMatrix jm = jp.adjoint();
    const CMatrix jx = (jp + jm) / 2.0;
    const CMatrix jy = (jp - jm) / cd(0.0, 2.0);
    return {jx, jy, jz};
}

SmoothAlgebra SmoothAlgebra::spin(double j) {
    std::vector<CMatrix> rho;
    for (const auto& m : spin_matrices(j))
        rho.push_back(cd(0.0, -1.0) * m);
    return SmoothAlgebra(LieAlgebra::so3(), std::move(rho));
}

SmoothAlgebra SmoothAlgebra::trivial(LieAlgebra g, std::size_t n) {
    const std::size_t dim = g.dim();
    return SmoothAlgebra(std::move(g), std::vector<CMatrix>(dim, zero_matrix(n)));
}

CMatrix SmoothAlgebra::delta(std::size_t i, const CMatrix& a) const { return rho_[i] * a - a * rho_[i]; }

// ---------------------------------------------------------------- Form

std::vector<std::size_t> mask_indices(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (; mask; mask &= mask - 1)
        out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    return out;
}

Form::Form(std::size_t dim, std::size_t n, std::size_t degree) : dim_(dim), n_(n), degree_(degree) {
    if (dim > LieAlgebra::kMaxDim)
        throw ValidationError("Form: dimension " + std::to_string(dim) + " is too large");
    if (degree > dim)
        throw ValidationError("Form: degree " + std::to_string(degree) + " exceeds dimension " + std::to_string(dim));
    masks_ = mask_table(dim, degree).masks;
    coeffs_.assign(masks_.size(), zero_matrix(n));
}

Form Form::zero_form(std::size_t dim, const CMatrix& a) {
    if (a.rows() != a.cols())
        throw ValidationError("Form: coefficients must be square");
    Form f(dim, static_cast<std::size_t>(a.rows()), 0);
    f.coeffs_[0] = a;
    return f;
}

Form Form::scalar(std::size_t dim, std::size_t degree, const std::vector<cd>& values) {
    Form f(dim, 1, degree);
    if (values.size() != f.component_count())
        throw ValidationError("Form::scalar: expected " + std::to_string(f.component_count()) + " values");
    for (std::size_t s = 0; s < values.size(); ++s)
        f.coeffs_[s](0, 0) = values[s];
    return f;
}

std::size_t Form::slot(std::uint32_t mask) const {
    const auto& table = mask_table(dim_, degree_);
    if (mask >= table.slot_of.size() || table.slot_of[mask] < 0)
        throw ValidationError("Form: multi-index does not match degree " + std::to_string(degree_));
    return static_cast<std::size_t>(table.slot_of[mask]);
}

CMatrix& Form::at(std::uint32_t mask) { return coeffs_[slot(mask)]; }
const CMatrix& Form::at(std::uint32_t mask) const { return coeffs_[slot(mask)]; }

CMatrix Form::eval(const std::vector<std::size_t>& indices) const {
    if (indices.size() != degree_)
        throw ValidationError("Form::eval: " + std::to_string(indices.size()) + " arguments for a degree " +
                              std::to_string(degree_) + " form");
    std::uint32_t mask = 0;
    int inversions = 0;
    for (std::size_t a = 0; a < indices.size(); ++a) {
        if (indices[a] >= dim_)
            throw ValidationError("Form::eval: basis index out of range");
        const std::uint32_t bit = 1u << indices[a];
        if (mask & bit)
            return zero_matrix(n_);
        inversions += std::popcount(mask & ~((bit << 1) - 1));
        mask |= bit;
    }
    const CMatrix& c = coeffs_[slot(mask)];
    return inversions % 2 ? CMatrix(-c) : c;
}

cd Form::value(const std::vector<std::size_t>& indices) const {
    if (n_ != 1)
        throw ValidationError("Form::value: form is not scalar");
    return eval(indices)(0, 0);
}

Form& Form::operator+=(const Form& other) {
    if (dim_ != other.dim_ || n_ != other.n_ || degree_ != other.degree_)
        throw ValidationError("Form: adding forms of different shape");
    for (std::size_t s = 0; s < coeffs_.size(); ++s)
        coeffs_[s] += other.coeffs_[s];
    return *this;
}

Form& Form::operator-=(const Form& other) {
    if (dim_ != other.dim_ || n_ != other.n_ || degree_ != other.degree_)
        throw ValidationError("Form: subtracting forms of different shape");
    for (std::size_t s = 0; s < coeffs_.size(); ++s)
        coeffs_[s] -= other.coeffs_[s];
    return *this;
}

Form& Form::operator*=(cd s) {
    for (auto& c : coeffs_)
        c *= s;
    return *this;
}

double Form::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_)
        m = std::max(m, ncchern::max_abs(c));
    return m;
}

// ---------------------------------------------------------------- calculus

Form ce_differential(const Form& w, const SmoothAlgebra& alg) { return differential(w, alg.lie(), &alg); }

Form ce_differential(const Form& w, const LieAlgebra& g) { return differential(w, g, nullptr); }

Form wedge(const Form& a, const Form& b) {
    if (a.dim() != b.dim())
        throw ValidationError("wedge: forms over different Lie algebras");
    if (a.n() != b.n() && a.n() != 1 && b.n() != 1)
        throw ValidationError("wedge: coefficient sizes " + std::to_string(a.n()) + " and " + std::to_string(b.n()));
    const std::size_t degree = a.degree() + b.degree();
    if (degree > a.dim())
        throw ValidationError("wedge: degree " + std::to_string(degree) + " exceeds dimension " +
                              std::to_string(a.dim()));
    Form out(a.dim(), std::max(a.n(), b.n()), degree);
    for (std::size_t s = 0; s < out.component_count(); ++s) {
        const std::uint32_t m = out.masks()[s];
        for (std::size_t t = 0; t < a.component_count(); ++t) {
            const std::uint32_t ma = a.masks()[t];
            if ((ma & ~m) != 0)
                continue;
            const std::uint32_t mb = m ^ ma;
            out.component(s) += static_cast<double>(shuffle_sign(ma, mb)) * product(a.component(t), b.at(mb));
        }
    }
    return out;
}

Form left_multiply(const CMatrix& a, const Form& w) {
    Form out(w.dim(), static_cast<std::size_t>(a.rows()), w.degree());
    for (std::size_t s = 0; s < w.component_count(); ++s)
        out.component(s) = product(a, w.component(s));
    return out;
}

// ---------------------------------------------------------------- projections

Projection::Projection(CMatrix p, double tol) : p_(std::move(p)) {
    if (p_.rows() != p_.cols())
        throw ValidationError("Projection: matrix is not square");
    const double idem = max_abs(p_ * p_ - p_);
    const double adj = max_abs(p_ - p_.adjoint());
    if (idem > tol)
        throw ValidationError("Projection: p^2 - p has size " + std::to_string(idem));
    if (adj > tol)
        throw ValidationError("Projection: p - p* has size " + std::to_string(adj));
}

Projection Projection::positive_part(const CMatrix& hermitian) {
    const CMatrix h = (hermitian + hermitian.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    CMatrix p = CMatrix::Zero(h.rows(), h.cols());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        if (es.eigenvalues()[k] > 0.0)
            p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    return Projection((p + p.adjoint()) / 2.0);
}

Form grassmannian_curvature(const Projection& p, const SmoothAlgebra& alg) {
    const Form dp = ce_differential(Form::zero_form(alg.lie().dim(), p.matrix()), alg);
    return left_multiply(p.matrix(), wedge(dp, dp));
}

Form curvature_from_connection(const Projection& p, const Form& omega, const SmoothAlgebra& alg, double tol) {
    const LieAlgebra& g = alg.lie();
    const std::size_t n = alg.n();
    if (omega.degree() != 1 || omega.dim() != g.dim() || omega.n() != n)
        throw ValidationError("curvature_from_connection: omega must be a 1-form with " + std::to_string(n) + "x" +
                              std::to_string(n) + " coefficients");
    const CMatrix& pm = p.matrix();
    for (std::size_t i = 0; i < g.dim(); ++i) {
        const double off = max_abs(pm * omega.eval({i}) * pm - omega.eval({i}));
        if (off > tol)
            throw ValidationError("curvature_from_connection: omega(e" + std::to_string(i + 1) +
                                  ") is not compressed by p (defect " + std::to_string(off) + ")");
    }
    auto nabla = [&](std::size_t i, const CMatrix& xi) -> CMatrix {
        return pm * alg.delta(i, xi) + omega.eval({i}) * xi;
    };

    Form out(g.dim(), n, 2);
    for (std::size_t s = 0; s < out.component_count(); ++s) {
        const auto x = mask_indices(out.masks()[s]);
        const std::size_t i = x[0], j = x[1];
        auto theta = [&](const CMatrix& xi) -> CMatrix {
            CMatrix r = nabla(i, nabla(j, xi)) - nabla(j, nabla(i, xi));
            for (std::size_t m = 0; m < g.dim(); ++m)
                if (g.c(i, j, m) != 0.0)
                    r -= g.c(i, j, m) * nabla(m, xi);
            return r;
        };
        // The module is spanned by p E_ab; sum_a p E_aa = p recovers the
        // left multiplier, which must then reproduce every theta(p E_ab).
        CMatrix f = zero_matrix(n);
        std::vector<CMatrix> values;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                CMatrix e = zero_matrix(n);
                e(idx(a), idx(b)) = 1.0;
                values.push_back(theta(pm * e));
                if (a == b)
                    f += values.back();
            }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                CMatrix e = zero_matrix(n);
                e(idx(a), idx(b)) = 1.0;
                const double defect = max_abs(values[a * n + b] - f * pm * e);
                if (defect > 1e-9 * std::max(1.0, max_abs(f)))
                    throw ValidationError("curvature_from_connection: curvature is not module-linear (defect " +
                                          std::to_string(defect) + ")");
            }
        out.component(s) = f;
    }
    return out;
}

// ---------------------------------------------------------------- traces

TraceFunctional::TraceFunctional(std::size_t n, double normalization)
    : w_(CMatrix::Identity(idx(n), idx(n))), c_(normalization) {}

TraceFunctional::TraceFunctional(CMatrix weight, double normalization) : w_(std::move(weight)), c_(normalization) {
    if (w_.rows() != w_.cols())
        throw ValidationError("TraceFunctional: weight must be square");
}

cd TraceFunctional::operator()(const CMatrix& a) const {
    if (a.rows() != w_.rows() || a.cols() != w_.cols())
        throw ValidationError("TraceFunctional: argument is " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + ", expected " + std::to_string(w_.rows()) + "x" +
                              std::to_string(w_.cols()));
    return c_ * (w_ * a).trace();
}

void TraceFunctional::validate(const SmoothAlgebra& alg, double tol, int samples, unsigned seed) const {
    if (alg.n() != n())
        throw ValidationError("TraceFunctional: size " + std::to_string(n()) + " does not match the algebra (" +
                              std::to_string(alg.n()) + ")");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_matrix = [&] {
        CMatrix m(w_.rows(), w_.cols());
        for (Eigen::Index i = 0; i < m.size(); ++i)
            m.data()[i] = cd(u(rng), u(rng));
        return m;
    };
    const double scale = tol * std::max(1.0, std::abs(c_)) * static_cast<double>(std::max<std::size_t>(n(), 1));
    for (int s = 0; s < samples; ++s) {
        const CMatrix a = random_matrix(), b = random_matrix();
        const double comm = std::abs((*this)(a * b) - (*this)(b * a));
        if (comm > scale)
            throw ValidationError("TraceFunctional: not tracial, |tau(ab) - tau(ba)| = " + std::to_string(comm));
        const cd pos = (*this)(a.adjoint() * a);
        if (pos.real() < -scale || std::abs(pos.imag()) > scale)
            throw ValidationError("TraceFunctional: not positive on a*a");
        for (std::size_t i = 0; i < alg.lie().dim(); ++i) {
            const double inv = std::abs((*this)(alg.delta(i, a)));
            if (inv > scale)
                throw ValidationError("TraceFunctional: not invariant under e" + std::to_string(i + 1) +
                                      ", |tau(delta(a))| = " + std::to_string(inv));
        }
    }
}

Form apply_trace(const Form& w, const TraceFunctional& tau) {
    Form out(w.dim(), 1, w.degree());
    for (std::size_t s = 0; s < w.component_count(); ++s)
        out.component(s)(0, 0) = tau(w.component(s));
    return out;
}

Form tau_k(const std::vector<Form>& ws, const TraceFunctional& tau) {
    if (ws.empty())
        throw ValidationError("tau_k: needs at least one form");
    Form acc = ws.front();
    for (std::size_t i = 1; i < ws.size(); ++i)
        acc = wedge(acc, ws[i]);
    return apply_trace(acc, tau);
}

namespace {

// p (dp ^ dp)^k for k = 0..k_max.
std::vector<Form> curvature_powers(const Projection& p, const SmoothAlgebra& alg, std::size_t k_max) {
    const std::size_t dim = alg.lie().dim();
    if (2 * k_max > dim)
        throw ValidationError("chern_character: degree " + std::to_string(2 * k_max) + " exceeds dimension " +
                              std::to_string(dim));
    if (static_cast<std::size_t>(p.matrix().rows()) != alg.n())
        throw ValidationError("chern_character: projection size does not match the algebra");
    std::vector<Form> out{Form::zero_form(dim, p.matrix())};
    if (k_max == 0)
        return out;
    const Form dp = ce_differential(out.front(), alg);
    const Form dpdp = wedge(dp, dp);
    for (std::size_t k = 1; k <= k_max; ++k)
        out.push_back(wedge(out.back(), dpdp));
    return out;
}

} // namespace

std::vector<Form> chern_character(const Projection& p, const TraceFunctional& tau, const SmoothAlgebra& alg,
                                  std::size_t k_max) {
    const std::vector<Form> powers = curvature_powers(p, alg, k_max);
    std::vector<Form> out;
    cd factor = 1.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
        if (k > 0)
            factor /= cd(0.0, 2.0 * std::numbers::pi) * static_cast<double>(k);
        out.push_back(factor * apply_trace(powers[k], tau));
    }
    return out;
}

CheckResult reality_check(const Projection& p, const TraceFunctional& tau, const SmoothAlgebra& alg, std::size_t k,
                          double tol) {
    const Form t = apply_trace(curvature_powers(p, alg, k).back(), tau);
    cd ik = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        ik *= cd(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t s = 0; s < t.component_count(); ++s)
        worst = std::max(worst, std::abs((ik * t.component(s)(0, 0)).imag()));
    return {worst <= tol, worst};
}

CheckResult closedness_check(const Form& cochain, const LieAlgebra& g, double tol) {
    if (cochain.degree() == g.dim())
        return {true, 0.0};
    const double d = ce_differential(cochain, g).max_abs();
    return {d <= tol, d};
}

CheckResult same_class(const Form& a, const Form& b, const LieAlgebra& g, double tol) {
    if (a.n() != 1 || b.n() != 1)
        throw ValidationError("same_class: cochains must be scalar");
    const Form diff = a - b;
    if (diff.degree() == 0) {
        const double r = diff.max_abs();
        return {r <= tol, r};
    }
    const std::size_t k = diff.degree();
    const Form probe(g.dim(), 1, k - 1);
    CMatrix dmat = CMatrix::Zero(idx(diff.component_count()), idx(probe.component_count()));
    for (std::size_t col = 0; col < probe.component_count(); ++col) {
        Form e(g.dim(), 1, k - 1);
        e.component(col)(0, 0) = 1.0;
        const Form de = ce_differential(e, g);
        for (std::size_t row = 0; row < de.component_count(); ++row)
            dmat(idx(row), idx(col)) = de.component(row)(0, 0);
    }
    Eigen::VectorXcd rhs(idx(diff.component_count()));
    for (std::size_t row = 0; row < diff.component_count(); ++row)
        rhs[idx(row)] = diff.component(row)(0, 0);
    const Eigen::VectorXcd x = dmat.completeOrthogonalDecomposition().solve(rhs);
    const double r = (dmat * x - rhs).norm();
    return {r <= tol * std::max(1.0, rhs.norm()), r};
}

Form pullback(const Form& w, const Eigen::MatrixXd& a) {
    if (static_cast<std::size_t>(a.rows()) != w.dim() || a.rows() != a.cols())
        throw ValidationError("pullback: matrix must be dim x dim");
    Form out(w.dim(), w.n(), w.degree());
    for (std::size_t s = 0; s < out.component_count(); ++s) {
        const auto cols = mask_indices(out.masks()[s]);
        for (std::size_t t = 0; t < w.component_count(); ++t) {
            const auto rows = mask_indices(w.masks()[t]);
            Eigen::MatrixXd minor(idx(rows.size()), idx(cols.size()));
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (std::size_t c = 0; c < cols.size(); ++c)
                    minor(idx(r), idx(c)) = a(idx(rows[r]), idx(cols[c]));
            const double det = rows.empty() ? 1.0 : minor.determinant();
            if (det != 0.0)
                out.component(s) += det * w.component(t);
        }
    }
    return out;
}

Form random_form(std::size_t dim, std::size_t n, std::size_t degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Form f(dim, n, degree);
    for (std::size_t s = 0; s < f.component_count(); ++s)
        for (Eigen::Index i = 0; i < f.component(s).size(); ++i)
            f.component(s).data()[i] = cd(u(rng), u(rng));
    return f;
}

} // namespace ncchern
