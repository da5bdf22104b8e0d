#include "ncchern/sphere.hpp"

#include "ncchern/clutching.hpp"
#include "ncchern/errors.hpp"
#include "ncchern/forms.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncchern {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

// Real trigonometric basis on n (even) equispaced points:
// 1, cos t, sin t, ..., cos (n/2 - 1) t, sin (n/2 - 1) t, cos (n/2) t.
struct TrigBasis {
    std::size_t n = 0;
    std::vector<int> mode;
    Eigen::MatrixXd inverse; // values on the grid -> coefficients

    explicit TrigBasis(std::size_t count) : n(count), mode(count) {
        Eigen::MatrixXd b(idx(n), idx(n));
        for (std::size_t k = 0; k < n; ++k)
            eval(kTwoPi * static_cast<double>(k) / static_cast<double>(n), b.row(idx(k)));
        for (std::size_t q = 0; q < n; ++q)
            mode[q] = static_cast<int>((q + 1) / 2);
        inverse = b.partialPivLu().inverse();
    }

    template <class Row>
    void eval(double t, Row&& out) const {
        out(0) = 1.0;
        const std::size_t half = n / 2;
        for (std::size_t b = 1; b < half; ++b) {
            out(idx(2 * b - 1)) = std::cos(static_cast<double>(b) * t);
            out(idx(2 * b)) = std::sin(static_cast<double>(b) * t);
        }
        out(idx(n - 1)) = std::cos(static_cast<double>(half) * t);
    }
};

struct Angles {
    double theta, phi, psi;
};

Angles angles_of(const TangentPoint& p) {
    const double z = std::clamp(p.x.z(), -1.0, 1.0);
    const double theta = std::acos(z);
    const double phi = wrap(std::atan2(p.x.y(), p.x.x()));
    const TangentPoint frame = tangent_point(theta, phi, 0.0);
    const Eigen::Vector3d e_theta = frame.v;
    const Eigen::Vector3d e_phi = tangent_point(theta, phi, kPi / 2).v;
    return {theta, phi, wrap(std::atan2(p.v.dot(e_phi), p.v.dot(e_theta)))};
}

// Trigonometric interpolant of the field extended to theta in [-pi, pi)
// through F(-theta, phi, psi) = f(theta, phi + pi, psi + pi). A fibre and
// longitude mode pair (b, c) is even or odd in theta according to b + c.
class SpectralInterpolant {
public:
    explicit SpectralInterpolant(const SymbolField& f)
        : L_(f.grid().L), M_(f.grid().M), F_(f.grid().F), phi_(M_), psi_(F_) {
        Eigen::MatrixXd even_basis(idx(L_), idx(L_)), odd_basis(idx(L_), idx(L_));
        for (std::size_t i = 0; i < L_; ++i)
            for (std::size_t a = 0; a < L_; ++a) {
                even_basis(idx(i), idx(a)) = std::cos(static_cast<double>(a) * f.theta(i));
                odd_basis(idx(i), idx(a)) = std::sin(static_cast<double>(a + 1) * f.theta(i));
            }
        const Eigen::MatrixXd even_inv = even_basis.partialPivLu().inverse();
        const Eigen::MatrixXd odd_inv = odd_basis.partialPivLu().inverse();

        // Fourier coefficients in (phi, psi) at every colatitude node.
        std::vector<Eigen::MatrixXd> g(L_);
        for (std::size_t i = 0; i < L_; ++i) {
            Eigen::MatrixXd v(idx(M_), idx(F_));
            for (std::size_t j = 0; j < M_; ++j)
                for (std::size_t k = 0; k < F_; ++k)
                    v(idx(j), idx(k)) = f.at(i, j, k);
            g[i] = phi_.inverse * v * psi_.inverse.transpose();
        }
        for (std::size_t qp = 0; qp < M_; ++qp)
            for (std::size_t qs = 0; qs < F_; ++qs)
                ((phi_.mode[qp] + psi_.mode[qs]) % 2 ? odd_pairs_ : even_pairs_).push_back({qp, qs});
        even_ = Eigen::MatrixXd(idx(L_), idx(even_pairs_.size()));
        odd_ = Eigen::MatrixXd(idx(L_), idx(odd_pairs_.size()));
        fill(even_, even_pairs_, even_inv, g);
        fill(odd_, odd_pairs_, odd_inv, g);
    }

    // Values at every base point (theta, phi) and fibre angles psi_k + shift,
    // laid out base-major. The (theta, phi) contraction is done once per
    // base point, which leaves a trigonometric polynomial in psi.
    std::vector<double> evaluate(const std::vector<Angles>& base, const std::vector<double>& fibre) const {
        const std::size_t nb = base.size(), nf = fibre.size();
        Eigen::MatrixXd ce(idx(nb), idx(L_)), co(idx(nb), idx(L_));
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t a = 0; a < L_; ++a) {
                ce(idx(b), idx(a)) = std::cos(static_cast<double>(a) * base[b].theta);
                co(idx(b), idx(a)) = std::sin(static_cast<double>(a + 1) * base[b].theta);
            }
        const Eigen::MatrixXd te = ce * even_;
        const Eigen::MatrixXd to = co * odd_;

        std::vector<double> out(nb * nf);
        Eigen::VectorXd bphi(idx(M_)), coeff(idx(F_)), bpsi(idx(F_));
        for (std::size_t b = 0; b < nb; ++b) {
            phi_.eval(base[b].phi, bphi);
            coeff.setZero();
            for (std::size_t r = 0; r < even_pairs_.size(); ++r)
                coeff[idx(even_pairs_[r].second)] += bphi[idx(even_pairs_[r].first)] * te(idx(b), idx(r));
            for (std::size_t r = 0; r < odd_pairs_.size(); ++r)
                coeff[idx(odd_pairs_[r].second)] += bphi[idx(odd_pairs_[r].first)] * to(idx(b), idx(r));
            for (std::size_t k = 0; k < nf; ++k) {
                psi_.eval(fibre[k] + base[b].psi, bpsi);
                out[b * nf + k] = coeff.dot(bpsi);
            }
        }
        return out;
    }

private:
    using Pair = std::pair<std::size_t, std::size_t>;

    void fill(Eigen::MatrixXd& dest, const std::vector<Pair>& pairs, const Eigen::MatrixXd& inv,
              const std::vector<Eigen::MatrixXd>& g) const {
        Eigen::VectorXd column(idx(L_));
        for (std::size_t r = 0; r < pairs.size(); ++r) {
            for (std::size_t i = 0; i < L_; ++i)
                column[idx(i)] = g[i](idx(pairs[r].first), idx(pairs[r].second));
            dest.col(idx(r)) = inv * column;
        }
    }

    std::size_t L_, M_, F_;
    TrigBasis phi_, psi_;
    std::vector<Pair> even_pairs_, odd_pairs_;
    Eigen::MatrixXd even_, odd_;
};

// Bilinear in (theta, phi) over the doubled-sphere grid, trigonometric in psi.
class BilinearInterpolant {
public:
    explicit BilinearInterpolant(const SymbolField& f) : f_(f), psi_(f.grid().F) {
        const QuadratureSpec& q = f.grid();
        coef_.resize(q.L * q.M);
        Eigen::VectorXd v(idx(q.F));
        for (std::size_t i = 0; i < q.L; ++i)
            for (std::size_t j = 0; j < q.M; ++j) {
                for (std::size_t k = 0; k < q.F; ++k)
                    v[idx(k)] = f.at(i, j, k);
                coef_[i * q.M + j] = psi_.inverse * v;
            }
    }

    double operator()(const Angles& a) const {
        const QuadratureSpec& q = f_.grid();
        // Colatitude bracket, continuing across the poles onto mirrored nodes.
        struct Node {
            std::size_t i;
            bool mirrored;
            double theta;
        };
        Node lo{0, true, -f_.theta(0)}, hi{0, false, f_.theta(0)};
        if (a.theta >= f_.theta(q.L - 1)) {
            lo = {q.L - 1, false, f_.theta(q.L - 1)};
            hi = {q.L - 1, true, kTwoPi - f_.theta(q.L - 1)};
        } else if (a.theta >= f_.theta(0)) {
            std::size_t i = 0;
            while (f_.theta(i + 1) <= a.theta)
                ++i;
            lo = {i, false, f_.theta(i)};
            hi = {i + 1, false, f_.theta(i + 1)};
        }
        const double s = (a.theta - lo.theta) / (hi.theta - lo.theta);
        const double dphi = kTwoPi / static_cast<double>(q.M);
        const std::size_t j0 = static_cast<std::size_t>(std::floor(a.phi / dphi)) % q.M;
        const std::size_t j1 = (j0 + 1) % q.M;
        const double t = (a.phi - static_cast<double>(j0) * dphi) / dphi;
        return (1 - s) * ((1 - t) * corner(lo, j0, a.psi) + t * corner(lo, j1, a.psi)) +
               s * ((1 - t) * corner(hi, j0, a.psi) + t * corner(hi, j1, a.psi));
    }

private:
    template <class Node>
    double corner(const Node& n, std::size_t j, double psi) const {
        const QuadratureSpec& q = f_.grid();
        if (n.mirrored) {
            j = (j + q.M / 2) % q.M;
            psi += kPi;
        }
        Eigen::VectorXd b(idx(q.F));
        psi_.eval(psi, b);
        return coef_[n.i * q.M + j].dot(b);
    }

    const SymbolField& f_;
    TrigBasis psi_;
    std::vector<Eigen::VectorXd> coef_;
};

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

} // namespace

// ---------------------------------------------------------------- quadrature

void QuadratureSpec::validate() const {
    if (L < 8 || M < 8 || F < 8)
        throw ValidationError("QuadratureSpec: grid orders must be at least 8, got L=" + std::to_string(L) +
                              ", M=" + std::to_string(M) + ", F=" + std::to_string(F));
    if (M % 2 || F % 2)
        throw ValidationError("QuadratureSpec: M and F must be even");
    if (!std::isfinite(normalization) || normalization < 0.0)
        throw ValidationError("QuadratureSpec: normalization must be finite and nonnegative");
}

GaussLegendre gauss_legendre(std::size_t n) {
    if (n == 0)
        throw ValidationError("gauss_legendre: need at least one node");
    const int order = static_cast<int>(n);
    std::vector<double> nodes;
    for (double z : boost::math::legendre_p_zeros<double>(order)) {
        nodes.push_back(z);
        if (z != 0.0)
            nodes.push_back(-z);
    }
    std::sort(nodes.begin(), nodes.end(), std::greater<>());
    GaussLegendre gl{nodes, {}};
    for (double x : nodes) {
        const double dp = boost::math::legendre_p_prime(order, x);
        gl.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    }
    return gl;
}

TangentPoint tangent_point(double theta, double phi, double psi) {
    const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(phi), cp = std::cos(phi);
    const Eigen::Vector3d x(st * cp, st * sp, ct);
    const Eigen::Vector3d e_theta(ct * cp, ct * sp, -st);
    const Eigen::Vector3d e_phi(-sp, cp, 0.0);
    return {x, std::cos(psi) * e_theta + std::sin(psi) * e_phi};
}

SymbolField::SymbolField(QuadratureSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.L * grid_.M * grid_.F)
        throw ValidationError("SymbolField: " + std::to_string(values_.size()) + " values for a " +
                              std::to_string(grid_.L) + "x" + std::to_string(grid_.M) + "x" + std::to_string(grid_.F) +
                              " grid");
    for (std::size_t s = 0; s < values_.size(); ++s)
        if (!std::isfinite(values_[s]))
            throw ValidationError("SymbolField: value " + std::to_string(s) + " is not finite");
    for (double x : gauss_legendre(grid_.L).nodes)
        thetas_.push_back(std::acos(x));
}

double SymbolField::phi(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(grid_.M); }
double SymbolField::psi(std::size_t k) const { return kTwoPi * static_cast<double>(k) / static_cast<double>(grid_.F); }

SymbolField SymbolField::constant(const QuadratureSpec& grid, double c) {
    grid.validate();
    return SymbolField(grid, std::vector<double>(grid.L * grid.M * grid.F, c));
}

SymbolField SymbolField::sample_angles(const QuadratureSpec& grid,
                                       const std::function<double(double, double, double)>& f) {
    grid.validate();
    std::vector<double> values;
    values.reserve(grid.L * grid.M * grid.F);
    for (double x : gauss_legendre(grid.L).nodes) {
        const double theta = std::acos(x);
        for (std::size_t j = 0; j < grid.M; ++j)
            for (std::size_t k = 0; k < grid.F; ++k)
                values.push_back(f(theta, kTwoPi * static_cast<double>(j) / static_cast<double>(grid.M),
                                   kTwoPi * static_cast<double>(k) / static_cast<double>(grid.F)));
    }
    return SymbolField(grid, std::move(values));
}

SymbolField SymbolField::sample(const QuadratureSpec& grid, const std::function<double(const TangentPoint&)>& f) {
    return sample_angles(grid, [&](double t, double p, double s) { return f(tangent_point(t, p, s)); });
}

double trace_symbol(const SymbolField& f, const QuadratureSpec& q) {
    q.validate();
    if (!f.grid().same_grid(q))
        throw ValidationError("trace_symbol: field sampled on a " + std::to_string(f.grid().L) + "x" +
                              std::to_string(f.grid().M) + "x" + std::to_string(f.grid().F) +
                              " grid, quadrature expects " + std::to_string(q.L) + "x" + std::to_string(q.M) + "x" +
                              std::to_string(q.F));
    const GaussLegendre gl = gauss_legendre(q.L);
    std::vector<double> terms(f.values().size());
    const std::size_t block = q.M * q.F;
    for (std::size_t i = 0; i < q.L; ++i)
        for (std::size_t r = 0; r < block; ++r)
            terms[i * block + r] = gl.weights[i] * f.values()[i * block + r];
    const double cell = (kTwoPi / static_cast<double>(q.M)) * (kTwoPi / static_cast<double>(q.F));
    return q.normalization * cell * pairwise_sum(terms.data(), terms.size());
}

SymbolField rotate_symbol(const SymbolField& f, const Eigen::Matrix3d& g, Interpolation method) {
    const double orth = (g.transpose() * g - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    const double det = g.determinant();
    if (!(orth <= 1e-12) || !(std::abs(det - 1.0) <= 1e-12))
        throw ValidationError("rotate_symbol: not a rotation (|g^T g - I| = " + std::to_string(orth) +
                              ", det = " + std::to_string(det) + ")");
    const QuadratureSpec& q = f.grid();
    const Eigen::Matrix3d inv = g.transpose();
    std::vector<double> values;
    if (method == Interpolation::spectral) {
        // A rotation turns every fibre rigidly: the fibre angle at the source
        // point is psi + gamma, with gamma fixed by the image of e_theta.
        std::vector<Angles> base;
        base.reserve(q.L * q.M);
        for (std::size_t i = 0; i < q.L; ++i)
            for (std::size_t j = 0; j < q.M; ++j) {
                const TangentPoint p = tangent_point(f.theta(i), f.phi(j), 0.0);
                base.push_back(angles_of({inv * p.x, inv * p.v}));
            }
        std::vector<double> fibre(q.F);
        for (std::size_t k = 0; k < q.F; ++k)
            fibre[k] = f.psi(k);
        values = SpectralInterpolant(f).evaluate(base, fibre);
    } else {
        const BilinearInterpolant interp(f);
        values.reserve(f.values().size());
        for (std::size_t i = 0; i < q.L; ++i)
            for (std::size_t j = 0; j < q.M; ++j)
                for (std::size_t k = 0; k < q.F; ++k) {
                    const TangentPoint p = tangent_point(f.theta(i), f.phi(j), f.psi(k));
                    values.push_back(interp(angles_of({inv * p.x, inv * p.v})));
                }
    }
    return SymbolField(q, std::move(values));
}

// ---------------------------------------------------------------- K-theory

namespace {

const char* kCosphere = "C(S*S^2)";

void label_mv_diagram(SixTermDiagram& d) {
    d.labels = {"K0(C(S*S^2))", "K0(C(D x S^1)) + K0(C(D x S^1))", "K0(C(S^1 x S^1))",
                "K1(C(S*S^2))", "K1(C(D x S^1)) + K1(C(D x S^1))", "K1(C(S^1 x S^1))"};
    d.generator_labels[1] = {"[1]_0^N", "[1]_0^S"};
    d.generator_labels[2] = {"[1]_0", "theta([w]_1)"};
    d.generator_labels[4] = {"[w]_1^N", "[w]_1^S"};
    d.generator_labels[5] = {"[z]_1", "[w]_1"};
}

NamedGroup named(const SixTermDiagram& d, const SolvedNode& s) {
    NamedGroup g{d.labels[s.node], s.group, s.generator_labels, s.steps};
    if (s.node != 0)
        return g;
    // A generator restricting to the unit on both hemispheres is the unit class.
    for (std::size_t k = 0; k < s.group.generator_count(); ++k) {
        std::vector<Integer> e(s.group.generator_count(), 0);
        e[k] = 1;
        if (s.outgoing.apply(e) == std::vector<Integer>{1, 1}) {
            g.provenance.push_back("generator " + s.generator_labels[k] +
                                   " restricts to [1]_0 on both halves, so it is the class [1]_0 of the unit");
            g.generators[k] = "[1]_0";
        }
    }
    return g;
}

} // namespace

KTheoryReport reproduce_cosphere_ktheory(const CosphereOptions& options) {
    KTheoryReport r;
    r.algebra = kCosphere;
    const ChartChange chart = options.identity_clutching ? ChartChange::identity() : ChartChange::stereographic();
    const TorusMap t = transition_from_chart_change(chart, options.transition_grid);
    const IntMatrix m = torus_map_k1_matrix(t, options.winding_samples);
    const ClutchingRestrictions res = clutching_restrictions(m);

    SixTermDiagram d = mayer_vietoris_assemble({res.k0_first, res.k0_second}, {res.k1_first, res.k1_second}, kCosphere);
    label_mv_diagram(d);
    r.transition_k1_matrix = m;
    r.difference_k0 = *d.arrows[1];
    r.difference_k1 = *d.arrows[4];
    r.sign_convention = "(x, y) -> pi2*(y) - pi1*(x); the printed K1 map (x, y) -> (-2y, -y-x) differs from " +
                        d.arrows[4]->matrix().to_string() + " by a sign in one row and has the same kernel and cokernel";

    const std::vector<std::string> pipeline{
        std::string("transition map from the ") + (options.identity_clutching ? "identity" : "stereographic") +
            " chart change on a " + std::to_string(options.transition_grid) + "x" +
            std::to_string(options.transition_grid) + " grid, numerical Jacobian checked against the closed form",
        "K1 matrix of the transition map by winding numbers with N = " + std::to_string(options.winding_samples) +
            ": " + m.to_string(),
        "(pi2*-pi1*)_0 = " + d.arrows[1]->matrix().to_string() + ", (pi2*-pi1*)_1 = " +
            d.arrows[4]->matrix().to_string()};

    const SolvedNode s0 = solve_unknown(d, 0);
    const SolvedNode s3 = solve_unknown(d, 3);
    SixTermDiagram full = apply_solution(apply_solution(d, s0), s3);
    r.exactness_verified = verify_exactness(full).all_exact();
    if (!r.exactness_verified)
        throw ValidationError("reproduce_cosphere_ktheory: solved diagram is not exact");

    r.k0 = named(d, s0);
    r.k1 = named(d, s3);
    for (NamedGroup* g : {&r.k0, &r.k1}) {
        g->provenance.insert(g->provenance.begin(), pipeline.begin(), pipeline.end());
        g->provenance.push_back("exactness of the completed six-term diagram verified at all six nodes");
    }
    return r;
}

KTheoryReport reproduce_algebra_ktheory(const FactSet& facts, const KTheoryReport& cosphere,
                                        const std::pair<FgAbGroup, FgAbGroup>& ideal) {
    const IdealSequenceSolution sol = solve_ideal_sequence(ideal, {cosphere.k0.group, cosphere.k1.group}, facts);
    KTheoryReport r;
    r.algebra = "A";
    r.exactness_verified = true;
    for (const auto& [name, fact] : facts)
        if (name == kIndexMapSurjective)
            r.facts_used.push_back(name);
    r.k0 = {"K0(A)", sol.k0, {}, sol.steps};
    r.k1 = {"K1(A)", sol.k1, {}, sol.steps};
    if (sol.k0 == cosphere.k0.group) {
        // sigma*_0 is an isomorphism here and sends [I]_0 to [1]_0.
        for (const auto& label : cosphere.k0.generators)
            r.k0.generators.push_back(label == "[1]_0" ? "[I]_0" : "sigma*^-1(" + label + ")");
        r.k0.provenance.push_back("sigma*_0 is an isomorphism carrying the class of the identity to [1]_0");
    } else {
        for (std::size_t k = 0; k < sol.k0.generator_count(); ++k)
            r.k0.generators.push_back("g" + std::to_string(k));
    }
    for (std::size_t k = 0; k < sol.k1.generator_count(); ++k)
        r.k1.generators.push_back("h" + std::to_string(k));
    return r;
}

ChernImageReport chern_image_report(const QuadratureSpec& q, bool vanishing_on_identity) {
    ChernImageReport r;
    r.vanishing_trace_flag = vanishing_on_identity;
    r.analytic_tau_of_identity = 8.0 * kPi * kPi * q.normalization;
    r.tau_of_identity = vanishing_on_identity ? 0.0 : trace_symbol(SymbolField::constant(q, 1.0), q);

    // The unit of the symbol algebra is fixed by the rotation action, so its
    // character sees only tau: a 1 x 1 algebra with zero derivations.
    const SmoothAlgebra unit_alg = SmoothAlgebra::trivial(LieAlgebra::so3(), 1);
    const TraceFunctional tau(1, r.tau_of_identity);
    const auto ch = chern_character(Projection(CMatrix::Identity(1, 1)), tau, unit_alg, 1);
    r.degree0 = ch[0].value({}).real();
    r.higher_degrees_vanish = ch[1].max_abs() == 0.0;
    r.image = r.tau_of_identity != 0.0 ? "R" : "0";

    r.notes.push_back("dI = 0, so only the degree-0 term tau(I) survives");
    r.notes.push_back("every homomorphism from Z/2 to a real vector space vanishes, so the torsion summand "
                      "contributes nothing");
    if (r.image == "R")
        r.notes.push_back("the Z summand generated by [I]_0 maps to tau(I) Z, whose real span is R");
    else
        r.notes.push_back("tau(I) = 0: the character is zero on K0(A)");
    if (vanishing_on_identity)
        r.notes.push_back("trace flagged as vanishing on the identity, as the Wodzicki residue does");
    return r;
}

} // namespace ncchern
