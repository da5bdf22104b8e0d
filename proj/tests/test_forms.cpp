#include <catch2/catch_amalgamated.hpp>

#include "ncchern/errors.hpp"
#include "ncchern/forms.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

using namespace ncchern;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const cd I(0.0, 1.0);

// Pauli matrices typed in by hand, independent of spin_matrices().
CMatrix pauli(int k) {
    CMatrix m(2, 2);
    if (k == 1)
        m << 0, 1, 1, 0;
    else if (k == 2)
        m << 0, -I, I, 0;
    else
        m << 1, 0, 0, -1;
    return m;
}

CMatrix id2() { return CMatrix::Identity(2, 2); }

double diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

CMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m.data()[i] = cd(u(rng), u(rng));
    return m;
}

Projection random_projection(std::size_t n, std::mt19937_64& rng) {
    const CMatrix a = random_matrix(n, rng);
    return Projection::positive_part(a + a.adjoint());
}

// so(3) + R realized as u(2): rho_4 = i I is central.
SmoothAlgebra u2() {
    std::vector<double> c(64, 0.0);
    auto set = [&](std::size_t i, std::size_t j, std::size_t k) {
        c[(i * 4 + j) * 4 + k] = 1.0;
        c[(j * 4 + i) * 4 + k] = -1.0;
    };
    set(0, 1, 2);
    set(1, 2, 0);
    set(2, 0, 1);
    std::vector<CMatrix> rho;
    for (int k = 1; k <= 3; ++k)
        rho.push_back(-I * pauli(k) / 2.0);
    rho.push_back(I * id2());
    return SmoothAlgebra(LieAlgebra(4, c, "u(2)"), rho);
}

} // namespace

TEST_CASE("Lie algebra validation", "[forms]") {
    const LieAlgebra so3 = LieAlgebra::so3();
    CHECK(so3.c(0, 1, 2) == 1.0);
    CHECK(so3.c(2, 0, 1) == 1.0);
    CHECK(so3.c(1, 0, 2) == -1.0);

    std::vector<double> c(27, 0.0);
    c[(0 * 3 + 1) * 3 + 2] = 1.0; // [e1,e2] = e3 without the antisymmetric partner
    CHECK_THROWS_AS(LieAlgebra(3, c), ValidationError);

    // [e1,e2] = e3, [e1,e3] = e1 violates Jacobi on (e1,e2,e3).
    std::vector<double> bad(27, 0.0);
    auto set = [&](int i, int j, int k) {
        bad[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = 1.0;
        bad[static_cast<std::size_t>((j * 3 + i) * 3 + k)] = -1.0;
    };
    set(0, 1, 2);
    set(0, 2, 0);
    CHECK_THROWS_AS(LieAlgebra(3, bad), ValidationError);
    CHECK_THROWS_AS(LieAlgebra(3, std::vector<double>(26, 0.0)), ValidationError);

    // ad_{e1} sends e2 to e3 and e3 to -e2.
    const Eigen::MatrixXd ad = so3.ad(Eigen::Vector3d(1, 0, 0));
    CHECK(ad(2, 1) == 1.0);
    CHECK(ad(1, 2) == -1.0);
    CHECK(ad.col(0).isZero());
}

TEST_CASE("spin representations", "[forms]") {
    const auto j = spin_matrices(0.5);
    for (int k = 0; k < 3; ++k)
        CHECK(diff(j[static_cast<std::size_t>(k)], pauli(k + 1) / 2.0) < 1e-15);
    for (double s : {1.0, 1.5, 2.0}) {
        const auto m = spin_matrices(s);
        const CMatrix casimir = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
        CHECK(diff(casimir, s * (s + 1) * CMatrix::Identity(casimir.rows(), casimir.rows())) < 1e-12);
        CHECK_NOTHROW(SmoothAlgebra::spin(s));
    }
    CHECK_THROWS_AS(spin_matrices(0.3), ValidationError);

    std::vector<CMatrix> wrong{pauli(1), pauli(2), pauli(3)}; // missing the -i/2 factor
    CHECK_THROWS_AS(SmoothAlgebra(LieAlgebra::so3(), wrong), ValidationError);
    CHECK_THROWS_AS(SmoothAlgebra(LieAlgebra::so3(), {pauli(1), pauli(2)}), ValidationError);
}

TEST_CASE("derivations and the bracket", "[forms][property]") {
    std::mt19937_64 rng(3);
    for (double s : {0.5, 1.0, 1.5}) {
        const SmoothAlgebra alg = SmoothAlgebra::spin(s);
        const LieAlgebra& g = alg.lie();
        for (int trial = 0; trial < 20; ++trial) {
            const CMatrix a = random_matrix(alg.n(), rng), b = random_matrix(alg.n(), rng);
            for (std::size_t i = 0; i < 3; ++i) {
                CHECK(diff(alg.delta(i, a * b), alg.delta(i, a) * b + a * alg.delta(i, b)) < 1e-12);
                for (std::size_t j = 0; j < 3; ++j) {
                    CMatrix lhs = CMatrix::Zero(a.rows(), a.cols());
                    for (std::size_t k = 0; k < 3; ++k)
                        lhs += g.c(i, j, k) * alg.delta(k, a);
                    const CMatrix rhs = alg.delta(i, alg.delta(j, a)) - alg.delta(j, alg.delta(i, a));
                    CHECK(diff(lhs, rhs) < 1e-12);
                }
            }
            CHECK(alg.delta(0, alg.unit()).isZero());
        }
    }
}

TEST_CASE("Form storage and evaluation", "[forms]") {
    Form w(3, 1, 2);
    CHECK(w.masks() == std::vector<std::uint32_t>{0b011, 0b101, 0b110});
    w.at(0b011)(0, 0) = 5.0;
    CHECK(w.value({0, 1}) == 5.0);
    CHECK(w.value({1, 0}) == -5.0);
    CHECK(w.value({1, 1}) == 0.0);
    CHECK_THROWS_AS(w.eval({0}), ValidationError);
    CHECK_THROWS_AS(Form(3, 1, 4), ValidationError);

    const Form r = random_form(3, 2, 3, 11);
    const CMatrix top = r.eval({0, 1, 2});
    CHECK(diff(r.eval({2, 0, 1}), top) == 0.0);
    CHECK(diff(r.eval({1, 0, 2}), -top) == 0.0);
    CHECK(diff(r.eval({2, 1, 0}), -top) == 0.0);
}

TEST_CASE("Chevalley-Eilenberg differential examples", "[forms]") {
    const SmoothAlgebra alg = SmoothAlgebra::spin(0.5);
    const Form unit = Form::zero_form(3, id2());
    CHECK(ce_differential(unit, alg).max_abs() == 0.0);

    const Form da = ce_differential(Form::zero_form(3, pauli(3) / 2.0), alg);
    CHECK(diff(da.eval({0}), -pauli(2) / 2.0) < 1e-15);
    CHECK(diff(da.eval({1}), pauli(1) / 2.0) < 1e-15);
    CHECK(da.eval({2}).isZero());

    // Trivial coefficients: d e^1 = -e^2 ^ e^3 on so(3).
    const Form e1 = Form::scalar(3, 1, {1.0, 0.0, 0.0});
    const Form de1 = ce_differential(e1, alg.lie());
    CHECK(de1.value({1, 2}) == -1.0);
    CHECK(de1.value({0, 1}) == 0.0);
    CHECK(de1.value({0, 2}) == 0.0);

    CHECK_THROWS_AS(ce_differential(random_form(3, 2, 3, 1), alg), ValidationError);
    CHECK_THROWS_AS(ce_differential(random_form(3, 3, 1, 1), alg), ValidationError);
}

TEST_CASE("d squared vanishes", "[forms][property]") {
    const SmoothAlgebra alg = SmoothAlgebra::spin(1.0);
    double worst = 0.0;
    for (std::size_t degree = 0; degree <= 1; ++degree)
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const Form w = random_form(3, alg.n(), degree, 1000 * degree + seed);
            worst = std::max(worst, ce_differential(ce_differential(w, alg), alg).max_abs());
        }
    // Degree 2 needs room above it: use u(2) = so(3) + R.
    const SmoothAlgebra big = u2();
    for (std::size_t degree = 0; degree <= 2; ++degree)
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const Form w = random_form(4, 2, degree, 7000 + 100 * degree + seed);
            worst = std::max(worst, ce_differential(ce_differential(w, big), big).max_abs());
        }
    INFO("max |d d w| = " << worst);
    CHECK(worst <= 1e-12);
}

TEST_CASE("graded Leibniz rule", "[forms][property]") {
    const SmoothAlgebra alg = SmoothAlgebra::spin(1.0);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        for (auto [p, q] : {std::pair<std::size_t, std::size_t>{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}}) {
            const Form a = random_form(3, alg.n(), p, seed * 17 + p);
            const Form b = random_form(3, alg.n(), q, seed * 31 + q + 5);
            const Form lhs = ce_differential(wedge(a, b), alg);
            Form rhs = wedge(ce_differential(a, alg), b);
            const Form second = wedge(a, ce_differential(b, alg));
            rhs = p % 2 ? rhs - second : rhs + second;
            worst = std::max(worst, (lhs - rhs).max_abs());
        }
    INFO("max Leibniz defect " << worst);
    CHECK(worst <= 1e-12);
}

TEST_CASE("wedge product", "[forms]") {
    const SmoothAlgebra alg = SmoothAlgebra::spin(0.5);
    const Form w = random_form(3, 2, 2, 4);
    CHECK((wedge(Form::zero_form(3, id2()), w) - w).max_abs() == 0.0);

    const Projection p((id2() + pauli(3)) / 2.0);
    const Form dp = ce_differential(Form::zero_form(3, p.matrix()), alg);
    const Form dpdp = wedge(dp, dp);
    CHECK(diff(dpdp.eval({0, 1}), I / 2.0 * pauli(3)) < 1e-15);
    CHECK(dpdp.eval({0, 2}).isZero());
    CHECK(dpdp.eval({1, 2}).isZero());

    const Form odd = random_form(3, 1, 1, 9);
    CHECK(wedge(odd, odd).max_abs() < 1e-15);
    const Form e1 = Form::scalar(3, 1, {1.0, 0.0, 0.0}), e2 = Form::scalar(3, 1, {0.0, 1.0, 0.0});
    CHECK(wedge(e1, e2).value({0, 1}) == 1.0);
    CHECK(wedge(e2, e1).value({0, 1}) == -1.0);
    CHECK_THROWS_AS(wedge(random_form(3, 2, 2, 1), random_form(3, 2, 2, 2)), ValidationError);
    CHECK_THROWS_AS(wedge(random_form(3, 2, 1, 1), random_form(3, 3, 1, 2)), ValidationError);
}

TEST_CASE("Grassmannian curvature", "[forms]") {
    const SmoothAlgebra alg = SmoothAlgebra::spin(0.5);
    CHECK(grassmannian_curvature(Projection(id2()), alg).max_abs() == 0.0);
    CHECK(grassmannian_curvature(Projection(CMatrix::Zero(2, 2)), alg).max_abs() == 0.0);
    const Projection p((id2() + pauli(3)) / 2.0);
    const Form theta = grassmannian_curvature(p, alg);
    CHECK(diff(theta.eval({0, 1}), p.matrix() * (I / 2.0) * pauli(3)) < 1e-15);
    CHECK_THROWS_AS(Projection(pauli(3)), ValidationError);
    CHECK_THROWS_AS(Projection(CMatrix{{1.0, 1.0}, {0.0, 0.0}}), ValidationError);
}

TEST_CASE("curvature from a connection", "[forms]") {
    std::mt19937_64 rng(21);
    for (double s : {0.5, 1.0, 1.5}) {
        const SmoothAlgebra alg = SmoothAlgebra::spin(s);
        for (int trial = 0; trial < 5; ++trial) {
            const Projection p = random_projection(alg.n(), rng);
            const Form zero(3, alg.n(), 1);
            CHECK((curvature_from_connection(p, zero, alg) - grassmannian_curvature(p, alg)).max_abs() <= 1e-12);
        }
    }

    const SmoothAlgebra flat = SmoothAlgebra::trivial(LieAlgebra::abelian(2), 2);
    CHECK(curvature_from_connection(Projection(id2()), Form(2, 2, 1), flat).max_abs() == 0.0);

    const SmoothAlgebra alg = SmoothAlgebra::spin(0.5);
    const Projection p((id2() + pauli(3)) / 2.0);
    Form bad(3, 2, 1);
    bad.at(0b001) = pauli(1);
    CHECK_THROWS_AS(curvature_from_connection(p, bad, alg), ValidationError);
}

TEST_CASE("perturbed connections give the same class", "[forms][property]") {
    std::mt19937_64 rng(8);
    const SmoothAlgebra alg = SmoothAlgebra::spin(1.0);
    const TraceFunctional tau(alg.n());
    for (int trial = 0; trial < 20; ++trial) {
        const Projection p = random_projection(alg.n(), rng);
        Form omega(3, alg.n(), 1);
        for (std::size_t i = 0; i < 3; ++i)
            omega.at(1u << i) = 0.1 * p.matrix() * random_matrix(alg.n(), rng) * p.matrix();
        const Form c0 = apply_trace(grassmannian_curvature(p, alg), tau);
        const Form c1 = apply_trace(curvature_from_connection(p, omega, alg), tau);
        CHECK(closedness_check(c0, alg.lie()).ok);
        CHECK(closedness_check(c1, alg.lie()).ok);
        const CheckResult same = same_class(c0, c1, alg.lie());
        CHECK(same.ok);
        // The difference is d tau(omega) exactly.
        const Form dtau = ce_differential(apply_trace(omega, tau), alg.lie());
        CHECK((c1 - c0 - dtau).max_abs() < 1e-12);
    }

    // same_class has teeth where cohomology is nonzero.
    const LieAlgebra r2 = LieAlgebra::abelian(2);
    CHECK_FALSE(same_class(Form::scalar(2, 2, {1.0}), Form::scalar(2, 2, {0.0}), r2).ok);
    CHECK_FALSE(same_class(Form::scalar(3, 1, {1.0, 0.0, 0.0}), Form(3, 1, 1), LieAlgebra::so3()).ok);
    CHECK(same_class(Form::scalar(3, 2, {1.0, 2.0, 3.0}), Form(3, 1, 2), LieAlgebra::so3()).ok);
}

TEST_CASE("trace functionals and tau_k", "[forms]") {
    const SmoothAlgebra alg = SmoothAlgebra::spin(0.5);
    const TraceFunctional plain(2);
    CHECK_NOTHROW(plain.validate(alg));
    const TraceFunctional normalized(2, 0.5);
    CHECK(tau_k({Form::zero_form(3, id2())}, normalized).value({}) == 1.0);

    CHECK_THROWS_AS(TraceFunctional(CMatrix{{1.0, 0.0}, {0.0, 2.0}}, 1.0).validate(alg), ValidationError);
    CHECK_THROWS_AS(TraceFunctional(2, -1.0).validate(alg), ValidationError);
    CHECK_THROWS_AS(TraceFunctional(3).validate(alg), ValidationError);

    const Projection p((id2() + pauli(3)) / 2.0);
    const Form t1 = tau_k({grassmannian_curvature(p, alg)}, plain);
    CHECK(std::abs(t1.value({0, 1}) - I / 2.0) < 1e-15);
    CHECK(std::abs(t1.value({0, 2})) < 1e-15);
    CHECK(std::abs(t1.value({1, 2})) < 1e-15);

    std::mt19937_64 rng(2);
    const CMatrix a = random_matrix(2, rng), b = random_matrix(2, rng);
    CHECK(std::abs(tau_k({Form::zero_form(3, a * b - b * a)}, plain).value({})) < 1e-14);

    const Form dp = ce_differential(Form::zero_form(3, p.matrix()), alg);
    const Form two = tau_k({Form::zero_form(3, p.matrix()), dp, dp}, plain);
    CHECK(std::abs(two.value({0, 1}) - I / 2.0) < 1e-15);
}

TEST_CASE("Chern character examples", "[forms]") {
    const SmoothAlgebra alg = SmoothAlgebra::spin(0.5);
    const TraceFunctional tau(2);

    const auto unit = chern_character(Projection(id2()), tau, alg, 1);
    REQUIRE(unit.size() == 2);
    CHECK(unit[0].value({}) == 2.0);
    CHECK(unit[1].max_abs() == 0.0);

    const Projection p((id2() + pauli(3)) / 2.0);
    const auto ch = chern_character(p, tau, alg, 1);
    CHECK(std::abs(ch[0].value({}) - 1.0) <= 1e-12);
    CHECK(std::abs(ch[1].value({0, 1}) - 1.0 / (4.0 * kPi)) <= 1e-12);
    CHECK(std::abs(ch[1].value({0, 2})) <= 1e-12);
    CHECK(std::abs(ch[1].value({1, 2})) <= 1e-12);

    const auto zero = chern_character(Projection(CMatrix::Zero(2, 2)), tau, alg, 1);
    CHECK(zero[0].max_abs() == 0.0);
    CHECK(zero[1].max_abs() == 0.0);

    CHECK_THROWS_AS(chern_character(p, tau, alg, 2), ValidationError);

    std::mt19937_64 rng(12);
    const SmoothAlgebra big = SmoothAlgebra::spin(1.5);
    const TraceFunctional tb(4, 0.25);
    for (int trial = 0; trial < 20; ++trial) {
        const Projection q = random_projection(4, rng);
        CHECK(std::abs(chern_character(q, tb, big, 1)[0].value({}) - tb(q.matrix())) < 1e-14);
    }
}

TEST_CASE("reality and closedness", "[forms][property]") {
    const SmoothAlgebra alg = SmoothAlgebra::spin(0.5);
    const TraceFunctional tau(2);
    const Projection p((id2() + pauli(3)) / 2.0);
    CHECK(reality_check(p, tau, alg, 1).ok);
    CHECK(reality_check(p, tau, alg, 0).ok);
    CHECK(reality_check(Projection(id2()), tau, alg, 1).ok);

    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 50; ++trial) {
        const SmoothAlgebra& a = trial % 2 ? SmoothAlgebra::spin(1.0) : SmoothAlgebra::spin(1.5);
        const Projection q = random_projection(a.n(), rng);
        const CheckResult r = reality_check(q, TraceFunctional(a.n()), a, 1);
        INFO("deviation " << r.deviation);
        CHECK(r.ok);
    }

    const LieAlgebra so3 = LieAlgebra::so3();
    CHECK(closedness_check(apply_trace(grassmannian_curvature(p, alg), tau), so3).ok);
    CHECK(closedness_check(Form::scalar(3, 0, {3.0}), so3).ok);
    CHECK(closedness_check(Form::scalar(3, 3, {1.0}), so3).ok);
    CHECK_FALSE(closedness_check(Form::scalar(3, 1, {1.0, 0.0, 0.0}), so3).ok);
}

TEST_CASE("character cochains transform under conjugation", "[forms][property]") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    const SmoothAlgebra alg = SmoothAlgebra::spin(1.0);
    const TraceFunctional tau(alg.n());
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Vector3d x(u(rng), u(rng), u(rng));
        CMatrix rx = CMatrix::Zero(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            rx += x[static_cast<Eigen::Index>(i)] * alg.rho()[i];
        const CMatrix g = rx.exp();
        const Projection p = random_projection(alg.n(), rng);
        const Projection q(g * p.matrix() * g.adjoint());
        const Eigen::MatrixXd a = (-alg.lie().ad(x)).exp();
        const auto cp = chern_character(p, tau, alg, 1);
        const auto cq = chern_character(q, tau, alg, 1);
        for (std::size_t k = 0; k < cp.size(); ++k)
            CHECK((cq[k] - pullback(cp[k], a)).max_abs() < 1e-12);
    }
}

TEST_CASE("pullback of cochains", "[forms]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(3, 3);
    for (Eigen::Index i = 0; i < 9; ++i)
        a.data()[i] = u(rng);
    const Form w = random_form(3, 1, 1, 3);
    const Form pw = pullback(w, a);
    for (std::size_t i = 0; i < 3; ++i) {
        cd expect = 0.0;
        for (std::size_t j = 0; j < 3; ++j)
            expect += a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * w.value({j});
        CHECK(std::abs(pw.value({i}) - expect) < 1e-14);
    }
    const Form top = random_form(3, 1, 3, 4);
    CHECK(std::abs(pullback(top, a).value({0, 1, 2}) - a.determinant() * top.value({0, 1, 2})) < 1e-14);
}
