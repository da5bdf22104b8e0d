#include "ncchern/clutching.hpp"

#include "ncchern/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace ncchern {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex unit(double theta) { return std::polar(1.0, theta); }

Complex to_complex(const Eigen::Vector2d& v) { return {v.x(), v.y()}; }

Eigen::Vector2d to_vector(Complex z) { return {z.real(), z.imag()}; }

Complex ipow(Complex z, int k) {
    Complex out = 1.0;
    const Complex base = k >= 0 ? z : 1.0 / z;
    for (int i = 0; i < std::abs(k); ++i)
        out *= base;
    return out;
}

} // namespace

LoopSample::LoopSample(std::vector<Complex> samples) : samples_(std::move(samples)) {
    if (samples_.size() < kMinSamples)
        throw ValidationError("LoopSample: " + std::to_string(samples_.size()) + " samples, need at least " +
                              std::to_string(kMinSamples));
    for (std::size_t k = 0; k < samples_.size(); ++k)
        if (!std::isfinite(samples_[k].real()) || !std::isfinite(samples_[k].imag()))
            throw ValidationError("LoopSample: sample " + std::to_string(k) + " is not finite");
}

LoopSample LoopSample::from_function(const std::function<Complex(double)>& f, std::size_t n) {
    std::vector<Complex> s(n);
    for (std::size_t k = 0; k < n; ++k)
        s[k] = f(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
    return LoopSample(std::move(s));
}

long winding_number(const LoopSample& loop, const WindingOptions& options) {
    const auto& s = loop.samples();
    const std::size_t n = s.size();
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(s[k]) <= options.zero_tolerance)
            throw ZeroSample("winding_number: loop passes through zero", k);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double step = std::arg(s[(k + 1) % n] / s[k]);
        if (std::abs(step) >= options.max_phase_step)
            throw NumericalGuard("winding_number: phase step " + std::to_string(step) + " rad exceeds " +
                                     std::to_string(options.max_phase_step) + " rad; loop is undersampled",
                                 k);
        total += step;
    }
    const double turns = total / kTwoPi;
    return std::lround(turns);
}

// ---------------------------------------------------------------- TorusMap

TorusMap TorusMap::identity() {
    return {[](Complex z, Complex) { return z; }, [](Complex, Complex w) { return w; }};
}

TorusMap TorusMap::monomial(int a, int b, int c, int d) {
    return {[=](Complex z, Complex w) { return ipow(z, a) * ipow(w, b); },
            [=](Complex z, Complex w) { return ipow(z, c) * ipow(w, d); }};
}

TorusMap TorusMap::stereographic_closed_form() {
    return {[](Complex z, Complex) { return z; }, [](Complex z, Complex w) { return -z * z * std::conj(w); }};
}

TorusMap TorusMap::after(const TorusMap& inner) const {
    const TorusMap outer = *this;
    return {[outer, inner](Complex z, Complex w) { return outer.first(inner.first(z, w), inner.second(z, w)); },
            [outer, inner](Complex z, Complex w) { return outer.second(inner.first(z, w), inner.second(z, w)); }};
}

// ---------------------------------------------------------------- ChartChange

Eigen::Matrix2d stereographic_jacobian(const Eigen::Vector2d& n) {
    const double r2 = n.squaredNorm();
    const double x = n.x(), y = n.y();
    Eigen::Matrix2d j;
    j << -x * x + y * y, -2.0 * x * y, -2.0 * x * y, x * x - y * y;
    return j / (r2 * r2);
}

ChartChange ChartChange::stereographic() {
    ChartChange c;
    c.map = [](const Eigen::Vector2d& n) -> Eigen::Vector2d { return n / n.squaredNorm(); };
    c.closed_form_jacobian = stereographic_jacobian;
    return c;
}

ChartChange ChartChange::identity() {
    ChartChange c;
    c.map = [](const Eigen::Vector2d& n) -> Eigen::Vector2d { return n; };
    c.closed_form_jacobian = [](const Eigen::Vector2d&) -> Eigen::Matrix2d { return Eigen::Matrix2d::Identity(); };
    return c;
}

Eigen::Matrix2d ChartChange::numerical_jacobian(const Eigen::Vector2d& p, double h) const {
    Eigen::Matrix2d j;
    for (int k = 0; k < 2; ++k) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e[k] = h;
        j.col(k) = (map(p + e) - map(p - e)) / (2.0 * h);
    }
    return j;
}

TorusMap transition_from_chart_change(const ChartChange& chart, std::size_t grid, const TransitionOptions& options) {
    if (!chart.map)
        throw ValidationError("transition_from_chart_change: chart has no map");
    if (grid == 0)
        throw ValidationError("transition_from_chart_change: grid must be positive");
    if (chart.inner_radius >= 1.0 || chart.outer_radius <= 1.0)
        throw ValidationError("transition_from_chart_change: chart domain must contain the unit circle");

    const double h = options.step;
    auto fibre = [chart, h](Complex z, Complex w) {
        const Eigen::Vector2d v = chart.numerical_jacobian(to_vector(z), h) * to_vector(w);
        const Complex c = to_complex(v);
        return c / std::abs(c);
    };
    TorusMap t{[chart](Complex z, Complex) { return to_complex(chart.map(to_vector(z))); }, fibre};

    for (std::size_t a = 0; a < grid; ++a) {
        const Complex z = unit(kTwoPi * static_cast<double>(a) / static_cast<double>(grid));
        const Eigen::Matrix2d jac = chart.numerical_jacobian(to_vector(z), h);
        if (std::abs(jac.determinant()) <= options.singular_tolerance)
            throw NumericalGuard("transition_from_chart_change: Jacobian is singular", a);
        if (chart.closed_form_jacobian) {
            const double err = (jac - (*chart.closed_form_jacobian)(to_vector(z))).cwiseAbs().maxCoeff();
            if (err > options.jacobian_tolerance)
                throw ValidationError("transition_from_chart_change: numerical Jacobian differs from the closed form by " +
                                      std::to_string(err) + " at grid point " + std::to_string(a));
        }
        for (std::size_t b = 0; b < grid; ++b) {
            const Complex w = unit(kTwoPi * static_cast<double>(b) / static_cast<double>(grid));
            const auto [tz, tw] = t(z, w);
            if (std::abs(std::abs(tz) - 1.0) > options.unit_tolerance ||
                std::abs(std::abs(tw) - 1.0) > options.unit_tolerance)
                throw ValidationError("transition_from_chart_change: image of grid point " +
                                      std::to_string(a * grid + b) + " is off the torus");
        }
    }
    return t;
}

IntMatrix torus_map_k1_matrix_at(const TorusMap& t, std::size_t samples, Complex base_z, Complex base_w,
                                 const WindingOptions& options) {
    IntMatrix m(2, 2);
    for (int component = 0; component < 2; ++component) {
        const auto& f = component == 0 ? t.first : t.second;
        const LoopSample along_z = LoopSample::from_function([&](double th) { return f(unit(th), base_w); }, samples);
        const LoopSample along_w = LoopSample::from_function([&](double th) { return f(base_z, unit(th)); }, samples);
        m(component, 0) = winding_number(along_z, options);
        m(component, 1) = winding_number(along_w, options);
    }
    return m;
}

IntMatrix torus_map_k1_matrix(const TorusMap& t, std::size_t samples, const WindingOptions& options) {
    return torus_map_k1_matrix_at(t, samples, 1.0, 1.0, options);
}

ClutchingRestrictions clutching_restrictions(const IntMatrix& m) {
    if (m.rows() != 2 || m.cols() != 2)
        throw ValidationError("clutching: K1 matrix of a torus map must be 2x2, got " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
    const FgAbGroup z = FgAbGroup::free(1);
    const FgAbGroup z2 = FgAbGroup::free(2);
    IntMatrix pullback(2, 1);
    pullback(0, 0) = m(1, 0);
    pullback(1, 0) = m(1, 1);
    return {GroupHom(z, z2, IntMatrix{{1}, {0}}), GroupHom(z, z2, IntMatrix{{1}, {0}}),
            GroupHom(z, z2, IntMatrix{{0}, {1}}), GroupHom(z, z2, pullback)};
}

GroupHom assemble_mv_k1_map(const IntMatrix& m) {
    const ClutchingRestrictions r = clutching_restrictions(m);
    const FgAbGroup z2 = FgAbGroup::free(2);
    return GroupHom(z2, z2, (-r.k1_first.matrix()).hconcat(r.k1_second.matrix()));
}

GroupHom assemble_mv_k0_map() {
    const FgAbGroup z2 = FgAbGroup::free(2);
    return GroupHom(z2, z2, IntMatrix{{-1, 1}, {0, 0}});
}

} // namespace ncchern
