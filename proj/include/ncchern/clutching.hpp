#pragma once

// Transition maps of the unit tangent bundle of S^2 over the equator, and
// their action on K1 of the torus through winding numbers.

#include "ncchern/fgab.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace ncchern {

using Complex = std::complex<double>;

/// Samples f(e^{2 pi i k / N}), k = 0..N-1, of a closed loop in the plane.
class LoopSample {
public:
    static constexpr std::size_t kMinSamples = 16;

    // Throws ValidationError when N < 16 or a sample is not finite.
    explicit LoopSample(std::vector<Complex> samples);

    // Samples t -> f(t) at t = 2 pi k / N.
    static LoopSample from_function(const std::function<Complex(double)>& f, std::size_t n);

    std::size_t size() const { return samples_.size(); }
    const std::vector<Complex>& samples() const { return samples_; }

private:
    std::vector<Complex> samples_;
};

struct WindingOptions {
    // Samples with modulus at or below this are treated as zeros.
    double zero_tolerance = 1e-12;
    // Largest accepted phase change between neighbouring samples.
    double max_phase_step = 1.5707963267948966;
};

/// Degree of a nowhere-vanishing sampled loop by phase continuation.
/// NumericalGuard carries the index of a near-zero sample or of the start
/// of an undersampled step.
long winding_number(const LoopSample& loop, const WindingOptions& options = {});

/// A map S^1 x S^1 -> S^1 x S^1 given by its two components.
struct TorusMap {
    std::function<Complex(Complex, Complex)> first;
    std::function<Complex(Complex, Complex)> second;

    std::pair<Complex, Complex> operator()(Complex z, Complex w) const { return {first(z, w), second(z, w)}; }

    static TorusMap identity();
    // (z, w) -> (z^a w^b, z^c w^d).
    static TorusMap monomial(int a, int b, int c, int d);
    // (z, w) -> (z, -z^2 conj(w)).
    static TorusMap stereographic_closed_form();
    TorusMap after(const TorusMap& inner) const;
};

/// A plane diffeomorphism defined near the unit circle, used as the change
/// of chart between two trivializations of the tangent bundle.
struct ChartChange {
    std::function<Eigen::Vector2d(const Eigen::Vector2d&)> map;
    double inner_radius = 0.5;
    double outer_radius = 2.0;
    // Reference Jacobian the numerical one is checked against, if known.
    std::optional<std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>> closed_form_jacobian;

    // Southern stereographic chart in terms of the northern one:
    // K(N) = N / |N|^2.
    static ChartChange stereographic();
    static ChartChange identity();

    // Central differences with step h.
    Eigen::Matrix2d numerical_jacobian(const Eigen::Vector2d& p, double h = 1e-6) const;
};

/// The Jacobian of N -> N / |N|^2.
Eigen::Matrix2d stereographic_jacobian(const Eigen::Vector2d& n);

struct TransitionOptions {
    double step = 1e-6;
    double jacobian_tolerance = 1e-8;
    double singular_tolerance = 1e-8;
    double unit_tolerance = 1e-12;
};

/// Induced map on unit tangent vectors over the unit circle: the base point
/// goes through K and the fibre vector through the numerical Jacobian of K,
/// renormalized to unit length. The grid x grid torus samples are checked
/// for a nonsingular Jacobian, agreement with the closed-form Jacobian and
/// unit modulus before the map is returned.
TorusMap transition_from_chart_change(const ChartChange& chart, std::size_t grid,
                                      const TransitionOptions& options = {});

/// Entry (i, j) is the winding of component i along fundamental loop j
/// (loop 0 moves z with w = 1, loop 1 moves w with z = 1). Basis ([z], [w]).
IntMatrix torus_map_k1_matrix(const TorusMap& t, std::size_t samples, const WindingOptions& options = {});

/// Same with the frozen coordinate at a different base point.
IntMatrix torus_map_k1_matrix_at(const TorusMap& t, std::size_t samples, Complex base_z, Complex base_w,
                                 const WindingOptions& options = {});

/// (pi_2* - pi_1*)_1 : Z[w] + Z[w] -> Z[z] + Z[w], (x, y) -> pi_2*(y) - pi_1*(x),
/// with pi_1 the restriction ([w] -> [w]) and pi_2 pullback along the
/// transition map, whose second-component class is row 1 of m.
GroupHom assemble_mv_k1_map(const IntMatrix& m);

/// (pi_2* - pi_1*)_0 : Z[1] + Z[1] -> Z[1] + Z theta([w]), matrix [[-1, 1], [0, 0]].
GroupHom assemble_mv_k0_map();

/// Restriction pairs (pi_1*, pi_2*) in degrees 0 and 1 for a transition map
/// with K1 matrix m.
struct ClutchingRestrictions {
    GroupHom k0_first, k0_second;
    GroupHom k1_first, k1_second;
};
ClutchingRestrictions clutching_restrictions(const IntMatrix& m);

} // namespace ncchern
