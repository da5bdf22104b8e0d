#pragma once

// Seeded generators shared by the unit tests and the acceptance runner.

#include "ncchern/sphere.hpp"

#include <Eigen/Geometry>

#include <random>
#include <vector>

namespace ncchern::testing {

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
    q.normalize();
    return q.toRotationMatrix();
}

/// Polynomial in the six coordinates of (x, v): an offset plus products of
/// at most `band` random linear forms. Its angular band is at most `band`.
class BandlimitedField {
public:
    BandlimitedField(std::size_t band, std::size_t terms, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::uniform_int_distribution<std::size_t> degree(1, band);
        offset_ = 2.0 + u(rng);
        for (std::size_t t = 0; t < terms; ++t) {
            Term term;
            term.scale = u(rng);
            const std::size_t d = t == 0 ? band : degree(rng);
            for (std::size_t f = 0; f < d; ++f) {
                Eigen::Matrix<double, 6, 1> a;
                for (int c = 0; c < 6; ++c)
                    a[c] = u(rng);
                term.factors.push_back(a.normalized());
            }
            terms_.push_back(term);
        }
    }

    double operator()(const TangentPoint& p) const {
        Eigen::Matrix<double, 6, 1> y;
        y << p.x, p.v;
        double s = offset_;
        for (const auto& t : terms_) {
            double prod = t.scale;
            for (const auto& a : t.factors)
                prod *= a.dot(y);
            s += prod;
        }
        return s;
    }

private:
    struct Term {
        double scale = 0.0;
        std::vector<Eigen::Matrix<double, 6, 1>> factors;
    };
    double offset_ = 0.0;
    std::vector<Term> terms_;
};

} // namespace ncchern::testing
