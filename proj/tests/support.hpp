#pragma once

#include "afcec/dataset.hpp"
#include "afcec/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace afcec::testing {

/// Seeded source of random test inputs.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal(double mean = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mean, sd)(rng_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    Vector vector(std::size_t d, double lo = -2.0, double hi = 2.0) {
        Vector v(d);
        for (auto& x : v.span()) x = uniform(lo, hi);
        return v;
    }

    /// B·Bᵀ + shift·I with B uniform; well conditioned for shift ~ 0.5.
    Matrix spd(std::size_t d, double shift = 0.5) {
        Matrix b(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) b(i, j) = uniform(-1.0, 1.0);
        Matrix a = b * b.transposed();
        for (std::size_t i = 0; i < d; ++i) a(i, i) += shift;
        return a;
    }

    Dataset gaussian_cloud(std::size_t n, std::size_t d, double spread = 1.0) {
        std::vector<double> values(n * d);
        for (auto& v : values) v = normal(0.0, spread);
        return Dataset(d, std::move(values));
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Points along y = f(x) with Gaussian residuals, x ~ N(mx, sx²).
template <class F>
Dataset curve_cloud(Gen& g, std::size_t n, F f, double mx, double sx, double noise) {
    std::vector<double> values;
    values.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.normal(mx, sx);
        values.push_back(x);
        values.push_back(f(x) + g.normal(0.0, noise));
    }
    return Dataset(2, std::move(values));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace afcec::testing
