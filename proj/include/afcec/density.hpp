#pragma once

#include "afcec/curves.hpp"
#include "afcec/dataset.hpp"
#include "afcec/numerics.hpp"

#include <cstddef>
#include <span>

namespace afcec {

/// Variances below this are clamped so a cluster lying exactly on its curve keeps a finite cost.
inline constexpr double kResidualVarianceFloor = 1e-12;

/// Relative size of the ridge added to a covariance whose Cholesky pivots collapse.
inline constexpr double kCovarianceRidge = 1e-9;

/// N(mean, cov) with its Cholesky factor cached.
class GaussianParams {
public:
    GaussianParams(Vector mean, Matrix cov);

    std::size_t dim() const noexcept { return mean_.size(); }
    const Vector& mean() const noexcept { return mean_; }
    const Matrix& cov() const noexcept { return cov_; }
    double log_det() const noexcept { return chol_.log_determinant(); }
    const Cholesky& cholesky() const noexcept { return chol_; }

private:
    Vector mean_;
    Matrix cov_;
    Cholesky chol_;
};

double gaussian_log_density(const GaussianParams& p, std::span<const double> x);

/// Gaussian in the explanatory coordinates times a 1-D Gaussian of the residual
/// x_j - f(x_{-j}) - mean_dep. mean_dep is 0 for every fitted model; the
/// intercept lives in the curve.
class FAdaptedParams {
public:
    FAdaptedParams(std::size_t dependent_axis, Vector mean_exp, Matrix cov_exp, double resid_var,
                   CurveFit curve, double mean_dep = 0.0);

    std::size_t dim() const noexcept { return explanatory_.dim() + 1; }
    std::size_t dependent_axis() const noexcept { return axis_; }
    const Vector& mean_exp() const noexcept { return explanatory_.mean(); }
    const Matrix& cov_exp() const noexcept { return explanatory_.cov(); }
    const GaussianParams& explanatory() const noexcept { return explanatory_; }
    double resid_var() const noexcept { return resid_var_; }
    double mean_dep() const noexcept { return mean_dep_; }
    const CurveFit& curve() const noexcept { return curve_; }

    /// x_j - f(x_{-j}) for a full point x.
    double residual(std::span<const double> x) const;

private:
    std::size_t axis_;
    GaussianParams explanatory_;
    double resid_var_;
    CurveFit curve_;
    double mean_dep_;
};

double fadapted_log_density(const FAdaptedParams& p, std::span<const double> x);

struct GaussianCrossEntropy {
    double value;
    GaussianParams params;
    bool regularized = false;
};

struct FAdaptedCrossEntropy {
    double value;
    FAdaptedParams params;
    bool regularized = false;
    /// The residual variance hit kResidualVarianceFloor.
    bool residual_floored = false;
};

/// d/2 ln(2 pi e) + 1/2 ln det cov(X), with the MLE mean and 1/n covariance.
///
/// When the covariance is (numerically) singular a ridge of
/// kCovarianceRidge * trace/d is added; DegenerateCluster if that still fails.
GaussianCrossEntropy gaussian_cross_entropy(const Dataset& x);

/// Closed-form cross-entropy of X against the f-adapted family for a fixed curve.
FAdaptedCrossEntropy fadapted_cross_entropy(const Dataset& x, std::size_t axis, const CurveFit& curve);

/// Cholesky of cov, adding the ridge if pivots collapse. Returns the matrix actually factored.
struct RegularizedCovariance {
    Matrix cov;
    bool regularized = false;
};
RegularizedCovariance regularize_covariance(const Matrix& cov);

}  // namespace afcec
