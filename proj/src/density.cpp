#include "afcec/density.hpp"

#include "afcec/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace afcec {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2 pi)

bool pivots_collapsed(const Matrix& cov) {
    const double scale = cov.trace() / static_cast<double>(cov.rows());
    try {
        Cholesky chol(cov);
        return chol.min_pivot() < kCovarianceRidge * scale;
    } catch (const NotPositiveDefinite&) {
        return true;
    }
}

}  // namespace

RegularizedCovariance regularize_covariance(const Matrix& cov) {
    if (!pivots_collapsed(cov)) return {cov, false};
    const double scale = cov.trace() / static_cast<double>(cov.rows());
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DegenerateCluster("covariance has zero trace (all points coincide)");
    }
    Matrix reg = cov;
    for (std::size_t i = 0; i < reg.rows(); ++i) reg(i, i) += kCovarianceRidge * scale;
    try {
        Cholesky check(reg);
    } catch (const NotPositiveDefinite&) {
        throw DegenerateCluster("covariance singular after regularization");
    }
    return {reg, true};
}

GaussianParams::GaussianParams(Vector mean, Matrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)), chol_(cov_) {
    if (mean_.size() != cov_.rows()) throw std::invalid_argument("GaussianParams: dimension mismatch");
}

double gaussian_log_density(const GaussianParams& p, std::span<const double> x) {
    const std::size_t d = p.dim();
    if (x.size() != d) throw std::invalid_argument("gaussian_log_density: dimension mismatch");
    double centered[16];
    std::vector<double> heap;
    double* v = centered;
    if (d > 16) {
        heap.resize(d);
        v = heap.data();
    }
    for (std::size_t i = 0; i < d; ++i) v[i] = x[i] - p.mean()[i];
    const double maha = p.cholesky().mahalanobis_squared({v, d});
    return -0.5 * static_cast<double>(d) * kLog2Pi - 0.5 * p.log_det() - 0.5 * maha;
}

FAdaptedParams::FAdaptedParams(std::size_t dependent_axis, Vector mean_exp, Matrix cov_exp,
                               double resid_var, CurveFit curve, double mean_dep)
    : axis_(dependent_axis),
      explanatory_(std::move(mean_exp), std::move(cov_exp)),
      resid_var_(resid_var),
      curve_(std::move(curve)),
      mean_dep_(mean_dep) {
    if (!(resid_var_ > 0.0)) throw std::invalid_argument("FAdaptedParams: residual variance must be positive");
    if (curve_.family().input_dim() != explanatory_.dim()) {
        throw std::invalid_argument("FAdaptedParams: curve input dimension must be d-1");
    }
    if (axis_ > explanatory_.dim()) throw std::invalid_argument("FAdaptedParams: axis out of range");
}

double FAdaptedParams::residual(std::span<const double> x) const {
    const std::size_t d = dim();
    double buffer[16];
    std::vector<double> heap;
    double* e = buffer;
    if (d > 16) {
        heap.resize(d);
        e = heap.data();
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i)
        if (i != axis_) e[k++] = x[i];
    return x[axis_] - curve_.evaluate({e, d - 1});
}

double fadapted_log_density(const FAdaptedParams& p, std::span<const double> x) {
    const std::size_t d = p.dim();
    if (x.size() != d) throw std::invalid_argument("fadapted_log_density: dimension mismatch");
    double buffer[16];
    std::vector<double> heap;
    double* e = buffer;
    if (d > 16) {
        heap.resize(d);
        e = heap.data();
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i)
        if (i != p.dependent_axis()) e[k++] = x[i];
    const std::span<const double> explanatory{e, d - 1};
    const double r = x[p.dependent_axis()] - p.curve().evaluate(explanatory) - p.mean_dep();
    const double block = gaussian_log_density(p.explanatory(), explanatory);
    return block - 0.5 * kLog2Pi - 0.5 * std::log(p.resid_var()) - 0.5 * r * r / p.resid_var();
}

GaussianCrossEntropy gaussian_cross_entropy(const Dataset& x) {
    const std::size_t d = x.dim();
    if (x.size() < d + 1) throw DegenerateCluster("cluster has fewer than d+1 points");
    auto reg = regularize_covariance(x.covariance());
    GaussianParams params(x.mean(), std::move(reg.cov));
    const double h = 0.5 * static_cast<double>(d) * (kLog2Pi + 1.0) + 0.5 * params.log_det();
    return {h, std::move(params), reg.regularized};
}

FAdaptedCrossEntropy fadapted_cross_entropy(const Dataset& x, std::size_t axis, const CurveFit& curve) {
    const std::size_t d = x.dim();
    const std::size_t n = x.size();
    if (d < 2) throw InvalidConfig("f-adapted densities need d >= 2");
    if (axis >= d) throw std::invalid_argument("fadapted_cross_entropy: axis out of range");
    if (n < d + 1) throw DegenerateCluster("cluster has fewer than d+1 points");

    std::vector<double> explanatory_values;
    explanatory_values.reserve(n * (d - 1));
    double sum_sq = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        const auto p = x.point(l);
        const std::size_t start = explanatory_values.size();
        for (std::size_t i = 0; i < d; ++i)
            if (i != axis) explanatory_values.push_back(p[i]);
        const double r = p[axis] - curve.evaluate({explanatory_values.data() + start, d - 1});
        sum_sq += r * r;
    }
    const Dataset explanatory(d - 1, std::move(explanatory_values));

    double resid_var = sum_sq / static_cast<double>(n);
    bool floored = false;
    if (!(resid_var >= kResidualVarianceFloor)) {
        resid_var = kResidualVarianceFloor;
        floored = true;
    }

    auto reg = regularize_covariance(explanatory.covariance());
    FAdaptedParams params(axis, explanatory.mean(), std::move(reg.cov), resid_var, curve, 0.0);
    const double h = 0.5 * static_cast<double>(d) * (kLog2Pi + 1.0) + 0.5 * params.explanatory().log_det() +
                     0.5 * std::log(resid_var);
    return {h, std::move(params), reg.regularized, floored};
}

}  // namespace afcec
