#pragma once

#include "afcec/dataset.hpp"
#include "afcec/engine.hpp"

#include <cstddef>
#include <string_view>

namespace afcec {

enum class LikelihoodMode { mixture, max };
enum class ParamConvention { general, paper2d };

LikelihoodMode parse_likelihood_mode(std::string_view text);
std::string_view to_string(LikelihoodMode mode);

/// mixture: sum_l ln sum_i p_i N_i(x_l) (log-sum-exp).
/// max:     sum_l max_i [ln p_i + ln N_i(x_l)], the quantity the clustering cost tracks.
double log_likelihood(const Dataset& x, const AfcecModel& model, LikelihoodMode mode);

/// Free parameters per cluster: (d-1) explanatory mean, (d-1)d/2 covariance,
/// 1 residual variance, B curve coefficients and 1 mixing weight. The dependent
/// axis is discrete and not counted.
std::size_t count_params(const AfcecModel& model, ParamConvention convention = ParamConvention::general);

/// Per-cluster count for a full-covariance Gaussian mixture in R^d.
std::size_t gaussian_params_per_cluster(std::size_t d);

struct ModelScore {
    double loglik;
    std::size_t n_params;
    std::size_t n_points;
    double bic;
    double aic;
};

/// Fills bic = -2LL + k ln n and aic = -2LL + 2k.
ModelScore make_score(double loglik, std::size_t n_params, std::size_t n_points);

ModelScore score(const Dataset& x, const AfcecModel& model, LikelihoodMode mode = LikelihoodMode::mixture,
                 ParamConvention convention = ParamConvention::general);

}  // namespace afcec
