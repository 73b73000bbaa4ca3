#include "afcec/selection.hpp"

#include "afcec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace afcec {

LikelihoodMode parse_likelihood_mode(std::string_view text) {
    if (text == "mixture") return LikelihoodMode::mixture;
    if (text == "max") return LikelihoodMode::max;
    throw InvalidConfig("unknown likelihood mode '" + std::string(text) + "' (expected mixture|max)");
}

std::string_view to_string(LikelihoodMode mode) {
    return mode == LikelihoodMode::mixture ? "mixture" : "max";
}

double log_likelihood(const Dataset& x, const AfcecModel& model, LikelihoodMode mode) {
    const std::size_t k = model.clusters.size();
    if (k == 0) throw std::invalid_argument("log_likelihood: model has no clusters");
    std::vector<double> log_w(k);
    for (std::size_t i = 0; i < k; ++i) log_w[i] = std::log(model.clusters[i].weight);

    std::vector<double> terms(k);
    double total = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) {
        const auto p = x.point(l);
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            terms[i] = log_w[i] + fadapted_log_density(model.clusters[i].params, p);
            top = std::max(top, terms[i]);
        }
        if (mode == LikelihoodMode::max || !std::isfinite(top)) {
            total += top;
            continue;
        }
        double s = 0.0;
        for (double t : terms) s += std::exp(t - top);
        total += top + std::log(s);
    }
    return total;
}

std::size_t gaussian_params_per_cluster(std::size_t d) { return d + d * (d + 1) / 2 + 1; }

std::size_t count_params(const AfcecModel& model, ParamConvention convention) {
    std::size_t total = 0;
    for (const auto& c : model.clusters) {
        const std::size_t d = c.params.dim();
        const std::size_t b = c.params.curve().family().size();
        if (convention == ParamConvention::paper2d) {
            if (d != 2 || c.params.curve().family().name() != "quadratic") {
                throw InvalidConvention("paper2d parameter count only applies to d=2 quadratic models");
            }
            total += 7;
            continue;
        }
        total += (d - 1) + (d - 1) * d / 2 + 1 + b + 1;
    }
    return total;
}

ModelScore make_score(double loglik, std::size_t n_params, std::size_t n_points) {
    const double k = static_cast<double>(n_params);
    return ModelScore{loglik, n_params, n_points, -2.0 * loglik + k * std::log(static_cast<double>(n_points)),
                      -2.0 * loglik + 2.0 * k};
}

ModelScore score(const Dataset& x, const AfcecModel& model, LikelihoodMode mode, ParamConvention convention) {
    return make_score(log_likelihood(x, model, mode), count_params(model, convention), x.size());
}

}  // namespace afcec
