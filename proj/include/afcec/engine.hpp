#pragma once

#include "afcec/curves.hpp"
#include "afcec/dataset.hpp"
#include "afcec/density.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace afcec {

enum class InitMethod { random_partition, kmeanspp };

InitMethod parse_init_method(std::string_view text);

struct EngineConfig {
    std::size_t k_init = 1;
    std::shared_ptr<const FunctionFamily> family;
    /// Stop once an iteration improves the cost by less than this.
    double epsilon = 1e-4;
    /// Clusters holding fewer than this fraction of the points are dissolved.
    double deletion_fraction = 0.01;
    std::size_t max_iters = 200;
    std::uint64_t seed = 0;
    InitMethod init = InitMethod::random_partition;

    /// Throws InvalidConfig if the config cannot be run on n points in R^d.
    void validate(std::size_t n, std::size_t d) const;
};

struct ClusterModel {
    FAdaptedParams params;
    /// |X_i| / |X|
    double weight;
    std::size_t size;
    /// Closed-form cross-entropy of the cluster's points under params.
    double cross_entropy;
};

struct AfcecModel {
    std::vector<ClusterModel> clusters;
    std::vector<std::size_t> assignment;
    /// h_0 (after initial estimation) followed by h_1..h_iterations.
    std::vector<double> cost_trace;
    /// Clusters removed while producing the matching cost_trace entry.
    std::vector<std::size_t> deletion_trace;
    std::size_t iterations = 0;
    std::size_t deleted_count = 0;
    std::size_t k_init = 0;
    std::uint64_t seed = 0;
    bool converged = false;

    std::size_t k() const noexcept { return clusters.size(); }
    double cost() const { return cost_trace.back(); }
};

/// sum_i p_i (-ln p_i + H(X_i || A_{f_i})) with each cluster's curve and axis held fixed.
double cost(const Dataset& x, std::span<const ClusterModel> clusters, std::span<const std::size_t> assignment);

/// Moves every point to argmin_i [-ln p_i - ln N_i(x)]; ties go to the lower index.
std::vector<std::size_t> assign_step(const Dataset& x, std::span<const ClusterModel> clusters);

struct DeletionResult {
    std::vector<ClusterModel> clusters;
    std::vector<std::size_t> assignment;
    std::size_t deleted = 0;
};

/// Dissolves clusters with fewer than max(threshold_fraction * n, min_size) points
/// (and every empty cluster), handing their points to the cost-closest survivor.
/// Survivor sizes and weights are recounted; parameters are left untouched.
DeletionResult delete_small(const Dataset& x, std::vector<ClusterModel> clusters,
                            std::vector<std::size_t> assignment, double threshold_fraction,
                            std::size_t min_size = 1);

/// Lloyd-style minimization of the cross-entropy clustering cost.
AfcecModel fit(const Dataset& x, const EngineConfig& cfg);

struct RestartResult {
    AfcecModel best;
    /// Final cost of every successful restart, ordered by seed.
    std::vector<double> costs;
    std::vector<std::uint64_t> seeds;
};

/// Runs fit with seeds cfg.seed .. cfg.seed + restarts - 1 and keeps the lowest cost
/// (ties go to the smaller seed). threads = 0 picks hardware concurrency.
RestartResult fit_restarts(const Dataset& x, const EngineConfig& cfg, std::size_t restarts,
                           std::size_t threads = 1);

/// Initial partition used by fit, exposed for tests.
std::vector<std::size_t> initial_partition(const Dataset& x, std::size_t k, InitMethod method,
                                           std::uint64_t seed);

}  // namespace afcec
