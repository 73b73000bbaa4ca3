#include "afcec/engine.hpp"

#include "afcec/errors.hpp"
#include "afcec/orientation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <thread>

namespace afcec {

namespace {

std::vector<std::vector<std::size_t>> group_by_cluster(std::span<const std::size_t> assignment, std::size_t k) {
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t l = 0; l < assignment.size(); ++l) groups.at(assignment[l]).push_back(l);
    return groups;
}

std::size_t closest_cluster(std::span<const double> point, std::span<const ClusterModel> clusters,
                            std::span<const double> neg_log_weight) {
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const double c = neg_log_weight[i] - fadapted_log_density(clusters[i].params, point);
        if (c < best_cost) {
            best_cost = c;
            best = i;
        }
    }
    return best;
}

std::vector<double> negative_log_weights(std::span<const ClusterModel> clusters) {
    std::vector<double> w(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i) w[i] = -std::log(clusters[i].weight);
    return w;
}

std::size_t min_cluster_size(const Dataset& x, const FunctionFamily& family) {
    return std::max(family.size(), x.dim() + 1);
}

/// Points sorted lexicographically by coordinates so seeded choices depend only
/// on the data multiset, not on row order.
std::vector<std::size_t> canonical_order(const Dataset& x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto pa = x.point(a);
        const auto pb = x.point(b);
        return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    });
    return order;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

struct Estimate {
    std::vector<ClusterModel> clusters;
    std::vector<std::size_t> assignment;
    std::size_t deleted = 0;
};

double total_cost(std::span<const ClusterModel> clusters) {
    double h = 0.0;
    for (const auto& c : clusters) h += c.weight * (-std::log(c.weight) + c.cross_entropy);
    return h;
}

/// Re-estimates every cluster from its points. Clusters that cannot be fitted are
/// dissolved into the cost-closest fitted cluster and the survivors refitted.
Estimate estimate(const Dataset& x, std::vector<std::size_t> assignment, std::size_t k,
                  const std::shared_ptr<const FunctionFamily>& family) {
    const double n = static_cast<double>(x.size());
    Estimate out;
    for (;;) {
        const auto groups = group_by_cluster(assignment, k);
        std::vector<std::optional<OrientationFit>> fits(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (groups[i].empty()) continue;
            try {
                fits[i].emplace(select_orientation(x.subset(groups[i]), family));
            } catch (const DegenerateCluster&) {
            }
        }

        std::vector<ClusterModel> survivors;
        std::vector<std::size_t> relabel(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            if (!fits[i]) continue;
            relabel[i] = survivors.size();
            const double size = static_cast<double>(groups[i].size());
            survivors.push_back(ClusterModel{fits[i]->params, size / n, groups[i].size(), fits[i]->cross_entropy});
        }
        if (survivors.empty()) throw AllClustersDegenerate("no cluster admits a non-degenerate fit");

        if (survivors.size() == k) {
            out.clusters = std::move(survivors);
            out.assignment = std::move(assignment);
            return out;
        }

        const auto neg_log_w = negative_log_weights(survivors);
        for (std::size_t l = 0; l < assignment.size(); ++l) {
            const std::size_t target = relabel[assignment[l]];
            assignment[l] = target < k ? target : closest_cluster(x.point(l), survivors, neg_log_w);
        }
        out.deleted += k - survivors.size();
        k = survivors.size();
    }
}

}  // namespace

InitMethod parse_init_method(std::string_view text) {
    if (text == "random" || text == "random_partition") return InitMethod::random_partition;
    if (text == "kmeanspp") return InitMethod::kmeanspp;
    throw InvalidConfig("unknown init '" + std::string(text) + "' (expected random|kmeanspp)");
}

void EngineConfig::validate(std::size_t n, std::size_t d) const {
    if (k_init < 1) throw InvalidConfig("k must be at least 1");
    if (!family) throw InvalidConfig("no function family given");
    if (d < 2) throw InvalidConfig("clustering needs data of dimension >= 2");
    if (family->input_dim() + 1 != d) throw InvalidConfig("family input dimension must equal d-1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidConfig("epsilon must be positive");
    if (!(deletion_fraction >= 0.0 && deletion_fraction < 1.0)) {
        throw InvalidConfig("deletion fraction must lie in [0, 1)");
    }
    if (max_iters < 1) throw InvalidConfig("max_iters must be at least 1");
    if (n < k_init * (d + 1)) throw InvalidConfig("need at least k*(d+1) points");
}

double cost(const Dataset& x, std::span<const ClusterModel> clusters, std::span<const std::size_t> assignment) {
    if (assignment.size() != x.size()) throw std::invalid_argument("cost: assignment length mismatch");
    const auto groups = group_by_cluster(assignment, clusters.size());
    const double n = static_cast<double>(x.size());
    double h = 0.0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (groups[i].empty()) throw std::invalid_argument("cost: empty cluster");
        const double p = static_cast<double>(groups[i].size()) / n;
        const auto& params = clusters[i].params;
        const double ce = fadapted_cross_entropy(x.subset(groups[i]), params.dependent_axis(), params.curve()).value;
        h += p * (-std::log(p) + ce);
    }
    return h;
}

std::vector<std::size_t> assign_step(const Dataset& x, std::span<const ClusterModel> clusters) {
    if (clusters.empty()) throw std::invalid_argument("assign_step: no clusters");
    const auto neg_log_w = negative_log_weights(clusters);
    std::vector<std::size_t> assignment(x.size());
    for (std::size_t l = 0; l < x.size(); ++l) assignment[l] = closest_cluster(x.point(l), clusters, neg_log_w);
    return assignment;
}

DeletionResult delete_small(const Dataset& x, std::vector<ClusterModel> clusters,
                            std::vector<std::size_t> assignment, double threshold_fraction,
                            std::size_t min_size) {
    const std::size_t k = clusters.size();
    const double n = static_cast<double>(x.size());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t a : assignment) ++counts.at(a);

    const double threshold = threshold_fraction * n;
    std::vector<std::size_t> relabel(k, k);
    std::vector<ClusterModel> survivors;
    for (std::size_t i = 0; i < k; ++i) {
        const double size = static_cast<double>(counts[i]);
        if (counts[i] == 0 || size < threshold || counts[i] < min_size) continue;
        relabel[i] = survivors.size();
        survivors.push_back(std::move(clusters[i]));
    }
    if (survivors.empty()) throw AllClustersDegenerate("every cluster fell below the deletion threshold");

    DeletionResult out;
    out.deleted = k - survivors.size();
    if (out.deleted > 0) {
        const auto neg_log_w = negative_log_weights(survivors);
        for (std::size_t l = 0; l < assignment.size(); ++l) {
            const std::size_t target = relabel[assignment[l]];
            assignment[l] = target < k ? target : closest_cluster(x.point(l), survivors, neg_log_w);
        }
    }
    std::vector<std::size_t> sizes(survivors.size(), 0);
    for (std::size_t a : assignment) ++sizes[a];
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        survivors[i].size = sizes[i];
        survivors[i].weight = static_cast<double>(sizes[i]) / n;
    }
    out.clusters = std::move(survivors);
    out.assignment = std::move(assignment);
    return out;
}

std::vector<std::size_t> initial_partition(const Dataset& x, std::size_t k, InitMethod method, std::uint64_t seed) {
    const std::size_t n = x.size();
    if (k == 0 || k > n) throw InvalidConfig("initial partition needs 1 <= k <= n");
    std::mt19937_64 rng(seed);
    auto order = canonical_order(x);
    std::vector<std::size_t> assignment(n, 0);

    if (method == InitMethod::random_partition) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t r = 0; r < n; ++r) assignment[order[r]] = r % k;
        return assignment;
    }

    // k-means++ seeding followed by a nearest-centre partition.
    std::vector<std::size_t> centres;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    centres.push_back(order[pick(rng)]);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (centres.size() < k) {
        const auto last = x.point(centres.back());
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const std::size_t l = order[r];
            d2[l] = std::min(d2[l], squared_distance(x.point(l), last));
            total += d2[l];
        }
        if (!(total > 0.0)) break;
        const double target = unit(rng) * total;
        double acc = 0.0;
        std::size_t chosen = order.back();
        for (std::size_t r = 0; r < n; ++r) {
            acc += d2[order[r]];
            if (acc >= target && d2[order[r]] > 0.0) {
                chosen = order[r];
                break;
            }
        }
        centres.push_back(chosen);
    }
    for (std::size_t l = 0; l < n; ++l) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centres.size(); ++c) {
            const double dist = squared_distance(x.point(l), x.point(centres[c]));
            if (dist < best) {
                best = dist;
                assignment[l] = c;
            }
        }
    }
    return assignment;
}

AfcecModel fit(const Dataset& x, const EngineConfig& cfg) {
    cfg.validate(x.size(), x.dim());
    const std::size_t min_size = min_cluster_size(x, *cfg.family);

    AfcecModel model;
    model.k_init = cfg.k_init;
    model.seed = cfg.seed;

    auto init = initial_partition(x, cfg.k_init, cfg.init, cfg.seed);
    const std::size_t k0 = 1 + *std::max_element(init.begin(), init.end());
    Estimate est = estimate(x, std::move(init), k0, cfg.family);
    const std::size_t init_deleted = est.deleted + (cfg.k_init - k0);
    model.clusters = std::move(est.clusters);
    model.assignment = std::move(est.assignment);
    model.deleted_count = init_deleted;
    model.cost_trace.push_back(total_cost(model.clusters));
    model.deletion_trace.push_back(init_deleted);

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        auto assignment = assign_step(x, model.clusters);
        auto pruned = delete_small(x, std::move(model.clusters), std::move(assignment), cfg.deletion_fraction, min_size);
        const std::size_t k = pruned.clusters.size();
        est = estimate(x, std::move(pruned.assignment), k, cfg.family);
        const std::size_t deleted = pruned.deleted + est.deleted;

        model.clusters = std::move(est.clusters);
        model.assignment = std::move(est.assignment);
        model.deleted_count += deleted;
        const double previous = model.cost_trace.back();
        const double h = total_cost(model.clusters);
        model.cost_trace.push_back(h);
        model.deletion_trace.push_back(deleted);
        model.iterations = it;
        // Iterations that dissolve clusters may raise the cost; they never end the run.
        if (deleted == 0 && h >= previous - cfg.epsilon) {
            model.converged = true;
            break;
        }
    }
    return model;
}

RestartResult fit_restarts(const Dataset& x, const EngineConfig& cfg, std::size_t restarts, std::size_t threads) {
    if (restarts < 1) throw InvalidConfig("restarts must be at least 1");
    cfg.validate(x.size(), x.dim());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, restarts);

    std::vector<std::optional<AfcecModel>> results(restarts);
    std::vector<std::exception_ptr> errors(restarts);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < restarts; r = next++) {
            EngineConfig run = cfg;
            run.seed = cfg.seed + r;
            try {
                results[r].emplace(fit(x, run));
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RestartResult out;
    std::optional<std::size_t> best;
    for (std::size_t r = 0; r < restarts; ++r) {
        if (!results[r]) continue;
        out.costs.push_back(results[r]->cost());
        out.seeds.push_back(cfg.seed + r);
        if (!best || results[r]->cost() < results[*best]->cost()) best = r;
    }
    if (!best) {
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        throw AllClustersDegenerate("every restart failed");
    }
    out.best = std::move(*results[*best]);
    return out;
}

}  // namespace afcec
