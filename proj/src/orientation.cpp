#include "afcec/orientation.hpp"

#include "afcec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace afcec {

OrientationFit select_orientation(const Dataset& x, const std::shared_ptr<const FunctionFamily>& family) {
    const std::size_t d = x.dim();
    if (d < 2) throw InvalidConfig("orientation selection needs d >= 2");
    if (x.size() < std::max(family->size(), d + 1)) {
        throw DegenerateCluster("cluster too small for the curve family");
    }

    std::vector<double> per_axis(d, std::numeric_limits<double>::infinity());
    std::optional<OrientationFit> best;
    for (std::size_t k = 0; k < d; ++k) {
        try {
            const CurveFit curve = fit_curve(x, k, family);
            auto ce = fadapted_cross_entropy(x, k, curve);
            per_axis[k] = ce.value;
            const double tol = kOrientationTieTolerance * std::max(1.0, std::abs(ce.value));
            if (!best || ce.value < best->cross_entropy - tol) {
                best.emplace(OrientationFit{k, ce.value, std::move(ce.params), ce.regularized,
                                            ce.residual_floored, {}});
            }
        } catch (const DegenerateCluster&) {
        } catch (const RankDeficient&) {
        }
    }
    if (!best) throw DegenerateCluster("no orientation admits a non-degenerate fit");
    best->per_axis = std::move(per_axis);
    return std::move(*best);
}

}  // namespace afcec
