#pragma once

#include "afcec/curves.hpp"
#include "afcec/dataset.hpp"
#include "afcec/density.hpp"

#include <memory>
#include <vector>

namespace afcec {

/// Relative gap under which two orientations count as tied (lower axis wins).
inline constexpr double kOrientationTieTolerance = 1e-12;

struct OrientationFit {
    std::size_t axis;
    double cross_entropy;
    FAdaptedParams params;
    bool regularized = false;
    bool residual_floored = false;
    /// Cross-entropy for every candidate axis; +inf where the fit failed.
    std::vector<double> per_axis;

    const CurveFit& curve() const noexcept { return params.curve(); }
};

/// Fits a curve with every coordinate as the dependent one and keeps the
/// orientation with the lowest cross-entropy.
OrientationFit select_orientation(const Dataset& x, const std::shared_ptr<const FunctionFamily>& family);

}  // namespace afcec
