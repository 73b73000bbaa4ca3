#pragma once

#include <cstddef>
#include <vector>

namespace afcec::acagmm {

/// Curved Gaussian along y = a x^2: N(0, sigma1^2) in signed arc length from
/// the vertex times N(0, sigma2^2) in distance to the curve.
struct ParabolaModel {
    double a;
    double sigma1;
    double sigma2;

    ParabolaModel(double a, double sigma1, double sigma2);

    /// The side holding the centre of curvature: above for a > 0, below for a < 0.
    bool concave_above() const noexcept { return a > 0.0; }
};

enum class Side { above, below };

/// Which root formula of the stationarity cubic produced the foot point.
enum class CubicBranch { one_real, triple_root, double_root, three_real };

struct ProjectionResult {
    double t0;  ///< foot point is (t0, a t0^2)
    double p;   ///< distance to the foot point
    double l;   ///< signed arc length from the vertex, sign(t0) * |l|
    Side side;
    CubicBranch branch;
};

/// Nearest point on the parabola via the closed-form roots of
/// 2a^2 t^3 + (1 - 2a y) t - x = 0, i.e. t^3 + 3Q t - 2R = 0 with
/// Q = (1 - 2a y)/(6a^2), R = x/(4a^2), D = Q^3 + R^2.
ProjectionResult project_to_parabola(const ParabolaModel& m, double x, double y);

/// Projection onto y = a x^2 + b x + c by shifting to vertex form first.
/// t0 is reported in the original x coordinate, l from the vertex.
ProjectionResult project_to_general_parabola(double a, double b, double c, double x, double y);

/// Arc length between the vertex and (t0, a t0^2); always non-negative.
double arc_length(const ParabolaModel& m, double t0);

double signed_arc_length(const ParabolaModel& m, double t0);

/// Radius of the osculating circle at (t0, a t0^2).
double curvature_radius(const ParabolaModel& m, double t0);

/// det [[x - t0, 1], [y - a t0^2, 2 a t0]] for the foot t0.
double orientation_determinant(const ParabolaModel& m, double x, double y, double t0);

/// Negative determinant means the point lies above the curve (larger y).
Side orientation_side(const ParabolaModel& m, double x, double y, const ProjectionResult& proj);

/// Factor by which the arc-length/normal map scales area at distance p:
/// 1 - p/r on the concave side, 1 + p/r on the convex side.
double jacobian_factor(const ParabolaModel& m, const ProjectionResult& proj);

/// ln of the curved density at (x, y). With corrected = true the value is divided
/// by the Jacobian factor, turning it into a proper density on the plane.
/// Throws BeyondCurvatureCenter where the factor is not positive.
double aca_log_density(const ParabolaModel& m, double x, double y, bool corrected);

struct NormalizationRow {
    double a;
    double sigma1;
    double sigma2;
    double raw_integral;
    double corrected_integral;
    /// Mass of the (l, p) Gaussian beyond the centre of curvature (p >= r) on the concave side.
    double fold_mass;
    /// Mass beyond the nearest-point cut locus; what the corrected integral cannot capture.
    double unreachable_mass;
    /// Grid nodes where the corrected density was undefined (counted as zero).
    std::size_t fold_nodes;
};

inline constexpr double kFoldMassLimit = 1e-4;

/// Simpson integration of exp(raw) and exp(corrected) over [-box, box]^2 with n panels per axis.
NormalizationRow normalization_check(const ParabolaModel& m, double box, int n);

std::vector<NormalizationRow> normalization_table(const std::vector<double>& a_grid,
                                                  const std::vector<double>& sigma1_grid,
                                                  const std::vector<double>& sigma2_grid, double box, int n);

/// Mass of N(0,sigma1^2) x half-N(0,sigma2^2) on the concave side with p >= threshold(t(l)).
double fold_mass(const ParabolaModel& m);
double unreachable_mass(const ParabolaModel& m);

/// Inverse of signed_arc_length.
double parameter_at_arc_length(const ParabolaModel& m, double l);

}  // namespace afcec::acagmm
