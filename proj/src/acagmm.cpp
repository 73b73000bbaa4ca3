#include "afcec/acagmm.hpp"

#include "afcec/errors.hpp"
#include "afcec/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace afcec::acagmm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double stationarity(double a, double x, double y, double t) {
    return 2.0 * a * a * t * t * t + (1.0 - 2.0 * a * y) * t - x;
}

/// Newton steps on the stationarity cubic, kept only while they shrink the residual.
double polish(double a, double x, double y, double t) {
    double g = stationarity(a, x, y, t);
    for (int it = 0; it < 6 && g != 0.0; ++it) {
        const double slope = 6.0 * a * a * t * t + (1.0 - 2.0 * a * y);
        if (slope == 0.0) break;
        const double next = t - g / slope;
        const double g_next = stationarity(a, x, y, next);
        if (!(std::abs(g_next) < std::abs(g))) break;
        t = next;
        g = g_next;
    }
    return t;
}

double distance_to_foot(double a, double x, double y, double t) {
    return std::hypot(t - x, a * t * t - y);
}

double upper_normal_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace

ParabolaModel::ParabolaModel(double a_, double sigma1_, double sigma2_) : a(a_), sigma1(sigma1_), sigma2(sigma2_) {
    if (a == 0.0 || !std::isfinite(a)) throw InvalidConfig("parabola coefficient a must be non-zero");
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw InvalidConfig("parabola sigmas must be positive");
}

ProjectionResult project_to_parabola(const ParabolaModel& m, double x, double y) {
    const double a = m.a;
    const double q = (1.0 - 2.0 * a * y) / (6.0 * a * a);
    const double r = x / (4.0 * a * a);
    const double disc = q * q * q + r * r;
    const double scale = std::max({std::abs(q * q * q), r * r, std::numeric_limits<double>::min()});

    std::array<double, 4> roots{};
    std::size_t count = 0;
    CubicBranch branch;
    if (q == 0.0 && r == 0.0) {
        branch = CubicBranch::triple_root;
        roots[count++] = 0.0;
    } else if (std::abs(disc) <= 1e-12 * scale) {
        branch = CubicBranch::double_root;
        const double s = std::sqrt(std::max(-q, 0.0));
        const double c = std::cbrt(r);
        // Roots as usually tabulated (valid for R > 0) and the sign-aware ones.
        roots = {2.0 * s, -s, 2.0 * c, -c};
        count = 4;
    } else if (disc > 0.0) {
        branch = CubicBranch::one_real;
        const double root_d = std::sqrt(disc);
        // u^3 = R + sign(R) sqrt(D) avoids cancellation; the partner cube root is -Q/u.
        const double u = std::cbrt(r >= 0.0 ? r + root_d : r - root_d);
        roots[count++] = u - q / u;
    } else {
        branch = CubicBranch::three_real;
        const double s = std::sqrt(-q);
        const double phi = std::acos(std::clamp(r / (s * s * s), -1.0, 1.0));
        for (int i = 0; i < 3; ++i) {
            roots[count++] = 2.0 * s * std::cos((phi + 2.0 * i * std::numbers::pi) / 3.0);
        }
    }

    double best_t = 0.0;
    double best_p = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < count; ++c) {
        const double t = polish(a, x, y, roots[c]);
        const double p = distance_to_foot(a, x, y, t);
        const double tol = 1e-12 * std::max(1.0, p);
        if (p < best_p - tol || (std::abs(p - best_p) <= tol && t < best_t)) {
            best_t = t;
            best_p = p;
        }
    }

    ProjectionResult out{best_t, best_p, signed_arc_length(m, best_t), Side::below, branch};
    out.side = orientation_side(m, x, y, out);
    return out;
}

ProjectionResult project_to_general_parabola(double a, double b, double c, double x, double y) {
    const double shift_x = -b / (2.0 * a);
    const double vertex_y = c - b * b / (4.0 * a);
    const ParabolaModel m(a, 1.0, 1.0);
    auto res = project_to_parabola(m, x - shift_x, y - vertex_y);
    res.t0 += shift_x;
    return res;
}

double arc_length(const ParabolaModel& m, double t0) {
    const double at = 2.0 * std::abs(m.a) * std::abs(t0);
    return 0.5 * std::abs(t0) * std::sqrt(1.0 + at * at) + std::asinh(at) / (4.0 * std::abs(m.a));
}

double signed_arc_length(const ParabolaModel& m, double t0) {
    const double len = arc_length(m, t0);
    return t0 < 0.0 ? -len : len;
}

double curvature_radius(const ParabolaModel& m, double t0) {
    // x' = 1, y' = 2 a t, x'' = 0, y'' = 2a.
    const double speed2 = 1.0 + 4.0 * m.a * m.a * t0 * t0;
    return std::pow(speed2, 1.5) / (2.0 * std::abs(m.a));
}

double orientation_determinant(const ParabolaModel& m, double x, double y, double t0) {
    return (x - t0) * (2.0 * m.a * t0) - (y - m.a * t0 * t0);
}

Side orientation_side(const ParabolaModel& m, double x, double y, const ProjectionResult& proj) {
    return orientation_determinant(m, x, y, proj.t0) < 0.0 ? Side::above : Side::below;
}

double jacobian_factor(const ParabolaModel& m, const ProjectionResult& proj) {
    const double ratio = proj.p / curvature_radius(m, proj.t0);
    const bool concave = (proj.side == Side::above) == m.concave_above();
    return concave ? 1.0 - ratio : 1.0 + ratio;
}

double aca_log_density(const ParabolaModel& m, double x, double y, bool corrected) {
    const auto proj = project_to_parabola(m, x, y);
    const double zl = proj.l / m.sigma1;
    const double zp = proj.p / m.sigma2;
    const double raw = -kLog2Pi - std::log(m.sigma1) - std::log(m.sigma2) - 0.5 * (zl * zl + zp * zp);
    if (!corrected || proj.p == 0.0) return raw;
    const double factor = jacobian_factor(m, proj);
    if (!(factor > 0.0)) {
        throw BeyondCurvatureCenter("point lies at or beyond the centre of curvature of its foot point");
    }
    return raw - std::log(factor);
}

double parameter_at_arc_length(const ParabolaModel& m, double l) {
    const double target = std::abs(l);
    // Arc length grows at least linearly, so t in [0, target] brackets the root.
    double lo = 0.0;
    double hi = target;
    double t = target;
    for (int it = 0; it < 100; ++it) {
        const double g = arc_length(m, t) - target;
        if (g > 0.0) hi = t; else lo = t;
        const double slope = std::sqrt(1.0 + 4.0 * m.a * m.a * t * t);
        double next = t - g / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, t)) {
            t = next;
            break;
        }
        t = next;
    }
    return l < 0.0 ? -t : t;
}

namespace {

double concave_side_tail_mass(const ParabolaModel& m, const std::function<double(double)>& threshold) {
    const double span = 12.0 * m.sigma1;
    constexpr int panels = 4000;
    const auto w = simpson_weights(-span, span, panels);
    const double h = 2.0 * span / panels;
    double total = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double l = -span + i * h;
        const double density = std::exp(-0.5 * (l / m.sigma1) * (l / m.sigma1)) / (m.sigma1 * std::sqrt(2.0 * std::numbers::pi));
        const double t = parameter_at_arc_length(m, l);
        total += w[static_cast<std::size_t>(i)] * density * upper_normal_tail(threshold(t) / m.sigma2);
    }
    return total;
}

}  // namespace

double fold_mass(const ParabolaModel& m) {
    return concave_side_tail_mass(m, [&](double t) { return curvature_radius(m, t); });
}

double unreachable_mass(const ParabolaModel& m) {
    // The normal from (t, a t^2) meets the axis of symmetry (the cut locus) after this distance.
    return concave_side_tail_mass(m, [&](double t) {
        return std::sqrt(1.0 + 4.0 * m.a * m.a * t * t) / (2.0 * std::abs(m.a));
    });
}

NormalizationRow normalization_check(const ParabolaModel& m, double box, int n) {
    if (!(box > 0.0)) throw InvalidConfig("integration box must be positive");
    const auto w = simpson_weights(-box, box, n);
    const double h = 2.0 * box / n;
    double raw = 0.0;
    double corrected = 0.0;
    std::size_t fold_nodes = 0;
    for (int i = 0; i <= n; ++i) {
        const double x = -box + i * h;
        double raw_row = 0.0;
        double corrected_row = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double y = -box + j * h;
            const auto proj = project_to_parabola(m, x, y);
            const double zl = proj.l / m.sigma1;
            const double zp = proj.p / m.sigma2;
            const double density = std::exp(-0.5 * (zl * zl + zp * zp)) / (2.0 * std::numbers::pi * m.sigma1 * m.sigma2);
            const double wy = w[static_cast<std::size_t>(j)];
            raw_row += wy * density;
            const double factor = proj.p == 0.0 ? 1.0 : jacobian_factor(m, proj);
            if (factor > 0.0) {
                corrected_row += wy * density / factor;
            } else {
                ++fold_nodes;
            }
        }
        raw += w[static_cast<std::size_t>(i)] * raw_row;
        corrected += w[static_cast<std::size_t>(i)] * corrected_row;
    }
    return NormalizationRow{m.a, m.sigma1, m.sigma2, raw, corrected, fold_mass(m), unreachable_mass(m), fold_nodes};
}

std::vector<NormalizationRow> normalization_table(const std::vector<double>& a_grid,
                                                  const std::vector<double>& sigma1_grid,
                                                  const std::vector<double>& sigma2_grid, double box, int n) {
    std::vector<NormalizationRow> rows;
    for (double a : a_grid)
        for (double s1 : sigma1_grid)
            for (double s2 : sigma2_grid) rows.push_back(normalization_check(ParabolaModel(a, s1, s2), box, n));
    return rows;
}

}  // namespace afcec::acagmm
