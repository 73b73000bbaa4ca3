#pragma once

#include "afcec/dataset.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace afcec {

enum class GeneratorKind { circle, spiral, strokes, parametric3d };

GeneratorKind parse_generator_kind(std::string_view text);

/// Planar stroke t in [0,1] -> (x(t), y(t)), both cubic polynomials (coefficients lowest degree first).
struct Stroke {
    std::array<double, 4> x;
    std::array<double, 4> y;
    /// Relative share of the sampled points.
    double weight = 1.0;
};

/// Five curved and straight strokes laid out like a hand-drawn glyph.
std::vector<Stroke> default_strokes();

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::circle;
    std::size_t n = 1000;
    /// Isotropic Gaussian noise (radial for the circle).
    double noise_sigma = 0.05;
    std::uint64_t seed = 0;

    double radius = 1.0;

    /// Archimedean spiral r = spiral_c * theta for theta in [spiral_start, 2 pi turns].
    double spiral_c = 0.5;
    double spiral_start = 1.0;
    double turns = 2.0;

    std::vector<Stroke> strokes;  // empty means default_strokes()

    std::function<std::array<double, 3>(double)> curve3d;  // empty means a helix
    double t_min = 0.0;
    double t_max = 1.0;
};

/// Deterministic in the spec. Labels: circle by half (upper/lower), spiral by
/// turn, strokes by stroke index, parametric3d all zero.
Dataset generate(const GeneratorSpec& spec);

}  // namespace afcec
