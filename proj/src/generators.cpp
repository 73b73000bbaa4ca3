#include "afcec/generators.hpp"

#include "afcec/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace afcec {

namespace {

double cubic(const std::array<double, 4>& c, double t) { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); }

}  // namespace

GeneratorKind parse_generator_kind(std::string_view text) {
    if (text == "circle") return GeneratorKind::circle;
    if (text == "spiral") return GeneratorKind::spiral;
    if (text == "strokes") return GeneratorKind::strokes;
    if (text == "parametric3d") return GeneratorKind::parametric3d;
    throw InvalidSpec("unknown generator kind '" + std::string(text) + "'");
}

std::vector<Stroke> default_strokes() {
    return {
        // top bar, slightly bowed
        {{-1.0, 2.0, 0.0, 0.0}, {1.2, 0.4, -0.4, 0.0}, 1.0},
        // left sweep
        {{-0.2, -0.6, -0.6, 0.0}, {1.0, -1.4, -0.6, 0.0}, 1.0},
        // right sweep
        {{0.2, 0.6, 0.6, 0.0}, {0.2, -1.0, -0.8, 0.0}, 1.0},
        // vertical hook on the right
        {{1.6, 0.0, 0.3, 0.0}, {1.4, -3.0, 0.0, 0.0}, 1.0},
        // lower cubic tail
        {{-1.6, 3.0, 0.0, 0.0}, {-2.4, 0.0, 1.2, -0.8}, 1.0},
    };
}

Dataset generate(const GeneratorSpec& spec) {
    if (spec.n < 10) throw InvalidSpec("generators need n >= 10");
    if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
        throw InvalidSpec("noise sigma must be finite and non-negative");
    }
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto noise = [&] { return spec.noise_sigma > 0.0 ? spec.noise_sigma * gauss(rng) : 0.0; };

    std::vector<double> values;
    std::vector<int> labels;
    values.reserve(spec.n * 3);
    labels.reserve(spec.n);

    switch (spec.kind) {
        case GeneratorKind::circle: {
            if (!(spec.radius > 0.0)) throw InvalidSpec("circle radius must be positive");
            for (std::size_t i = 0; i < spec.n; ++i) {
                const double theta = 2.0 * std::numbers::pi * unit(rng);
                const double r = spec.radius + noise();
                values.push_back(r * std::cos(theta));
                values.push_back(r * std::sin(theta));
                labels.push_back(theta < std::numbers::pi ? 0 : 1);
            }
            return Dataset(2, std::move(values), std::move(labels));
        }
        case GeneratorKind::spiral: {
            const double end = 2.0 * std::numbers::pi * spec.turns;
            if (!(spec.spiral_c > 0.0) || !(end > spec.spiral_start)) throw InvalidSpec("invalid spiral parameters");
            for (std::size_t i = 0; i < spec.n; ++i) {
                const double theta = spec.spiral_start + (end - spec.spiral_start) * unit(rng);
                const double r = spec.spiral_c * theta;
                values.push_back(r * std::cos(theta) + noise());
                values.push_back(r * std::sin(theta) + noise());
                labels.push_back(static_cast<int>(theta / (2.0 * std::numbers::pi)));
            }
            return Dataset(2, std::move(values), std::move(labels));
        }
        case GeneratorKind::strokes: {
            const auto strokes = spec.strokes.empty() ? default_strokes() : spec.strokes;
            std::vector<double> weights;
            for (const auto& s : strokes) {
                if (!(s.weight > 0.0)) throw InvalidSpec("stroke weights must be positive");
                weights.push_back(s.weight);
            }
            std::discrete_distribution<int> which(weights.begin(), weights.end());
            for (std::size_t i = 0; i < spec.n; ++i) {
                const int s = which(rng);
                const double t = unit(rng);
                values.push_back(cubic(strokes[static_cast<std::size_t>(s)].x, t) + noise());
                values.push_back(cubic(strokes[static_cast<std::size_t>(s)].y, t) + noise());
                labels.push_back(s);
            }
            return Dataset(2, std::move(values), std::move(labels));
        }
        case GeneratorKind::parametric3d: {
            auto curve = spec.curve3d;
            double t_min = spec.t_min;
            double t_max = spec.t_max;
            if (!curve) {
                curve = [](double t) {
                    return std::array<double, 3>{std::cos(t), std::sin(t), 0.25 * t};
                };
                t_min = 0.0;
                t_max = 4.0 * std::numbers::pi;
            }
            if (!(t_max > t_min)) throw InvalidSpec("parametric curve needs t_max > t_min");
            for (std::size_t i = 0; i < spec.n; ++i) {
                const auto p = curve(t_min + (t_max - t_min) * unit(rng));
                for (double c : p) values.push_back(c + noise());
                labels.push_back(0);
            }
            return Dataset(3, std::move(values), std::move(labels));
        }
    }
    throw InvalidSpec("unhandled generator kind");
}

}  // namespace afcec
