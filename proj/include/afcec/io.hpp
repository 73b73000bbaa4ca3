#pragma once

#include "afcec/dataset.hpp"
#include "afcec/engine.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

namespace afcec {

inline constexpr int kModelSchemaVersion = 1;

/// Comma-separated numeric rows with an optional single header line.
/// ParseError rows and columns are 1-based file positions.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(std::istream& in);

/// Writes shortest round-trip decimals so load_csv restores every value exactly.
void save_csv(const Dataset& x, const std::filesystem::path& path, bool header = true);
void write_csv(const Dataset& x, std::ostream& out, bool header = true);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

nlohmann::json model_to_json(const AfcecModel& model);
AfcecModel model_from_json(const nlohmann::json& j);

void save_model(const AfcecModel& model, const std::filesystem::path& path);
AfcecModel load_model(const std::filesystem::path& path);

inline constexpr std::size_t kCurveSamples = 200;

/// CSV with a `kind` column: one `point` row per data point (coordinates and
/// assigned cluster) followed by kCurveSamples `curve` rows per cluster tracing
/// x_j = f(x_{-j}) across the cluster's explanatory range.
void export_plot_data(const Dataset& x, const AfcecModel& model, const std::filesystem::path& path);
void write_plot_data(const Dataset& x, const AfcecModel& model, std::ostream& out);

}  // namespace afcec
