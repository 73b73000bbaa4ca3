#include "afcec/io.hpp"

#include "afcec/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

namespace afcec {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

bool parse_number(std::string_view cell, double& out) {
    if (cell.empty()) return false;
    if (cell.front() == '+') cell.remove_prefix(1);
    const auto* end = cell.data() + cell.size();
    const auto res = std::from_chars(cell.data(), end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

nlohmann::json matrix_to_json(const Matrix& m) {
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j.at(i).size() != cols) throw IoError("model file: ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    }
    return m;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

Dataset parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t d = 0;
    std::vector<double> values;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        std::vector<double> row(cells.size());
        std::size_t bad = cells.size();
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_number(cells[c], row[c])) {
                bad = c;
                break;
            }
        }
        if (first_content) {
            first_content = false;
            d = cells.size();
            if (bad < cells.size()) continue;  // header line
        }
        if (bad < cells.size()) throw ParseError(line_no, bad + 1, "non-numeric cell '" + std::string(cells[bad]) + "'");
        if (cells.size() != d) {
            throw ParseError(line_no, std::min(cells.size(), d) + 1,
                             "expected " + std::to_string(d) + " columns, found " + std::to_string(cells.size()));
        }
        values.insert(values.end(), row.begin(), row.end());
    }
    if (values.empty()) throw ParseError(line_no, 0, "no data rows");
    return Dataset(d, std::move(values));
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return parse_csv(in);
}

void write_csv(const Dataset& x, std::ostream& out, bool header) {
    if (header) {
        for (std::size_t j = 0; j < x.dim(); ++j) out << (j ? "," : "") << "x" << j;
        out << '\n';
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.dim(); ++j) out << (j ? "," : "") << format_double(x.at(i, j));
        out << '\n';
    }
}

void save_csv(const Dataset& x, const std::filesystem::path& path, bool header) {
    auto out = open_for_write(path);
    write_csv(x, out, header);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

nlohmann::json model_to_json(const AfcecModel& model) {
    nlohmann::json j;
    j["schema"] = kModelSchemaVersion;
    j["k_init"] = model.k_init;
    j["seed"] = model.seed;
    j["iterations"] = model.iterations;
    j["deleted_count"] = model.deleted_count;
    j["converged"] = model.converged;
    j["cost_trace"] = model.cost_trace;
    j["deletion_trace"] = model.deletion_trace;
    j["assignment"] = model.assignment;

    if (!model.clusters.empty()) {
        const auto& family = model.clusters.front().params.curve().family();
        if (!family.is_polynomial()) throw InvalidConfig("models with custom basis functions cannot be serialized");
        nlohmann::json fam;
        fam["name"] = family.name();
        fam["input_dim"] = family.input_dim();
        auto basis = nlohmann::json::array();
        for (const auto& b : family.basis()) basis.push_back(b.exponents);
        fam["basis"] = basis;
        j["family"] = fam;
        j["dim"] = model.clusters.front().params.dim();
    }

    auto clusters = nlohmann::json::array();
    for (const auto& c : model.clusters) {
        nlohmann::json cj;
        cj["axis"] = c.params.dependent_axis();
        cj["weight"] = c.weight;
        cj["size"] = c.size;
        cj["cross_entropy"] = c.cross_entropy;
        cj["mean_exp"] = c.params.mean_exp().values();
        cj["cov_exp"] = matrix_to_json(c.params.cov_exp());
        cj["resid_var"] = c.params.resid_var();
        cj["mean_dep"] = c.params.mean_dep();
        cj["coeffs"] = c.params.curve().coeffs().values();
        cj["sse"] = c.params.curve().sse();
        clusters.push_back(std::move(cj));
    }
    j["clusters"] = std::move(clusters);
    return j;
}

AfcecModel model_from_json(const nlohmann::json& j) {
    try {
        if (!j.contains("schema") || j.at("schema").get<int>() != kModelSchemaVersion) {
            throw SchemaVersionMismatch("model schema version " +
                                        (j.contains("schema") ? j.at("schema").dump() : std::string("<missing>")) +
                                        " is not supported (expected " + std::to_string(kModelSchemaVersion) + ")");
        }
        AfcecModel model;
        model.k_init = j.at("k_init").get<std::size_t>();
        model.seed = j.at("seed").get<std::uint64_t>();
        model.iterations = j.at("iterations").get<std::size_t>();
        model.deleted_count = j.at("deleted_count").get<std::size_t>();
        model.converged = j.at("converged").get<bool>();
        model.cost_trace = j.at("cost_trace").get<std::vector<double>>();
        model.deletion_trace = j.at("deletion_trace").get<std::vector<std::size_t>>();
        model.assignment = j.at("assignment").get<std::vector<std::size_t>>();

        const auto& clusters = j.at("clusters");
        if (clusters.empty()) return model;

        const auto& fam = j.at("family");
        const auto input_dim = fam.at("input_dim").get<std::size_t>();
        std::vector<BasisFunction> basis;
        for (const auto& e : fam.at("basis")) basis.push_back(BasisFunction::monomial(e.get<std::vector<int>>()));
        auto family = std::make_shared<const FunctionFamily>(input_dim, std::move(basis), fam.at("name").get<std::string>());

        for (const auto& cj : clusters) {
            CurveFit curve(family, Vector(cj.at("coeffs").get<std::vector<double>>()), cj.at("sse").get<double>());
            FAdaptedParams params(cj.at("axis").get<std::size_t>(), Vector(cj.at("mean_exp").get<std::vector<double>>()),
                                  matrix_from_json(cj.at("cov_exp")), cj.at("resid_var").get<double>(), std::move(curve),
                                  cj.at("mean_dep").get<double>());
            model.clusters.push_back(ClusterModel{std::move(params), cj.at("weight").get<double>(),
                                                  cj.at("size").get<std::size_t>(), cj.at("cross_entropy").get<double>()});
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const AfcecModel& model, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

AfcecModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed model file: ") + e.what());
    }
    return model_from_json(j);
}

void write_plot_data(const Dataset& x, const AfcecModel& model, std::ostream& out) {
    const std::size_t d = x.dim();
    if (model.assignment.size() != x.size()) throw std::invalid_argument("plot export: assignment length mismatch");
    out << "kind,cluster";
    for (std::size_t j = 0; j < d; ++j) out << ",x" << j;
    out << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << "point," << model.assignment[i];
        for (std::size_t j = 0; j < d; ++j) out << ',' << format_double(x.at(i, j));
        out << '\n';
    }

    for (std::size_t c = 0; c < model.clusters.size(); ++c) {
        const auto& params = model.clusters[c].params;
        const std::size_t axis = params.dependent_axis();
        std::vector<double> lo(d - 1, std::numeric_limits<double>::infinity());
        std::vector<double> hi(d - 1, -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (model.assignment[i] != c) continue;
            const auto e = drop_coordinate(x.point(i), axis);
            for (std::size_t k = 0; k < d - 1; ++k) {
                lo[k] = std::min(lo[k], e[k]);
                hi[k] = std::max(hi[k], e[k]);
            }
        }
        if (!std::isfinite(lo[0])) {
            lo = params.mean_exp().values();
            hi = lo;
        }
        std::vector<double> e(d - 1);
        std::vector<double> point(d);
        for (std::size_t s = 0; s < kCurveSamples; ++s) {
            const double frac = static_cast<double>(s) / static_cast<double>(kCurveSamples - 1);
            for (std::size_t k = 0; k < d - 1; ++k) e[k] = lo[k] + frac * (hi[k] - lo[k]);
            std::size_t k = 0;
            for (std::size_t j = 0; j < d; ++j) point[j] = j == axis ? params.curve().evaluate(e) : e[k++];
            out << "curve," << c;
            for (double v : point) out << ',' << format_double(v);
            out << '\n';
        }
    }
}

void export_plot_data(const Dataset& x, const AfcecModel& model, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_plot_data(x, model, out);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace afcec
