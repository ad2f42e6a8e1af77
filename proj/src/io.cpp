#include "gfl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gfl/errors.hpp"

namespace gfl {

namespace {

using json = nlohmann::json;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_finite(double v) {
    if (!std::isfinite(v)) throw ContractError("emit_matrix: non-finite entry");
}

std::string tsv_header(Eigen::Index rows, Eigen::Index cols, const MatrixMeta& meta) {
    std::string h = "# rows=" + std::to_string(rows) + " cols=" + std::to_string(cols) + " z=" + num(meta.z) +
                    " kind=" + meta.kind;
    for (const auto& [k, v] : meta.extra) h += " " + k + "=" + v;
    return h + "\n";
}

json json_meta(Eigen::Index rows, Eigen::Index cols, const MatrixMeta& meta, bool complex_values) {
    json m;
    m["rows"] = rows;
    m["cols"] = cols;
    m["z"] = meta.z;
    m["kind"] = meta.kind;
    m["complex"] = complex_values;
    for (const auto& [k, v] : meta.extra) m[k] = v;
    return m;
}

}  // namespace

Format parse_format(const std::string& s) {
    if (s == "tsv") return Format::tsv;
    if (s == "json") return Format::json;
    throw ConfigError("unknown output format '" + s + "' (expected tsv or json)");
}

const char* to_string(Format f) noexcept { return f == Format::tsv ? "tsv" : "json"; }

std::string extension(Format f) { return to_string(f); }

std::string format_matrix(const Eigen::MatrixXd& m, const MatrixMeta& meta, Format format) {
    if (format == Format::tsv) {
        std::string out = tsv_header(m.rows(), m.cols(), meta);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                require_finite(m(r, c));
                if (c > 0) out += '\t';
                out += num(m(r, c));
            }
            out += '\n';
        }
        return out;
    }
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            require_finite(m(r, c));
            data.push_back(m(r, c));
        }
    }
    json doc;
    doc["meta"] = json_meta(m.rows(), m.cols(), meta, false);
    doc["data"] = std::move(data);
    return doc.dump() + "\n";
}

std::string format_matrix(const Eigen::MatrixXcd& m, const MatrixMeta& meta, Format format) {
    if (format == Format::tsv) {
        std::string out = tsv_header(m.rows(), m.cols(), meta);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                require_finite(m(r, c).real());
                require_finite(m(r, c).imag());
                if (c > 0) out += '\t';
                out += num(m(r, c).real());
                out += '\t';
                out += num(m(r, c).imag());
            }
            out += '\n';
        }
        return out;
    }
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            require_finite(m(r, c).real());
            require_finite(m(r, c).imag());
            data.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    json doc;
    doc["meta"] = json_meta(m.rows(), m.cols(), meta, true);
    doc["data"] = std::move(data);
    return doc.dump() + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void emit_matrix(const Eigen::MatrixXd& m, const MatrixMeta& meta, Format format,
                 const std::filesystem::path& path) {
    write_text(path, format_matrix(m, meta, format));
}

void emit_matrix(const Eigen::MatrixXcd& m, const MatrixMeta& meta, Format format,
                 const std::filesystem::path& path) {
    write_text(path, format_matrix(m, meta, format));
}

static LoadedMatrix parse_matrix_text(const std::string& text, Format format) {
    LoadedMatrix out;
    if (format == Format::json) {
        json doc;
        try {
            doc = json::parse(text);
            const auto& meta = doc.at("meta");
            const auto rows = meta.at("rows").get<Eigen::Index>();
            const auto cols = meta.at("cols").get<Eigen::Index>();
            out.meta.z = meta.at("z").get<double>();
            out.meta.kind = meta.at("kind").get<std::string>();
            out.is_complex = meta.at("complex").get<bool>();
            for (const auto& [k, v] : meta.items()) {
                if (k != "rows" && k != "cols" && k != "z" && k != "kind" && k != "complex") {
                    out.meta.extra.emplace_back(k, v.get<std::string>());
                }
            }
            const auto& data = doc.at("data");
            if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw IoError("matrix data length mismatch");
            out.data.resize(rows, cols);
            for (Eigen::Index i = 0; i < rows * cols; ++i) {
                const auto& v = data[static_cast<std::size_t>(i)];
                out.data(i / cols, i % cols) =
                    out.is_complex ? std::complex<double>(v.at(0).get<double>(), v.at(1).get<double>())
                                   : std::complex<double>(v.get<double>(), 0.0);
            }
        } catch (const json::exception& e) {
            throw IoError(std::string("malformed matrix JSON: ") + e.what());
        }
        return out;
    }

    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw IoError("missing TSV matrix header");
    Eigen::Index rows = -1, cols = -1;
    std::istringstream header(line.substr(2));
    std::string token;
    while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw IoError("malformed header field '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "rows") {
            rows = std::stol(value);
        } else if (key == "cols") {
            cols = std::stol(value);
        } else if (key == "z") {
            out.meta.z = std::stod(value);
        } else if (key == "kind") {
            out.meta.kind = value;
        } else {
            out.meta.extra.emplace_back(key, value);
        }
    }
    if (rows < 0 || cols < 0) throw IoError("TSV header lacks rows/cols");
    out.data.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw IoError("TSV matrix truncated at row " + std::to_string(r));
        std::vector<double> values;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, '\t')) values.push_back(std::stod(field));
        if (static_cast<Eigen::Index>(values.size()) == 2 * cols && cols > 0) {
            out.is_complex = true;
            for (Eigen::Index c = 0; c < cols; ++c) {
                out.data(r, c) = {values[static_cast<std::size_t>(2 * c)], values[static_cast<std::size_t>(2 * c + 1)]};
            }
        } else if (static_cast<Eigen::Index>(values.size()) == cols) {
            for (Eigen::Index c = 0; c < cols; ++c) out.data(r, c) = values[static_cast<std::size_t>(c)];
        } else {
            throw IoError("TSV row " + std::to_string(r) + " has " + std::to_string(values.size()) + " fields");
        }
    }
    return out;
}

LoadedMatrix parse_matrix(const std::string& text, Format format) {
    try {
        return parse_matrix_text(text, format);
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("malformed number in matrix text: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw IoError(std::string("number out of range in matrix text: ") + e.what());
    }
}

LoadedMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const Format format = path.extension() == ".json" ? Format::json : Format::tsv;
    return parse_matrix(buf.str(), format);
}

}  // namespace gfl
