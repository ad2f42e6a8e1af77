#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace gfl {

enum class Format { tsv, json };

Format parse_format(const std::string& s);
const char* to_string(Format f) noexcept;
/// "tsv" or "json".
std::string extension(Format f);

/// Header metadata of an emitted matrix.
struct MatrixMeta {
    double z = 0.0;
    std::string kind;
    /// Extra key/value pairs, written after the standard fields in the given order.
    std::vector<std::pair<std::string, std::string>> extra;
};

/// Serialized form of a real matrix.
///
/// TSV: `# rows=R cols=C z=Z kind=K [key=value ...]`, then one tab-separated line per row with
/// every value printed as %.17g. JSON: {"data": [...row-major...], "meta": {...}}; complex
/// entries are [re, im] pairs in JSON and adjacent re/im columns in TSV. Output depends only on
/// the values, so identical inputs give identical bytes. Non-finite entries are rejected.
std::string format_matrix(const Eigen::MatrixXd& m, const MatrixMeta& meta, Format format);
std::string format_matrix(const Eigen::MatrixXcd& m, const MatrixMeta& meta, Format format);

/// format_matrix written to `path`; throws IoError when the file cannot be written.
void emit_matrix(const Eigen::MatrixXd& m, const MatrixMeta& meta, Format format,
                 const std::filesystem::path& path);
void emit_matrix(const Eigen::MatrixXcd& m, const MatrixMeta& meta, Format format,
                 const std::filesystem::path& path);

struct LoadedMatrix {
    Eigen::MatrixXcd data;
    bool is_complex = false;
    MatrixMeta meta;
};

/// Parses a file produced by emit_matrix (format picked from the extension).
LoadedMatrix read_matrix(const std::filesystem::path& path);
LoadedMatrix parse_matrix(const std::string& text, Format format);

/// Writes text to path atomically enough for our purposes (truncate + write); throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gfl
