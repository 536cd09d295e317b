#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pslab/linalg.hpp"

namespace pslab {

using json = nlohmann::json;

/// {"rows":n,"cols":m,"data":[[re,im],...]}, row-major.
json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const json& j);

json cx_to_json(Cx z);
Cx cx_from_json(const json& j);

/// Shortest text that round-trips the double ("%.17g" trimmed); used for every CSV cell.
std::string fmt_num(double v);

/// Missing or unparsable input raises invalid_input (exit 2); filesystem write failures raise io.
json read_json_file(const std::filesystem::path& path);
CMatrix read_matrix_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void ensure_directory(const std::filesystem::path& dir);

}  // namespace pslab
