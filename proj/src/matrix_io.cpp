#include "pslab/matrix_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pslab {

json cx_to_json(Cx z) { return json::array({z.real(), z.imag()}); }

Cx cx_from_json(const json& j) {
    if (j.is_number()) {
        const double re = j.get<double>();
        require(std::isfinite(re), "non-finite number");
        return {re, 0.0};
    }
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
            "complex entries must be [re, im] pairs");
    const Cx z{j[0].get<double>(), j[1].get<double>()};
    require(is_finite(z), "non-finite complex entry");
    return z;
}

json matrix_to_json(const CMatrix& a) {
    json data = json::array();
    for (const Cx& z : a.data()) data.push_back(cx_to_json(z));
    return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
    require(j.is_object(), "matrix JSON must be an object");
    require(j.contains("rows") && j.contains("cols") && j.contains("data"),
            "matrix JSON needs rows, cols and data");
    require(j["rows"].is_number_unsigned() && j["cols"].is_number_unsigned(),
            "rows and cols must be positive integers");
    const auto rows = j["rows"].get<std::size_t>();
    const auto cols = j["cols"].get<std::size_t>();
    require(rows >= 1 && cols >= 1, "rows and cols must be positive integers");
    const json& data = j["data"];
    require(data.is_array(), "matrix data must be an array");
    require(data.size() == rows * cols, "matrix data has " + std::to_string(data.size()) +
                                            " entries, expected " + std::to_string(rows * cols));
    std::vector<Cx> v;
    v.reserve(data.size());
    for (const auto& e : data) v.push_back(cx_from_json(e));
    return CMatrix(rows, cols, std::move(v));
}

std::string fmt_num(double v) {
    char buf[32];
    // %.17g always round-trips; try shorter first so common values stay readable.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::invalid_input, "cannot open input file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::invalid_input, "malformed JSON in " + path.string() + ": " + e.what());
    }
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
    try {
        return matrix_from_json(read_json_file(path));
    } catch (const json::exception& e) {
        fail(ErrorKind::invalid_input, "bad matrix in " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        fail(ErrorKind::io, "cannot create output directory " + dir.string());
}

}  // namespace pslab
