#include "homsense/io.hpp"

#include "homsense/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace homsense::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& why) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + why);
}

double parse_field(const std::string& raw, const std::string& source, std::size_t line) {
    const std::string field = trim(raw);
    if (field.empty()) fail(source, line, "empty field");
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail(source, line, "not a number: '" + field + "'");
    if (!std::isfinite(value)) fail(source, line, "non-finite value '" + field + "'");
    return value;
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return in;
}

} // namespace

Matrix parse_matrix_csv(std::istream& in, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (trim(text).empty()) continue;
        std::vector<double> row;
        std::stringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(parse_field(field, source, line_no));
        if (!text.empty() && trim(text).back() == ',') fail(source, line_no, "trailing comma");
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail(source, line_no, "expected " + std::to_string(rows.front().size()) + " columns, found " +
                                      std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(source + ": no data rows");
    Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) M(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
    return M;
}

Matrix read_matrix_csv(const std::string& path) {
    auto in = open(path);
    return parse_matrix_csv(in, path);
}

Vector parse_vector_csv(std::istream& in, const std::string& source) {
    const Matrix M = parse_matrix_csv(in, source);
    if (M.cols() != 1) throw ParseError(source + ": vector CSV must have a single column");
    return M.col(0);
}

Vector read_vector_csv(const std::string& path) {
    auto in = open(path);
    return parse_vector_csv(in, path);
}

void write_matrix_csv(std::ostream& os, const Matrix& M) {
    os << std::setprecision(17);
    for (Index r = 0; r < M.rows(); ++r) {
        for (Index c = 0; c < M.cols(); ++c) {
            if (c) os << ',';
            os << M(r, c);
        }
        os << '\n';
    }
}

void write_matrix_csv(const std::string& path, const Matrix& M) {
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    write_matrix_csv(out, M);
}

void write_vector_csv(const std::string& path, const Vector& v) {
    write_matrix_csv(path, Matrix(v));
}

std::string read_text_file(const std::string& path) {
    auto in = open(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace homsense::io
