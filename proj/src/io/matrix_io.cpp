#include "sqnm/io/matrix_io.hpp"

#include "sqnm/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace sqnm::io {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_real(std::string_view token, std::size_t line) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) parse_error(line, "not a number: '" + std::string(token) + "'");
    if (!std::isfinite(value)) parse_error(line, "non-finite value '" + std::string(token) + "'");
    return value;
}

std::size_t parse_index(const std::string& token, std::size_t line) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        parse_error(line, "not a nonnegative integer: '" + token + "'");
    }
    return value;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
}

} // namespace

MatrixFormat parse_format(std::string_view name) {
    const std::string key = lower(std::string(name));
    if (key == "mtx" || key == "matrix-market" || key == "mm") return MatrixFormat::MatrixMarket;
    if (key == "csv") return MatrixFormat::Csv;
    fail(ErrorKind::Parse, "unknown matrix format '" + std::string(name) + "' (expected matrix-market or csv)");
}

MatrixFormat format_from_extension(const std::filesystem::path& path) {
    return lower(path.extension().string()) == ".csv" ? MatrixFormat::Csv : MatrixFormat::MatrixMarket;
}

DenseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) parse_error(1, "empty input");
    ++line_no;

    const auto banner = split_ws(lower(line));
    if (banner.size() != 5 || banner[0] != "%%matrixmarket" || banner[1] != "matrix") {
        parse_error(line_no, "missing '%%MatrixMarket matrix <layout> <field> <symmetry>' banner");
    }
    const std::string& layout = banner[2];
    const std::string& field = banner[3];
    const std::string& symmetry = banner[4];
    if (layout != "array" && layout != "coordinate") parse_error(line_no, "unknown layout '" + layout + "'");
    if (field == "complex" || field == "pattern") parse_error(line_no, "field '" + field + "' is not supported");
    if (field != "real" && field != "integer" && field != "double") {
        parse_error(line_no, "unknown field '" + field + "'");
    }
    if (symmetry != "general") parse_error(line_no, "only general matrices are supported, got '" + symmetry + "'");

    auto next_data_line = [&](std::vector<std::string>& tokens) {
        while (std::getline(in, line)) {
            ++line_no;
            const std::string t = trim(line);
            if (t.empty() || t.front() == '%') continue;
            tokens = split_ws(t);
            return true;
        }
        return false;
    };

    std::vector<std::string> tokens;
    if (!next_data_line(tokens)) parse_error(line_no, "missing size line");
    const bool coordinate = layout == "coordinate";
    if (tokens.size() != (coordinate ? 3u : 2u)) parse_error(line_no, "malformed size line");
    const std::size_t rows = parse_index(tokens[0], line_no);
    const std::size_t cols = parse_index(tokens[1], line_no);
    if (rows == 0 || cols == 0) parse_error(line_no, "matrix dimensions must be positive");

    DenseMatrix x(rows, cols);
    if (coordinate) {
        const std::size_t nnz = parse_index(tokens[2], line_no);
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!next_data_line(tokens)) parse_error(line_no, "expected " + std::to_string(nnz) + " entries");
            if (tokens.size() != 3) parse_error(line_no, "coordinate entry needs 'row col value'");
            const std::size_t i = parse_index(tokens[0], line_no);
            const std::size_t j = parse_index(tokens[1], line_no);
            if (i == 0 || i > rows || j == 0 || j > cols) parse_error(line_no, "index out of range");
            x(i - 1, j - 1) += parse_real(tokens[2], line_no);
        }
    } else {
        // Array layout lists entries column by column.
        for (std::size_t k = 0; k < rows * cols; ++k) {
            if (!next_data_line(tokens)) parse_error(line_no, "expected " + std::to_string(rows * cols) + " values");
            if (tokens.size() != 1) parse_error(line_no, "array entry needs exactly one value");
            x(k % rows, k / rows) = parse_real(tokens[0], line_no);
        }
    }
    if (next_data_line(tokens)) parse_error(line_no, "unexpected trailing data");
    return x;
}

DenseMatrix read_csv(std::istream& in) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t count = 0;
        std::string_view rest(t);
        for (;;) {
            const auto comma = rest.find(',');
            values.push_back(parse_real(trim(rest.substr(0, comma)), line_no));
            ++count;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            parse_error(line_no, "row has " + std::to_string(count) + " fields, expected " + std::to_string(cols));
        }
        ++rows;
    }
    if (rows == 0) parse_error(line_no + 1, "empty CSV input");
    return DenseMatrix::from_row_major(rows, cols, values);
}

void write_matrix_market(std::ostream& out, const DenseMatrix& x) {
    out << "%%MatrixMarket matrix array real general\n" << x.rows() << ' ' << x.cols() << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) out << x(i, j) << '\n';
}

void write_csv(std::ostream& out, const DenseMatrix& x) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            if (j) out << ',';
            out << x(i, j);
        }
        out << '\n';
    }
}

DenseMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    try {
        return format == MatrixFormat::Csv ? read_csv(in) : read_matrix_market(in);
    } catch (const Error& e) {
        fail(e.kind(), path.string() + ": " + e.what());
    }
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& x, MatrixFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    if (format == MatrixFormat::Csv) {
        write_csv(out, x);
    } else {
        write_matrix_market(out, x);
    }
    if (!out) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

} // namespace sqnm::io
