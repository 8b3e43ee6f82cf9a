#include "irnn/matrix_io.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace irnn {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace

std::string format_double(double x) {
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view field) {
    field = trim(field);
    if (field == "inf" || field == "+inf")
        return std::numeric_limits<double>::infinity();
    double x = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw PreconditionError("cannot parse number '" + std::string(field) + "'");
    return x;
}

Index parse_index(std::string_view field) {
    field = trim(field);
    long long x = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw PreconditionError("cannot parse index '" + std::string(field) + "'");
    return static_cast<Index>(x);
}

void write_triplet_csv(std::ostream &out, const CompletionProblem &problem) {
    out << "# shape " << problem.rows() << ' ' << problem.cols() << '\n';
    out << "row,col,value\n";
    for (const auto &[i, j] : problem.mask().coordinates())
        out << i << ',' << j << ',' << format_double(problem.observed()(i, j))
            << '\n';
}

void write_triplet_csv(std::ostream &out, const Matrix &X) {
    out << "# shape " << X.rows() << ' ' << X.cols() << '\n';
    out << "row,col,value\n";
    for (Index i = 0; i < X.rows(); ++i)
        for (Index j = 0; j < X.cols(); ++j)
            out << i << ',' << j << ',' << format_double(X(i, j)) << '\n';
}

CompletionProblem read_triplet_csv(std::istream &in, std::optional<Shape> shape) {
    std::vector<Coordinate> coords;
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty())
            continue;
        if (text.front() == '#') {
            std::istringstream comment{std::string(text.substr(1))};
            std::string key;
            Index m = 0, n = 0;
            if (comment >> key && key == "shape") {
                if (!(comment >> m >> n) || m <= 0 || n <= 0)
                    throw PreconditionError("line " + std::to_string(lineno) +
                                            ": malformed shape comment");
                if (!shape)
                    shape = Shape{m, n};
            }
            continue;
        }
        const auto fields = split_commas(text);
        if (fields.size() != 3)
            throw PreconditionError("line " + std::to_string(lineno) +
                                    ": expected 3 fields");
        if (!seen_header && fields[0] == "row") {
            seen_header = true;
            continue;
        }
        seen_header = true;
        coords.emplace_back(parse_index(fields[0]), parse_index(fields[1]));
        values.push_back(parse_double(fields[2]));
    }
    if (!shape)
        throw PreconditionError(
            "triplet CSV: shape unknown (add '# shape m n' or pass it explicitly)");
    // ObservationMask sorts its coordinates; keep values aligned.
    std::vector<std::size_t> order(coords.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return coords[a] < coords[b]; });
    std::vector<Coordinate> sorted_coords;
    std::vector<double> sorted_values;
    sorted_coords.reserve(order.size());
    sorted_values.reserve(order.size());
    for (auto k : order) {
        sorted_coords.push_back(coords[k]);
        sorted_values.push_back(values[k]);
    }
    ObservationMask mask(shape->first, shape->second, std::move(sorted_coords));
    return CompletionProblem(std::move(mask), sorted_values);
}

void write_dense_csv(std::ostream &out, const Matrix &X) {
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.cols(); ++j) {
            if (j)
                out << ',';
            out << format_double(X(i, j));
        }
        out << '\n';
    }
}

Matrix read_dense_csv(std::istream &in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto text = trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        std::vector<double> row;
        for (auto f : split_commas(text))
            row.push_back(parse_double(f));
        if (!rows.empty() && row.size() != rows.front().size())
            throw PreconditionError("dense CSV: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        return Matrix(0, 0);
    Matrix X(static_cast<Index>(rows.size()),
             static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < X.rows(); ++i)
        for (Index j = 0; j < X.cols(); ++j)
            X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return X;
}

CompletionProblem load_triplet_csv(const std::filesystem::path &path,
                                   std::optional<Shape> shape) {
    auto in = open_in(path);
    return read_triplet_csv(in, shape);
}

void save_triplet_csv(const std::filesystem::path &path, const Matrix &X) {
    auto out = open_out(path);
    write_triplet_csv(out, X);
}

void save_dense_csv(const std::filesystem::path &path, const Matrix &X) {
    auto out = open_out(path);
    write_dense_csv(out, X);
}

Matrix load_dense_csv(const std::filesystem::path &path) {
    auto in = open_in(path);
    return read_dense_csv(in);
}

} // namespace irnn
