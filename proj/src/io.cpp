#include "laplax/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace laplax {

namespace {

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& what) {
    throw input_error(name + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    require(bool(in), "cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    require(bool(out), "cannot open " + path + " for writing");
    return out;
}

bool blank_or_comment(const std::string& s, char comment) {
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == comment;
    }
    return true;
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    int len = std::snprintf(buf, sizeof buf, "%.17g", x);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char tmp[40];
        std::snprintf(tmp, sizeof tmp, "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(tmp, "%lf", &back);
        if (back == x) return std::string(tmp);
    }
    return std::string(buf, std::size_t(len));
}

SddMatrix read_matrix_market(std::istream& in, const std::string& name) {
    std::string line;
    int lineno = 0;
    require(bool(std::getline(in, line)), name + ": empty file");
    ++lineno;
    {
        std::istringstream h(line);
        std::string banner, object, fmt, field, symmetry;
        h >> banner >> object >> fmt >> field >> symmetry;
        if (banner != "%%MatrixMarket") parse_fail(name, lineno, "missing MatrixMarket banner");
        if (object != "matrix" || fmt != "coordinate")
            parse_fail(name, lineno, "only coordinate matrices are supported");
        if (field != "real" && field != "integer")
            parse_fail(name, lineno, "only real matrices are supported");
        if (symmetry != "symmetric" && symmetry != "general")
            parse_fail(name, lineno, "only symmetric/general matrices are supported");
    }
    int rows = 0, cols = 0;
    long nnz = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line, '%')) continue;
        std::istringstream h(line);
        if (!(h >> rows >> cols >> nnz)) parse_fail(name, lineno, "bad size line");
        break;
    }
    if (rows <= 0 || rows != cols) parse_fail(name, lineno, "matrix must be square and non-empty");
    std::vector<std::tuple<int, int, double>> trips;
    trips.reserve(std::size_t(nnz));
    long seen = 0;
    while (seen < nnz) {
        if (!std::getline(in, line)) parse_fail(name, lineno, "unexpected end of file");
        ++lineno;
        if (blank_or_comment(line, '%')) continue;
        std::istringstream h(line);
        int i = 0, j = 0;
        double v = 0.0;
        if (!(h >> i >> j >> v)) parse_fail(name, lineno, "bad entry line");
        if (i < 1 || i > rows || j < 1 || j > cols) parse_fail(name, lineno, "index out of range");
        trips.emplace_back(i - 1, j - 1, v);
        ++seen;
    }
    try {
        return SddMatrix::from_triplets(rows, std::move(trips));
    } catch (const input_error& e) {
        throw input_error(name + ": " + e.what());
    }
}

SddMatrix read_matrix_market_file(const std::string& path) {
    auto in = open_in(path);
    return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const SddMatrix& a) {
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    long nnz = 0;
    for (int i = 0; i < a.dim(); ++i) {
        auto cols = a.row_cols(i);
        for (int j : cols)
            if (j <= i) ++nnz;
    }
    out << a.dim() << " " << a.dim() << " " << nnz << "\n";
    for (int i = 0; i < a.dim(); ++i) {
        auto cols = a.row_cols(i);
        auto vals = a.row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (cols[k] <= i)
                out << (i + 1) << " " << (cols[k] + 1) << " " << format_double(vals[k]) << "\n";
    }
}

void write_matrix_market_file(const std::string& path, const SddMatrix& a) {
    auto out = open_out(path);
    write_matrix_market(out, a);
}

WeightedGraph read_edge_list(std::istream& in, const std::string& name) {
    std::string line;
    int lineno = 0;
    std::vector<Edge> edges;
    int max_id = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line, '#')) continue;
        std::istringstream h(line);
        long u = 0, v = 0;
        double w = 0.0;
        if (!(h >> u >> v >> w)) parse_fail(name, lineno, "expected `u v w`");
        std::string rest;
        if (h >> rest) parse_fail(name, lineno, "trailing tokens");
        if (u < 0 || v < 0) parse_fail(name, lineno, "negative vertex id");
        if (u == v) parse_fail(name, lineno, "self-loop");
        if (!(w > 0.0)) parse_fail(name, lineno, "weight must be positive");
        edges.push_back({int(u), int(v), w});
        max_id = std::max({max_id, int(u), int(v)});
    }
    try {
        return WeightedGraph::from_edges(max_id + 1, std::move(edges));
    } catch (const input_error& e) {
        throw input_error(name + ": " + e.what());
    }
}

WeightedGraph read_edge_list_file(const std::string& path) {
    auto in = open_in(path);
    return read_edge_list(in, path);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
    for (const Edge& e : g.edges())
        out << e.u << " " << e.v << " " << format_double(e.w) << "\n";
}

void write_edge_list_file(const std::string& path, const WeightedGraph& g) {
    auto out = open_out(path);
    write_edge_list(out, g);
}

std::vector<double> read_vector(std::istream& in, const std::string& name) {
    std::string line;
    int lineno = 0;
    std::vector<double> x;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line, '#')) continue;
        std::istringstream h(line);
        double v = 0.0;
        if (!(h >> v)) parse_fail(name, lineno, "expected a number");
        x.push_back(v);
    }
    return x;
}

std::vector<double> read_vector_file(const std::string& path) {
    auto in = open_in(path);
    return read_vector(in, path);
}

void write_vector(std::ostream& out, std::span<const double> x) {
    for (double v : x) out << format_double(v) << "\n";
}

void write_vector_file(const std::string& path, std::span<const double> x) {
    auto out = open_out(path);
    write_vector(out, x);
}

} // namespace laplax
