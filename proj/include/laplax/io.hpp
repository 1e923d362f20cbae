#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "laplax/graph.hpp"
#include "laplax/sdd.hpp"

namespace laplax {

// Matrix Market coordinate format, real symmetric. Parse failures carry the
// 1-based line number.
SddMatrix read_matrix_market(std::istream& in, const std::string& name = "<stream>");
SddMatrix read_matrix_market_file(const std::string& path);
void write_matrix_market(std::ostream& out, const SddMatrix& a);
void write_matrix_market_file(const std::string& path, const SddMatrix& a);

// Plain edge list, one `u v w` per line; `#` starts a comment. Vertex count
// is the largest id seen plus one.
WeightedGraph read_edge_list(std::istream& in, const std::string& name = "<stream>");
WeightedGraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void write_edge_list_file(const std::string& path, const WeightedGraph& g);

// One value per line.
std::vector<double> read_vector(std::istream& in, const std::string& name = "<stream>");
std::vector<double> read_vector_file(const std::string& path);
void write_vector(std::ostream& out, std::span<const double> x);
void write_vector_file(const std::string& path, std::span<const double> x);

// Shortest round-trip decimal form, used everywhere file determinism matters.
std::string format_double(double x);

} // namespace laplax
