#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "irnn/loss.hpp"
#include "irnn/types.hpp"

namespace irnn {

using Shape = std::pair<Index, Index>;

/// Shortest round-trip decimal representation ("inf" for infinity).
std::string format_double(double x);
/// Strict parse of a complete field; throws PreconditionError.
double parse_double(std::string_view field);
Index parse_index(std::string_view field);

// Triplet format:
//   # shape m n
//   row,col,value
//   0,3,1.25
// Indices are 0-based. The shape comment may be omitted when the caller
// supplies the shape.

void write_triplet_csv(std::ostream &out, const CompletionProblem &problem);
/// Every entry of X as a triplet.
void write_triplet_csv(std::ostream &out, const Matrix &X);
CompletionProblem read_triplet_csv(std::istream &in,
                                   std::optional<Shape> shape = std::nullopt);

/// Plain comma-separated rows, no header.
void write_dense_csv(std::ostream &out, const Matrix &X);
Matrix read_dense_csv(std::istream &in);

CompletionProblem load_triplet_csv(const std::filesystem::path &path,
                                   std::optional<Shape> shape = std::nullopt);
void save_triplet_csv(const std::filesystem::path &path, const Matrix &X);
void save_dense_csv(const std::filesystem::path &path, const Matrix &X);
Matrix load_dense_csv(const std::filesystem::path &path);

} // namespace irnn
