#pragma once

// Exact sparse linear algebra over the rationals.
//
// Columns are inserted one at a time into a fraction-free echelon structure:
// each column is scaled to integers and its leading (highest-row) entry is
// eliminated against stored pivots by cross-multiplication, with content
// removed after each step. Every stored vector carries the integer
// combination of original columns that produced it, which yields kernel
// vectors and solutions without back substitution.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "varcomplex/jetcore.hpp"

namespace varcomplex::linalg {

using Index = std::uint32_t;
/// Sparse vector sorted by index, no explicit zeros.
using SparseVec = std::vector<std::pair<Index, Rational>>;

struct SparseMatrix {
  std::size_t rows = 0;
  std::vector<SparseVec> cols;
  std::size_t num_cols() const { return cols.size(); }
};

/// Product a * b (columns of b index into columns of a).
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
bool is_zero(const SparseMatrix& m);

class Echelon {
 public:
  /// Inserts the next column. Returns true iff it is independent of the previous ones.
  bool insert(const SparseVec& col);

  std::size_t rank() const { return pivots_.size(); }
  std::size_t columns() const { return num_cols_; }

  /// Basis of linear relations among the inserted columns.
  const std::vector<SparseVec>& kernel() const { return kernel_; }

  /// Solves sum_j x_j col_j = b. On failure returns nullopt and stores b - A x in *residual.
  std::optional<SparseVec> solve(const SparseVec& b, SparseVec* residual = nullptr) const;
  bool in_span(const SparseVec& b) const { return solve(b).has_value(); }

 private:
  using IntVec = std::vector<std::pair<Index, Integer>>;
  struct Pivot {
    IntVec v;
    IntVec combo;
  };

  std::vector<Pivot> pivots_;
  std::vector<std::pair<Index, std::size_t>> pivot_rows_;  // sorted by row
  std::vector<SparseVec> kernel_;
  std::size_t num_cols_ = 0;

  const Pivot* pivot_at(Index row) const;
};

std::size_t rank(const SparseMatrix& m);
/// Kernel basis vectors (length num_cols each, sparse).
std::vector<SparseVec> kernel(const SparseMatrix& m);

}  // namespace varcomplex::linalg
