#pragma once

// Finite truncations of the variational bicomplex as exact sparse matrices,
// Betti-number shadows of its cohomology, and the randomized identity suite.
//
// Truncation convention: cohomology at position p is
//   dim ker(op on the domain truncation) - dim(im(incoming op) ∩ domain space)
// where the incoming op acts on an enlarged truncation: (r-1, p, b+1) for d_H,
// (r, p+1, b) for d_V and for the Euler-Lagrange map into E_1.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "varcomplex/basis.hpp"
#include "varcomplex/parallel.hpp"
#include "varcomplex/random.hpp"

namespace varcomplex {

struct TruncationSpec {
  int max_jet_order = 0;
  int max_poly_degree = 0;
  /// Degree bound in the base variables.
  int base_poly_degree = 0;

  friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

enum class Operator { DH, DV, Delta };

std::string operator_name(Operator op);

/// Basis of (k,s)-forms within the truncation: monomials times canonical
/// words. Ordered by word, then monomial. Throws DegreeError when s > n.
std::vector<Form> enumerate_basis(const BundlePtr& b, const TruncationSpec& spec, std::size_t k, std::size_t s);

/// Basis of source forms m * theta^i ^ omega within the truncation.
std::vector<Form> enumerate_source_basis(const BundlePtr& b, const TruncationSpec& spec);

struct OperatorMatrix {
  Operator op = Operator::DH;
  TruncationSpec domain_spec;
  TruncationSpec codomain_spec;
  std::size_t k = 0, s = 0;
  /// Domain basis (source-form basis for delta at k = 1).
  std::vector<Form> domain;
  RowIndex rows;
  linalg::SparseMatrix matrix;
  /// Domain coordinate key -> (basis index, coefficient of the key in that element).
  std::map<CoordKey, std::pair<std::size_t, Rational>> lookup;

  /// Coordinates of a domain element as (basis index, coefficient).
  std::optional<std::pair<std::size_t, Rational>> domain_index(const CoordKey& key) const;
};

/// Truncation enlarged so that op's image fits.
TruncationSpec codomain_truncation(Operator op, const TruncationSpec& spec);

/// Matrix of op on the (k,s) truncation. For Delta, (k,s) must be (0,n) or (1,n).
/// Throws Error if an image leaves the enlarged codomain truncation.
OperatorMatrix operator_matrix(Operator op, const BundlePtr& b, const TruncationSpec& spec, std::size_t k,
                               std::size_t s, Execution mode = Execution::Parallel);

/// second o first as a matrix from first's domain to second's rows. Every
/// row of first must be a domain coordinate of second.
linalg::SparseMatrix compose(const OperatorMatrix& second, const OperatorMatrix& first);

struct BettiPosition {
  std::string label;
  std::size_t k = 0, s = 0;
  std::size_t dim_domain = 0;
  std::size_t rank = 0;
  std::size_t dim_kernel = 0;
  /// dim(im(incoming) ∩ domain space).
  std::size_t incoming_rank = 0;
  std::size_t dim_cohomology = 0;
};

struct BettiReport {
  std::string op;
  TruncationSpec spec;
  std::vector<BettiPosition> positions;
};

/// d_H row at contact degree k, positions s = 0..n.
BettiReport betti_horizontal_row(const BundlePtr& b, const TruncationSpec& spec, std::size_t k,
                                 Execution mode = Execution::Parallel);
/// d_V column at horizontal degree s, positions k = 0..max_k.
BettiReport betti_vertical_column(const BundlePtr& b, const TruncationSpec& spec, std::size_t s,
                                  std::size_t max_k, Execution mode = Execution::Parallel);
/// Variational row: d_H at s < n, Euler-Lagrange at (0,n), Helmholtz at E_1.
BettiReport betti_variational_row(const BundlePtr& b, const TruncationSpec& spec,
                                  Execution mode = Execution::Parallel);

struct ExactnessReport {
  std::size_t kernel_dim = 0;
  std::size_t in_image = 0;
  bool exact() const { return kernel_dim == in_image; }
};

/// Counts Helmholtz-kernel vectors of the delta matrix on E_1 that lie in
/// the image of the Euler-Lagrange matrix on (r, p+1, b) Lagrangians.
ExactnessReport source_exactness(const BundlePtr& b, const TruncationSpec& spec,
                                 Execution mode = Execution::Parallel);

struct IdentityResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  /// Smallest failing input, rendered as text.
  std::string counterexample;
};

struct PropertyReport {
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  RandomBounds bounds;
  std::vector<IdentityResult> identities;
  bool all_passed() const;
};

/// Runs the randomized operator-identity battery over forms drawn with
/// `bounds` (n, m <= 2). Throws Error if cases == 0.
PropertyReport property_suite(std::uint64_t seed, std::size_t cases, Execution mode = Execution::Parallel,
                              const RandomBounds& bounds = {});

/// Text of the inputs used for case `index` (for reproducibility checks).
std::string property_case_fingerprint(std::uint64_t seed, std::size_t index, const RandomBounds& bounds = {});

}  // namespace varcomplex
