#pragma once

// Monomial/word enumeration and coordinate maps for polynomial forms.
// Shared by the truncated linear solves in inverse and cohomlab.

#include <map>
#include <vector>

#include "varcomplex/forms.hpp"
#include "varcomplex/linalg.hpp"

namespace varcomplex {

/// Coordinate of a polynomial form: (word, monomial).
struct CoordKey {
  Word word;
  Monomial mono;
  friend bool operator<(const CoordKey& a, const CoordKey& b) {
    if (a.word != b.word) return a.word < b.word;
    return a.mono < b.mono;
  }
};

using Coordinates = std::map<CoordKey, Rational>;

/// Throws UnsupportedError for non-polynomial coefficients.
Coordinates coordinates(const Form& phi);
Form from_coordinates(const BundlePtr& b, const Coordinates& c);

/// All multi-indices of order <= max_order in dim variables, graded-lex ascending.
std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, unsigned max_order);

/// Keys y^i_Lambda for the given fibers and |Lambda| <= max_order.
std::vector<std::uint64_t> jet_variable_keys(const BundleSpec& b, const std::vector<std::size_t>& fibers,
                                             unsigned max_order);

/// Products of base variables (degree <= base_degree) and jet variables
/// (degree <= jet_degree). When total_degree >= 0, also bounds the sum.
std::vector<Monomial> enumerate_monomials(const std::vector<std::uint64_t>& base_vars, unsigned base_degree,
                                          const std::vector<std::uint64_t>& jet_vars, unsigned jet_degree,
                                          int total_degree = -1);

/// Canonical words with s dx generators and k generators from thetas.
std::vector<Word> enumerate_words(std::size_t n, const std::vector<Generator>& thetas, std::size_t k,
                                  std::size_t s);

/// Assigns row indices to coordinate keys in sorted order.
class RowIndex {
 public:
  void collect(const Coordinates& c);
  void freeze();
  std::size_t size() const { return keys_.size(); }
  linalg::SparseVec vector(const Coordinates& c) const;
  const CoordKey& key(linalg::Index i) const { return keys_.at(i); }
  bool contains(const CoordKey& k) const { return index_.count(k) > 0; }

 private:
  std::map<CoordKey, linalg::Index> index_;
  std::vector<CoordKey> keys_;
};

}  // namespace varcomplex
