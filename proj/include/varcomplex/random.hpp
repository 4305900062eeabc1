#pragma once

// Reproducible pseudo-random differential polynomials and forms.

#include <cstdint>
#include <random>

#include "varcomplex/forms.hpp"

namespace varcomplex {

struct RandomBounds {
  unsigned max_jet_order = 3;
  unsigned max_degree = 3;
  unsigned max_terms = 3;
  /// Allow base variables x^lambda in monomials.
  bool base_vars = true;
};

class RandomForms {
 public:
  explicit RandomForms(std::uint64_t seed) : rng_(seed) {}
  /// Stream for case `index` of a run seeded with `seed`, independent of other cases.
  static RandomForms for_case(std::uint64_t seed, std::uint64_t index);

  std::size_t uniform(std::size_t lo, std::size_t hi);  // inclusive
  Rational coefficient();
  MultiIndex multi_index(std::size_t dim, unsigned max_order);

  BundlePtr bundle(std::size_t max_n, std::size_t max_m);
  Expr polynomial(const BundleSpec& b, const RandomBounds& bounds);
  /// Random (k,s)-form in the contact basis.
  Form form(const BundlePtr& b, std::size_t k, std::size_t s, const RandomBounds& bounds);
  /// Random form of degree `degree` in the dy basis (generators dx, dy^i_Lambda).
  Form dy_form(const BundlePtr& b, std::size_t degree, const RandomBounds& bounds);

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace varcomplex
