#pragma once

// Exact symbolic scalars on jet space.
//
// An Expr is a polynomial with rational coefficients over "atoms": base
// coordinates x^lambda, jet coordinates y^i_Lambda, one formal scaling
// parameter, and applications sin/cos/exp of canonical sub-expressions.
// Values are always stored in canonical (fully expanded, sorted) form, so
// two differential polynomials are equal iff their representations match.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace varcomplex {

using Rational = mpq_class;
using Integer = mpz_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index out of range for the active bundle, or names that do not resolve.
class CoordinateError : public Error {
 public:
  using Error::Error;
};

/// Operation outside the exactly-decidable polynomial fragment.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kMaxBaseDim = 8;
inline constexpr unsigned kMaxIndexCount = 31;

struct BundleSpec {
  std::vector<std::string> base;
  std::vector<std::string> fiber;

  BundleSpec() = default;
  BundleSpec(std::vector<std::string> base_vars, std::vector<std::string> fiber_vars);

  std::size_t n() const { return base.size(); }
  std::size_t m() const { return fiber.size(); }

  /// Position of a base / fiber name, or -1.
  int base_index(std::string_view name) const;
  int fiber_index(std::string_view name) const;

  friend bool operator==(const BundleSpec&, const BundleSpec&) = default;
};

using BundlePtr = std::shared_ptr<const BundleSpec>;

BundlePtr make_bundle(std::vector<std::string> base_vars, std::vector<std::string> fiber_vars);

/// Symmetric multi-index: a multiset of base-coordinate positions.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim);
  MultiIndex(std::size_t dim, std::initializer_list<std::size_t> positions);

  std::size_t dim() const { return dim_; }
  unsigned count(std::size_t pos) const { return counts_.at(pos); }
  unsigned order() const;
  bool empty() const { return order() == 0; }

  /// lambda + Lambda. Throws CoordinateError when pos >= dim.
  MultiIndex plus(std::size_t pos) const;
  /// Lambda - lambda; requires count(pos) > 0.
  MultiIndex minus(std::size_t pos) const;

  /// Smallest position with nonzero count, or dim() if empty.
  std::size_t first_position() const;

  /// 40-bit packing used inside variable and generator keys.
  std::uint64_t packed() const;
  static MultiIndex unpack(std::size_t dim, std::uint64_t bits);

  /// Subscript string made of base names, in base declaration order.
  std::string subscript(const BundleSpec& b) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.counts_ == b.counts_;
  }
  /// Graded-lexicographic: order first, then counts with position 0 most significant.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

 private:
  std::uint8_t dim_ = 0;
  std::array<std::uint8_t, kMaxBaseDim> counts_{};
};

/// Fiber coordinate y^i with derivative multi-index Lambda.
struct JetVar {
  std::size_t fiber_index = 0;
  MultiIndex index;
};

// Packed 64-bit variable keys. Layout: kind (4 bits) | slot (8) | order (12) | counts (40).
// Ordering on keys is the canonical variable order: base vars by position,
// then jet vars by fiber index and graded-lex multi-index, then the formal
// parameter, then function atoms.
namespace varkey {
enum class Kind : std::uint8_t { Base = 0, Jet = 1, Param = 2, Func = 3 };

std::uint64_t base(std::size_t pos);
std::uint64_t jet(std::size_t fiber, const MultiIndex& mi);
std::uint64_t param();
std::uint64_t func(int fn_kind);

Kind kind(std::uint64_t key);
std::size_t slot(std::uint64_t key);
unsigned order(std::uint64_t key);
MultiIndex multi_index(std::uint64_t key, std::size_t dim);
/// Jet key with one more derivative in direction pos.
std::uint64_t jet_plus(std::uint64_t key, std::size_t pos);
}  // namespace varkey

enum class FuncKind : int { Sin = 0, Cos = 1, Exp = 2 };

class Expr;
struct FuncNode;

struct Factor {
  std::uint64_t key = 0;
  std::shared_ptr<const FuncNode> fn;  // set iff key is a Func key
  unsigned exp = 1;
};

bool factor_less(const Factor& a, const Factor& b);
bool factor_equal(const Factor& a, const Factor& b);

/// Sorted product of atom powers; the empty monomial is 1.
struct Monomial {
  std::vector<Factor> factors;

  unsigned degree() const;
  friend bool operator<(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b);
};

Monomial monomial_mul(const Monomial& a, const Monomial& b);

class Expr {
 public:
  using Terms = std::map<Monomial, Rational>;

  Expr() = default;
  Expr(long v);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& v);  // NOLINT(google-explicit-constructor)

  static Expr base(std::size_t pos);
  static Expr jet(std::size_t fiber, const MultiIndex& mi);
  static Expr jet(const JetVar& v) { return jet(v.fiber_index, v.index); }
  static Expr variable(std::uint64_t key);
  /// Formal scaling parameter, treated as a constant by every derivative.
  static Expr param();
  static Expr apply(FuncKind kind, const Expr& arg);
  static Expr from_terms(Terms terms);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Rational value of a constant expression.
  Rational constant_value() const;
  /// No sin/cos/exp atoms anywhere.
  bool is_polynomial() const;
  std::size_t size() const { return terms_.size(); }

  Expr pow(unsigned e) const;

  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }
  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);

  void add_term(const Monomial& m, const Rational& c);

 private:
  Terms terms_;
};

struct FuncNode {
  FuncKind kind;
  Expr arg;
};

enum class ZeroTest { Zero, NonZero, Unknown };

/// Exact in the polynomial fragment; sound but incomplete elsewhere.
ZeroTest zero_test(const Expr& f);

/// Returns f itself: Expr values are canonical on construction.
Expr normalize(const Expr& f);

/// Applies the derivation D determined by its values on variables
/// (function atoms are handled by the chain rule).
Expr apply_derivation(const Expr& f, const std::function<Expr(std::uint64_t)>& image);

Expr partial(const Expr& f, const JetVar& v);
Expr partial_base(const Expr& f, std::size_t pos);
Expr partial_key(const Expr& f, std::uint64_t key);

/// d_lambda = partial_lambda + sum y^i_{lambda+Lambda} partial_i^Lambda over the support of f.
Expr total_derivative(const Expr& f, std::size_t pos);
/// d_Lambda; the result does not depend on the order of application.
Expr total_derivative(const Expr& f, const MultiIndex& mi);

/// Max |Lambda| over jet variables; -1 for pure base functions.
int jet_order(const Expr& f);

/// Every variable key occurring in f, including inside function arguments.
std::set<std::uint64_t> variables(const Expr& f);

/// Replace every jet variable y^i_Lambda by t * y^i_Lambda.
Expr substitute_scaling(const Expr& f, const Rational& t);
/// Same with t the formal parameter returned by Expr::param().
Expr substitute_scaling(const Expr& f);
/// Integral over the formal parameter on [0,1]; the parameter must occur polynomially.
Expr integrate_param_unit(const Expr& f);
/// Replace variables by expressions (keys absent from the map are kept).
Expr substitute(const Expr& f, const std::map<std::uint64_t, Expr>& values);

/// Degree in jet/fiber variables, maximised over terms. Throws for non-polynomial input.
unsigned jet_degree(const Expr& f);
/// Total degree in base and jet variables.
unsigned total_degree(const Expr& f);

std::string to_string(const Expr& f, const BundleSpec& b);
std::string to_latex(const Expr& f, const BundleSpec& b);
std::string variable_name(std::uint64_t key, const BundleSpec& b);

}  // namespace varcomplex
