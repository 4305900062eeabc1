#pragma once

// Exterior forms on jet space in the contact basis {dx^lambda, theta^i_Lambda}.
//
// Generators are totally ordered: every dx (by base position) precedes every
// theta (by fiber index, then graded-lex multi-index). A Form is a map from
// strictly increasing words to nonzero Expr coefficients. dy^i_Lambda
// generators exist only at the parser boundary and are eliminated by
// to_contact_basis.

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "varcomplex/jetcore.hpp"

namespace varcomplex {

class BundleMismatch : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

class Generator {
 public:
  enum class Kind : std::uint8_t { DX = 0, Theta = 1, DY = 2 };

  static Generator dx(std::size_t pos);
  static Generator theta(std::size_t fiber, const MultiIndex& mi);
  static Generator dy(std::size_t fiber, const MultiIndex& mi);

  Kind kind() const;
  /// Base position for DX, fiber index otherwise.
  std::size_t slot() const;
  MultiIndex multi_index(std::size_t dim) const;
  unsigned order() const;
  /// Same kind and fiber with one more derivative in direction pos; DX is rejected.
  Generator plus(std::size_t pos) const;
  /// Jet variable key y^i_Lambda matching a Theta/DY generator.
  std::uint64_t jet_key() const;

  std::uint64_t key() const { return key_; }
  friend auto operator<=>(const Generator&, const Generator&) = default;

 private:
  explicit Generator(std::uint64_t k) : key_(k) {}
  std::uint64_t key_ = 0;
};

using Word = std::vector<Generator>;

class Form {
 public:
  using Terms = std::map<Word, Expr>;

  Form() = default;
  explicit Form(BundlePtr bundle) : bundle_(std::move(bundle)) {}
  /// Scalar (0,0)-form.
  Form(BundlePtr bundle, const Expr& f);
  Form(BundlePtr bundle, Word word, const Expr& coeff);

  static Form generator(BundlePtr bundle, Generator g);
  static Form dx(BundlePtr bundle, std::size_t pos) { return generator(std::move(bundle), Generator::dx(pos)); }
  static Form theta(BundlePtr bundle, std::size_t fiber, const MultiIndex& mi) {
    return generator(std::move(bundle), Generator::theta(fiber, mi));
  }

  const BundlePtr& bundle() const { return bundle_; }
  const BundleSpec& spec() const { return *bundle_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool in_contact_basis() const;

  /// Adds coeff * (generators in the given order), re-sorting with sign.
  void add(const Word& generators, const Expr& coeff);
  void add_canonical(const Word& word, const Expr& coeff);

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(const Form& a);
  friend Form operator*(const Expr& f, const Form& a);

  /// Coefficient of a canonical word (zero if absent).
  Expr coefficient(const Word& word) const;

  friend bool operator==(const Form& a, const Form& b);

 private:
  void require_same_bundle(const Form& o) const;

  BundlePtr bundle_;
  Terms terms_;
};

/// Sorts a generator list; returns 0 on a repeated generator, else the permutation sign.
int sort_word(Word& w);

std::size_t contact_degree(const Word& w);
std::size_t horizontal_degree(const Word& w);

Form wedge(const Form& a, const Form& b);

/// Set of (k, s) bidegrees present.
std::set<std::pair<std::size_t, std::size_t>> bidegree(const Form& phi);
bool is_homogeneous(const Form& phi, std::size_t k, std::size_t s);
/// h_k: keep terms with k contact generators.
Form project_contact(const Form& phi, std::size_t k);
/// h^s: keep terms with s horizontal generators. Throws DegreeError when s > n.
Form project_horizontal(const Form& phi, std::size_t s);

/// Substitutes dy^i_Lambda = theta^i_Lambda + y^i_{lambda+Lambda} dx^lambda.
Form to_contact_basis(const Form& phi);
/// Substitutes theta^i_Lambda = dy^i_Lambda - y^i_{lambda+Lambda} dx^lambda.
Form from_contact_basis(const Form& phi);
/// h_0 of a form given in either basis.
Form horizontalize(const Form& phi);

/// Exterior derivative computed in the dy basis (every generator closed).
Form exterior_d_dy_basis(const Form& phi);

/// Interior product with the dual of theta^i_Lambda (graded, degree -1).
Form contract_theta(const Form& phi, std::size_t fiber, const MultiIndex& mi);
/// Interior product with the coordinate field d/dx^lambda.
Form contract_dx(const Form& phi, std::size_t pos);

/// Lie derivative along the total derivative d_lambda: acts on coefficients
/// and sends theta^i_Lambda to theta^i_{lambda+Lambda}, dx to 0.
Form total_derivative(const Form& phi, std::size_t pos);
Form total_derivative(const Form& phi, const MultiIndex& mi);

/// omega = dx^1 ^ ... ^ dx^n.
Form volume(const BundlePtr& b);
/// d/dx^lambda contracted into omega.
Form volume_contracted(const BundlePtr& b, std::size_t pos);

/// Applies f to every coefficient.
template <typename F>
Form map_coefficients(const Form& phi, F&& f) {
  Form out(phi.bundle());
  for (const auto& [w, c] : phi.terms()) out.add_canonical(w, f(c));
  return out;
}

/// Sum E_i theta^i ^ omega.
struct SourceForm {
  BundlePtr bundle;
  std::map<std::size_t, Expr> components;

  SourceForm() = default;
  explicit SourceForm(BundlePtr b) : bundle(std::move(b)) {}

  Expr component(std::size_t i) const;
  void set(std::size_t i, const Expr& e);
  bool is_zero() const { return components.empty(); }

  Form to_form() const;
  /// Throws DegreeError when phi has terms outside theta^i ^ omega.
  static SourceForm from_form(const Form& phi);

  friend bool operator==(const SourceForm& a, const SourceForm& b) {
    return a.components == b.components;
  }
};

std::string generator_text(const Generator& g, const BundleSpec& b);
std::string generator_latex(const Generator& g, const BundleSpec& b);
std::string to_string(const Form& phi);
std::string to_latex(const Form& phi);
std::string to_string(const SourceForm& e);
std::string to_latex(const SourceForm& e);

}  // namespace varcomplex
