#pragma once

// Evolutionary vector fields u = u^i d/dy^i, their prolongation
// J^oo u = d_Lambda(u^i) d/dy^i_Lambda, Lie derivatives on forms, and
// Noether currents J_u = -(J^oo u -| phi) from the first variational formula.

#include <map>

#include "varcomplex/varops.hpp"

namespace varcomplex {

struct EvolutionaryField {
  BundlePtr bundle;
  std::map<std::size_t, Expr> components;

  EvolutionaryField() = default;
  explicit EvolutionaryField(BundlePtr b) : bundle(std::move(b)) {}
  EvolutionaryField(BundlePtr b, std::map<std::size_t, Expr> comps);

  Expr component(std::size_t i) const;
  /// True iff some component depends on jet variables of order >= 1.
  bool generalized() const;
  bool is_zero() const { return components.empty(); }
};

/// Caches d_Lambda u^i for one field.
class Prolongation {
 public:
  explicit Prolongation(const EvolutionaryField& u) : u_(u) {}
  const Expr& coefficient(std::size_t fiber, const MultiIndex& mi);
  const EvolutionaryField& field() const { return u_; }

 private:
  const EvolutionaryField& u_;
  std::map<std::uint64_t, Expr> cache_;
};

/// J^oo u applied to a function.
Expr prolong_apply(const EvolutionaryField& u, const Expr& f);

/// Interior product J^oo u -| phi (theta^i_Lambda -> d_Lambda u^i, dx -> 0).
Form prolong_contract(const EvolutionaryField& u, const Form& phi);

/// Cartan formula J^oo u -| d phi + d(J^oo u -| phi).
Form lie_derivative(const EvolutionaryField& u, const Form& phi);

/// J_u = -(J^oo u -| phi) with phi from first_variational_split(L).
Form noether_current(const EvolutionaryField& u, const Form& L, PeelOrder order = PeelOrder::SmallestFirst);

struct ConservationReport {
  bool is_symmetry = false;
  /// L_u L = u -| delta L - d_H(J^oo u -| phi), checked by expansion.
  bool identity_holds = false;
  /// Density of d_H J_u + u^i E_i omega; zero exactly when u is a symmetry.
  Expr on_shell_divergence;
  Form current;
  SourceForm euler_lagrange;
  Form lie_derivative;
};

ConservationReport conservation_check(const EvolutionaryField& u, const Form& L);

}  // namespace varcomplex
