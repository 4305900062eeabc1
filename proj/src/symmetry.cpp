#include "varcomplex/symmetry.hpp"

namespace varcomplex {

EvolutionaryField::EvolutionaryField(BundlePtr b, std::map<std::size_t, Expr> comps) : bundle(std::move(b)) {
  for (auto& [i, e] : comps) {
    if (i >= bundle->m()) throw CoordinateError("field component index out of range");
    if (!e.is_zero()) components.emplace(i, std::move(e));
  }
}

Expr EvolutionaryField::component(std::size_t i) const {
  auto it = components.find(i);
  return it == components.end() ? Expr(0) : it->second;
}

bool EvolutionaryField::generalized() const {
  for (const auto& [i, e] : components)
    if (jet_order(e) >= 1) return true;
  return false;
}

const Expr& Prolongation::coefficient(std::size_t fiber, const MultiIndex& mi) {
  const auto key = varkey::jet(fiber, mi);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  Expr value;
  if (mi.empty()) {
    value = u_.component(fiber);
  } else {
    const std::size_t p = mi.first_position();
    value = total_derivative(coefficient(fiber, mi.minus(p)), p);
  }
  return cache_.emplace(key, std::move(value)).first->second;
}

namespace {

std::size_t base_dim(const EvolutionaryField& u) { return u.bundle ? u.bundle->n() : 0; }

}  // namespace

Expr prolong_apply(const EvolutionaryField& u, const Expr& f) {
  Prolongation pr(u);
  const std::size_t n = base_dim(u);
  return apply_derivation(f, [&](std::uint64_t key) {
    if (varkey::kind(key) != varkey::Kind::Jet) return Expr(0);
    return pr.coefficient(varkey::slot(key), varkey::multi_index(key, n));
  });
}

Form prolong_contract(const EvolutionaryField& u, const Form& phi) {
  Prolongation pr(u);
  Form out(phi.bundle());
  const std::size_t n = phi.bundle() ? phi.spec().n() : 0;
  for (const auto& [w, c] : phi.terms()) {
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      if (w[pos].kind() == Generator::Kind::DX) continue;
      if (w[pos].kind() == Generator::Kind::DY) throw Error("prolong_contract expects the contact basis");
      const Expr& coeff = pr.coefficient(w[pos].slot(), w[pos].multi_index(n));
      if (coeff.is_zero()) continue;
      Word nw = w;
      nw.erase(nw.begin() + static_cast<std::ptrdiff_t>(pos));
      Expr term = coeff * c;
      out.add_canonical(nw, pos % 2 == 0 ? term : -term);
    }
  }
  return out;
}

Form lie_derivative(const EvolutionaryField& u, const Form& phi) {
  return prolong_contract(u, exterior_d(phi)) + exterior_d(prolong_contract(u, phi));
}

Form noether_current(const EvolutionaryField& u, const Form& L, PeelOrder order) {
  const auto split = first_variational_split(L, order);
  Form j = -prolong_contract(u, split.boundary);
  const std::size_t n = L.spec().n();
  return n == 0 ? j : project_horizontal(project_contact(j, 0), n - 1);
}

ConservationReport conservation_check(const EvolutionaryField& u, const Form& L) {
  ConservationReport r;
  const auto split = first_variational_split(L);
  const auto& b = L.bundle();
  r.euler_lagrange = split.source;
  r.lie_derivative = lie_derivative(u, L);
  r.current = -prolong_contract(u, split.boundary);

  const Form contracted_source = prolong_contract(u, split.source.to_form());  // u^i E_i omega
  const Form rhs = contracted_source + d_H(r.current);
  r.identity_holds = r.lie_derivative == rhs;
  r.is_symmetry = r.lie_derivative.is_zero();

  Expr div;
  for (const auto& [i, ei] : split.source.components) div += u.component(i) * ei;
  div += lagrangian_density(d_H(r.current) + Form(b));
  r.on_shell_divergence = div;
  return r;
}

}  // namespace varcomplex
