#include "varcomplex/varops.hpp"

#include <algorithm>
#include <set>

namespace varcomplex {

namespace {

void require_contact(const Form& phi) {
  if (!phi.in_contact_basis()) throw Error("operator expects a form in the contact basis");
}

}  // namespace

Form d_H(const Form& phi) {
  require_contact(phi);
  Form out(phi.bundle());
  if (phi.is_zero()) return out;
  for (std::size_t p = 0; p < phi.spec().n(); ++p)
    out += wedge(Form::dx(phi.bundle(), p), total_derivative(phi, p));
  return out;
}

Form d_V(const Form& phi) {
  require_contact(phi);
  const auto& b = phi.bundle();
  Form out(b);
  for (const auto& [w, c] : phi.terms()) {
    for (auto key : variables(c)) {
      if (varkey::kind(key) != varkey::Kind::Jet) continue;
      Word nw{Generator::theta(varkey::slot(key), varkey::multi_index(key, b->n()))};
      nw.insert(nw.end(), w.begin(), w.end());
      out.add(nw, partial_key(c, key));
    }
  }
  return out;
}

Form exterior_d(const Form& phi) { return d_H(phi) + d_V(phi); }

Form tau_bar(const Form& phi) {
  require_contact(phi);
  const auto& b = phi.bundle();
  Form out(b);
  std::set<Generator> present;
  for (const auto& [w, c] : phi.terms())
    for (const auto& g : w)
      if (g.kind() == Generator::Kind::Theta) present.insert(g);
  for (const auto& g : present) {
    const MultiIndex mi = g.multi_index(b->n());
    Form inner = total_derivative(contract_theta(phi, g.slot(), mi), mi);
    Form piece = wedge(Form::theta(b, g.slot(), MultiIndex(b->n())), inner);
    if (mi.order() % 2 == 1)
      out -= piece;
    else
      out += piece;
  }
  return out;
}

Form tau(const Form& phi) {
  require_contact(phi);
  Form out(phi.bundle());
  if (phi.is_zero()) return out;
  Form top = project_horizontal(phi, phi.spec().n());
  std::set<std::size_t> ks;
  for (const auto& [w, c] : top.terms()) ks.insert(contact_degree(w));
  for (auto k : ks) {
    if (k == 0) continue;
    Form piece = tau_bar(project_contact(top, k));
    out += Expr(Rational(1, static_cast<long>(k))) * piece;
  }
  return out;
}

Form delta(const Form& phi) {
  require_contact(phi);
  if (phi.bundle()) {
    for (const auto& [w, c] : phi.terms())
      if (horizontal_degree(w) != phi.spec().n())
        throw DegreeError("delta is defined on forms of horizontal degree n");
  }
  return tau(exterior_d(phi));
}

Form delta(const SourceForm& e) { return delta(e.to_form()); }

Expr lagrangian_density(const Form& L) {
  if (!L.bundle()) return Expr(0);
  Word omega;
  for (std::size_t p = 0; p < L.spec().n(); ++p) omega.push_back(Generator::dx(p));
  for (const auto& [w, c] : L.terms())
    if (w != omega) throw DegreeError("expected a Lagrangian of bidegree (0,n)");
  return L.coefficient(omega);
}

Form lagrangian_form(const BundlePtr& b, const Expr& density) { return density * volume(b); }

SourceForm euler_lagrange(const Form& L) {
  const Expr density = lagrangian_density(L);
  const auto& b = L.bundle();
  SourceForm out(b);
  std::map<std::size_t, Expr> acc;
  for (auto key : variables(density)) {
    if (varkey::kind(key) != varkey::Kind::Jet) continue;
    const MultiIndex mi = varkey::multi_index(key, b->n());
    Expr term = total_derivative(partial_key(density, key), mi);
    if (mi.order() % 2 == 1) term = -term;
    acc[varkey::slot(key)] += term;
  }
  for (auto& [i, e] : acc) out.set(i, e);
  return out;
}

VariationalSplit integrate_by_parts(const Form& sigma, PeelOrder order) {
  require_contact(sigma);
  const auto& b = sigma.bundle();
  const std::size_t n = b->n();
  if (!is_homogeneous(sigma, 1, n)) throw DegreeError("integration by parts expects a (1,n)-form");

  Word omega;
  for (std::size_t p = 0; p < n; ++p) omega.push_back(Generator::dx(p));
  const Form vol = volume(b);
  const bool odd = n % 2 == 1;  // omega ^ theta = (-1)^n theta ^ omega

  Form rest = sigma;
  Form boundary(b);
  for (;;) {
    // Highest-order contact generator still present.
    const Generator* top = nullptr;
    for (const auto& [w, c] : rest.terms()) {
      const Generator& g = w.back();
      if (!top || g.order() > top->order() || (g.order() == top->order() && top->key() < g.key())) top = &g;
    }
    if (!top || top->order() == 0) break;
    const Generator g = *top;
    const MultiIndex sigma_mi = g.multi_index(n);
    std::size_t lam = sigma_mi.first_position();
    if (order == PeelOrder::LargestFirst)
      for (std::size_t p = n; p-- > 0;)
        if (sigma_mi.count(p) > 0) {
          lam = p;
          break;
        }
    const MultiIndex lower = sigma_mi.minus(lam);

    Word word = omega;
    word.push_back(g);
    const Expr c = rest.coefficient(word);
    const Expr f = odd ? -c : c;  // term = f theta_Sigma ^ omega
    rest -= Form(b, word, c);

    // f theta_{lam+Lambda} ^ omega = d_H(-f theta_Lambda ^ omega_lam) - d_lam(f) theta_Lambda ^ omega
    const Form theta_lower = Form::theta(b, g.slot(), lower);
    boundary += wedge(-f * theta_lower, volume_contracted(b, lam));
    rest += wedge(-total_derivative(f, lam) * theta_lower, vol);
  }
  return VariationalSplit{SourceForm::from_form(rest), boundary};
}

VariationalSplit first_variational_split(const Form& L, PeelOrder order) {
  lagrangian_density(L);  // bidegree check
  const Form dL = exterior_d(L);
  VariationalSplit split = integrate_by_parts(dL, order);
  if (!(dL == split.source.to_form() + d_H(split.boundary)))
    throw Error("internal: first variational formula failed to balance");
  return split;
}

}  // namespace varcomplex
