#include "varcomplex/inverse.hpp"

#include <set>

#include "varcomplex/basis.hpp"
#include "varcomplex/varops.hpp"

namespace varcomplex {

HelmholtzResult helmholtz_check(const SourceForm& e) {
  HelmholtzResult r;
  r.certificate = delta(e);
  if (r.certificate.is_zero()) {
    r.verdict = ZeroTest::Zero;
  } else {
    r.verdict = ZeroTest::NonZero;
    for (const auto& [w, c] : r.certificate.terms())
      if (!c.is_polynomial()) r.verdict = ZeroTest::Unknown;
  }
  r.passes = r.verdict == ZeroTest::Zero;
  if (!r.certificate.bundle()) r.certificate = Form(e.bundle);
  return r;
}

bool is_variationally_trivial(const Form& L) { return euler_lagrange(L).is_zero(); }

namespace {

int max_theta_order(const Form& phi) {
  int ord = -1;
  for (const auto& [w, c] : phi.terms())
    for (const auto& g : w)
      if (g.kind() == Generator::Kind::Theta) ord = std::max(ord, static_cast<int>(g.order()));
  return ord;
}

/// Grading preserved by d_H up to a fixed shift: per-fiber degree (jet
/// factors and theta generators) and derivative weight
/// (sum of orders - base degree + number of dx). d_H raises weight by 2.
std::vector<int> grade(const Word& w, const Monomial& m, std::size_t fibers) {
  std::vector<int> g(fibers + 1, 0);
  int& weight = g.back();
  for (const auto& f : m.factors) {
    if (varkey::kind(f.key) == varkey::Kind::Jet) {
      g[varkey::slot(f.key)] += static_cast<int>(f.exp);
      weight += static_cast<int>(varkey::order(f.key) * f.exp);
    } else if (varkey::kind(f.key) == varkey::Kind::Base) {
      weight -= static_cast<int>(f.exp);
    }
  }
  for (const auto& gen : w) {
    if (gen.kind() == Generator::Kind::DX) {
      weight += 1;
    } else {
      g[gen.slot()] += 1;
      weight += static_cast<int>(gen.order());
    }
  }
  return g;
}

}  // namespace

AntiderivativeConfig default_antiderivative_config(const Form& sigma) {
  int order = -1, degree = 0;
  for (const auto& [w, c] : sigma.terms()) {
    order = std::max(order, jet_order(c));
    degree = std::max(degree, static_cast<int>(total_degree(c)));
  }
  order = std::max(order, max_theta_order(sigma));
  return AntiderivativeConfig{std::max(order, 0) + 1, degree + 1};
}

AntiderivativeResult horizontal_antiderivative(const Form& sigma, std::optional<AntiderivativeConfig> cfg_in,
                                               Execution mode) {
  const auto& b = sigma.bundle();
  if (!b) throw Error("antiderivative of a form without bundle");
  Form closedness = d_H(sigma);
  if (!closedness.is_zero()) throw NotClosedError("form is not d_H-closed", closedness);
  const auto degrees = bidegree(sigma);
  if (degrees.size() > 1) throw DegreeError("antiderivative expects a homogeneous form");
  const AntiderivativeConfig cfg = cfg_in ? *cfg_in : default_antiderivative_config(sigma);
  if (cfg.max_jet_order < 0 || cfg.max_poly_degree < 0) throw Error("antiderivative bounds must be >= 0");
  if (sigma.is_zero()) return Form(b);
  const auto [k, s] = *degrees.begin();
  if (s == 0) throw DegreeError("antiderivative needs horizontal degree >= 1");

  // Fibers that occur in sigma.
  std::set<std::size_t> fiber_set;
  for (const auto& [w, c] : sigma.terms()) {
    for (auto key : variables(c))
      if (varkey::kind(key) == varkey::Kind::Jet) fiber_set.insert(varkey::slot(key));
    for (const auto& g : w)
      if (g.kind() == Generator::Kind::Theta) fiber_set.insert(g.slot());
  }
  const std::vector<std::size_t> fibers(fiber_set.begin(), fiber_set.end());

  const Coordinates target = coordinates(sigma);
  std::set<std::vector<int>> target_grades;
  for (const auto& [key, q] : target) {
    auto g = grade(key.word, key.mono, b->m());
    g.back() -= 2;
    target_grades.insert(std::move(g));
  }

  std::vector<std::uint64_t> base_vars;
  for (std::size_t p = 0; p < b->n(); ++p) base_vars.push_back(varkey::base(p));
  const auto jet_vars = jet_variable_keys(*b, fibers, static_cast<unsigned>(cfg.max_jet_order));
  const auto deg = static_cast<unsigned>(cfg.max_poly_degree);
  const auto monos = enumerate_monomials(base_vars, deg, jet_vars, deg, cfg.max_poly_degree);
  std::vector<Generator> thetas;
  for (auto i : fibers)
    for (const auto& mi : multi_indices_up_to(b->n(), static_cast<unsigned>(cfg.max_jet_order)))
      thetas.push_back(Generator::theta(i, mi));
  const auto words = enumerate_words(b->n(), thetas, k, s - 1);

  std::vector<CoordKey> basis;
  for (const auto& w : words)
    for (const auto& m : monos)
      if (target_grades.count(grade(w, m, b->m()))) basis.push_back(CoordKey{w, m});

  auto images = map_indices<Coordinates>(
      basis.size(),
      [&](std::size_t j) {
        return coordinates(d_H(Form(b, basis[j].word, Expr::from_terms({{basis[j].mono, Rational(1)}}))));
      },
      mode);

  RowIndex rows;
  for (const auto& img : images) rows.collect(img);
  rows.collect(target);
  rows.freeze();

  linalg::Echelon ech;
  for (const auto& img : images) ech.insert(rows.vector(img));
  linalg::SparseVec residual;
  auto sol = ech.solve(rows.vector(target), &residual);
  if (!sol) {
    Coordinates res;
    for (const auto& [i, q] : residual) res.emplace(rows.key(i), q);
    return NotExactInTruncation{from_coordinates(b, res), cfg};
  }
  Coordinates xi_coords;
  for (const auto& [j, q] : *sol) xi_coords.emplace(basis[j], q);
  Form xi = from_coordinates(b, xi_coords);
  if (!(d_H(xi) == sigma)) throw Error("internal: antiderivative failed verification");
  return xi;
}

Form reconstruct_lagrangian(const SourceForm& e) {
  const auto check = helmholtz_check(e);
  if (check.verdict == ZeroTest::Unknown)
    throw UnsupportedError("Helmholtz verdict undecided for non-polynomial source form");
  if (!check.passes) throw HelmholtzError("source form fails the Helmholtz condition", check.certificate);
  Expr density;
  for (const auto& [i, ei] : e.components)
    density += Expr::jet(i, MultiIndex(e.bundle->n())) * integrate_param_unit(substitute_scaling(ei));
  Form L = lagrangian_form(e.bundle, density);
  if (!(euler_lagrange(L) == e)) throw Error("internal: reconstructed Lagrangian does not reproduce E");
  return L;
}

TrivialityResult triviality_witness(const Form& L, const std::optional<Form>& phi0,
                                    std::optional<AntiderivativeConfig> cfg) {
  if (!is_variationally_trivial(L)) throw Error("Lagrangian is not variationally trivial");
  Form closed_part(L.bundle());
  if (phi0) {
    Form contact = to_contact_basis(*phi0);
    for (const auto& [w, c] : contact.terms())
      if (w.size() != L.spec().n()) throw DegreeError("closed form must have degree n");
    Form dphi = exterior_d(contact);
    if (!dphi.is_zero()) throw NotClosedError("supplied form is not closed", dphi);
    closed_part = project_contact(contact, 0);
  }
  Form sigma = L - closed_part;
  auto res = horizontal_antiderivative(sigma, cfg);
  if (auto* fail = std::get_if<NotExactInTruncation>(&res)) return *fail;
  return TrivialityWitness{std::get<Form>(res), closed_part};
}

}  // namespace varcomplex
