#include "varcomplex/cohomlab.hpp"

#include <algorithm>
#include <functional>

#include "varcomplex/random.hpp"
#include "varcomplex/symmetry.hpp"

namespace varcomplex {

std::string operator_name(Operator op) {
  switch (op) {
    case Operator::DH: return "dH";
    case Operator::DV: return "dV";
    case Operator::Delta: return "delta";
  }
  return "?";
}

namespace {

std::vector<std::uint64_t> base_keys(const BundleSpec& b) {
  std::vector<std::uint64_t> out;
  for (std::size_t p = 0; p < b.n(); ++p) out.push_back(varkey::base(p));
  return out;
}

std::vector<std::size_t> all_fibers(const BundleSpec& b) {
  std::vector<std::size_t> out(b.m());
  for (std::size_t i = 0; i < b.m(); ++i) out[i] = i;
  return out;
}

/// Jet variables and theta generators of order <= r (none when r < 0).
std::vector<std::uint64_t> truncated_jets(const BundleSpec& b, int r) {
  if (r < 0) return {};
  return jet_variable_keys(b, all_fibers(b), static_cast<unsigned>(r));
}

std::vector<Generator> truncated_thetas(const BundleSpec& b, int r) {
  std::vector<Generator> out;
  if (r < 0) return out;
  for (std::size_t i = 0; i < b.m(); ++i)
    for (const auto& mi : multi_indices_up_to(b.n(), static_cast<unsigned>(r))) out.push_back(Generator::theta(i, mi));
  return out;
}

std::vector<Monomial> truncated_monomials(const BundleSpec& b, const TruncationSpec& spec) {
  return enumerate_monomials(base_keys(b), static_cast<unsigned>(std::max(spec.base_poly_degree, 0)),
                             truncated_jets(b, spec.max_jet_order),
                             static_cast<unsigned>(std::max(spec.max_poly_degree, 0)));
}

bool fits(const CoordKey& key, const TruncationSpec& spec) {
  int base_deg = 0, jet_deg = 0;
  for (const auto& f : key.mono.factors) {
    if (f.fn) return false;
    if (varkey::kind(f.key) == varkey::Kind::Base) {
      base_deg += static_cast<int>(f.exp);
    } else if (varkey::kind(f.key) == varkey::Kind::Jet) {
      jet_deg += static_cast<int>(f.exp);
      if (static_cast<int>(varkey::order(f.key)) > spec.max_jet_order) return false;
    }
  }
  for (const auto& g : key.word)
    if (g.kind() == Generator::Kind::Theta && static_cast<int>(g.order()) > spec.max_jet_order) return false;
  return base_deg <= spec.base_poly_degree && jet_deg <= spec.max_poly_degree;
}

}  // namespace

std::vector<Form> enumerate_basis(const BundlePtr& b, const TruncationSpec& spec, std::size_t k, std::size_t s) {
  if (s > b->n()) throw DegreeError("horizontal degree " + std::to_string(s) + " exceeds base dimension");
  const auto monos = truncated_monomials(*b, spec);
  const auto words = enumerate_words(b->n(), truncated_thetas(*b, spec.max_jet_order), k, s);
  std::vector<Form> out;
  out.reserve(words.size() * monos.size());
  for (const auto& w : words)
    for (const auto& m : monos) out.emplace_back(b, w, Expr::from_terms({{m, Rational(1)}}));
  return out;
}

std::vector<Form> enumerate_source_basis(const BundlePtr& b, const TruncationSpec& spec) {
  const auto monos = truncated_monomials(*b, spec);
  std::vector<Form> out;
  for (std::size_t i = 0; i < b->m(); ++i)
    for (const auto& m : monos) {
      SourceForm e(b);
      e.set(i, Expr::from_terms({{m, Rational(1)}}));
      out.push_back(e.to_form());
    }
  return out;
}

TruncationSpec codomain_truncation(Operator op, const TruncationSpec& spec) {
  TruncationSpec out = spec;
  switch (op) {
    case Operator::DH: out.max_jet_order = spec.max_jet_order + 1; break;
    case Operator::DV: break;
    case Operator::Delta: out.max_jet_order = 2 * std::max(spec.max_jet_order, 0); break;
  }
  return out;
}

std::optional<std::pair<std::size_t, Rational>> OperatorMatrix::domain_index(const CoordKey& key) const {
  auto it = lookup.find(key);
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

OperatorMatrix operator_matrix(Operator op, const BundlePtr& b, const TruncationSpec& spec, std::size_t k,
                               std::size_t s, Execution mode) {
  OperatorMatrix out;
  out.op = op;
  out.domain_spec = spec;
  out.codomain_spec = codomain_truncation(op, spec);
  out.k = k;
  out.s = s;
  if (op == Operator::Delta) {
    if (s != b->n() || k > 1) throw DegreeError("delta matrices are defined at (0,n) and on E_1");
    out.domain = k == 0 ? enumerate_basis(b, spec, 0, s) : enumerate_source_basis(b, spec);
  } else {
    out.domain = enumerate_basis(b, spec, k, s);
  }
  for (std::size_t j = 0; j < out.domain.size(); ++j) {
    const auto c = coordinates(out.domain[j]);
    const auto& [key, q] = *c.begin();
    out.lookup.emplace(key, std::make_pair(j, q));
  }

  auto images = map_indices<Coordinates>(
      out.domain.size(),
      [&](std::size_t j) {
        const Form& phi = out.domain[j];
        switch (op) {
          case Operator::DH: return coordinates(d_H(phi));
          case Operator::DV: return coordinates(d_V(phi));
          case Operator::Delta: return coordinates(delta(phi));
        }
        return Coordinates{};
      },
      mode);

  for (const auto& img : images) {
    for (const auto& [key, q] : img)
      if (!fits(key, out.codomain_spec)) throw Error("operator image leaves the enlarged codomain truncation");
    out.rows.collect(img);
  }
  out.rows.freeze();
  out.matrix.rows = out.rows.size();
  out.matrix.cols.reserve(images.size());
  for (const auto& img : images) out.matrix.cols.push_back(out.rows.vector(img));
  return out;
}

linalg::SparseMatrix compose(const OperatorMatrix& second, const OperatorMatrix& first) {
  linalg::SparseMatrix rows_in_second;  // first's rows expressed in second's domain basis
  rows_in_second.rows = second.domain.size();
  for (const auto& col : first.matrix.cols) {
    linalg::SparseVec v;
    for (const auto& [r, q] : col) {
      auto idx = second.domain_index(first.rows.key(r));
      if (!idx) throw Error("compose: image of the first map is outside the second map's domain");
      v.emplace_back(static_cast<linalg::Index>(idx->first), q / idx->second);
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& c) { return a.first < c.first; });
    rows_in_second.cols.push_back(std::move(v));
  }
  return linalg::multiply(second.matrix, rows_in_second);
}

namespace {

/// dim(im(incoming) ∩ span of the domain coordinates of `target`).
std::size_t incoming_rank(const OperatorMatrix& incoming, const OperatorMatrix& target) {
  linalg::Echelon all, outside;
  for (const auto& col : incoming.matrix.cols) {
    linalg::SparseVec out_part;
    for (const auto& e : col)
      if (!target.domain_index(incoming.rows.key(e.first))) out_part.push_back(e);
    all.insert(col);
    outside.insert(out_part);
  }
  return all.rank() - outside.rank();
}

BettiPosition position(std::string label, const OperatorMatrix& outgoing, bool has_outgoing,
                       const OperatorMatrix* incoming) {
  BettiPosition p;
  p.label = std::move(label);
  p.k = outgoing.k;
  p.s = outgoing.s;
  p.dim_domain = outgoing.domain.size();
  p.rank = has_outgoing ? linalg::rank(outgoing.matrix) : 0;
  p.dim_kernel = p.dim_domain - p.rank;
  p.incoming_rank = incoming ? incoming_rank(*incoming, outgoing) : 0;
  p.dim_cohomology = p.dim_kernel - p.incoming_rank;
  return p;
}

std::string label(std::size_t k, std::size_t s) {
  return "(" + std::to_string(k) + "," + std::to_string(s) + ")";
}

TruncationSpec dh_incoming(const TruncationSpec& spec) {
  return TruncationSpec{spec.max_jet_order - 1, spec.max_poly_degree, spec.base_poly_degree + 1};
}

TruncationSpec degree_raised(const TruncationSpec& spec) {
  return TruncationSpec{spec.max_jet_order, spec.max_poly_degree + 1, spec.base_poly_degree};
}

}  // namespace

BettiReport betti_horizontal_row(const BundlePtr& b, const TruncationSpec& spec, std::size_t k, Execution mode) {
  BettiReport rep{"dH", spec, {}};
  const std::size_t n = b->n();
  for (std::size_t s = 0; s <= n; ++s) {
    auto out = operator_matrix(Operator::DH, b, spec, k, s, mode);
    std::optional<OperatorMatrix> in;
    if (s > 0) in = operator_matrix(Operator::DH, b, dh_incoming(spec), k, s - 1, mode);
    rep.positions.push_back(position(label(k, s), out, s < n, in ? &*in : nullptr));
  }
  return rep;
}

BettiReport betti_vertical_column(const BundlePtr& b, const TruncationSpec& spec, std::size_t s, std::size_t max_k,
                                  Execution mode) {
  BettiReport rep{"dV", spec, {}};
  for (std::size_t k = 0; k <= max_k; ++k) {
    auto out = operator_matrix(Operator::DV, b, spec, k, s, mode);
    std::optional<OperatorMatrix> in;
    if (k > 0) in = operator_matrix(Operator::DV, b, degree_raised(spec), k - 1, s, mode);
    rep.positions.push_back(position(label(k, s), out, true, in ? &*in : nullptr));
  }
  return rep;
}

BettiReport betti_variational_row(const BundlePtr& b, const TruncationSpec& spec, Execution mode) {
  BettiReport rep{"variational", spec, {}};
  const std::size_t n = b->n();
  for (std::size_t s = 0; s < n; ++s) {
    auto out = operator_matrix(Operator::DH, b, spec, 0, s, mode);
    std::optional<OperatorMatrix> in;
    if (s > 0) in = operator_matrix(Operator::DH, b, dh_incoming(spec), 0, s - 1, mode);
    rep.positions.push_back(position(label(0, s), out, true, in ? &*in : nullptr));
  }
  {
    auto out = operator_matrix(Operator::Delta, b, spec, 0, n, mode);
    auto in = operator_matrix(Operator::DH, b, dh_incoming(spec), 0, n - 1, mode);
    rep.positions.push_back(position(label(0, n), out, true, &in));
  }
  {
    auto out = operator_matrix(Operator::Delta, b, spec, 1, n, mode);
    auto in = operator_matrix(Operator::Delta, b, degree_raised(spec), 0, n, mode);
    rep.positions.push_back(position("E1", out, true, &in));
  }
  return rep;
}

ExactnessReport source_exactness(const BundlePtr& b, const TruncationSpec& spec, Execution mode) {
  auto helm = operator_matrix(Operator::Delta, b, spec, 1, b->n(), mode);
  auto el = operator_matrix(Operator::Delta, b, degree_raised(spec), 0, b->n(), mode);

  const auto kern = linalg::kernel(helm.matrix);
  std::vector<Coordinates> kernel_coords;
  for (const auto& vec : kern) {
    Form e(b);
    for (const auto& [j, q] : vec) e += Expr(q) * helm.domain[j];
    kernel_coords.push_back(coordinates(e));
  }

  RowIndex rows;
  for (std::size_t r = 0; r < el.rows.size(); ++r) {
    Coordinates one;
    one.emplace(el.rows.key(static_cast<linalg::Index>(r)), Rational(1));
    rows.collect(one);
  }
  for (const auto& c : kernel_coords) rows.collect(c);
  rows.freeze();

  linalg::Echelon ech;
  for (const auto& col : el.matrix.cols) {
    Coordinates c;
    for (const auto& [r, q] : col) c.emplace(el.rows.key(r), q);
    ech.insert(rows.vector(c));
  }
  ExactnessReport rep;
  rep.kernel_dim = kernel_coords.size();
  for (const auto& c : kernel_coords)
    if (ech.in_span(rows.vector(c))) ++rep.in_image;
  return rep;
}

// ---------------------------------------------------------------- property suite

bool PropertyReport::all_passed() const {
  return std::all_of(identities.begin(), identities.end(), [](const IdentityResult& r) { return r.failures == 0; });
}

namespace {

struct CaseInputs {
  BundlePtr bundle;
  Form generic;     // random (k,s)
  Form other;       // random (k',s') for graded commutativity
  Form top;         // random (k,n), k in {1,2}
  Form below_top;   // random (k,n-1), k in {1,2}
  Form lagrangian;  // random (0,n)
  Form source;      // random (1,n)
  Form dy_form;     // random dy-basis form
  Expr f, g;        // random differential polynomials
  std::size_t lambda = 0, mu = 0;
  EvolutionaryField field;
};

CaseInputs make_case(std::uint64_t seed, std::size_t index, const RandomBounds& bounds) {
  auto rng = RandomForms::for_case(seed, index);
  CaseInputs in;
  in.bundle = rng.bundle(2, 2);
  const auto n = in.bundle->n();
  in.generic = rng.form(in.bundle, rng.uniform(0, 2), rng.uniform(0, n), bounds);
  in.top = rng.form(in.bundle, rng.uniform(1, 2), n, bounds);
  in.below_top = rng.form(in.bundle, rng.uniform(1, 2), n - 1, bounds);
  in.lagrangian = rng.form(in.bundle, 0, n, bounds);
  {
    SourceForm e(in.bundle);
    for (std::size_t i = 0; i < in.bundle->m(); ++i) e.set(i, rng.polynomial(*in.bundle, bounds));
    in.source = e.to_form();
  }
  in.dy_form = rng.dy_form(in.bundle, rng.uniform(0, n + 1), bounds);
  in.other = rng.form(in.bundle, rng.uniform(0, 2), rng.uniform(0, n), bounds);
  in.f = rng.polynomial(*in.bundle, bounds);
  in.g = rng.polynomial(*in.bundle, bounds);
  in.lambda = rng.uniform(0, n - 1);
  in.mu = rng.uniform(0, n - 1);
  std::map<std::size_t, Expr> comps;
  const RandomBounds field_bounds{std::min(bounds.max_jet_order, 1u), std::min(bounds.max_degree, 2u), 2, true};
  for (std::size_t i = 0; i < in.bundle->m(); ++i) comps[i] = rng.polynomial(*in.bundle, field_bounds);
  in.field = EvolutionaryField(in.bundle, comps);
  return in;
}

std::string field_text(const EvolutionaryField& u) {
  std::string s = "u = (";
  for (std::size_t i = 0; i < u.bundle->m(); ++i) s += (i ? ", " : "") + to_string(u.component(i), *u.bundle);
  return s + ")";
}

struct Identity {
  std::string name;
  std::function<bool(const CaseInputs&)> holds;
  std::function<std::string(const CaseInputs&)> input;
};

std::string text_of(const Form& f) { return to_string(f); }

const std::vector<Identity>& identities() {
  static const std::vector<Identity> ids{
      {"d^2 = 0", [](const CaseInputs& in) { return exterior_d(exterior_d(in.generic)).is_zero(); },
       [](const CaseInputs& in) { return text_of(in.generic); }},
      {"dH^2 = 0", [](const CaseInputs& in) { return d_H(d_H(in.generic)).is_zero(); },
       [](const CaseInputs& in) { return text_of(in.generic); }},
      {"dV^2 = 0", [](const CaseInputs& in) { return d_V(d_V(in.generic)).is_zero(); },
       [](const CaseInputs& in) { return text_of(in.generic); }},
      {"dH dV + dV dH = 0",
       [](const CaseInputs& in) { return (d_H(d_V(in.generic)) + d_V(d_H(in.generic))).is_zero(); },
       [](const CaseInputs& in) { return text_of(in.generic); }},
      {"d = dH + dV (dy-basis route)",
       [](const CaseInputs& in) {
         return exterior_d(in.generic) == to_contact_basis(exterior_d_dy_basis(from_contact_basis(in.generic))) &&
                exterior_d(in.generic) == d_H(in.generic) + d_V(in.generic);
       },
       [](const CaseInputs& in) { return text_of(in.generic); }},
      {"tau^2 = tau",
       [](const CaseInputs& in) {
         const Form t = tau(in.top);
         return tau(t) == t;
       },
       [](const CaseInputs& in) { return text_of(in.top); }},
      {"tau dH = 0", [](const CaseInputs& in) { return tau(d_H(in.below_top)).is_zero(); },
       [](const CaseInputs& in) { return text_of(in.below_top); }},
      {"delta^2 = 0",
       [](const CaseInputs& in) {
         return delta(delta(in.lagrangian)).is_zero() && delta(delta(in.source)).is_zero();
       },
       [](const CaseInputs& in) { return text_of(in.lagrangian) + " ; " + text_of(in.source); }},
      {"delta tau = tau d", [](const CaseInputs& in) { return delta(tau(in.top)) == tau(exterior_d(in.top)); },
       [](const CaseInputs& in) { return text_of(in.top); }},
      {"h0 d = dH h0",
       [](const CaseInputs& in) {
         return horizontalize(exterior_d_dy_basis(in.dy_form)) == d_H(horizontalize(in.dy_form));
       },
       [](const CaseInputs& in) { return text_of(in.dy_form); }},
      {"EL = delta (two routes)",
       [](const CaseInputs& in) { return euler_lagrange(in.lagrangian).to_form() == delta(in.lagrangian); },
       [](const CaseInputs& in) { return text_of(in.lagrangian); }},
      {"first variational formula",
       [](const CaseInputs& in) {
         const Form dL = exterior_d(in.lagrangian);
         const auto split = integrate_by_parts(dL);
         return dL == split.source.to_form() + d_H(split.boundary) && split.source == euler_lagrange(in.lagrangian);
       },
       [](const CaseInputs& in) { return text_of(in.lagrangian); }},
      {"total derivatives commute",
       [](const CaseInputs& in) {
         return total_derivative(total_derivative(in.f, in.lambda), in.mu) ==
                total_derivative(total_derivative(in.f, in.mu), in.lambda);
       },
       [](const CaseInputs& in) { return to_string(in.f, *in.bundle); }},
      {"Leibniz rule",
       [](const CaseInputs& in) {
         return total_derivative(in.f * in.g, in.lambda) ==
                total_derivative(in.f, in.lambda) * in.g + in.f * total_derivative(in.g, in.lambda);
       },
       [](const CaseInputs& in) { return to_string(in.f, *in.bundle) + " ; " + to_string(in.g, *in.bundle); }},
      {"graded commutativity",
       [](const CaseInputs& in) {
         const auto a = bidegree(in.generic), b = bidegree(in.other);
         if (a.size() != 1 || b.size() != 1) return true;
         const auto da = a.begin()->first + a.begin()->second, db = b.begin()->first + b.begin()->second;
         const Form ab = wedge(in.generic, in.other), ba = wedge(in.other, in.generic);
         return (da * db) % 2 == 0 ? ab == ba : ab == -ba;
       },
       [](const CaseInputs& in) { return text_of(in.generic) + " ; " + text_of(in.other); }},
      {"prolongation commutes with total derivative",
       [](const CaseInputs& in) {
         return prolong_apply(in.field, total_derivative(in.f, in.lambda)) ==
                total_derivative(prolong_apply(in.field, in.f), in.lambda);
       },
       [](const CaseInputs& in) { return field_text(in.field) + " ; " + to_string(in.f, *in.bundle); }},
      {"contraction anticommutes with dH",
       [](const CaseInputs& in) {
         return prolong_contract(in.field, d_H(in.generic)) == -d_H(prolong_contract(in.field, in.generic));
       },
       [](const CaseInputs& in) { return field_text(in.field) + " ; " + text_of(in.generic); }},
      {"Noether identity",
       [](const CaseInputs& in) { return conservation_check(in.field, in.lagrangian).identity_holds; },
       [](const CaseInputs& in) { return field_text(in.field) + " ; " + text_of(in.lagrangian); }},
  };
  return ids;
}

}  // namespace

std::string property_case_fingerprint(std::uint64_t seed, std::size_t index, const RandomBounds& bounds) {
  const auto in = make_case(seed, index, bounds);
  std::string s = "base=" + std::to_string(in.bundle->n()) + " fiber=" + std::to_string(in.bundle->m());
  for (const Form* f : {&in.generic, &in.other, &in.top, &in.below_top, &in.lagrangian, &in.source, &in.dy_form})
    s += " | " + to_string(*f);
  s += " | " + to_string(in.f, *in.bundle) + " | " + to_string(in.g, *in.bundle) + " | " + field_text(in.field);
  return s;
}

PropertyReport property_suite(std::uint64_t seed, std::size_t cases, Execution mode, const RandomBounds& bounds) {
  if (cases == 0) throw Error("property suite needs at least one case");
  struct Outcome {
    std::vector<bool> ok;
    std::vector<std::string> failing_inputs;
  };
  auto outcomes = map_indices<Outcome>(
      cases,
      [&](std::size_t i) {
        const auto in = make_case(seed, i, bounds);
        Outcome o;
        for (const auto& id : identities()) {
          const bool ok = id.holds(in);
          o.ok.push_back(ok);
          o.failing_inputs.push_back(ok ? std::string() : id.input(in));
        }
        return o;
      },
      mode);

  PropertyReport rep;
  rep.seed = seed;
  rep.cases = cases;
  rep.bounds = bounds;
  for (std::size_t id = 0; id < identities().size(); ++id) {
    IdentityResult r;
    r.name = identities()[id].name;
    for (const auto& o : outcomes) {
      ++r.checked;
      if (o.ok[id]) continue;
      ++r.failures;
      const auto& text = o.failing_inputs[id];
      if (r.counterexample.empty() || text.size() < r.counterexample.size()) r.counterexample = text;
    }
    rep.identities.push_back(std::move(r));
  }
  return rep;
}

}  // namespace varcomplex
