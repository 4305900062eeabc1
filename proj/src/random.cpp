#include "varcomplex/random.hpp"

namespace varcomplex {

RandomForms RandomForms::for_case(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu};
  std::mt19937_64 probe(seq);
  return RandomForms(probe());
}

std::size_t RandomForms::uniform(std::size_t lo, std::size_t hi) {
  // Modulo draw keeps the stream identical across standard libraries.
  return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1));
}

Rational RandomForms::coefficient() {
  long num = static_cast<long>(uniform(1, 5));
  if (uniform(0, 1)) num = -num;
  long den = static_cast<long>(uniform(1, 3));
  Rational q(num, den);
  q.canonicalize();
  return q;
}

MultiIndex RandomForms::multi_index(std::size_t dim, unsigned max_order) {
  MultiIndex mi(dim);
  const auto ord = uniform(0, max_order);
  for (std::size_t i = 0; i < ord; ++i) mi = mi.plus(uniform(0, dim - 1));
  return mi;
}

BundlePtr RandomForms::bundle(std::size_t max_n, std::size_t max_m) {
  static const char* base_names[] = {"t", "x", "y", "z"};
  static const char* fiber_names[] = {"u", "v", "w"};
  const auto n = uniform(1, max_n), m = uniform(1, max_m);
  std::vector<std::string> base, fiber;
  for (std::size_t i = 0; i < n; ++i) base.emplace_back(base_names[i]);
  for (std::size_t i = 0; i < m; ++i) fiber.emplace_back(fiber_names[i]);
  return make_bundle(base, fiber);
}

Expr RandomForms::polynomial(const BundleSpec& b, const RandomBounds& bounds) {
  Expr out;
  const auto terms = uniform(1, bounds.max_terms);
  for (std::size_t t = 0; t < terms; ++t) {
    Expr mono(coefficient());
    const auto deg = uniform(0, bounds.max_degree);
    for (std::size_t d = 0; d < deg; ++d) {
      if (bounds.base_vars && uniform(0, 4) == 0)
        mono *= Expr::base(uniform(0, b.n() - 1));
      else
        mono *= Expr::jet(uniform(0, b.m() - 1), multi_index(b.n(), bounds.max_jet_order));
    }
    out += mono;
  }
  return out;
}

Form RandomForms::form(const BundlePtr& b, std::size_t k, std::size_t s, const RandomBounds& bounds) {
  Form out(b);
  if (s > b->n()) return out;
  const auto terms = uniform(1, 2);
  for (std::size_t t = 0; t < terms; ++t) {
    Word w;
    // s distinct dx generators.
    std::vector<std::size_t> pos(b->n());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
    for (std::size_t i = 0; i < s; ++i) {
      std::swap(pos[i], pos[uniform(i, pos.size() - 1)]);
      w.push_back(Generator::dx(pos[i]));
    }
    for (std::size_t i = 0; i < k; ++i)
      w.push_back(Generator::theta(uniform(0, b->m() - 1), multi_index(b->n(), bounds.max_jet_order)));
    out.add(w, polynomial(*b, bounds));
  }
  return out;
}

Form RandomForms::dy_form(const BundlePtr& b, std::size_t degree, const RandomBounds& bounds) {
  Form out(b);
  const auto terms = uniform(1, 2);
  for (std::size_t t = 0; t < terms; ++t) {
    Word w;
    for (std::size_t i = 0; i < degree; ++i) {
      if (uniform(0, 1) == 0)
        w.push_back(Generator::dx(uniform(0, b->n() - 1)));
      else
        w.push_back(Generator::dy(uniform(0, b->m() - 1), multi_index(b->n(), bounds.max_jet_order)));
    }
    out.add(w, polynomial(*b, bounds));
  }
  return out;
}

}  // namespace varcomplex
