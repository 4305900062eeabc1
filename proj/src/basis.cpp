#include "varcomplex/basis.hpp"

#include <functional>

namespace varcomplex {

Coordinates coordinates(const Form& phi) {
  Coordinates out;
  for (const auto& [w, c] : phi.terms()) {
    if (!c.is_polynomial()) throw UnsupportedError("coordinates of a non-polynomial form");
    for (const auto& [m, q] : c.terms()) out.emplace(CoordKey{w, m}, q);
  }
  return out;
}

Form from_coordinates(const BundlePtr& b, const Coordinates& c) {
  std::map<Word, Expr::Terms> grouped;
  for (const auto& [k, q] : c) grouped[k.word].emplace(k.mono, q);
  Form out(b);
  for (auto& [w, t] : grouped) out.add_canonical(w, Expr::from_terms(std::move(t)));
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, unsigned max_order) {
  std::vector<MultiIndex> out;
  std::function<void(std::size_t, unsigned, MultiIndex)> rec = [&](std::size_t pos, unsigned left, MultiIndex mi) {
    if (pos == dim) {
      out.push_back(mi);
      return;
    }
    for (unsigned c = 0; c <= left; ++c) {
      rec(pos + 1, left - c, mi);
      if (c < left) mi = mi.plus(pos);
    }
  };
  rec(0, max_order, MultiIndex(dim));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> jet_variable_keys(const BundleSpec& b, const std::vector<std::size_t>& fibers,
                                             unsigned max_order) {
  std::vector<std::uint64_t> out;
  const auto mis = multi_indices_up_to(b.n(), max_order);
  for (auto i : fibers)
    for (const auto& mi : mis) out.push_back(varkey::jet(i, mi));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void monomials_in(const std::vector<std::uint64_t>& vars, unsigned max_degree, std::vector<Monomial>& out) {
  Monomial cur;
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t start, unsigned left) {
    out.push_back(cur);
    if (left == 0) return;
    for (std::size_t v = start; v < vars.size(); ++v) {
      bool extend = !cur.factors.empty() && cur.factors.back().key == vars[v];
      if (extend)
        cur.factors.back().exp += 1;
      else
        cur.factors.push_back(Factor{vars[v], nullptr, 1});
      rec(v, left - 1);
      if (extend)
        cur.factors.back().exp -= 1;
      else
        cur.factors.pop_back();
    }
  };
  rec(0, max_degree);
}

}  // namespace

std::vector<Monomial> enumerate_monomials(const std::vector<std::uint64_t>& base_vars, unsigned base_degree,
                                          const std::vector<std::uint64_t>& jet_vars, unsigned jet_degree,
                                          int total_degree) {
  std::vector<Monomial> bases, jets, out;
  monomials_in(base_vars, base_degree, bases);
  monomials_in(jet_vars, jet_degree, jets);
  for (const auto& a : bases)
    for (const auto& j : jets) {
      if (total_degree >= 0 && a.degree() + j.degree() > static_cast<unsigned>(total_degree)) continue;
      out.push_back(monomial_mul(a, j));
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> enumerate_words(std::size_t n, const std::vector<Generator>& thetas, std::size_t k,
                                  std::size_t s) {
  std::vector<Word> out;
  if (s > n || k > thetas.size()) return out;
  std::vector<Generator> sorted = thetas;
  std::sort(sorted.begin(), sorted.end());
  Word cur;
  std::function<void(std::size_t, std::size_t)> pick_theta = [&](std::size_t start, std::size_t left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t t = start; t + left <= sorted.size(); ++t) {
      cur.push_back(sorted[t]);
      pick_theta(t + 1, left - 1);
      cur.pop_back();
    }
  };
  std::function<void(std::size_t, std::size_t)> pick_dx = [&](std::size_t start, std::size_t left) {
    if (left == 0) {
      pick_theta(0, k);
      return;
    }
    for (std::size_t p = start; p + left <= n; ++p) {
      cur.push_back(Generator::dx(p));
      pick_dx(p + 1, left - 1);
      cur.pop_back();
    }
  };
  pick_dx(0, s);
  return out;
}

void RowIndex::collect(const Coordinates& c) {
  for (const auto& [k, q] : c) index_.emplace(k, 0);
}

void RowIndex::freeze() {
  keys_.clear();
  linalg::Index i = 0;
  for (auto& [k, idx] : index_) {
    idx = i++;
    keys_.push_back(k);
  }
}

linalg::SparseVec RowIndex::vector(const Coordinates& c) const {
  linalg::SparseVec v;
  v.reserve(c.size());
  for (const auto& [k, q] : c) {
    auto it = index_.find(k);
    if (it == index_.end()) throw Error("coordinate outside the row index");
    v.emplace_back(it->second, q);
  }
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

}  // namespace varcomplex
