#include "varcomplex/linalg.hpp"

#include <algorithm>
#include <map>

namespace varcomplex::linalg {

namespace {

using IntVec = std::vector<std::pair<Index, Integer>>;

/// a*x - b*y, merged by index.
IntVec combine(const Integer& a, const IntVec& x, const Integer& b, const IntVec& y) {
  IntVec out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  Integer t;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.emplace_back(x[i].first, a * x[i].second);
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, -(b * y[j].second));
      ++j;
    } else {
      t = a * x[i].second - b * y[j].second;
      if (sgn(t) != 0) out.emplace_back(x[i].first, t);
      ++i;
      ++j;
    }
  }
  return out;
}

void content_gcd(const IntVec& v, Integer& g) {
  for (const auto& [k, c] : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) return;
  }
}

void divide_exact(IntVec& v, const Integer& g) {
  for (auto& [k, c] : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

/// Scales a rational vector to a primitive-free integer vector; returns the multiplier.
Integer to_integers(const SparseVec& col, IntVec& out) {
  Integer l = 1;
  for (const auto& [k, c] : col) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  out.clear();
  out.reserve(col.size());
  for (const auto& [k, c] : col) out.emplace_back(k, Integer(c.get_num() * (l / c.get_den())));
  return l;
}

SparseVec to_rationals(const IntVec& v, const Integer& denom) {
  SparseVec out;
  out.reserve(v.size());
  for (const auto& [k, c] : v) {
    Rational q(c, denom);
    q.canonicalize();
    out.emplace_back(k, q);
  }
  return out;
}

}  // namespace

const Echelon::Pivot* Echelon::pivot_at(Index row) const {
  auto it = std::lower_bound(pivot_rows_.begin(), pivot_rows_.end(), std::make_pair(row, std::size_t{0}));
  if (it == pivot_rows_.end() || it->first != row) return nullptr;
  return &pivots_[it->second];
}

bool Echelon::insert(const SparseVec& col) {
  const Index j = static_cast<Index>(num_cols_++);
  IntVec v;
  Integer scale = to_integers(col, v);
  IntVec combo{{j, scale}};
  while (!v.empty()) {
    const Index lead = v.back().first;
    const Pivot* p = pivot_at(lead);
    if (!p) {
      auto pos = std::lower_bound(pivot_rows_.begin(), pivot_rows_.end(), std::make_pair(lead, std::size_t{0}));
      pivot_rows_.insert(pos, {lead, pivots_.size()});
      pivots_.push_back(Pivot{std::move(v), std::move(combo)});
      return true;
    }
    Integer a = p->v.back().second, b = v.back().second;
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    a /= g;
    b /= g;
    v = combine(a, v, b, p->v);
    combo = combine(a, combo, b, p->combo);
    Integer c = 0;
    content_gcd(v, c);
    content_gcd(combo, c);
    if (c > 1) {
      divide_exact(v, c);
      divide_exact(combo, c);
    }
  }
  // Relation: sum combo_j col_j = 0 (combo indexes original rational columns).
  SparseVec rel;
  for (const auto& [k, c] : combo) rel.emplace_back(k, Rational(c));
  kernel_.push_back(std::move(rel));
  return false;
}

std::optional<SparseVec> Echelon::solve(const SparseVec& b, SparseVec* residual) const {
  // Invariant: v = s*b - A*c.
  IntVec v;
  Integer s = to_integers(b, v);
  IntVec c;
  while (!v.empty()) {
    const Pivot* p = pivot_at(v.back().first);
    if (!p) {
      if (residual) *residual = to_rationals(v, s);
      return std::nullopt;
    }
    Integer a = p->v.back().second, beta = v.back().second;
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), beta.get_mpz_t());
    a /= g;
    beta /= g;
    v = combine(a, v, beta, p->v);
    c = combine(a, c, -beta, p->combo);
    s *= a;
    Integer cg = s;
    content_gcd(v, cg);
    content_gcd(c, cg);
    if (abs(cg) > 1) {
      cg = abs(cg);
      divide_exact(v, cg);
      divide_exact(c, cg);
      mpz_divexact(s.get_mpz_t(), s.get_mpz_t(), cg.get_mpz_t());
    }
  }
  if (residual) residual->clear();
  return to_rationals(c, s);
}

std::size_t rank(const SparseMatrix& m) {
  Echelon e;
  for (const auto& c : m.cols) e.insert(c);
  return e.rank();
}

std::vector<SparseVec> kernel(const SparseMatrix& m) {
  Echelon e;
  for (const auto& c : m.cols) e.insert(c);
  return e.kernel();
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out;
  out.rows = a.rows;
  out.cols.reserve(b.cols.size());
  for (const auto& bc : b.cols) {
    std::map<Index, Rational> acc;
    for (const auto& [k, coef] : bc) {
      if (k >= a.cols.size()) throw Error("matrix dimension mismatch");
      for (const auto& [r, v] : a.cols[k]) acc[r] += coef * v;
    }
    SparseVec col;
    for (auto& [r, v] : acc)
      if (sgn(v) != 0) col.emplace_back(r, v);
    out.cols.push_back(std::move(col));
  }
  return out;
}

bool is_zero(const SparseMatrix& m) {
  return std::all_of(m.cols.begin(), m.cols.end(), [](const SparseVec& c) { return c.empty(); });
}

}  // namespace varcomplex::linalg
