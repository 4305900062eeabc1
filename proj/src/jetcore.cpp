#include "varcomplex/jetcore.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace varcomplex {

// ---------------------------------------------------------------- BundleSpec

namespace {

bool valid_name(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  return s != "sin" && s != "cos" && s != "exp" && s != "th";
}

}  // namespace

BundleSpec::BundleSpec(std::vector<std::string> base_vars, std::vector<std::string> fiber_vars)
    : base(std::move(base_vars)), fiber(std::move(fiber_vars)) {
  if (base.empty()) throw CoordinateError("bundle needs at least one base coordinate");
  if (fiber.empty()) throw CoordinateError("bundle needs at least one fiber coordinate");
  if (base.size() > kMaxBaseDim)
    throw CoordinateError("at most " + std::to_string(kMaxBaseDim) + " base coordinates supported");
  if (fiber.size() > 255) throw CoordinateError("too many fiber coordinates");
  std::set<std::string> seen;
  for (const auto* list : {&base, &fiber}) {
    for (const auto& name : *list) {
      if (!valid_name(name)) throw CoordinateError("invalid coordinate name '" + name + "'");
      if (!seen.insert(name).second) throw CoordinateError("duplicate coordinate name '" + name + "'");
    }
  }
}

int BundleSpec::base_index(std::string_view name) const {
  for (std::size_t i = 0; i < base.size(); ++i)
    if (base[i] == name) return static_cast<int>(i);
  return -1;
}

int BundleSpec::fiber_index(std::string_view name) const {
  for (std::size_t i = 0; i < fiber.size(); ++i)
    if (fiber[i] == name) return static_cast<int>(i);
  return -1;
}

BundlePtr make_bundle(std::vector<std::string> base_vars, std::vector<std::string> fiber_vars) {
  return std::make_shared<const BundleSpec>(std::move(base_vars), std::move(fiber_vars));
}

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::size_t dim) : dim_(static_cast<std::uint8_t>(dim)) {
  if (dim > kMaxBaseDim) throw CoordinateError("multi-index dimension too large");
}

MultiIndex::MultiIndex(std::size_t dim, std::initializer_list<std::size_t> positions) : MultiIndex(dim) {
  for (auto p : positions) *this = plus(p);
}

unsigned MultiIndex::order() const {
  unsigned s = 0;
  for (auto c : counts_) s += c;
  return s;
}

MultiIndex MultiIndex::plus(std::size_t pos) const {
  if (pos >= dim_)
    throw CoordinateError("base index " + std::to_string(pos) + " out of range for dimension " +
                          std::to_string(dim_));
  if (counts_[pos] >= kMaxIndexCount) throw CoordinateError("multi-index count overflow");
  MultiIndex r = *this;
  ++r.counts_[pos];
  return r;
}

MultiIndex MultiIndex::minus(std::size_t pos) const {
  if (pos >= dim_ || counts_[pos] == 0) throw CoordinateError("cannot remove index from multi-index");
  MultiIndex r = *this;
  --r.counts_[pos];
  return r;
}

std::size_t MultiIndex::first_position() const {
  for (std::size_t p = 0; p < dim_; ++p)
    if (counts_[p] != 0) return p;
  return dim_;
}

std::uint64_t MultiIndex::packed() const {
  std::uint64_t bits = 0;
  for (std::size_t p = 0; p < kMaxBaseDim; ++p)
    bits |= static_cast<std::uint64_t>(counts_[p]) << (5 * (kMaxBaseDim - 1 - p));
  return bits;
}

MultiIndex MultiIndex::unpack(std::size_t dim, std::uint64_t bits) {
  MultiIndex r(dim);
  for (std::size_t p = 0; p < kMaxBaseDim; ++p)
    r.counts_[p] = static_cast<std::uint8_t>((bits >> (5 * (kMaxBaseDim - 1 - p))) & 0x1f);
  return r;
}

std::string MultiIndex::subscript(const BundleSpec& b) const {
  std::string s;
  for (std::size_t p = 0; p < dim_; ++p)
    for (unsigned c = 0; c < counts_[p]; ++c) s += b.base.at(p);
  return s;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.order() <=> b.order(); c != 0) return c;
  return b.counts_ <=> a.counts_;
}

// ---------------------------------------------------------------- keys

namespace varkey {

namespace {
constexpr int kKindShift = 60;
constexpr int kSlotShift = 52;
constexpr int kOrderShift = 40;
constexpr std::uint64_t kCountsMask = (std::uint64_t{1} << 40) - 1;

std::uint64_t make(Kind k, std::size_t slot, unsigned ord, std::uint64_t counts) {
  return (static_cast<std::uint64_t>(k) << kKindShift) | (static_cast<std::uint64_t>(slot) << kSlotShift) |
         (static_cast<std::uint64_t>(ord) << kOrderShift) | counts;
}
}  // namespace

std::uint64_t base(std::size_t pos) { return make(Kind::Base, pos, 0, 0); }
std::uint64_t jet(std::size_t fiber, const MultiIndex& mi) {
  return make(Kind::Jet, fiber, mi.order(), mi.packed());
}
std::uint64_t param() { return make(Kind::Param, 0, 0, 0); }
std::uint64_t func(int fn_kind) { return make(Kind::Func, static_cast<std::size_t>(fn_kind), 0, 0); }

Kind kind(std::uint64_t key) { return static_cast<Kind>(key >> kKindShift); }
std::size_t slot(std::uint64_t key) { return (key >> kSlotShift) & 0xff; }
unsigned order(std::uint64_t key) { return static_cast<unsigned>((key >> kOrderShift) & 0xfff); }
MultiIndex multi_index(std::uint64_t key, std::size_t dim) {
  return MultiIndex::unpack(dim, key & kCountsMask);
}
std::uint64_t jet_plus(std::uint64_t key, std::size_t pos) {
  auto mi = MultiIndex::unpack(kMaxBaseDim, key & kCountsMask).plus(pos);
  return make(Kind::Jet, slot(key), mi.order(), mi.packed());
}

}  // namespace varkey

// ---------------------------------------------------------------- monomials

namespace {

int compare_expr(const Expr& a, const Expr& b);

int compare_factor(const Factor& a, const Factor& b) {
  if (a.key != b.key) return a.key < b.key ? -1 : 1;
  if (a.fn && b.fn) {
    if (int c = compare_expr(a.fn->arg, b.fn->arg); c != 0) return c;
  }
  return 0;
}

int compare_monomial(const Monomial& a, const Monomial& b) {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  std::size_t n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_factor(a.factors[i], b.factors[i]); c != 0) return c;
    // Higher power of the earlier atom sorts first within a degree.
    if (a.factors[i].exp != b.factors[i].exp) return a.factors[i].exp > b.factors[i].exp ? -1 : 1;
  }
  if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size() ? -1 : 1;
  return 0;
}

int compare_expr(const Expr& a, const Expr& b) {
  auto ia = a.terms().begin(), ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    if (int c = compare_monomial(ia->first, ib->first); c != 0) return c;
    if (int c = cmp(ia->second, ib->second); c != 0) return c < 0 ? -1 : 1;
  }
  if (ia == a.terms().end() && ib == b.terms().end()) return 0;
  return ia == a.terms().end() ? -1 : 1;
}

}  // namespace

bool factor_less(const Factor& a, const Factor& b) { return compare_factor(a, b) < 0; }
bool factor_equal(const Factor& a, const Factor& b) { return compare_factor(a, b) == 0; }

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& f : factors) d += f.exp;
  return d;
}

bool operator<(const Monomial& a, const Monomial& b) { return compare_monomial(a, b) < 0; }
bool operator==(const Monomial& a, const Monomial& b) { return compare_monomial(a, b) == 0; }

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    int c = compare_factor(a.factors[i], b.factors[j]);
    if (c < 0) {
      r.factors.push_back(a.factors[i++]);
    } else if (c > 0) {
      r.factors.push_back(b.factors[j++]);
    } else {
      Factor f = a.factors[i++];
      f.exp += b.factors[j++].exp;
      r.factors.push_back(std::move(f));
    }
  }
  for (; i < a.factors.size(); ++i) r.factors.push_back(a.factors[i]);
  for (; j < b.factors.size(); ++j) r.factors.push_back(b.factors[j]);
  return r;
}

// ---------------------------------------------------------------- Expr

Expr::Expr(long v) {
  if (v != 0) terms_.emplace(Monomial{}, Rational(v));
}

Expr::Expr(const Rational& v) {
  if (sgn(v) != 0) terms_.emplace(Monomial{}, v);
}

Expr Expr::variable(std::uint64_t key) {
  Expr e;
  Monomial m;
  m.factors.push_back(Factor{key, nullptr, 1});
  e.terms_.emplace(std::move(m), Rational(1));
  return e;
}

Expr Expr::base(std::size_t pos) { return variable(varkey::base(pos)); }
Expr Expr::jet(std::size_t fiber, const MultiIndex& mi) { return variable(varkey::jet(fiber, mi)); }
Expr Expr::param() { return variable(varkey::param()); }

Expr Expr::apply(FuncKind kind, const Expr& arg) {
  if (arg.is_zero()) return kind == FuncKind::Sin ? Expr(0) : Expr(1);
  Expr e;
  Monomial m;
  m.factors.push_back(
      Factor{varkey::func(static_cast<int>(kind)), std::make_shared<const FuncNode>(FuncNode{kind, arg}), 1});
  e.terms_.emplace(std::move(m), Rational(1));
  return e;
}

Expr Expr::from_terms(Terms terms) {
  Expr e;
  for (auto& [m, c] : terms)
    if (sgn(c) != 0) e.terms_.emplace(m, c);
  return e;
}

bool Expr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.factors.empty());
}

Rational Expr::constant_value() const {
  if (!is_constant()) throw Error("expression is not a constant");
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

bool Expr::is_polynomial() const {
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors)
      if (f.fn) return false;
  return true;
}

void Expr::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Expr& Expr::operator+=(const Expr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Expr& Expr::operator-=(const Expr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Expr operator*(const Expr& a, const Expr& b) {
  Expr r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(monomial_mul(ma, mb), ca * cb);
  return r;
}

Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }

Expr operator-(const Expr& a) {
  Expr r = a;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  int c = compare_expr(a, b);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

Expr Expr::pow(unsigned e) const {
  Expr result(1), base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

// ---------------------------------------------------------------- queries

ZeroTest zero_test(const Expr& f) {
  if (f.is_zero()) return ZeroTest::Zero;
  return f.is_polynomial() ? ZeroTest::NonZero : ZeroTest::Unknown;
}

Expr normalize(const Expr& f) { return f; }

namespace {

void collect_variables(const Expr& f, std::set<std::uint64_t>& out) {
  for (const auto& [m, c] : f.terms())
    for (const auto& fac : m.factors) {
      if (fac.fn)
        collect_variables(fac.fn->arg, out);
      else
        out.insert(fac.key);
    }
}

Expr func_derivative(const FuncNode& node) {
  switch (node.kind) {
    case FuncKind::Sin: return Expr::apply(FuncKind::Cos, node.arg);
    case FuncKind::Cos: return -Expr::apply(FuncKind::Sin, node.arg);
    case FuncKind::Exp: return Expr::apply(FuncKind::Exp, node.arg);
  }
  return Expr(0);
}

}  // namespace

std::set<std::uint64_t> variables(const Expr& f) {
  std::set<std::uint64_t> out;
  collect_variables(f, out);
  return out;
}

Expr apply_derivation(const Expr& f, const std::function<Expr(std::uint64_t)>& image) {
  Expr result;
  for (const auto& [m, c] : f.terms()) {
    for (std::size_t k = 0; k < m.factors.size(); ++k) {
      const Factor& fac = m.factors[k];
      Expr d = fac.fn ? func_derivative(*fac.fn) * apply_derivation(fac.fn->arg, image) : image(fac.key);
      if (d.is_zero()) continue;
      Monomial rest = m;
      if (fac.exp == 1)
        rest.factors.erase(rest.factors.begin() + static_cast<std::ptrdiff_t>(k));
      else
        rest.factors[k].exp -= 1;
      Rational coeff = c * fac.exp;
      for (const auto& [md, cd] : d.terms()) result.add_term(monomial_mul(rest, md), coeff * cd);
    }
  }
  return result;
}

Expr partial_key(const Expr& f, std::uint64_t key) {
  return apply_derivation(f, [key](std::uint64_t v) { return v == key ? Expr(1) : Expr(0); });
}

Expr partial(const Expr& f, const JetVar& v) { return partial_key(f, varkey::jet(v.fiber_index, v.index)); }

Expr partial_base(const Expr& f, std::size_t pos) { return partial_key(f, varkey::base(pos)); }

Expr total_derivative(const Expr& f, std::size_t pos) {
  if (pos >= kMaxBaseDim) throw CoordinateError("base index out of range");
  return apply_derivation(f, [pos](std::uint64_t v) {
    switch (varkey::kind(v)) {
      case varkey::Kind::Base: return varkey::slot(v) == pos ? Expr(1) : Expr(0);
      case varkey::Kind::Jet: return Expr::variable(varkey::jet_plus(v, pos));
      default: return Expr(0);
    }
  });
}

Expr total_derivative(const Expr& f, const MultiIndex& mi) {
  Expr r = f;
  for (std::size_t p = 0; p < mi.dim(); ++p)
    for (unsigned c = 0; c < mi.count(p); ++c) r = total_derivative(r, p);
  return r;
}

int jet_order(const Expr& f) {
  int ord = -1;
  for (auto key : variables(f))
    if (varkey::kind(key) == varkey::Kind::Jet) ord = std::max(ord, static_cast<int>(varkey::order(key)));
  return ord;
}

Expr substitute(const Expr& f, const std::map<std::uint64_t, Expr>& values) {
  Expr result;
  for (const auto& [m, c] : f.terms()) {
    Expr term(c);
    for (const auto& fac : m.factors) {
      Expr atom;
      if (fac.fn) {
        atom = Expr::apply(fac.fn->kind, substitute(fac.fn->arg, values));
      } else if (auto it = values.find(fac.key); it != values.end()) {
        atom = it->second;
      } else {
        atom = Expr::variable(fac.key);
      }
      term *= atom.pow(fac.exp);
    }
    result += term;
  }
  return result;
}

namespace {

Expr scale_jets(const Expr& f, const Expr& t) {
  std::map<std::uint64_t, Expr> values;
  for (auto key : variables(f))
    if (varkey::kind(key) == varkey::Kind::Jet) values.emplace(key, t * Expr::variable(key));
  return substitute(f, values);
}

}  // namespace

Expr substitute_scaling(const Expr& f, const Rational& t) { return scale_jets(f, Expr(t)); }
Expr substitute_scaling(const Expr& f) { return scale_jets(f, Expr::param()); }

Expr integrate_param_unit(const Expr& f) {
  const auto pkey = varkey::param();
  Expr result;
  for (const auto& [m, c] : f.terms()) {
    Monomial rest;
    unsigned e = 0;
    for (const auto& fac : m.factors) {
      if (fac.fn && variables(fac.fn->arg).count(pkey))
        throw UnsupportedError("scaling parameter occurs inside a transcendental function");
      if (!fac.fn && fac.key == pkey)
        e = fac.exp;
      else
        rest.factors.push_back(fac);
    }
    result.add_term(rest, c / Rational(e + 1));
  }
  return result;
}

unsigned jet_degree(const Expr& f) {
  unsigned d = 0;
  for (const auto& [m, c] : f.terms()) {
    unsigned md = 0;
    for (const auto& fac : m.factors) {
      if (fac.fn) throw UnsupportedError("jet degree of a non-polynomial expression");
      if (varkey::kind(fac.key) == varkey::Kind::Jet) md += fac.exp;
    }
    d = std::max(d, md);
  }
  return d;
}

unsigned total_degree(const Expr& f) {
  unsigned d = 0;
  for (const auto& [m, c] : f.terms()) {
    for (const auto& fac : m.factors)
      if (fac.fn) throw UnsupportedError("degree of a non-polynomial expression");
    d = std::max(d, m.degree());
  }
  return d;
}

// ---------------------------------------------------------------- printing

std::string variable_name(std::uint64_t key, const BundleSpec& b) {
  switch (varkey::kind(key)) {
    case varkey::Kind::Base: return b.base.at(varkey::slot(key));
    case varkey::Kind::Jet: {
      std::string s = b.fiber.at(varkey::slot(key));
      if (varkey::order(key) > 0) s += "_" + varkey::multi_index(key, b.n()).subscript(b);
      return s;
    }
    case varkey::Kind::Param: return "%s";
    case varkey::Kind::Func: break;
  }
  return "?";
}

namespace {

const char* func_name(FuncKind k) {
  switch (k) {
    case FuncKind::Sin: return "sin";
    case FuncKind::Cos: return "cos";
    case FuncKind::Exp: return "exp";
  }
  return "?";
}

std::string rational_text(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string factor_text(const Factor& f, const BundleSpec& b) {
  std::string s = f.fn ? std::string(func_name(f.fn->kind)) + "(" + to_string(f.fn->arg, b) + ")"
                       : variable_name(f.key, b);
  if (f.exp != 1) s += "^" + std::to_string(f.exp);
  return s;
}

std::string factor_latex(const Factor& f, const BundleSpec& b) {
  std::string s;
  if (f.fn) {
    s = std::string("\\") + func_name(f.fn->kind) + "\\left(" + to_latex(f.fn->arg, b) + "\\right)";
  } else if (varkey::kind(f.key) == varkey::Kind::Jet && varkey::order(f.key) > 0) {
    s = b.fiber.at(varkey::slot(f.key)) + "_{" + varkey::multi_index(f.key, b.n()).subscript(b) + "}";
  } else if (varkey::kind(f.key) == varkey::Kind::Param) {
    s = "s";
  } else {
    s = variable_name(f.key, b);
  }
  if (f.exp != 1) s += "^{" + std::to_string(f.exp) + "}";
  return s;
}

}  // namespace

std::string to_string(const Expr& f, const BundleSpec& b) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  // Highest degree first reads naturally.
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    if (first)
      out += sgn(c) < 0 ? "-" : "";
    else
      out += sgn(c) < 0 ? " - " : " + ";
    first = false;
    std::string body;
    if (m.factors.empty() || mag != 1) body = rational_text(mag);
    for (const auto& fac : m.factors) {
      if (!body.empty()) body += "*";
      body += factor_text(fac, b);
    }
    out += body;
  }
  return out;
}

std::string to_latex(const Expr& f, const BundleSpec& b) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    if (first)
      out += sgn(c) < 0 ? "-" : "";
    else
      out += sgn(c) < 0 ? " - " : " + ";
    first = false;
    std::string body;
    if (m.factors.empty() || mag != 1) {
      body = mag.get_den() == 1 ? mag.get_num().get_str()
                                : "\\frac{" + mag.get_num().get_str() + "}{" + mag.get_den().get_str() + "}";
    }
    for (const auto& fac : m.factors) {
      if (!body.empty()) body += " ";
      body += factor_latex(fac, b);
    }
    out += body;
  }
  return out;
}

}  // namespace varcomplex
