#include "varcomplex/forms.hpp"

#include <algorithm>

namespace varcomplex {

// ---------------------------------------------------------------- Generator

namespace {
constexpr int kKindShift = 60;
constexpr std::uint64_t kBodyMask = (std::uint64_t{1} << kKindShift) - 1;

std::uint64_t with_kind(std::uint64_t key, Generator::Kind k) {
  return (key & kBodyMask) | (static_cast<std::uint64_t>(k) << kKindShift);
}
}  // namespace

Generator Generator::dx(std::size_t pos) {
  if (pos >= kMaxBaseDim) throw CoordinateError("base index out of range");
  return Generator(varkey::base(pos));
}

Generator Generator::theta(std::size_t fiber, const MultiIndex& mi) {
  return Generator(with_kind(varkey::jet(fiber, mi), Kind::Theta));
}

Generator Generator::dy(std::size_t fiber, const MultiIndex& mi) {
  return Generator(with_kind(varkey::jet(fiber, mi), Kind::DY));
}

Generator::Kind Generator::kind() const { return static_cast<Kind>(key_ >> kKindShift); }
std::size_t Generator::slot() const { return varkey::slot(key_); }
MultiIndex Generator::multi_index(std::size_t dim) const { return varkey::multi_index(key_, dim); }
unsigned Generator::order() const { return varkey::order(key_); }

Generator Generator::plus(std::size_t pos) const {
  if (kind() == Kind::DX) throw Error("dx generators carry no multi-index");
  return Generator(with_kind(varkey::jet_plus(jet_key(), pos), kind()));
}

std::uint64_t Generator::jet_key() const {
  return (key_ & kBodyMask) | (static_cast<std::uint64_t>(varkey::Kind::Jet) << kKindShift);
}

// ---------------------------------------------------------------- words

int sort_word(Word& w) {
  int sign = 1;
  // Insertion sort; words are short.
  for (std::size_t i = 1; i < w.size(); ++i) {
    for (std::size_t j = i; j > 0 && w[j] < w[j - 1]; --j) {
      std::swap(w[j], w[j - 1]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1]) return 0;
  return sign;
}

std::size_t contact_degree(const Word& w) {
  return static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [](const Generator& g) { return g.kind() != Generator::Kind::DX; }));
}

std::size_t horizontal_degree(const Word& w) {
  return static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [](const Generator& g) { return g.kind() == Generator::Kind::DX; }));
}

namespace {

/// Merge two canonical words; returns sign (0 on a repeat).
int merge_words(const Word& a, const Word& b, Word& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  int sign = 1;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return 0;
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else {
      // b[j] jumps over the remaining a.size() - i generators.
      if ((a.size() - i) % 2 == 1) sign = -sign;
      out.push_back(b[j++]);
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return sign;
}

}  // namespace

// ---------------------------------------------------------------- Form

Form::Form(BundlePtr bundle, const Expr& f) : bundle_(std::move(bundle)) {
  if (!f.is_zero()) terms_.emplace(Word{}, f);
}

Form::Form(BundlePtr bundle, Word word, const Expr& coeff) : bundle_(std::move(bundle)) { add(word, coeff); }

Form Form::generator(BundlePtr bundle, Generator g) {
  const auto& b = *bundle;
  if (g.kind() == Generator::Kind::DX ? g.slot() >= b.n() : g.slot() >= b.m())
    throw CoordinateError("generator index out of range for bundle");
  Form f(std::move(bundle));
  f.terms_.emplace(Word{g}, Expr(1));
  return f;
}

bool Form::in_contact_basis() const {
  for (const auto& [w, c] : terms_)
    for (const auto& g : w)
      if (g.kind() == Generator::Kind::DY) return false;
  return true;
}

void Form::add_canonical(const Word& word, const Expr& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(word, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Form::add(const Word& generators, const Expr& coeff) {
  Word w = generators;
  int sign = sort_word(w);
  if (sign == 0) return;
  add_canonical(w, sign > 0 ? coeff : -coeff);
}

void Form::require_same_bundle(const Form& o) const {
  if (bundle_ == o.bundle_) return;
  if (!bundle_ || !o.bundle_ || !(*bundle_ == *o.bundle_)) throw BundleMismatch("forms live on different bundles");
}

Form& Form::operator+=(const Form& o) {
  if (!bundle_) bundle_ = o.bundle_;
  if (o.terms_.empty()) return *this;
  require_same_bundle(o);
  for (const auto& [w, c] : o.terms_) add_canonical(w, c);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (!bundle_) bundle_ = o.bundle_;
  if (o.terms_.empty()) return *this;
  require_same_bundle(o);
  for (const auto& [w, c] : o.terms_) add_canonical(w, -c);
  return *this;
}

Form operator-(const Form& a) {
  Form r(a.bundle_);
  for (const auto& [w, c] : a.terms_) r.terms_.emplace(w, -c);
  return r;
}

Form operator*(const Expr& f, const Form& a) {
  Form r(a.bundle_);
  if (f.is_zero()) return r;
  for (const auto& [w, c] : a.terms_) r.add_canonical(w, f * c);
  return r;
}

Expr Form::coefficient(const Word& word) const {
  auto it = terms_.find(word);
  return it == terms_.end() ? Expr(0) : it->second;
}

bool operator==(const Form& a, const Form& b) {
  if (a.terms_ != b.terms_) return false;
  if (a.terms_.empty()) return true;
  return a.bundle_ == b.bundle_ || *a.bundle_ == *b.bundle_;
}

Form wedge(const Form& a, const Form& b) {
  if (a.bundle() && b.bundle() && a.bundle() != b.bundle() && !(*a.bundle() == *b.bundle()))
    throw BundleMismatch("forms live on different bundles");
  Form r(a.bundle() ? a.bundle() : b.bundle());
  Word merged;
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      int sign = merge_words(wa, wb, merged);
      if (sign == 0) continue;
      Expr c = ca * cb;
      r.add_canonical(merged, sign > 0 ? c : -c);
    }
  return r;
}

// ---------------------------------------------------------------- degrees

std::set<std::pair<std::size_t, std::size_t>> bidegree(const Form& phi) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [w, c] : phi.terms()) out.emplace(contact_degree(w), horizontal_degree(w));
  return out;
}

bool is_homogeneous(const Form& phi, std::size_t k, std::size_t s) {
  for (const auto& [w, c] : phi.terms())
    if (contact_degree(w) != k || horizontal_degree(w) != s) return false;
  return true;
}

Form project_contact(const Form& phi, std::size_t k) {
  Form out(phi.bundle());
  for (const auto& [w, c] : phi.terms())
    if (contact_degree(w) == k) out.add_canonical(w, c);
  return out;
}

Form project_horizontal(const Form& phi, std::size_t s) {
  if (phi.bundle() && s > phi.spec().n())
    throw DegreeError("horizontal degree " + std::to_string(s) + " exceeds base dimension");
  Form out(phi.bundle());
  for (const auto& [w, c] : phi.terms())
    if (horizontal_degree(w) == s) out.add_canonical(w, c);
  return out;
}

// ---------------------------------------------------------------- basis change

namespace {

/// Replaces each generator by a form and multiplies out in word order.
template <typename Image>
Form substitute_generators(const Form& phi, Image&& image) {
  Form out(phi.bundle());
  for (const auto& [w, c] : phi.terms()) {
    Form acc(phi.bundle(), c);
    for (const auto& g : w) {
      acc = wedge(acc, image(g));
      if (acc.is_zero()) break;
    }
    out += acc;
  }
  return out;
}

/// sum_lambda y^i_{lambda+Lambda} dx^lambda
Form jet_shift_sum(const BundlePtr& b, const Generator& g) {
  Form s(b);
  for (std::size_t p = 0; p < b->n(); ++p) s.add({Generator::dx(p)}, Expr::variable(varkey::jet_plus(g.jet_key(), p)));
  return s;
}

}  // namespace

Form to_contact_basis(const Form& phi) {
  const auto& b = phi.bundle();
  return substitute_generators(phi, [&](const Generator& g) {
    Form img = Form::generator(b, g);
    if (g.kind() != Generator::Kind::DY) return img;
    const auto mi = g.multi_index(b->n());
    return Form::theta(b, g.slot(), mi) + jet_shift_sum(b, g);
  });
}

Form from_contact_basis(const Form& phi) {
  const auto& b = phi.bundle();
  return substitute_generators(phi, [&](const Generator& g) {
    Form img = Form::generator(b, g);
    if (g.kind() != Generator::Kind::Theta) return img;
    return Form::generator(b, Generator::dy(g.slot(), g.multi_index(b->n()))) - jet_shift_sum(b, g);
  });
}

Form horizontalize(const Form& phi) { return project_contact(to_contact_basis(phi), 0); }

Form exterior_d_dy_basis(const Form& phi) {
  const auto& b = phi.bundle();
  Form out(b);
  for (const auto& [w, c] : phi.terms()) {
    for (const auto& g : w)
      if (g.kind() == Generator::Kind::Theta) throw Error("exterior_d_dy_basis expects a dy-basis form");
    for (std::size_t p = 0; p < b->n(); ++p) {
      Word nw{Generator::dx(p)};
      nw.insert(nw.end(), w.begin(), w.end());
      out.add(nw, partial_base(c, p));
    }
    for (auto key : variables(c)) {
      if (varkey::kind(key) != varkey::Kind::Jet) continue;
      Word nw{Generator::dy(varkey::slot(key), varkey::multi_index(key, b->n()))};
      nw.insert(nw.end(), w.begin(), w.end());
      out.add(nw, partial_key(c, key));
    }
  }
  return out;
}

// ---------------------------------------------------------------- contractions

namespace {

Form contract_generator(const Form& phi, const Generator& g) {
  Form out(phi.bundle());
  for (const auto& [w, c] : phi.terms()) {
    auto it = std::find(w.begin(), w.end(), g);
    if (it == w.end()) continue;
    auto pos = static_cast<std::size_t>(it - w.begin());
    Word nw = w;
    nw.erase(nw.begin() + static_cast<std::ptrdiff_t>(pos));
    out.add_canonical(nw, pos % 2 == 0 ? c : -c);
  }
  return out;
}

}  // namespace

Form contract_theta(const Form& phi, std::size_t fiber, const MultiIndex& mi) {
  if (phi.bundle() && fiber >= phi.spec().m()) throw CoordinateError("fiber index out of range");
  return contract_generator(phi, Generator::theta(fiber, mi));
}

Form contract_dx(const Form& phi, std::size_t pos) {
  if (phi.bundle() && pos >= phi.spec().n()) throw CoordinateError("base index out of range");
  return contract_generator(phi, Generator::dx(pos));
}

// ---------------------------------------------------------------- total derivatives

Form total_derivative(const Form& phi, std::size_t pos) {
  if (phi.bundle() && pos >= phi.spec().n())
    throw CoordinateError("base index " + std::to_string(pos) + " out of range");
  Form out(phi.bundle());
  for (const auto& [w, c] : phi.terms()) {
    out.add_canonical(w, total_derivative(c, pos));
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j].kind() == Generator::Kind::DX) continue;
      Word nw = w;
      nw[j] = w[j].plus(pos);
      out.add(nw, c);
    }
  }
  return out;
}

Form total_derivative(const Form& phi, const MultiIndex& mi) {
  Form r = phi;
  for (std::size_t p = 0; p < mi.dim(); ++p)
    for (unsigned k = 0; k < mi.count(p); ++k) r = total_derivative(r, p);
  return r;
}

Form volume(const BundlePtr& b) {
  Word w;
  for (std::size_t p = 0; p < b->n(); ++p) w.push_back(Generator::dx(p));
  return Form(b, w, Expr(1));
}

Form volume_contracted(const BundlePtr& b, std::size_t pos) { return contract_dx(volume(b), pos); }

// ---------------------------------------------------------------- SourceForm

Expr SourceForm::component(std::size_t i) const {
  auto it = components.find(i);
  return it == components.end() ? Expr(0) : it->second;
}

void SourceForm::set(std::size_t i, const Expr& e) {
  if (bundle && i >= bundle->m()) throw CoordinateError("fiber index out of range");
  if (e.is_zero())
    components.erase(i);
  else
    components[i] = e;
}

Form SourceForm::to_form() const {
  Form f(bundle);
  for (const auto& [i, e] : components) {
    Word w{Generator::theta(i, MultiIndex(bundle->n()))};
    for (std::size_t p = 0; p < bundle->n(); ++p) w.push_back(Generator::dx(p));
    f.add(w, e);
  }
  return f;
}

SourceForm SourceForm::from_form(const Form& phi) {
  SourceForm out(phi.bundle());
  const std::size_t n = phi.spec().n();
  const int sign = n % 2 == 0 ? 1 : -1;  // omega ^ theta = (-1)^n theta ^ omega
  for (const auto& [w, c] : phi.terms()) {
    bool ok = w.size() == n + 1 && horizontal_degree(w) == n && w.back().kind() == Generator::Kind::Theta &&
              w.back().order() == 0;
    if (!ok) throw DegreeError("form is not a source form sum E_i theta^i ^ omega");
    out.components[w.back().slot()] = sign > 0 ? c : -c;
  }
  return out;
}

// ---------------------------------------------------------------- printing

std::string generator_text(const Generator& g, const BundleSpec& b) {
  switch (g.kind()) {
    case Generator::Kind::DX: return "d" + b.base.at(g.slot());
    case Generator::Kind::Theta: {
      std::string s = "th(" + b.fiber.at(g.slot());
      if (g.order() > 0) s += ";" + g.multi_index(b.n()).subscript(b);
      return s + ")";
    }
    case Generator::Kind::DY: {
      std::string s = "d" + b.fiber.at(g.slot());
      if (g.order() > 0) s += "_" + g.multi_index(b.n()).subscript(b);
      return s;
    }
  }
  return "?";
}

std::string generator_latex(const Generator& g, const BundleSpec& b) {
  switch (g.kind()) {
    case Generator::Kind::DX: return "d" + b.base.at(g.slot());
    case Generator::Kind::Theta: {
      std::string s = "\\theta^{" + b.fiber.at(g.slot()) + "}";
      if (g.order() > 0) s += "_{" + g.multi_index(b.n()).subscript(b) + "}";
      return s;
    }
    case Generator::Kind::DY: {
      std::string s = "d" + b.fiber.at(g.slot());
      if (g.order() > 0) s += "_{" + g.multi_index(b.n()).subscript(b) + "}";
      return s;
    }
  }
  return "?";
}

namespace {

std::string word_text(const Word& w, const BundleSpec& b, const char* sep, bool latex) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += sep;
    s += latex ? generator_latex(w[i], b) : generator_text(w[i], b);
  }
  return s;
}

void append_signed(std::string& out, std::string piece, bool first) {
  if (first) {
    out += piece;
  } else if (!piece.empty() && piece[0] == '-') {
    out += " - " + piece.substr(1);
  } else {
    out += " + " + piece;
  }
}

std::string term_text(const Expr& c, const std::string& word, bool latex, const BundleSpec& b) {
  if (word.empty()) return latex ? to_latex(c, b) : to_string(c, b);
  if (c.is_constant()) {
    Rational v = c.constant_value();
    if (v == 1) return word;
    if (v == -1) return "-" + word;
  }
  std::string cs = latex ? to_latex(c, b) : to_string(c, b);
  if (c.size() > 1) cs = latex ? "\\left(" + cs + "\\right)" : "(" + cs + ")";
  return latex ? cs + "\\," + word : cs + "*" + word;
}

}  // namespace

std::string to_string(const Form& phi) {
  if (phi.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : phi.terms()) {
    append_signed(out, term_text(c, word_text(w, phi.spec(), "^", false), false, phi.spec()), first);
    first = false;
  }
  return out;
}

std::string to_latex(const Form& phi) {
  if (phi.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : phi.terms()) {
    append_signed(out, term_text(c, word_text(w, phi.spec(), "\\wedge ", true), true, phi.spec()), first);
    first = false;
  }
  return out;
}

std::string to_string(const SourceForm& e) {
  if (e.is_zero()) return "0";
  std::string out;
  for (const auto& [i, c] : e.components) {
    if (!out.empty()) out += "; ";
    out += "E_" + e.bundle->fiber.at(i) + " = " + to_string(c, *e.bundle);
  }
  return out;
}

std::string to_latex(const SourceForm& e) {
  if (e.is_zero()) return "0";
  const auto& b = *e.bundle;
  Word omega;
  for (std::size_t p = 0; p < b.n(); ++p) omega.push_back(Generator::dx(p));
  std::string out;
  bool first = true;
  for (const auto& [i, c] : e.components) {
    std::string word = generator_latex(Generator::theta(i, MultiIndex(b.n())), b) + "\\wedge " +
                       word_text(omega, b, "\\wedge ", true);
    append_signed(out, term_text(c, word, true, b), first);
    first = false;
  }
  return out;
}

}  // namespace varcomplex
