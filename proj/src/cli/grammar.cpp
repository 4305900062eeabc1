#include <cctype>

#include "varcomplex/cli.hpp"

namespace varcomplex::cli {

namespace {

std::string located(const std::string& field, std::size_t l, std::size_t c, const std::string& msg) {
  return (field.empty() ? "" : field + ": ") + "line " + std::to_string(l) + ", column " + std::to_string(c) +
         ": " + msg;
}

}  // namespace

ParseError::ParseError(const std::string& msg, std::size_t l, std::size_t c, const std::string& f)
    : UsageError(located(f, l, c, msg)), detail(msg), field(f), line(l), column(c) {}

UnknownVariableError::UnknownVariableError(const std::string& n, std::size_t l, std::size_t c, const std::string& f)
    : UsageError(located(f, l, c, "unknown variable '" + n + "'")), name(n), field(f), line(l), column(c) {}

SchemaError::SchemaError(const std::string& p, const std::string& msg)
    : UsageError((p.empty() ? std::string("document") : p) + ": " + msg), path(p), detail(msg) {}

namespace {

enum class Tok { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Semi, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1, column = 1;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const unsigned char ch = static_cast<unsigned char>(s[i]);
    if (std::isspace(ch)) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(ch)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') throw ParseError("decimal literals are not supported; write p/q", line, col);
      t.kind = Tok::Int;
      t.text = s.substr(i, j - i);
      advance(j - i);
    } else if (std::isalpha(ch)) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = s.substr(i, j - i);
      advance(j - i);
    } else {
      switch (ch) {
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        case '^': t.kind = Tok::Caret; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ';': t.kind = Tok::Semi; break;
        default: throw ParseError(std::string("unexpected character '") + s[i] + "'", line, col);
      }
      t.text = s.substr(i, 1);
      advance(1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

bool is_scalar(const Form& f) {
  for (const auto& [w, c] : f.terms())
    if (!w.empty()) return false;
  return true;
}

Expr scalar_value(const Form& f) { return f.coefficient(Word{}); }

class Parser {
 public:
  Parser(const std::string& text, BundlePtr b) : toks_(tokenize(text)), b_(std::move(b)) {}

  Form parse() {
    Form f = sum();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  BundlePtr b_;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.column);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    take();
  }

  Form sum() {
    Form acc = product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool minus = take().kind == Tok::Minus;
      Form rhs = product();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  Form product() {
    Form acc = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token op = take();
      const Token at = peek();
      Form rhs = unary();
      if (op.kind == Tok::Star) {
        acc = wedge(acc, rhs);
        continue;
      }
      if (!is_scalar(rhs) || !scalar_value(rhs).is_constant()) fail_at(at, "division by a non-constant");
      const Rational q = scalar_value(rhs).constant_value();
      if (q == 0) fail_at(at, "division by zero");
      acc = Expr(Rational(1) / q) * acc;
    }
    return acc;
  }

  Form unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return -unary();
    }
    if (peek().kind == Tok::Plus) {
      take();
      return unary();
    }
    return wedge_chain();
  }

  Form wedge_chain() {
    Form acc = primary();
    while (peek().kind == Tok::Caret) {
      take();
      if (peek().kind == Tok::Int) {
        const Token t = take();
        if (!is_scalar(acc)) fail_at(t, "integer power of a non-scalar form");
        const unsigned long e = std::stoul(t.text.size() > 6 ? std::string("1000000") : t.text);
        if (e > 1000) fail_at(t, "exponent too large");
        acc = Form(b_, scalar_value(acc).pow(static_cast<unsigned>(e)));
        continue;
      }
      if (is_scalar(acc)) fail("wedge requires a form generator on the left; use '*' for scalars");
      acc = wedge(acc, primary());
    }
    return acc;
  }

  MultiIndex subscript(const std::string& sub, const Token& at) const {
    MultiIndex mi(b_->n());
    std::size_t i = 0;
    while (i < sub.size()) {
      std::size_t best = 0;
      int best_pos = -1;
      for (std::size_t p = 0; p < b_->n(); ++p) {
        const auto& name = b_->base[p];
        if (name.size() > best && sub.compare(i, name.size(), name) == 0) {
          best = name.size();
          best_pos = static_cast<int>(p);
        }
      }
      if (best_pos < 0) fail_at(at, "subscript '" + sub + "' is not a string of base variable names");
      if (mi.count(static_cast<std::size_t>(best_pos)) >= kMaxIndexCount) fail_at(at, "jet order too large");
      mi = mi.plus(static_cast<std::size_t>(best_pos));
      i += best;
    }
    return mi;
  }

  Form primary() {
    const Token t = take();
    switch (t.kind) {
      case Tok::Int: return Form(b_, Expr(Rational(Integer(t.text))));
      case Tok::LParen: {
        Form f = sum();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident: return identifier(t);
      case Tok::End: fail_at(t, "unexpected end of input");
      default: fail_at(t, "unexpected '" + t.text + "'");
    }
  }

  Form identifier(const Token& t) {
    const std::string& id = t.text;
    if (peek().kind == Tok::LParen && (id == "sin" || id == "cos" || id == "exp")) {
      take();
      const Token at = peek();
      Form arg = sum();
      expect(Tok::RParen, "')'");
      if (!is_scalar(arg)) fail_at(at, "function argument must be scalar");
      const FuncKind k = id == "sin" ? FuncKind::Sin : id == "cos" ? FuncKind::Cos : FuncKind::Exp;
      return Form(b_, Expr::apply(k, scalar_value(arg)));
    }
    if (peek().kind == Tok::LParen && id == "th") {
      take();
      const Token ft = take();
      if (ft.kind != Tok::Ident) fail_at(ft, "expected a fiber name");
      const int fiber = b_->fiber_index(ft.text);
      if (fiber < 0) throw UnknownVariableError(ft.text, ft.line, ft.column);
      MultiIndex mi(b_->n());
      if (peek().kind == Tok::Semi) {
        take();
        const Token st = take();
        if (st.kind != Tok::Ident) fail_at(st, "expected a subscript");
        mi = subscript(st.text, st);
      }
      expect(Tok::RParen, "')'");
      return Form::theta(b_, static_cast<std::size_t>(fiber), mi);
    }

    const auto us = id.find('_');
    const std::string head = id.substr(0, us);
    const bool has_sub = us != std::string::npos;
    if (has_sub && us + 1 == id.size()) fail_at(t, "empty subscript");
    if (!has_sub) {
      if (int p = b_->base_index(head); p >= 0) return Form(b_, Expr::base(static_cast<std::size_t>(p)));
    }
    if (int i = b_->fiber_index(head); i >= 0) {
      MultiIndex mi = has_sub ? subscript(id.substr(us + 1), t) : MultiIndex(b_->n());
      return Form(b_, Expr::jet(static_cast<std::size_t>(i), mi));
    }
    if (head.size() > 1 && head[0] == 'd') {
      const std::string rest = head.substr(1);
      if (!has_sub) {
        if (int p = b_->base_index(rest); p >= 0) return Form::dx(b_, static_cast<std::size_t>(p));
      }
      if (int i = b_->fiber_index(rest); i >= 0) {
        MultiIndex mi = has_sub ? subscript(id.substr(us + 1), t) : MultiIndex(b_->n());
        return Form::generator(b_, Generator::dy(static_cast<std::size_t>(i), mi));
      }
    }
    throw UnknownVariableError(head, t.line, t.column);
  }
};

}  // namespace

Form parse_form_raw(const std::string& text, const BundlePtr& b) { return Parser(text, b).parse(); }

Form parse_form(const std::string& text, const BundlePtr& b) { return to_contact_basis(parse_form_raw(text, b)); }

Expr parse_expression(const std::string& text, const BundlePtr& b) {
  Form f = parse_form_raw(text, b);
  if (!is_scalar(f)) throw ParseError("expected a scalar expression, found a form", 1, 1);
  return scalar_value(f);
}

Json form_to_json(const Form& phi) {
  Json out = Json::array();
  for (const auto& [w, c] : phi.terms()) {
    Json word = Json::array();
    for (const auto& g : w) word.push_back(generator_text(g, phi.spec()));
    out.push_back(Json{{"coeff", to_string(c, phi.spec())}, {"word", std::move(word)}});
  }
  return out;
}

Form form_from_json(const Json& j, const BundlePtr& b) {
  if (!j.is_array()) throw SchemaError("", "a form must be a list of {coeff, word} records");
  Form out(b);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const auto& rec = j[t];
    const std::string at = "[" + std::to_string(t) + "]";
    if (!rec.is_object() || !rec.contains("coeff") || !rec.contains("word") || !rec["coeff"].is_string() ||
        !rec["word"].is_array())
      throw SchemaError(at, "expected {\"coeff\": string, \"word\": [string]}");
    Word w;
    for (const auto& g : rec["word"]) {
      if (!g.is_string()) throw SchemaError(at + ".word", "generators must be strings");
      Form gen = parse_form_raw(g.get<std::string>(), b);
      if (gen.size() != 1 || gen.terms().begin()->first.size() != 1 ||
          gen.terms().begin()->second != Expr(1))
        throw SchemaError(at + ".word", "'" + g.get<std::string>() + "' is not a single generator");
      w.push_back(gen.terms().begin()->first.front());
    }
    out.add(w, parse_expression(rec["coeff"].get<std::string>(), b));
  }
  return out;
}

Json source_to_json(const SourceForm& e) {
  Json out = Json::object();
  for (const auto& [i, c] : e.components) out[e.bundle->fiber.at(i)] = to_string(c, *e.bundle);
  return out;
}

SourceForm source_from_json(const Json& j, const BundlePtr& b) {
  if (!j.is_object()) throw SchemaError("", "expected an object mapping fiber names to expressions");
  SourceForm e(b);
  for (const auto& [name, val] : j.items()) {
    const int i = b->fiber_index(name);
    if (i < 0) throw SchemaError(name, "unknown fiber variable '" + name + "'");
    if (!val.is_string()) throw SchemaError(name, "expected an expression string");
    e.set(static_cast<std::size_t>(i), parse_expression(val.get<std::string>(), b));
  }
  return e;
}

Json bundle_to_json(const BundleSpec& b) { return Json{{"base", b.base}, {"fiber", b.fiber}}; }

}  // namespace varcomplex::cli
