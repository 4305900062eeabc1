#include <algorithm>
#include <map>

#include "varcomplex/cli.hpp"

namespace varcomplex::cli {

namespace {

const std::vector<std::string> kTopLevel{"bundle",      "lagrangian", "source_form", "vector_field", "closed_form",
                                         "form",        "operator",   "truncation",  "options"};
const std::vector<std::string> kOperators{"d", "dH", "dV", "tau", "delta", "h0", "lie"};
const std::vector<std::string> kRows{"horizontal", "vertical", "variational", "exactness", "all"};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Re-throws grammar errors with the field path prefixed.
template <typename F>
auto in_field(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UnknownVariableError& e) {
    throw UnknownVariableError(e.name, e.line, e.column, path);
  } catch (const ParseError& e) {
    throw ParseError(e.detail, e.line, e.column, path);
  } catch (const SchemaError& e) {
    throw SchemaError(e.path.empty() ? path : path + (e.path[0] == '[' ? "" : ".") + e.path, e.detail);
  } catch (const CoordinateError& e) {
    throw SchemaError(path, e.what());
  }
}

std::string expect_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

long long expect_int(const Json& j, const std::string& path, long long lo, long long hi) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  const long long v = j.is_number_unsigned() ? static_cast<long long>(std::min<std::uint64_t>(
                                                   j.get<std::uint64_t>(), static_cast<std::uint64_t>(hi) + 1))
                                             : j.get<long long>();
  if (v < lo || v > hi)
    throw SchemaError(path, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

std::vector<std::string> name_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected a list of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(expect_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::map<std::size_t, Expr> component_map(const Json& j, const std::string& path, const BundlePtr& b) {
  if (!j.is_object()) throw SchemaError(path, "expected an object mapping fiber names to expressions");
  std::map<std::size_t, Expr> out;
  for (const auto& [name, val] : j.items()) {
    const int i = b->fiber_index(name);
    if (i < 0) throw SchemaError(path + "." + name, "unknown fiber variable '" + name + "'");
    const auto text = expect_string(val, path + "." + name);
    out[static_cast<std::size_t>(i)] = in_field(path + "." + name, [&] { return parse_expression(text, b); });
  }
  return out;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw SchemaError("", "empty problem document");
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("invalid JSON", line, col);
  }
  if (!doc.is_object()) throw SchemaError("", "expected a JSON object");
  if (doc.empty()) throw SchemaError("", "empty problem document");

  ProblemFile pf;
  for (const auto& [key, val] : doc.items()) {
    if (std::find(kTopLevel.begin(), kTopLevel.end(), key) == kTopLevel.end())
      throw SchemaError(key, "unknown field");
    pf.fields.insert(key);
  }

  if (doc.contains("bundle")) {
    const auto& jb = doc["bundle"];
    if (!jb.is_object() || !jb.contains("base") || !jb.contains("fiber"))
      throw SchemaError("bundle", "expected {\"base\": [...], \"fiber\": [...]}");
    for (const auto& [key, val] : jb.items())
      if (key != "base" && key != "fiber") throw SchemaError("bundle." + key, "unknown field");
    auto base = name_list(jb["base"], "bundle.base");
    auto fiber = name_list(jb["fiber"], "bundle.fiber");
    try {
      pf.bundle = make_bundle(std::move(base), std::move(fiber));
    } catch (const Error& e) {
      throw SchemaError("bundle", e.what());
    }
  } else {
    for (const char* needs : {"lagrangian", "source_form", "vector_field", "closed_form", "form", "truncation"})
      if (doc.contains(needs)) throw SchemaError("bundle", std::string("required by field '") + needs + "'");
  }
  const auto& b = pf.bundle;

  if (doc.contains("lagrangian")) {
    const auto t = expect_string(doc["lagrangian"], "lagrangian");
    pf.lagrangian = in_field("lagrangian", [&] { return parse_expression(t, b); });
  }
  if (doc.contains("source_form")) {
    SourceForm e(b);
    for (auto& [i, c] : component_map(doc["source_form"], "source_form", b)) e.set(i, c);
    pf.source_form = std::move(e);
  }
  if (doc.contains("vector_field"))
    pf.vector_field = EvolutionaryField(b, component_map(doc["vector_field"], "vector_field", b));
  if (doc.contains("closed_form")) {
    const auto t = expect_string(doc["closed_form"], "closed_form");
    pf.closed_form = in_field("closed_form", [&] { return parse_form(t, b); });
  }
  if (doc.contains("form")) {
    const auto t = expect_string(doc["form"], "form");
    pf.form = in_field("form", [&] { return parse_form(t, b); });
  }
  if (doc.contains("operator")) {
    const auto t = expect_string(doc["operator"], "operator");
    if (std::find(kOperators.begin(), kOperators.end(), t) == kOperators.end())
      throw SchemaError("operator", "unknown operator '" + t + "' (expected d, dH, dV, tau, delta, h0 or lie)");
    pf.op = t;
  }
  if (doc.contains("truncation")) {
    const auto& jt = doc["truncation"];
    if (!jt.is_object()) throw SchemaError("truncation", "expected an object");
    TruncationSpec spec;
    for (const auto& [key, val] : jt.items()) {
      const std::string path = "truncation." + key;
      if (key == "max_jet_order")
        spec.max_jet_order = static_cast<int>(expect_int(val, path, 0, 8));
      else if (key == "max_poly_degree")
        spec.max_poly_degree = static_cast<int>(expect_int(val, path, 0, 8));
      else if (key == "base_poly_degree")
        spec.base_poly_degree = static_cast<int>(expect_int(val, path, 0, 8));
      else
        throw SchemaError(path, "unknown field");
    }
    for (const char* req : {"max_jet_order", "max_poly_degree", "base_poly_degree"})
      if (!jt.contains(req)) throw SchemaError(std::string("truncation.") + req, "missing");
    pf.truncation = spec;
  }
  if (doc.contains("options")) {
    const auto& jo = doc["options"];
    if (!jo.is_object()) throw SchemaError("options", "expected an object");
    auto& o = pf.options;
    for (const auto& [key, val] : jo.items()) {
      const std::string path = "options." + key;
      if (key == "seed") {
        if (!val.is_number_unsigned()) throw SchemaError(path, "expected a non-negative integer");
        o.seed = val.get<std::uint64_t>();
      } else if (key == "cases") {
        o.cases = static_cast<std::size_t>(expect_int(val, path, 1, 1000000));
      } else if (key == "max_order") {
        o.max_order = static_cast<int>(expect_int(val, path, 0, 12));
      } else if (key == "max_degree") {
        o.max_degree = static_cast<int>(expect_int(val, path, 0, 12));
      } else if (key == "row") {
        const auto r = expect_string(val, path);
        if (std::find(kRows.begin(), kRows.end(), r) == kRows.end())
          throw SchemaError(path, "expected horizontal, vertical, variational, exactness or all");
        o.row = r;
      } else if (key == "k") {
        o.k = static_cast<std::size_t>(expect_int(val, path, 0, 4));
      } else if (key == "s") {
        o.s = static_cast<std::size_t>(expect_int(val, path, 0, static_cast<long long>(kMaxBaseDim)));
      } else if (key == "max_k") {
        o.max_k = static_cast<std::size_t>(expect_int(val, path, 0, 4));
      } else {
        throw SchemaError(path, "unknown option");
      }
    }
  }
  return pf;
}

Json problem_to_json(const ProblemFile& pf) {
  Json j = Json::object();
  if (pf.bundle) j["bundle"] = bundle_to_json(*pf.bundle);
  if (pf.lagrangian) j["lagrangian"] = to_string(*pf.lagrangian, *pf.bundle);
  if (pf.source_form) j["source_form"] = source_to_json(*pf.source_form);
  if (pf.vector_field) {
    Json v = Json::object();
    for (const auto& [i, c] : pf.vector_field->components) v[pf.bundle->fiber.at(i)] = to_string(c, *pf.bundle);
    j["vector_field"] = v;
  }
  if (pf.closed_form) j["closed_form"] = to_string(*pf.closed_form);
  if (pf.form) j["form"] = to_string(*pf.form);
  if (pf.op) j["operator"] = *pf.op;
  if (pf.truncation)
    j["truncation"] = Json{{"max_jet_order", pf.truncation->max_jet_order},
                           {"max_poly_degree", pf.truncation->max_poly_degree},
                           {"base_poly_degree", pf.truncation->base_poly_degree}};
  const auto& o = pf.options;
  Json jo = Json::object();
  if (o.seed) jo["seed"] = *o.seed;
  if (o.cases) jo["cases"] = *o.cases;
  if (o.max_order) jo["max_order"] = *o.max_order;
  if (o.max_degree) jo["max_degree"] = *o.max_degree;
  if (o.row) jo["row"] = *o.row;
  if (o.k) jo["k"] = *o.k;
  if (o.s) jo["s"] = *o.s;
  if (o.max_k) jo["max_k"] = *o.max_k;
  if (!jo.empty()) j["options"] = jo;
  return j;
}

namespace {

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> t{
      {"el", Command::El},           {"helmholtz", Command::Helmholtz}, {"trivial", Command::Trivial},
      {"reconstruct", Command::Reconstruct}, {"noether", Command::Noether}, {"split", Command::Split},
      {"apply", Command::Apply},     {"betti", Command::Betti},         {"props", Command::Props},
  };
  return t;
}

struct FieldRule {
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::vector<std::string> options;
};

FieldRule rule(Command c) {
  switch (c) {
    case Command::El: return {{"bundle", "lagrangian"}, {}, {}};
    case Command::Helmholtz: return {{"bundle", "source_form"}, {}, {}};
    case Command::Trivial: return {{"bundle", "lagrangian"}, {"closed_form"}, {"max_order", "max_degree"}};
    case Command::Reconstruct: return {{"bundle", "source_form"}, {}, {}};
    case Command::Noether: return {{"bundle", "lagrangian", "vector_field"}, {}, {}};
    case Command::Split: return {{"bundle", "lagrangian"}, {}, {}};
    case Command::Apply: return {{"bundle", "form", "operator"}, {"vector_field"}, {}};
    case Command::Betti: return {{"bundle", "truncation"}, {}, {"row", "k", "s", "max_k"}};
    case Command::Props: return {{}, {}, {"seed", "cases", "max_order", "max_degree"}};
  }
  return {};
}

}  // namespace

std::optional<Command> command_from_name(const std::string& name) {
  auto it = command_table().find(name);
  if (it == command_table().end()) return std::nullopt;
  return it->second;
}

std::string command_name(Command c) {
  for (const auto& [name, cmd] : command_table())
    if (cmd == c) return name;
  return "?";
}

void validate_for(Command c, const ProblemFile& pf) {
  const auto r = rule(c);
  for (const auto& f : r.required)
    if (!pf.fields.count(f)) throw SchemaError(f, "required by command '" + command_name(c) + "'");
  for (const auto& f : pf.fields) {
    if (f == "options") continue;
    const bool ok = std::find(r.required.begin(), r.required.end(), f) != r.required.end() ||
                    std::find(r.optional.begin(), r.optional.end(), f) != r.optional.end();
    if (!ok) throw SchemaError(f, "not used by command '" + command_name(c) + "'");
  }
  const auto& o = pf.options;
  const std::vector<std::pair<std::string, bool>> present{
      {"seed", o.seed.has_value()},       {"cases", o.cases.has_value()}, {"max_order", o.max_order.has_value()},
      {"max_degree", o.max_degree.has_value()}, {"row", o.row.has_value()}, {"k", o.k.has_value()},
      {"s", o.s.has_value()},             {"max_k", o.max_k.has_value()}};
  for (const auto& [name, has] : present)
    if (has && std::find(r.options.begin(), r.options.end(), name) == r.options.end())
      throw SchemaError("options." + name, "not used by command '" + command_name(c) + "'");
  if (c == Command::Apply && *pf.op == "lie" && !pf.vector_field)
    throw SchemaError("vector_field", "required by operator 'lie'");
  if (c == Command::Apply && *pf.op != "lie" && pf.vector_field)
    throw SchemaError("vector_field", "only used by operator 'lie'");
  if (c == Command::Betti && o.s && *o.s > pf.bundle->n())
    throw SchemaError("options.s", "exceeds the base dimension");
}

}  // namespace varcomplex::cli
