#pragma once

// Command-line frontend: the expression/form grammar, problem documents,
// command dispatch and report rendering.
//
// Expression grammar
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*        '/' only by nonzero constants
//   unary   := ('-' | '+') unary | wedge
//   wedge   := primary ('^' primary)*           integer after a scalar: power
//   primary := INT | '(' sum ')' | sin|cos|exp '(' sum ')' | th '(' fiber [';' sub] ')'
//            | base | fiber | fiber '_' sub | 'd' base | 'd' fiber ['_' sub]
// Subscripts are strings of base names, read greedily and sorted.

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "varcomplex/cohomlab.hpp"
#include "varcomplex/inverse.hpp"
#include "varcomplex/symmetry.hpp"

namespace varcomplex::cli {

using Json = nlohmann::ordered_json;

/// Malformed input for a command. Maps to exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Syntax error. `field` names the document field holding the text, if any.
class ParseError : public UsageError {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column, const std::string& field = "");
  std::string detail, field;
  std::size_t line, column;
};

class UnknownVariableError : public UsageError {
 public:
  UnknownVariableError(const std::string& name, std::size_t line, std::size_t column,
                       const std::string& field = "");
  std::string name, field;
  std::size_t line, column;
};

class SchemaError : public UsageError {
 public:
  SchemaError(const std::string& path, const std::string& msg);
  std::string path, detail;
};

/// Parses a form (dy generators allowed) exactly as written.
Form parse_form_raw(const std::string& text, const BundlePtr& b);
/// Parses a form and rewrites it in the contact basis.
Form parse_form(const std::string& text, const BundlePtr& b);
/// Parses a scalar expression; rejects form generators.
Expr parse_expression(const std::string& text, const BundlePtr& b);

/// Canonical serialization: list of {coeff, word} records in term order.
Json form_to_json(const Form& phi);
Form form_from_json(const Json& j, const BundlePtr& b);
/// {fiber name: expression}.
Json source_to_json(const SourceForm& e);
SourceForm source_from_json(const Json& j, const BundlePtr& b);
Json bundle_to_json(const BundleSpec& b);

struct Options {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cases;
  std::optional<int> max_order;
  std::optional<int> max_degree;
  /// betti: horizontal | vertical | variational | exactness | all
  std::optional<std::string> row;
  std::optional<std::size_t> k, s, max_k;
};

struct ProblemFile {
  BundlePtr bundle;
  std::optional<Expr> lagrangian;
  std::optional<SourceForm> source_form;
  std::optional<EvolutionaryField> vector_field;
  std::optional<Form> closed_form;
  std::optional<Form> form;
  std::optional<std::string> op;
  std::optional<TruncationSpec> truncation;
  Options options;
  /// Top-level fields present in the document.
  std::set<std::string> fields;
};

/// Parses and resolves a problem document. Errors: ParseError (JSON or
/// expression syntax, with line/column), UnknownVariableError, SchemaError.
ProblemFile parse_problem(const std::string& text);
/// Canonical problem document (normalized expressions, fixed key order).
Json problem_to_json(const ProblemFile& pf);

enum class Command { El, Helmholtz, Trivial, Reconstruct, Noether, Split, Apply, Betti, Props };

std::optional<Command> command_from_name(const std::string& name);
std::string command_name(Command c);

/// Throws SchemaError if a required field is missing or a field is not
/// used by the command.
void validate_for(Command c, const ProblemFile& pf);

enum class Format { Text, Json, Latex, Csv };

struct Report {
  Json json;
  std::string text;
  std::string latex;
  std::string csv;  // betti only
  /// 0 success, 1 mathematical negative.
  int exit_code = 0;
};

Report run_command(Command c, const ProblemFile& pf, Execution mode = Execution::Parallel);

/// Rendered document, ending in a newline.
std::string render(const Report& r, Format f);

/// Full CLI entry point: parses argv, writes the report to out and
/// diagnostics to err, and returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace varcomplex::cli
