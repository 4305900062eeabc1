#pragma once

#include "varcomplex/cli.hpp"

namespace testing_helpers {

using namespace varcomplex;

inline BundlePtr line(const char* fiber = "u") { return make_bundle({"x"}, {fiber}); }
inline BundlePtr plane() { return make_bundle({"t", "x"}, {"u"}); }

inline Expr E(const std::string& s, const BundlePtr& b) { return cli::parse_expression(s, b); }
inline Form F(const std::string& s, const BundlePtr& b) { return cli::parse_form(s, b); }
inline std::string str(const Expr& e, const BundlePtr& b) { return to_string(e, *b); }

inline MultiIndex mi(const BundlePtr& b, std::initializer_list<std::size_t> pos) { return MultiIndex(b->n(), pos); }

}  // namespace testing_helpers
