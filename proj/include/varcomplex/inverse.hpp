#pragma once

// Inverse problem of the calculus of variations: Helmholtz check,
// variational triviality, d_H-antiderivatives by truncated exact solve, and
// Lagrangian reconstruction by the vertical (fiber-scaling) homotopy
//   L = int_0^1 y^i E_i(x, t y) dt * omega.
// The homotopy is valid for fibers star-shaped around the zero section; this
// is not checked.

#include <optional>
#include <variant>

#include "varcomplex/forms.hpp"
#include "varcomplex/parallel.hpp"

namespace varcomplex {

struct AntiderivativeConfig {
  int max_jet_order = 0;
  /// Total degree in base and jet variables.
  int max_poly_degree = 0;
};

/// sigma was required to be d_H-closed and is not.
class NotClosedError : public Error {
 public:
  NotClosedError(const std::string& what, Form dh) : Error(what), d_h(std::move(dh)) {}
  Form d_h;
};

class HelmholtzError : public Error {
 public:
  HelmholtzError(const std::string& what, Form cert) : Error(what), certificate(std::move(cert)) {}
  Form certificate;
};

struct NotExactInTruncation {
  Form residual;
  AntiderivativeConfig bounds;
};

struct HelmholtzResult {
  bool passes = false;
  /// Unknown when the certificate is nonzero but not a polynomial.
  ZeroTest verdict = ZeroTest::NonZero;
  Form certificate;
};

HelmholtzResult helmholtz_check(const SourceForm& e);

/// True iff euler_lagrange(L) is exactly zero.
bool is_variationally_trivial(const Form& L);

/// (jet order of sigma + 1, total degree of sigma + 1).
AntiderivativeConfig default_antiderivative_config(const Form& sigma);

using AntiderivativeResult = std::variant<Form, NotExactInTruncation>;

/// Finds xi with d_H xi = sigma by an exact linear solve over the truncated
/// basis of (k, s-1)-forms. Throws NotClosedError if d_H sigma != 0.
AntiderivativeResult horizontal_antiderivative(const Form& sigma,
                                               std::optional<AntiderivativeConfig> cfg = std::nullopt,
                                               Execution mode = Execution::Parallel);

/// Throws HelmholtzError when the Helmholtz condition fails and
/// UnsupportedError when some E_i is not polynomial in the jet variables.
Form reconstruct_lagrangian(const SourceForm& e);

struct TrivialityWitness {
  Form xi;
  Form closed_part;  // h_0 of the supplied closed form (zero if absent)
};

using TrivialityResult = std::variant<TrivialityWitness, NotExactInTruncation>;

/// L - h_0(phi0) = d_H xi. phi0 may be given in the dy or contact basis and
/// must be closed. Throws Error if L is not variationally trivial.
TrivialityResult triviality_witness(const Form& L, const std::optional<Form>& phi0 = std::nullopt,
                                    std::optional<AntiderivativeConfig> cfg = std::nullopt);

}  // namespace varcomplex
