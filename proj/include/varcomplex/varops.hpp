#pragma once

// Bicomplex operators in the contact basis.
//
//   d_H(phi) = dx^lambda ^ d_lambda(phi)
//   d_V(phi) = theta^i_Lambda ^ partial^Lambda_i(phi)
//   tau      = sum_{k>0} (1/k) taubar o h_k o h^n
//   taubar   = (-1)^|Lambda| theta^i ^ d_Lambda(partial^Lambda_i -| phi)
//   delta    = tau o d
//
// All operators require forms in the contact basis.

#include "varcomplex/forms.hpp"

namespace varcomplex {

Form exterior_d(const Form& phi);
Form d_H(const Form& phi);
Form d_V(const Form& phi);

Form tau_bar(const Form& phi);
Form tau(const Form& phi);

/// tau(d phi). Throws DegreeError unless every term has horizontal degree n.
Form delta(const Form& phi);
/// Helmholtz map on source forms.
Form delta(const SourceForm& e);

/// Density of a (0,n)-form L = density * omega. Throws DegreeError otherwise.
Expr lagrangian_density(const Form& L);
/// L = density * omega.
Form lagrangian_form(const BundlePtr& b, const Expr& density);

/// E_i = sum_Lambda (-1)^|Lambda| d_Lambda(partial^Lambda_i density).
SourceForm euler_lagrange(const Form& L);

struct VariationalSplit {
  SourceForm source;  // delta_1 L
  Form boundary;      // phi of bidegree (1, n-1)
};

/// Which base direction is peeled first off a contact generator theta_Sigma.
enum class PeelOrder { SmallestFirst, LargestFirst };

/// dL = delta_1(L) + d_H(phi), with phi built by integration by parts.
VariationalSplit first_variational_split(const Form& L, PeelOrder order = PeelOrder::SmallestFirst);

/// Rewrites a (1,n)-form sigma as source + d_H(boundary) by peeling derivatives
/// off the highest-order contact generator (smallest base index first by default).
VariationalSplit integrate_by_parts(const Form& sigma, PeelOrder order = PeelOrder::SmallestFirst);

}  // namespace varcomplex
