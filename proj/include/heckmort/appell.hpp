#pragma once

#include "heckmort/qseries.hpp"

namespace heckmort {

/// Parameters of the level-one sum
///   m(x, b, z) = (1/j(z;b)) sum_r (-1)^r b^C(r,2) z^r / (1 - b^{r-1} x z),
/// all three exact monomials with q_order(base) > 0. Neither z nor xz may be
/// an integral power of the base (those are poles).
struct AppellSpec {
    SignedMonomial x;
    SignedMonomial base;
    SignedMonomial z;
};

QSeries appell_m(const AppellSpec& spec, Exponent precision);

/// Expansion of Jbar_{0,1} m(x, q, -1) as a double sum over same-sign index
/// pairs, valid on the q-order window 0 < q_order(x) < 1:
///   sum sg2(v,s) q^{C(v+1,2)+vs} (-x)^s.
QSeries lemma_expansion_a(const SignedMonomial& x, Exponent precision);

/// The companion expansion on the window -1 < q_order(x) < 0:
///   sum sg2(v,s) q^{C(v+1,2)+(v+1)(s+1)} (-x)^s.
QSeries lemma_expansion_b(const SignedMonomial& x, Exponent precision);

}  // namespace heckmort
