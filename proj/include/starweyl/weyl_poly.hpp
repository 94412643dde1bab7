#pragma once

#include <utility>
#include <vector>

#include "starweyl/ordering.hpp"
#include "starweyl/polynomial.hpp"

namespace starweyl {

// Lambda and the deformation parameter in a concrete coefficient ring.
template <class C>
struct StarRing {
    int n;
    std::vector<C> lambda;  // row-major n x n
    C i_hbar_half;          // i*hbar/2
};

StarRing<HbarPoly> exact_ring(const OrderingKey& ord);
StarRing<cplx> float_ring(const OrderingKey& ord, cplx hbar);

template <class C>
Polynomial<C> star_mul(const Polynomial<C>& f, const Polynomial<C>& g, const StarRing<C>& ring);

ExactPoly star_mul(const ExactPoly& f, const ExactPoly& g, const OrderingKey& ord);
CPoly star_mul(const CPoly& f, const CPoly& g, const OrderingKey& ord, cplx hbar);

ExactPoly commutator(const ExactPoly& f, const ExactPoly& g, const OrderingKey& ord);
CPoly commutator(const CPoly& f, const CPoly& g, const OrderingKey& ord, cplx hbar);

// p^{*k}; k = 0 gives 1.
template <class C>
Polynomial<C> star_pow(const Polynomial<C>& p, int k, const StarRing<C>& ring);

// exp((i hbar/4) sum (K'-K)^{ij} d_i d_j) applied to f. Requires equal skew parts.
ExactPoly intertwine(const ExactPoly& f, const OrderingKey& from, const OrderingKey& to);
CPoly intertwine(const CPoly& f, const OrderingKey& from, const OrderingKey& to, cplx hbar);

// Both sides of v*f(u*v) = f(v*u)*v for a univariate f (num_vars == 1) on W_2.
std::pair<ExactPoly, ExactPoly> bumping_apply(const ExactPoly& f, const OrderingKey& ord);

// Substitute a W_2 polynomial q into a univariate polynomial f using star powers.
template <class C>
Polynomial<C> star_compose(const Polynomial<C>& f, const Polynomial<C>& q, const StarRing<C>& ring);

}  // namespace starweyl
