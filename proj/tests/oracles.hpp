#pragma once
// Reference implementations used only by the tests. They are deliberately naive
// and share no code paths with the library beyond the coefficient types.

#include <cmath>
#include <complex>
#include <vector>

#include "starweyl/ordering.hpp"
#include "starweyl/polynomial.hpp"

namespace oracle {

using starweyl::cplx;
using starweyl::ExactPoly;
using starweyl::GaussQ;
using starweyl::HbarPoly;
using starweyl::Monomial;

inline ExactPoly diff_seq(const ExactPoly& p, const std::vector<int>& idx)
{
    ExactPoly r = p;
    for (int i : idx)
        r = r.derivative(i);
    return r;
}

// The bidifferential series expanded literally: every ordered index sequence (i_1..i_k), (j_1..j_k).
inline ExactPoly star_bruteforce(const ExactPoly& f, const ExactPoly& g, const starweyl::OrderingKey& ord)
{
    const int n = f.num_vars();
    ExactPoly out(n);
    int kmax = std::min(f.degree(), g.degree());
    HbarPoly ih(GaussQ(0, 1), 1);  // i*hbar
    HbarPoly pref(1);
    long fact = 1;
    for (int k = 0; k <= kmax; ++k) {
        if (k > 0) {
            pref *= ih;
            fact *= 2L * k;
        }
        long total = 1;
        for (int s = 0; s < 2 * k; ++s)
            total *= n;
        for (long code = 0; code < total; ++code) {
            std::vector<int> I(static_cast<std::size_t>(k)), J(static_cast<std::size_t>(k));
            long c = code;
            for (int s = 0; s < k; ++s) {
                I[static_cast<std::size_t>(s)] = static_cast<int>(c % n);
                c /= n;
                J[static_cast<std::size_t>(s)] = static_cast<int>(c % n);
                c /= n;
            }
            GaussQ w(1);
            for (int s = 0; s < k; ++s)
                w *= ord.Lambda(I[static_cast<std::size_t>(s)], J[static_cast<std::size_t>(s)]);
            if (w.is_zero())
                continue;
            ExactPoly term = diff_seq(f, I) * diff_seq(g, J);
            HbarPoly scale = pref;
            scale *= GaussQ(mpq_class(1, static_cast<unsigned long>(fact))) * w;
            out += term * scale;
        }
    }
    return out;
}

// Power series J_0(x) = sum (-x^2/4)^k / (k!)^2, valid for complex x.
inline cplx bessel_j0(cplx x)
{
    cplx q = -x * x / 4.0, term = 1.0, sum = 1.0;
    for (int k = 1; k < 400; ++k) {
        term *= q / double(k * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

// Jacobi triple product for theta_3(z, q) = sum q^{n^2} e^{2inz}; zeta = e^{2iz}.
inline cplx theta3_product(cplx zeta, cplx q, int terms = 400)
{
    cplx prod = 1.0;
    cplx q2m = 1.0;
    for (int m = 1; m <= terms; ++m) {
        cplx q2m1 = q2m * q;  // q^{2m-1}
        q2m = q2m1 * q;       // q^{2m}
        prod *= (1.0 - q2m) * (1.0 + q2m1 * zeta) * (1.0 + q2m1 / zeta);
    }
    return prod;
}

}  // namespace oracle
