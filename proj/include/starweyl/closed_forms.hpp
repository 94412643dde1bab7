#pragma once

#include <optional>
#include <vector>

#include "starweyl/errors.hpp"
#include "starweyl/ordering.hpp"
#include "starweyl/polynomial.hpp"

namespace starweyl {

// A (kappa, tau)-ordering of W_2 together with the numeric value of hbar.
struct W2 {
    cplx hbar{1.0, 0.0};
    cplx kappa{0.0, 0.0};
    cplx tau{0.0, 0.0};

    OrderingKey key() const { return OrderingKey::kappa_tau(kappa, tau); }
    cplx i_hbar() const { return cplx(0, 1) * hbar; }
    bool same_as(const W2& o) const { return hbar == o.hbar && kappa == o.kappa && tau == o.tau; }
};

enum class Limit { None, Vacuum, AntiVacuum };
enum class Side { Left, Right };

// prefactor(u,v) * amp * exp((alpha u^2 + 2 beta uv + gamma v^2 + lin_u u + lin_v v) / (i hbar))
//
// Elements of the uv-family c * e_*^{t 2uv/(i hbar)} remember (t, c) in family_t and
// family_c; the vacuum limits remember the multiplier c in family_c and set limit.
struct ExpElement {
    CPoly prefactor = CPoly::constant(2, cplx(1.0));
    cplx amp{1.0};
    cplx alpha{0.0}, beta{0.0}, gamma{0.0};
    cplx lin_u{0.0}, lin_v{0.0};
    W2 ord;
    Limit limit = Limit::None;
    std::optional<cplx> family_t;
    cplx family_c{1.0};

    cplx eval(cplx u, cplx v) const;
    bool is_zero() const { return prefactor.is_zero() || amp == cplx(0.0); }
    ExpElement scaled(cplx c) const;
};

struct ExpSum {
    std::vector<ExpElement> terms;

    cplx eval(cplx u, cplx v) const;
};

// Pole test for the denominator Delta of the uv-family.
bool below_pole_threshold(cplx delta, cplx t);

// e^z e^{s^2 K^{kk}/(4 i hbar)} e^{s u_k/(i hbar)}, k = 0 (u) or 1 (v).
ExpElement star_exp_linear(cplx s, int k, const W2& ord, cplx z = 0.0);

// e_*^{t 2uv/(i hbar)} in the (kappa, tau)-ordering. Throws SingularPointError on the
// singular locus.
ExpElement star_exp_quadratic(cplx t, const W2& ord);

// log of the amplitude and beta of star_exp_quadratic(t); alpha = tau beta^2. Stays finite
// where the amplitude itself under- or overflows.
struct UVParams {
    cplx log_amp{0.0};
    cplx beta{0.0};
};

UVParams uv_params(cplx t, const W2& ord);

// e_*^{z uv/(i hbar)}, the same family at t = z/2.
inline ExpElement uv_exp(cplx z, const W2& ord) { return star_exp_quadratic(z / 2.0, ord); }

// Moves a uv-family element to another (kappa, tau) with the same hbar.
ExpElement intertwine_exp(const ExpElement& e, const W2& to);

// p * E (left) or E * p (right); the result keeps the exponent of E.
ExpElement poly_star_exp(const CPoly& p, const ExpElement& e, Side side);

ExpElement vacuum(const W2& ord);
ExpElement antivacuum(const W2& ord);

// Group law of the uv-family including the vacuum limits.
ExpElement exp_group_mul(const ExpElement& a, const ExpElement& b);

// Product of two pure linear exponentials (no quadratic part, constant prefactors).
ExpElement linear_exp_mul(const ExpElement& a, const ExpElement& b);

// sin_* pi(z + uv/(i hbar)) and cos_* pi(z + uv/(i hbar)); DivergesError when
// t = +-i pi/2 lies on the singular locus (kappa = 0).
ExpSum star_sin(cplx z, const W2& ord);
ExpSum star_cos(cplx z, const W2& ord);

struct ThetaSum {
    ExpSum sum;
    bool convergence_warning = false;  // |q| >= 1 with q = e^{K^{kk}/(i hbar)}
};

ThetaSum theta_partial_sum(int N, int k, const W2& ord);

struct SingularLocus {
    bool empty = false;
    cplx base{0.0};
    cplx period{0.0, 3.14159265358979323846};

    // base + period * n for n in [lo, hi].
    std::vector<cplx> points(int lo, int hi) const;
    double distance(cplx t) const;
};

SingularLocus singular_locus(cplx kappa);

// Solution of d/dt f = H * f, f_0 = 1, with H the (kappa, tau)-expression of 2uv/(i hbar).
// The Gaussian ansatz reduces the star product to an ODE for (log-amplitude, alpha, beta),
// integrated by Picard iteration of the given order on steps no longer than max_step.
ExpElement evolution_series(cplx t, const W2& ord, int order = 12, double max_step = 0.05);

// The plain Taylor polynomial sum_{n<=order} t^n/n! H^{*n} (no stepping).
CPoly evolution_taylor(cplx t, const W2& ord, int order = 12);

// Bidifferential product of a polynomial with R exp(Q), where Q is quadratic in (u, v)
// with gradient (qu, qv). All polynomials share num_vars >= 2; variables beyond u, v are
// parameters. Returns the prefactor multiplying exp(Q).
CPoly gauss_star_poly(const CPoly& p, const CPoly& R, const CPoly& qu, const CPoly& qv,
                      const OrderingKey& ord, cplx hbar, Side side);

}  // namespace starweyl
