#include "starweyl/closed_forms.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>

#include "starweyl/weyl_poly.hpp"

namespace starweyl {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx I(0.0, 1.0);

int max_exponent(const CPoly& p, int var)
{
    int d = 0;
    for (const auto& [m, c] : p.terms())
        d = std::max(d, static_cast<int>(m.e[static_cast<std::size_t>(var)]));
    return d;
}

CPoly lift(const CPoly& p, int n)
{
    CPoly r(n);
    for (const auto& [m, c] : p.terms())
        r.add_term(m, c);
    return r;
}

void require_same(const ExpElement& a, const ExpElement& b)
{
    if (!a.ord.same_as(b.ord))
        throw std::invalid_argument("elements are expressed in different orderings");
}

bool is_constant(const CPoly& p) { return p.degree() <= 0; }

cplx constant_term(const CPoly& p) { return p.coeff(Monomial{}); }

}  // namespace

cplx ExpElement::eval(cplx u, cplx v) const
{
    cplx q = (alpha * u * u + 2.0 * beta * u * v + gamma * v * v + lin_u * u + lin_v * v) / ord.i_hbar();
    return evaluate(prefactor, {u, v}) * amp * std::exp(q);
}

ExpElement ExpElement::scaled(cplx c) const
{
    ExpElement r = *this;
    r.amp *= c;
    r.family_c *= c;
    return r;
}

cplx ExpSum::eval(cplx u, cplx v) const
{
    cplx s = 0.0;
    for (const auto& t : terms)
        s += t.eval(u, v);
    return s;
}

bool below_pole_threshold(cplx delta, cplx t)
{
    return std::abs(delta) < 1e-10 * (1.0 + std::abs(std::exp(t)) + std::abs(std::exp(-t)));
}

ExpElement star_exp_linear(cplx s, int k, const W2& ord, cplx z)
{
    if (k != 0 && k != 1)
        throw std::invalid_argument("variable index must be 0 (u) or 1 (v)");
    cplx Kkk = k == 0 ? cplx(0.0) : ord.tau;
    ExpElement e;
    e.ord = ord;
    e.amp = std::exp(z + s * s * Kkk / (4.0 * ord.i_hbar()));
    (k == 0 ? e.lin_u : e.lin_v) = s;
    return e;
}

UVParams uv_params(cplx t, const W2& ord)
{
    // Delta = (e^t + e^-t) - kappa (e^t - e^-t), rescaled by e^{-|Re t|} so that large
    // real parts neither overflow nor lose the decaying amplitude.
    const cplx k = ord.kappa;
    const bool pos = t.real() >= 0;
    const cplx e2 = std::exp(pos ? -2.0 * t : 2.0 * t);
    cplx D, ratio;
    if (pos) {
        D = (1.0 - k) + (1.0 + k) * e2;
        ratio = (1.0 - e2) / D;
    } else {
        D = (1.0 - k) * e2 + (1.0 + k);
        ratio = (e2 - 1.0) / D;
    }
    if (std::abs(D) < 1e-10 * (std::abs(std::sqrt(e2)) + 1.0 + std::abs(e2)))
        throw SingularPointError("t lies on the singular locus of the uv-family",
                                 "(e^t+e^-t) - kappa(e^t-e^-t) must not vanish");
    return {std::log(2.0) + (pos ? -t : t) - std::log(D), ratio};
}

ExpElement star_exp_quadratic(cplx t, const W2& ord)
{
    const UVParams p = uv_params(t, ord);
    ExpElement e;
    e.ord = ord;
    e.amp = std::exp(p.log_amp);
    e.beta = p.beta;
    e.alpha = p.beta * p.beta * ord.tau;
    e.family_t = t;
    return e;
}

ExpElement intertwine_exp(const ExpElement& e, const W2& to)
{
    if (e.ord.hbar != to.hbar)
        throw std::invalid_argument("intertwining cannot change hbar");
    const double scale = 1.0 + std::abs(e.beta * e.beta * e.ord.tau);
    if (!is_constant(e.prefactor) || e.gamma != cplx(0.0) || e.lin_u != cplx(0.0) || e.lin_v != cplx(0.0) ||
        std::abs(e.alpha - e.beta * e.beta * e.ord.tau) > 1e-12 * scale)
        throw DomainError("element is not in the g e^{t 2uv/(i hbar)} family",
                          "element must be a multiple of a uv-family exponential");
    const cplx d = 1.0 - e.beta * (to.kappa - e.ord.kappa);
    if (std::abs(d) < 1e-10 * (1.0 + std::abs(e.beta * (to.kappa - e.ord.kappa))))
        throw PoleError("intertwiner denominator vanishes", "1 - t(kappa' - kappa) must not vanish");
    ExpElement r = e;
    r.ord = to;
    r.amp = e.amp * constant_term(e.prefactor) / d;
    r.prefactor = CPoly::constant(2, cplx(1.0));
    r.beta = e.beta / d;
    r.alpha = r.beta * r.beta * to.tau;
    return r;
}

CPoly gauss_star_poly(const CPoly& p, const CPoly& R, const CPoly& qu, const CPoly& qv, const OrderingKey& ord,
                      cplx hbar, Side side)
{
    const int n = p.num_vars();
    p.check_dim(R);
    std::array<std::array<cplx, 2>, 2> lam{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            lam[i][j] = ord.Lambda(i, j).to_complex() * (I * hbar / 2.0);

    // D_u^a D_v^b R with D_x = d/dx + (dQ/dx).
    std::map<std::pair<int, int>, CPoly> ecache;
    ecache.emplace(std::make_pair(0, 0), R);
    std::function<const CPoly&(int, int)> ederiv = [&](int a, int b) -> const CPoly& {
        auto key = std::make_pair(a, b);
        auto it = ecache.find(key);
        if (it != ecache.end())
            return it->second;
        CPoly r(n);
        if (b > 0) {
            const CPoly& prev = ederiv(a, b - 1);
            r = prev.derivative(1) + prev * qv;
        } else {
            const CPoly& prev = ederiv(a - 1, b);
            r = prev.derivative(0) + prev * qu;
        }
        return ecache.emplace(key, std::move(r)).first->second;
    };
    std::map<std::pair<int, int>, CPoly> pcache;
    auto pderiv = [&](int a, int b) -> const CPoly& {
        auto key = std::make_pair(a, b);
        auto it = pcache.find(key);
        if (it != pcache.end())
            return it->second;
        CPoly r = p;
        for (int i = 0; i < a; ++i)
            r = r.derivative(0);
        for (int i = 0; i < b; ++i)
            r = r.derivative(1);
        return pcache.emplace(key, std::move(r)).first->second;
    };

    const int du = max_exponent(p, 0), dv = max_exponent(p, 1);
    const int top = std::max(du, dv);
    CPoly out(n);
    if (p.is_zero())
        return out;
    for (int m00 = 0; m00 <= top; ++m00)
        for (int m01 = 0; m01 <= top; ++m01)
            for (int m10 = 0; m10 <= top; ++m10)
                for (int m11 = 0; m11 <= top; ++m11) {
                    int pu, pv, eu, ev;
                    if (side == Side::Left) {
                        pu = m00 + m01, pv = m10 + m11, eu = m00 + m10, ev = m01 + m11;
                    } else {
                        pu = m00 + m10, pv = m01 + m11, eu = m00 + m01, ev = m10 + m11;
                    }
                    if (pu > du || pv > dv)
                        continue;
                    cplx w = 1.0;
                    const std::array<int, 4> m{m00, m01, m10, m11};
                    for (int s = 0; s < 4; ++s) {
                        cplx l = lam[s / 2][s % 2];
                        for (int r = 1; r <= m[static_cast<std::size_t>(s)]; ++r)
                            w *= l / double(r);
                    }
                    if (w == cplx(0.0))
                        continue;
                    const CPoly& dp = pderiv(pu, pv);
                    if (dp.is_zero())
                        continue;
                    out += dp * ederiv(eu, ev) * w;
                }
    return out;
}

ExpElement poly_star_exp(const CPoly& p, const ExpElement& e, Side side)
{
    if (p.num_vars() != 2)
        throw std::invalid_argument("poly_star_exp expects a polynomial in (u, v)");
    const cplx ih = e.ord.i_hbar();
    CPoly qu(2), qv(2);
    qu.add_term(Monomial{{1, 0}}, 2.0 * e.alpha / ih);
    qu.add_term(Monomial{{0, 1}}, 2.0 * e.beta / ih);
    qu.add_term(Monomial{}, e.lin_u / ih);
    qv.add_term(Monomial{{1, 0}}, 2.0 * e.beta / ih);
    qv.add_term(Monomial{{0, 1}}, 2.0 * e.gamma / ih);
    qv.add_term(Monomial{}, e.lin_v / ih);
    ExpElement r = e;
    r.prefactor = gauss_star_poly(p, e.prefactor, qu, qv, e.ord.key(), e.ord.hbar, side);
    // A polynomial factor takes the element out of the pure family.
    if (!(is_constant(p) && !p.is_zero())) {
        r.family_t.reset();
        r.limit = Limit::None;
    } else {
        r.family_c *= constant_term(p);
    }
    return r;
}

ExpElement vacuum(const W2& ord)
{
    const cplx d = 1.0 + ord.kappa;
    if (std::abs(d) < 1e-14)
        throw DomainError("vacuum is undefined at kappa = -1", "kappa != -1");
    ExpElement e;
    e.ord = ord;
    e.amp = 2.0 / d;
    e.beta = -1.0 / d;
    e.alpha = ord.tau / (d * d);
    e.limit = Limit::Vacuum;
    return e;
}

ExpElement antivacuum(const W2& ord)
{
    const cplx d = 1.0 - ord.kappa;
    if (std::abs(d) < 1e-14)
        throw DomainError("antivacuum is undefined at kappa = 1", "kappa != 1");
    ExpElement e;
    e.ord = ord;
    e.amp = 2.0 / d;
    e.beta = 1.0 / d;
    e.alpha = ord.tau / (d * d);
    e.limit = Limit::AntiVacuum;
    return e;
}

ExpElement exp_group_mul(const ExpElement& a, const ExpElement& b)
{
    require_same(a, b);
    auto check = [](const ExpElement& e) {
        if (!e.family_t && e.limit == Limit::None)
            throw DomainError("element is not in the uv-family", "both factors must be uv-family exponentials");
    };
    check(a);
    check(b);
    const cplx c = a.family_c * b.family_c;
    const W2& ord = a.ord;
    if (a.family_t && b.family_t)
        return star_exp_quadratic(*a.family_t + *b.family_t, ord).scaled(c);
    if (a.limit != Limit::None && b.limit != Limit::None) {
        if (a.limit != b.limit)
            throw DivergesError("product of the vacuum and the antivacuum diverges",
                                "limits t -> -inf and t -> +inf cannot be combined");
        return (a.limit == Limit::Vacuum ? vacuum(ord) : antivacuum(ord)).scaled(c);
    }
    // One finite factor e^{tH} and one limit: e^{tH} * vac = e^{t} vac, e^{tH} * antivac = e^{-t} antivac.
    const cplx t = a.family_t ? *a.family_t : *b.family_t;
    const Limit lim = a.family_t ? b.limit : a.limit;
    if (lim == Limit::Vacuum)
        return vacuum(ord).scaled(c * std::exp(t));
    return antivacuum(ord).scaled(c * std::exp(-t));
}

ExpElement linear_exp_mul(const ExpElement& a, const ExpElement& b)
{
    require_same(a, b);
    for (const ExpElement* e : {&a, &b})
        if (e->alpha != cplx(0.0) || e->beta != cplx(0.0) || e->gamma != cplx(0.0) || !is_constant(e->prefactor))
            throw DomainError("linear_exp_mul needs pure linear exponentials", "no quadratic exponent");
    const OrderingKey key = a.ord.key();
    const std::array<cplx, 2> la{a.lin_u, a.lin_v}, lb{b.lin_u, b.lin_v};
    cplx form = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            form += la[i] * key.Lambda(i, j).to_complex() * lb[j];
    ExpElement r;
    r.ord = a.ord;
    r.amp = a.amp * b.amp * constant_term(a.prefactor) * constant_term(b.prefactor) *
            std::exp(form / (2.0 * a.ord.i_hbar()));
    r.lin_u = a.lin_u + b.lin_u;
    r.lin_v = a.lin_v + b.lin_v;
    return r;
}

namespace {

std::pair<ExpElement, ExpElement> half_pi_pair(const W2& ord)
{
    try {
        return {star_exp_quadratic(I * (kPi / 2.0), ord), star_exp_quadratic(-I * (kPi / 2.0), ord)};
    } catch (const SingularPointError&) {
        throw DivergesError("e_*^{+-i pi uv/(i hbar)} is singular in this ordering",
                            "t = +-i pi/2 must avoid the singular locus (kappa != 0)");
    }
}

}  // namespace

ExpSum star_sin(cplx z, const W2& ord)
{
    auto [ep, em] = half_pi_pair(ord);
    const cplx ph = std::exp(I * kPi * z);
    return {{ep.scaled(ph / (2.0 * I)), em.scaled(-1.0 / (ph * 2.0 * I))}};
}

ExpSum star_cos(cplx z, const W2& ord)
{
    auto [ep, em] = half_pi_pair(ord);
    const cplx ph = std::exp(I * kPi * z);
    return {{ep.scaled(ph / 2.0), em.scaled(1.0 / (ph * 2.0))}};
}

ThetaSum theta_partial_sum(int N, int k, const W2& ord)
{
    if (N < 0)
        throw std::invalid_argument("N must be non-negative");
    ThetaSum r;
    const cplx Kkk = k == 0 ? cplx(0.0) : ord.tau;
    r.convergence_warning = (Kkk / ord.i_hbar()).real() >= 0.0;
    for (int n = -N; n <= N; ++n)
        r.sum.terms.push_back(star_exp_linear(2.0 * n, k, ord));
    return r;
}

std::vector<cplx> SingularLocus::points(int lo, int hi) const
{
    std::vector<cplx> out;
    if (empty)
        return out;
    for (int n = lo; n <= hi; ++n)
        out.push_back(base + period * double(n));
    return out;
}

double SingularLocus::distance(cplx t) const
{
    if (empty)
        return INFINITY;
    const double n0 = std::round(((t - base) / period).real());
    double d = INFINITY;
    for (double n = n0 - 1; n <= n0 + 1; n += 1)
        d = std::min(d, std::abs(t - base - period * n));
    return d;
}

SingularLocus singular_locus(cplx kappa)
{
    SingularLocus s;
    if (kappa == cplx(1.0) || kappa == cplx(-1.0)) {
        s.empty = true;
        return s;
    }
    s.base = 0.5 * std::log((kappa + 1.0) / (kappa - 1.0));
    return s;
}

namespace {

using Series = std::vector<cplx>;

Series series_mul(const Series& a, const Series& b)
{
    Series r(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

// Coefficient polynomials c(a, b) of the reduced ODE, keyed by (u, v) exponent.
struct ReducedRhs {
    std::map<std::pair<int, int>, std::vector<std::pair<std::pair<int, int>, cplx>>> by_uv;
};

ReducedRhs reduce_evolution(const W2& ord)
{
    // H as a (kappa, tau)-expression: intertwine 2uv/(i hbar) from the Weyl ordering.
    const cplx ih = ord.i_hbar();
    CPoly h(2);
    h.add_term(Monomial{{1, 1}}, 2.0 / ih);
    h = intertwine(h, OrderingKey::weyl(), ord.key(), ord.hbar);

    // Variables (u, v, a, b) with Q = (a u^2 + 2 b uv)/(i hbar).
    const int n = 4;
    CPoly qu(n), qv(n);
    qu.add_term(Monomial{{1, 0, 1, 0}}, 2.0 / ih);
    qu.add_term(Monomial{{0, 1, 0, 1}}, 2.0 / ih);
    qv.add_term(Monomial{{1, 0, 0, 1}}, 2.0 / ih);
    CPoly P = gauss_star_poly(lift(h, n), CPoly::constant(n, 1.0), qu, qv, ord.key(), ord.hbar, Side::Left);

    ReducedRhs rhs;
    for (const auto& [m, c] : P.terms()) {
        auto uv = std::make_pair(int(m.e[0]), int(m.e[1]));
        if (uv != std::make_pair(0, 0) && uv != std::make_pair(2, 0) && uv != std::make_pair(1, 1) && std::abs(c) > 0)
            throw std::logic_error("Gaussian ansatz is not closed under H*");
        rhs.by_uv[uv].push_back({{int(m.e[2]), int(m.e[3])}, c});
    }
    return rhs;
}

Series eval_coeff_poly(const std::vector<std::pair<std::pair<int, int>, cplx>>& terms, const Series& a,
                       const Series& b)
{
    Series r(a.size(), 0.0);
    for (const auto& [e, c] : terms) {
        Series t(a.size(), 0.0);
        t[0] = c;
        for (int i = 0; i < e.first; ++i)
            t = series_mul(t, a);
        for (int i = 0; i < e.second; ++i)
            t = series_mul(t, b);
        for (std::size_t k = 0; k < r.size(); ++k)
            r[k] += t[k];
    }
    return r;
}

}  // namespace

ExpElement evolution_series(cplx t, const W2& ord, int order, double max_step)
{
    if (order < 1)
        throw std::invalid_argument("order must be positive");
    const ReducedRhs rhs = reduce_evolution(ord);
    const cplx ih = ord.i_hbar();
    auto get = [&](int i, int j) {
        auto it = rhs.by_uv.find({i, j});
        return it == rhs.by_uv.end() ? std::vector<std::pair<std::pair<int, int>, cplx>>{} : it->second;
    };
    const auto c00 = get(0, 0), c20 = get(2, 0), c11 = get(1, 1);

    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / max_step)));
    const cplx h = t / double(steps);
    const std::size_t len = static_cast<std::size_t>(order) + 1;
    cplx ell = 0.0, a = 0.0, b = 0.0;
    for (int s = 0; s < steps; ++s) {
        Series L(len, 0.0), A(len, 0.0), B(len, 0.0);
        L[0] = ell, A[0] = a, B[0] = b;
        // Each Picard sweep fixes one more Taylor coefficient.
        for (int it = 0; it < order; ++it) {
            Series dl = eval_coeff_poly(c00, A, B), da = eval_coeff_poly(c20, A, B), db = eval_coeff_poly(c11, A, B);
            for (std::size_t k = 0; k + 1 < len; ++k) {
                L[k + 1] = dl[k] / double(k + 1);
                A[k + 1] = ih * da[k] / double(k + 1);
                B[k + 1] = ih / 2.0 * db[k] / double(k + 1);
            }
        }
        auto horner = [&](const Series& x) {
            cplx r = 0.0;
            for (std::size_t k = len; k-- > 0;)
                r = r * h + x[k];
            return r;
        };
        ell = horner(L), a = horner(A), b = horner(B);
    }
    ExpElement e;
    e.ord = ord;
    e.amp = std::exp(ell);
    e.alpha = a;
    e.beta = b;
    e.family_t = t;
    return e;
}

CPoly evolution_taylor(cplx t, const W2& ord, int order)
{
    const OrderingKey key = ord.key();
    CPoly h(2);
    h.add_term(Monomial{{1, 1}}, 2.0 / ord.i_hbar());
    h = intertwine(h, OrderingKey::weyl(), key, ord.hbar);
    CPoly term = CPoly::constant(2, 1.0), sum = term;
    for (int n = 1; n <= order; ++n) {
        term = star_mul(h, term, key, ord.hbar) * (t / double(n));
        sum += term;
    }
    return sum;
}

}  // namespace starweyl
