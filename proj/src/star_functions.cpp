#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "starweyl/quadrature.hpp"
#include "starweyl/weyl_poly.hpp"

namespace starweyl {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx I(0.0, 1.0);
constexpr int kTailTerms = 30;
constexpr int kSpectralTerms = 400;

cplx guarded_exp(cplx t) { return t.real() > 700 ? cplx(INFINITY, 0.0) : std::exp(t); }

// (e^x - 1)/x
cplx exprel(cplx x)
{
    if (std::abs(x) < 1e-3)
        return 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0 + x * x * x * x / 120.0;
    return (std::exp(x) - 1.0) / x;
}

ExpElement one_element(const W2& ord)
{
    ExpElement e;
    e.ord = ord;
    return e;
}

CPoly var(int i) { return CPoly::variable(2, i); }

CPoly cpow(const CPoly& p, int k, const W2& ord)
{
    CPoly r = CPoly::constant(2, 1.0);
    for (int i = 0; i < k; ++i)
        r = star_mul(r, p, ord.key(), ord.hbar);
    return r;
}

const std::vector<ExpElement>& levels(const W2& ord, Limit side, int count)
{
    static std::mutex mu;
    static std::map<std::array<double, 7>, std::vector<ExpElement>> cache;
    const std::array<double, 7> key{ord.hbar.real(), ord.hbar.imag(), ord.kappa.real(), ord.kappa.imag(),
                                    ord.tau.real(),  ord.tau.imag(),  side == Limit::Vacuum ? 0.0 : 1.0};
    std::lock_guard<std::mutex> lock(mu);
    auto& lv = cache[key];
    if (lv.empty())
        lv.push_back(side == Limit::Vacuum ? vacuum(ord) : antivacuum(ord));
    const cplx ih = ord.i_hbar();
    // P_{n+1} = (a/(n+1)) * P_n * b with (a, b) = (u/(i hbar), v) or (v/(-i hbar), u).
    const CPoly a = side == Limit::Vacuum ? var(0) * (1.0 / ih) : var(1) * (-1.0 / ih);
    const CPoly b = side == Limit::Vacuum ? var(1) : var(0);
    while (static_cast<int>(lv.size()) < count) {
        const double n1 = static_cast<double>(lv.size());
        ExpElement e = poly_star_exp(a * (1.0 / n1), lv.back(), Side::Left);
        lv.push_back(poly_star_exp(b, e, Side::Right));
    }
    return lv;
}

std::vector<cplx> taylor_one(int n)
{
    std::vector<cplx> w(static_cast<std::size_t>(n), 0.0);
    if (n > 0)
        w[0] = 1.0;
    return w;
}

std::vector<cplx> taylor_exp(cplx a, int n)
{
    std::vector<cplx> w(static_cast<std::size_t>(n));
    cplx c = 1.0;
    for (int j = 0; j < n; ++j) {
        w[static_cast<std::size_t>(j)] = c;
        c *= a / double(j + 1);
    }
    return w;
}

StarFunctionEvaluator line_pieces(const std::vector<std::pair<cplx, cplx>>& ends, LogWeight lw, const W2& ord,
                                  const QuadratureSpec& spec, Family fam = Family::uv())
{
    StarFunctionEvaluator ev(ord, spec);
    for (const auto& [coef, end] : ends)
        ev.add_piece({ContourSpec::ray_in(end), lw, fam}, coef);
    return ev;
}

}  // namespace

CPoly x_poly(const W2& ord)
{
    CPoly p(2);
    p.add_term(Monomial{{1, 1}}, 1.0 / ord.i_hbar());
    p.add_term(Monomial{}, ord.kappa / 2.0);
    return p;
}

void require_kappa_domain(const W2& ord)
{
    if (ord.kappa.imag() == 0.0 && std::abs(ord.kappa.real()) >= 1.0)
        throw DomainError("kappa lies on an excluded ray",
                          "kappa must avoid the real rays kappa >= 1 and kappa <= -1");
}

ExpElement vacuum_level(int n, const W2& ord, Limit side)
{
    if (n < 0 || side == Limit::None)
        throw std::invalid_argument("level needs n >= 0 and a vacuum side");
    return levels(ord, side, n + 1)[static_cast<std::size_t>(n)];
}

double vacuum_radius(const W2& ord, Limit side)
{
    const cplx num = 1.0 + ord.kappa, den = 1.0 - ord.kappa;
    const double r = side == Limit::Vacuum ? std::abs(num) / std::abs(den) : std::abs(den) / std::abs(num);
    return std::isnan(r) ? INFINITY : r;
}

std::vector<cplx> vacuum_series(cplx u, cplx v, const W2& ord, Limit side, int count)
{
    const bool vac = side == Limit::Vacuum;
    const cplx A = vac ? 1.0 + ord.kappa : 1.0 - ord.kappa;
    const cplx B = vac ? 1.0 - ord.kappa : 1.0 + ord.kappa;
    if (A == cplx(0.0))
        throw DomainError("vacuum expansion undefined", "1 +- kappa != 0");
    const auto n = static_cast<std::size_t>(count);
    std::vector<cplx> inv(n), beta(n), b2(n), Q(n), E(n), G(n);
    for (std::size_t i = 0; i < n; ++i)
        inv[i] = (i == 0 ? 1.0 / A : inv[i - 1] * (-B / A));
    const double sg = vac ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i)
        beta[i] = sg * ((i > 0 ? inv[i - 1] : cplx(0.0)) - inv[i]);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j <= i; ++j)
            s += beta[j] * beta[i - j];
        b2[i] = s;
    }
    const cplx ih = ord.i_hbar();
    for (std::size_t i = 0; i < n; ++i)
        Q[i] = (ord.tau * u * u * b2[i] + 2.0 * u * v * beta[i]) / ih;
    if (n == 0)
        return {};
    E[0] = std::exp(Q[0]);
    for (std::size_t i = 1; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t k = 1; k <= i; ++k)
            s += double(k) * Q[k] * E[i - k];
        E[i] = s / double(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j <= i; ++j)
            s += inv[j] * E[i - j];
        G[i] = 2.0 * s;
    }
    return G;
}

StarFunctionEvaluator half_lines(const HalfLineSpec& h, cplx z, const W2& ord, const QuadratureSpec& spec,
                                 Method method, int sign)
{
    require_kappa_domain(ord);
    const Family fam = Family::uv(sign >= 0 ? 1.0 : -1.0);
    const LogWeight lw = h.log_w;
    const LogWeight weight = [lw, z](cplx t) { return lw(t) + z * t; };
    StarFunctionEvaluator ev(ord, spec);
    for (const auto& e : h.ends)
        if (e.full)
            ev.add_piece({ContourSpec::ray_out(e.end), weight, fam}, e.coef);
    const bool direct = method == Method::Direct || (method == Method::Auto && z.real() > -0.25);
    if (direct) {
        if (z.real() <= -0.5)
            throw DomainError("half-line integral diverges for Re z <= -1/2", "Re z > -1/2");
        for (const auto& e : h.ends)
            ev.add_piece({ContourSpec::ray_in(e.end), weight, fam}, e.coef);
        return ev;
    }
    // Finite segments [t1, end] plus the termwise integrals of the vacuum expansion
    //   w(e^t) e^{zt} e_*^{tX} = sum_N c_N e^{(z+N+1/2)t},  c_N = sum_{j+n=N} w_j P_n,
    // over (-inf, t1], valid while |e^t| stays inside both radii.
    const Limit side = sign >= 0 ? Limit::Vacuum : Limit::AntiVacuum;
    const double R = std::min({vacuum_radius(ord, side), h.w_radius, std::exp(3.0)});
    double t1 = std::log(R) - 3.0;
    for (const auto& e : h.ends)
        t1 = std::min(t1, e.end.real() - 1.0);
    for (const auto& e : h.ends)
        ev.add_piece({ContourSpec::segment(cplx(t1, e.end.imag()), e.end), weight, fam}, e.coef);
    cplx C = 0.0;
    double Cabs = 0.0;
    for (const auto& e : h.ends) {
        C += e.coef;
        Cabs += std::abs(e.coef);
    }
    const bool removable = std::abs(C) < 1e-14 * Cabs;
    auto g = [&](cplx s) {
        cplx r = 0.0;
        // The exprel form drops the cancelling 1/s parts; it is only used near s = 0 since the
        // coefficients here are tiny while P_n grows geometrically.
        if (removable && std::abs(s) < 1e-2) {
            for (const auto& e : h.ends) {
                const cplx a(t1, e.end.imag());
                r += e.coef * a * exprel(s * a);
            }
            return r;
        }
        if (std::abs(s) < 1e-12)
            throw SingularPointError("z + n + 1/2 = 0 for some n >= 0",
                                     "z must avoid -(N + 1/2) for the half-line integral");
        for (const auto& e : h.ends)
            r += e.coef * std::exp(s * cplx(t1, e.end.imag())) / s;
        return r;
    };
    const auto w = h.w_taylor(kTailTerms);
    const auto& P = levels(ord, side, kTailTerms);
    for (int n = 0; n < kTailTerms; ++n) {
        cplx b = 0.0;
        for (int j = 0; j + n < kTailTerms; ++j)
            b += w[static_cast<std::size_t>(j)] * g(z + double(j + n) + 0.5);
        ev.add_closed(P[static_cast<std::size_t>(n)], b);
    }
    return ev;
}

StarFunctionEvaluator inverse_plus(cplx z, const W2& ord, const QuadratureSpec& spec, Method method)
{
    if (method != Method::Tail && z.real() <= -0.5)
        throw DomainError("(z+X)^{-1}_+ needs Re z > -1/2", "Re z > -1/2 for the integral over (-inf, 0]");
    HalfLineSpec h;
    h.ends = {{1.0, 0.0}};
    h.log_w = [](cplx) { return cplx(0.0); };
    h.w_taylor = taylor_one;
    return half_lines(h, z, ord, spec, method == Method::Auto ? Method::Direct : method);
}

StarFunctionEvaluator inverse_plus_times_factor(cplx z, const W2& ord, const QuadratureSpec& spec)
{
    require_kappa_domain(ord);
    if (z.real() < -0.5)
        throw DomainError("(z+X) * (z+X)^{-1}_+ needs Re z >= -1/2", "Re z >= -1/2");
    StarFunctionEvaluator ev(ord, spec);
    ev.add_piece({ContourSpec::ray_in(0.0), [z](cplx t) { return z * t; }, Family::uv()});
    return ev.left_mul(x_poly(ord) + CPoly::constant(2, z));
}

StarFunctionEvaluator inverse_minus(cplx z, const W2& ord, const QuadratureSpec& spec)
{
    require_kappa_domain(ord);
    if (z.real() >= 0.5)
        throw DomainError("(z+X)^{-1}_- needs Re z < 1/2", "Re z < 1/2 for the integral over [0, inf)");
    StarFunctionEvaluator ev(ord, spec);
    ev.add_piece({ContourSpec::ray_out(0.0), [z](cplx t) { return z * t; }, Family::uv()}, -1.0);
    return ev;
}

LinearInverses linear_inverse(cplx z, const W2& ord, const QuadratureSpec& spec)
{
    if (ord.tau.imag() >= 0)
        throw DomainError("linear inverses need Im tau < 0", "Im tau < 0");
    if ((ord.tau / ord.i_hbar()).real() >= 0)
        throw DomainError("e^{t^2 tau/(4 i hbar)} does not decay", "Re(tau/(i hbar)) < 0");
    const LogWeight lw = [z](cplx t) { return z * t; };
    LinearInverses r{StarFunctionEvaluator(ord, spec), StarFunctionEvaluator(ord, spec)};
    r.plus.add_piece({ContourSpec::ray_in(0.0), lw, Family::linear(1)});
    r.minus.add_piece({ContourSpec::ray_out(0.0), lw, Family::linear(1)}, -1.0);
    return r;
}

StarFunctionEvaluator star_delta(const W2& ord, const QuadratureSpec& spec)
{
    require_kappa_domain(ord);
    StarFunctionEvaluator ev(ord, spec);
    const LogWeight zero = [](cplx) { return cplx(0.0); };
    ev.add_piece({ContourSpec::ray_in(0.0), zero, Family::uv()});
    ev.add_piece({ContourSpec::ray_out(0.0), zero, Family::uv()});
    return ev;
}

LeftRightInverses left_right_inverses(const W2& ord, const QuadratureSpec& spec)
{
    require_kappa_domain(ord);
    const cplx ih = ord.i_hbar();
    // v*u = i hbar (X + 1/2), u*v = i hbar (X - 1/2)
    auto vu_inv = x_inverse_plus(0.5).scaled(1.0 / ih).evaluator(ord, spec);
    auto uv_inv = x_inverse_minus(-0.5).scaled(1.0 / ih).evaluator(ord, spec);
    return {vu_inv.left_mul(var(0)), uv_inv.left_mul(var(1))};
}

StarFunctionEvaluator continue_inverse(cplx z, const W2& ord, const QuadratureSpec& spec, int min_steps)
{
    require_kappa_domain(ord);
    for (int n = 0; n <= static_cast<int>(std::ceil(-z.real())) + 1; ++n)
        if (std::abs(z + double(n) + 0.5) < 1e-12)
            throw SingularPointError("z lies in -(N + 1/2)", "(z+X)^{-1}_+ is singular at z = -(n + 1/2)");
    int k = std::max(0, min_steps);
    while ((z + double(k)).real() <= 0.25)
        ++k;
    if (k == 0)
        return inverse_plus(z, ord, spec);
    // (z+X)^{-1} = sum_{n<k} P_n/(z+n+1/2) + u^k * [Q_k(X) (z+k+X)^{-1}] * v^k,
    // Q_k = prod_{i=1..k} (i hbar (X + i - 1/2))^{-1}_+, one v-circ conjugation per step.
    const cplx ih = ord.i_hbar();
    XFunction h = x_inverse_plus(z + double(k));
    for (int i = 1; i <= k; ++i)
        h = x_inverse_plus(double(i) - 0.5).scaled(1.0 / ih) * h;
    StarFunctionEvaluator ev = h.evaluator(ord, spec).left_mul(cpow(var(0), k, ord)).right_mul(cpow(var(1), k, ord));
    for (int n = 0; n < k; ++n)
        ev.add_closed(vacuum_level(n, ord), 1.0 / (z + double(n) + 0.5));
    return ev;
}

ExpSum defect_projection(int n, const W2& ord)
{
    if (n < 0)
        throw std::invalid_argument("n must be non-negative");
    ExpSum s;
    s.terms.push_back(one_element(ord));
    s.terms.push_back(vacuum_level(n, ord).scaled(-1.0));
    return s;
}

StarFunctionEvaluator star_gamma(cplx z, const W2& ord, const QuadratureSpec& spec, int sign, Method method)
{
    HalfLineSpec h;
    h.ends = {{1.0, 0.0, true}};
    h.log_w = [](cplx t) { return -guarded_exp(t); };
    h.w_taylor = [](int n) { return taylor_exp(-1.0, n); };
    return half_lines(h, z, ord, spec, method, sign);
}

StarFunctionEvaluator star_beta(cplx z, cplx y, const W2& ord, const QuadratureSpec& spec, int sign)
{
    if (z.real() <= -0.5)
        throw DomainError("B_* needs Re z > -1/2", "Re z > -1/2");
    if (y.real() <= 0)
        throw DomainError("B_* needs Re y > 0", "Re y > 0");
    HalfLineSpec h;
    h.ends = {{1.0, 0.0}};
    h.log_w = [y](cplx t) { return (y - 1.0) * std::log(-std::expm1(t.real())); };
    h.w_radius = 1.0;
    h.w_taylor = [y](int n) {
        std::vector<cplx> w(static_cast<std::size_t>(n));
        cplx c = 1.0;
        for (int j = 0; j < n; ++j) {
            w[static_cast<std::size_t>(j)] = c;
            c *= (double(j) + 1.0 - y) / double(j + 1);
        }
        return w;
    };
    return half_lines(h, z, ord, spec, Method::Direct, sign);
}

namespace {

// sum_n f(x_n) P_n over the X-eigenbasis: x_n = z + n + 1/2 on the vacuum side (r > 1),
// x_n = z - n - 1/2 on the antivacuum side (r < 1).
StarFunctionEvaluator spectral_sum(cplx z, const std::function<cplx(cplx)>& log_f, const W2& ord)
{
    const double r = vacuum_radius(ord);
    if (std::abs(r - 1.0) < 1e-12)
        throw DomainError("eigen-expansion needs |(kappa+1)/(kappa-1)| != 1", "|(kappa+1)/(kappa-1)| != 1");
    const Limit side = r > 1 ? Limit::Vacuum : Limit::AntiVacuum;
    std::vector<cplx> logf(kSpectralTerms);
    for (int n = 0; n < kSpectralTerms; ++n)
        logf[static_cast<std::size_t>(n)] = log_f(side == Limit::Vacuum ? z + double(n) + 0.5 : z - double(n) - 0.5);
    StarFunctionEvaluator ev(ord, {});
    ev.add_custom([logf, side, ord](cplx u, cplx v) {
        const auto P = vacuum_series(u, v, ord, side, kSpectralTerms);
        std::vector<cplx> terms;
        double mag = 0.0;
        for (std::size_t n = 0; n < P.size(); ++n) {
            if (P[n] == cplx(0.0) || std::isinf(logf[n].real()))
                continue;
            const cplx t = std::exp(logf[n] + std::log(P[n]));
            terms.push_back(t);
            mag += std::abs(t);
        }
        return Estimate{pairwise_sum(terms), 1e-15 * mag};
    });
    return ev;
}

}  // namespace

StarFunctionEvaluator gamma_beta_product(cplx z, cplx y, const W2& ord, const QuadratureSpec& spec)
{
    if (z.real() <= -0.5)
        throw DomainError("B_* needs Re z > -1/2", "Re z > -1/2");
    if (y.real() <= 0)
        throw DomainError("B_* needs Re y > 0", "Re y > 0");
    // Gamma_*(y+z+X) * B_*(z+X, y) = int e^{zr} W(r) e_*^{rX} dr with
    //   W(r) = int_{-inf}^0 exp(-e^{r-t}) e^{y(r-t)} (1 - e^t)^{y-1} dt.
    const QuadratureSpec inner = spec;
    const LogWeight lw = [z, y, inner](cplx r) {
        const double rr = r.real();
        const Estimate w = integrate(
            [rr, y](cplx t) {
                const double tt = t.real();
                const double e = std::exp(rr - tt);
                if (e > 700 || tt >= 0)
                    return cplx(0.0);
                return std::exp(-e + y * (rr - tt) + (y - 1.0) * std::log(-std::expm1(tt)));
            },
            ContourSpec::ray_in(0.0), inner);
        if (w.value == cplx(0.0))
            return cplx(-INFINITY, 0.0);
        return std::log(w.value) + z * r;
    };
    StarFunctionEvaluator ev(ord, spec);
    ev.add_piece({ContourSpec::ray_in(0.0), lw, Family::uv()});
    ev.add_piece({ContourSpec::ray_out(0.0), lw, Family::uv()});
    return ev;
}

StarFunctionEvaluator product_sin(cplx z, int N, const W2& ord)
{
    if (N < 0)
        throw std::invalid_argument("N must be non-negative");
    return spectral_sum(
        z,
        [N](cplx x) {
            cplx l = std::log(kPi * x);
            for (int k = 1; k <= N; ++k)
                l += std::log(1.0 - x * x / double(k * k));
            return l;
        },
        ord);
}

StarFunctionEvaluator product_reciprocal_gamma(cplx z, int N, const W2& ord)
{
    if (N < 0)
        throw std::invalid_argument("N must be non-negative");
    const double g = euler_gamma();
    return spectral_sum(
        z,
        [N, g](cplx x) {
            cplx l = std::log(kPi) - g * x;
            for (int k = 1; k <= N; ++k)
                l += std::log(1.0 - x / double(k)) + x / double(k);
            return l;
        },
        ord);
}

namespace {

StarFunctionEvaluator richardson(const std::function<StarFunctionEvaluator(int)>& at, int N, const W2& ord)
{
    if (N < 4)
        throw std::invalid_argument("extrapolation needs N >= 4");
    StarFunctionEvaluator ev(ord, {});
    ev.add(at(N), 8.0 / 3.0);
    ev.add(at(N / 2), -2.0);
    ev.add(at(N / 4), 1.0 / 3.0);
    return ev;
}

}  // namespace

StarFunctionEvaluator product_sin_extrapolated(cplx z, int N, const W2& ord)
{
    return richardson([&](int n) { return product_sin(z, n, ord); }, N, ord);
}

StarFunctionEvaluator product_reciprocal_gamma_extrapolated(cplx z, int N, const W2& ord)
{
    return richardson([&](int n) { return product_reciprocal_gamma(z, n, ord); }, N, ord);
}

double euler_gamma()
{
    // Euler-Maclaurin at n = 20: H_n - log n - 1/(2n) + sum_k B_{2k}/(2k n^{2k}).
    const double n = 20.0;
    double H = 0.0;
    for (int k = 20; k >= 1; --k)
        H += 1.0 / k;
    const double n2 = 1.0 / (n * n);
    const double corr = n2 / 12.0 - n2 * n2 / 120.0 + n2 * n2 * n2 / 252.0 - n2 * n2 * n2 * n2 / 240.0;
    return H - std::log(n) - 1.0 / (2.0 * n) + corr;
}

StarFunctionEvaluator product_gamma(cplx z, int N, const W2& ord, const QuadratureSpec& spec)
{
    if (N < 0)
        throw std::invalid_argument("N must be non-negative");
    // e^{sigma x} N!/(x (x+1) ... (x+N)) = int_{-inf}^{sigma} e^{xt} (1 - e^{t - sigma})^N dt,
    // sigma = H_N - gamma.
    double H = 0.0;
    for (int k = N; k >= 1; --k)
        H += 1.0 / k;
    const double sigma = H - euler_gamma();
    HalfLineSpec h;
    h.ends = {{1.0, sigma}};
    h.log_w = [N, sigma](cplx t) {
        if (N == 0)
            return cplx(0.0);
        return cplx(double(N) * std::log(-std::expm1(t.real() - sigma)), 0.0);
    };
    h.w_taylor = [N, sigma](int n) {
        std::vector<cplx> w(static_cast<std::size_t>(n), 0.0);
        double c = 1.0;
        for (int j = 0; j < n && j <= N; ++j) {
            w[static_cast<std::size_t>(j)] = c;
            c *= -double(N - j) / double(j + 1) * std::exp(-sigma);
        }
        return w;
    };
    return half_lines(h, z, ord, spec);
}

ProductRun product_gamma_until(cplx z, int N0, int N_max, double rel_tol, const std::vector<GridPoint>& probes,
                               const W2& ord, const QuadratureSpec& spec)
{
    ProductRun run;
    std::vector<Estimate> prev;
    for (int N = std::max(1, N0); N <= N_max; N *= 2) {
        auto vals = product_gamma(z, N, ord, spec).eval_grid(probes);
        run.achieved_N = N;
        run.values = vals;
        if (!prev.empty()) {
            double ch = 0.0;
            for (std::size_t i = 0; i < vals.size(); ++i)
                ch = std::max(ch, std::abs(vals[i].value - prev[i].value) / std::max(1.0, std::abs(vals[i].value)));
            run.last_change = ch;
            if (ch < rel_tol)
                break;
        }
        prev = vals;
    }
    return run;
}

StarFunctionEvaluator reciprocal_gamma(cplx z, const W2& ord, const QuadratureSpec& spec)
{
    if (ord.kappa.real() >= 0)
        throw DomainError("the line-difference form is taken for Re kappa < 0", "Re kappa < 0");
    HalfLineSpec h;
    h.ends = {{1.0 / (2.0 * I), cplx(0, kPi), true}, {-1.0 / (2.0 * I), cplx(0, -kPi), true}};
    h.log_w = [](cplx t) { return t.real() > 700 ? cplx(-INFINITY, 0.0) : std::exp(t); };
    h.w_taylor = [](int n) { return taylor_exp(1.0, n); };
    return half_lines(h, z, ord, spec);
}

StarFunctionEvaluator reciprocal_gamma_pole_term(cplx z, const W2& ord, const QuadratureSpec& spec)
{
    require_kappa_domain(ord);
    const SingularLocus loc = singular_locus(ord.kappa);
    std::vector<cplx> inside, near;
    for (const cplx p : loc.points(-4, 4)) {
        const cplx q = 2.0 * p;
        if (std::abs(std::abs(q.imag()) - kPi) < 1e-6)
            throw ContourTooCloseError("a pole of e_*^{tX} lies on Im t = +-pi", "kappa off the real axis");
        if (std::abs(q.imag()) < kPi)
            inside.push_back(q);
        near.push_back(q);
    }
    StarFunctionEvaluator ev(ord, spec);
    const cplx l2pii = std::log(2.0 * kPi * I);
    for (const cplx q : inside) {
        double rho = kPi - std::abs(q.imag());
        for (const cplx o : near)
            if (o != q)
                rho = std::min(rho, std::abs(o - q));
        ev.add_piece({ContourSpec::circle(q, rho / 2),
                      [z, l2pii](cplx t) { return guarded_exp(t) + z * t - l2pii; }, Family::uv()},
                     -kPi);
    }
    return ev;
}

StarFunctionEvaluator sin_times_inverse(cplx z, const W2& ord, const QuadratureSpec& spec)
{
    HalfLineSpec h;
    h.ends = {{1.0 / (2.0 * I), cplx(0, kPi)}, {-1.0 / (2.0 * I), cplx(0, -kPi)}};
    h.log_w = [](cplx) { return cplx(0.0); };
    h.w_taylor = taylor_one;
    return half_lines(h, z, ord, spec);
}

StarFunctionEvaluator hankel_loop(double tau, const W2& ord, const QuadratureSpec& spec, double factor)
{
    StarFunctionEvaluator ev(ord, spec);
    const cplx l2pii = std::log(2.0 * kPi * I);
    ev.add_piece({ContourSpec::segment(tau, cplx(tau, 2 * kPi)),
                  [l2pii](cplx t) { return std::exp(t) + t - l2pii; }, Family::uv(factor)});
    return ev;
}

StarFunctionEvaluator hankel_axis_parts(double tau, const W2& ord, const QuadratureSpec& spec, double factor)
{
    const cplx c = 1.0 / (2.0 * kPi * I);
    return line_pieces({{c, tau}, {-c, cplx(tau, 2 * kPi)}}, [](cplx t) { return std::exp(t) + t; }, ord, spec,
                       Family::uv(factor));
}

StarFunctionEvaluator residue_at(int k, const W2& ord, const QuadratureSpec& spec, cplx z)
{
    const cplx centre(0.0, kPi * (k + 0.5));
    const double radius = kPi / 4;
    const SingularLocus loc = singular_locus(ord.kappa);
    int inside = 0;
    for (const cplx p : loc.points(-k - 60, k + 60)) {
        const double d = std::abs(p - centre);
        if (std::abs(d - radius) < 1e-3)
            throw ContourTooCloseError("C_k passes near a pole", "poles stay away from the circle C_k");
        inside += d < radius;
    }
    if (inside != 1)
        throw ContourTooCloseError("C_k does not enclose exactly one pole", "C_k encloses a single pole");
    StarFunctionEvaluator ev(ord, spec);
    const cplx l2pii = std::log(2.0 * kPi * I);
    ev.add_piece({ContourSpec::circle(centre, radius), [z, l2pii](cplx t) { return z * t - l2pii; },
                  Family::uv(2.0)});
    return ev;
}

cplx laguerre_l(cplx nu, cplx x, int* terms, bool* converged)
{
    // sum_n (-nu)_n x^n / (n!)^2
    cplx sum = 1.0, t = 1.0;
    int quiet = 0;
    const int cap = 10000;
    int n = 0;
    for (; n < cap; ++n) {
        t *= (-nu + double(n)) * x / (double(n + 1) * double(n + 1));
        sum += t;
        if (std::abs(t) <= 1e-17 * std::abs(sum) && double(n) > std::abs(nu))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 3 || t == cplx(0.0))
            break;
        if (!std::isfinite(std::abs(sum))) {
            n = cap;
            break;
        }
    }
    if (terms)
        *terms = n + 1;
    if (converged)
        *converged = n < cap;
    return sum;
}

LaguerreValue laguerre_psi(cplx z, cplx w, int form)
{
    LaguerreValue r;
    if (form == 0)
        r.value = std::exp(-I * w) * laguerre_l((z - 1.0) / 2.0, 2.0 * I * w, &r.terms, &r.converged);
    else
        r.value = std::exp(I * w) * laguerre_l(-(z + 1.0) / 2.0, -2.0 * I * w, &r.terms, &r.converged);
    return r;
}

StarFunctionEvaluator resolvent_combination(cplx z, cplx w, const W2& ord, const QuadratureSpec& spec)
{
    if (std::abs(z + w) < 1e-14)
        throw DomainError("resolvent combination needs z + w != 0", "z + w != 0");
    require_kappa_domain(ord);
    return (x_inverse_plus(z) + x_inverse_minus_reflected(w)).scaled(1.0 / (z + w)).evaluator(ord, spec);
}

cplx bessel_j0(cplx x)
{
    const cplx q = -x * x / 4.0;
    cplx sum = 1.0, t = 1.0;
    for (int k = 1; k < 500; ++k) {
        t *= q / double(k * k);
        sum += t;
        if (std::abs(t) < 1e-18 * std::abs(sum) && k > 2 * std::abs(x))
            break;
    }
    return sum;
}

StarFunctionEvaluator rotated_inverse(cplx z, double theta, const W2& ord, const QuadratureSpec& spec)
{
    require_kappa_domain(ord);
    StarFunctionEvaluator ev(ord, spec);
    ev.add_piece({ContourSpec::ray_in(0.0, std::exp(I * theta)), [z](cplx t) { return z * t; }, Family::uv()});
    return ev;
}

DeltaShiftReport delta_shift(cplx c, const W2& ord, const QuadratureSpec& spec)
{
    require_kappa_domain(ord);
    StarFunctionEvaluator lim(ord, spec);
    const LogWeight zero = [](cplx) { return cplx(0.0); };
    const cplx at(0.0, c.real());
    lim.add_piece({ContourSpec::ray_in(at), zero, Family::uv()});
    lim.add_piece({ContourSpec::ray_out(at), zero, Family::uv()});
    return {star_delta(ord, spec), lim};
}

SinResidueCheck sin_residue_check(cplx z, const W2& ord, const QuadratureSpec& spec)
{
    require_kappa_domain(ord);
    const LogWeight lw = [z](cplx t) { return z * t; };
    const cplx c = 1.0 / (2.0 * I);
    SinResidueCheck r{line_pieces({{c, cplx(0, kPi)}, {-c, cplx(0, -kPi)}}, lw, ord, spec),
                      StarFunctionEvaluator(ord, spec), StarFunctionEvaluator(ord, spec), 0};
    r.segment.add_piece({ContourSpec::segment(cplx(0, -kPi), cplx(0, kPi)), lw, Family::uv()}, c);
    // Poles of e_*^{tX} sit at t = 2(base + i pi n). The boundary of the half strip is
    // traversed clockwise, so rays - segment = -pi * sum Res.
    const SingularLocus loc = singular_locus(ord.kappa);
    const auto pts = loc.points(-4, 4);
    const cplx l2pii = std::log(2.0 * kPi * I);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx p = 2.0 * pts[i];
        if (!(p.real() < 0 && std::abs(p.imag()) < kPi))
            continue;
        double rho = std::min({-p.real(), kPi - std::abs(p.imag())});
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i)
                rho = std::min(rho, std::abs(2.0 * pts[j] - p));
        r.residues.add_piece({ContourSpec::circle(p, rho / 2), [z, l2pii](cplx t) { return z * t - l2pii; },
                              Family::uv()},
                             -kPi);
        ++r.poles_inside;
    }
    return r;
}

RemovedLevelReport removed_level_residue(int m, int n, const std::vector<GridPoint>& pts, const W2& ord,
                           const QuadratureSpec& spec)
{
    if (m < 1 || n < 0)
        throw std::invalid_argument("removed_level_residue needs m >= 1, n >= 0");
    const double em = std::exp(1.0 / m);
    const int N = n + m;
    const cplx z0 = -(double(N) + 0.5);
    // e_*^{-x/m} * Gamma_*(x) = int exp(-e^{1/m} e^t) e^{zt} e_*^{tX} dt.
    HalfLineSpec h;
    h.ends = {{1.0, 0.0, true}};
    h.log_w = [em](cplx t) { return -em * guarded_exp(t); };
    h.w_taylor = [em](int k) { return taylor_exp(-em, k); };
    auto lhs = [&](cplx z) {
        CPoly p = CPoly::constant(2, 1.0 + z / double(m)) + x_poly(ord) * (1.0 / double(m));
        return half_lines(h, z, ord, spec, Method::Tail).left_mul(p).eval_grid(pts);
    };
    const double eps = 1e-4;
    const auto hi = lhs(z0 + eps), lo = lhs(z0 - eps);
    const auto w = taylor_exp(-em, N + 1);
    RemovedLevelReport rep;
    rep.removed_level = std::abs(w[static_cast<std::size_t>(m)]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx meas = eps / 2.0 * (hi[i].value - lo[i].value);
        const auto P = vacuum_series(pts[i].first, pts[i].second, ord, Limit::Vacuum, N + 1);
        cplx pred = 0.0;
        for (int k = 0; k <= N; ++k)
            pred += (double(k - n) / double(m)) * w[static_cast<std::size_t>(N - k)] * P[static_cast<std::size_t>(k)];
        rep.measured.push_back(meas);
        rep.predicted.push_back(pred);
        rep.max_diff = std::max(rep.max_diff, std::abs(meas - pred));
    }
    return rep;
}

}  // namespace starweyl
