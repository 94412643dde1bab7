#include "starweyl/verify.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "starweyl/rng.hpp"
#include "starweyl/weyl_poly.hpp"

namespace starweyl {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

struct Suite {
    VerificationReport rep;
    const VerifyOptions& opt;

    // Runs f, which returns the residual, and records the check.
    void check(const std::string& id, const std::string& anchor, double tol, const std::function<double()>& f,
               std::string note = {})
    {
        Check c{id, anchor, 0.0, tol, false, 0.0, std::move(note)};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.residual = f();
            c.pass = std::isfinite(c.residual) && c.residual <= tol;
        } catch (const std::exception& e) {
            c.residual = INFINITY;
            c.note += (c.note.empty() ? "" : "; ") + std::string("error: ") + e.what();
        }
        c.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.checks.push_back(std::move(c));
    }

    // Annotates the last check.
    void note(const std::string& s)
    {
        auto& n = rep.checks.back().note;
        n += (n.empty() ? "" : "; ") + s;
    }

    W2 ord(cplx kappa, cplx tau = 0.0) const { return W2{opt.hbar, kappa, tau}; }

    double diff(const StarFunctionEvaluator& a, const StarFunctionEvaluator& b) const
    {
        const auto A = a.eval_grid(opt.grid), B = b.eval_grid(opt.grid);
        double m = 0.0;
        for (std::size_t i = 0; i < A.size(); ++i)
            m = std::max(m, std::abs(A[i].value - B[i].value));
        return m;
    }

    template <class F>
    double grid_max(F&& f) const
    {
        double m = 0.0;
        for (auto [u, v] : opt.grid)
            m = std::max(m, std::abs(f(u, v)));
        return m;
    }
};

std::string fmt(cplx z)
{
    std::ostringstream os;
    os.precision(12);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

CPoly C(cplx c) { return CPoly::constant(2, c); }

void suite_associativity(Suite& s)
{
    int passed = 0;
    const int trials = 200;
    s.check("associativity.random", "(f*g)*h = f*(g*h) for polynomials, exact", 0.0, [&] {
        CounterRng rng(s.opt.seed, 1);
        for (int t = 0; t < trials; ++t) {
            CounterRng r = rng.split(static_cast<std::uint64_t>(t));
            const int n = static_cast<int>(r.uniform_int(1, 4));
            const OrderingKey key = random_ordering(r, n);
            const RandomPolySpec spec{n, 6, 4, 4, 3, true, 1};
            const ExactPoly f = random_poly(r, spec), g = random_poly(r, spec), h = random_poly(r, spec);
            if (star_mul(star_mul(f, g, key), h, key) == star_mul(f, star_mul(g, h, key), key))
                ++passed;
        }
        return double(trials - passed);
    });
    s.note(std::to_string(passed) + "/" + std::to_string(trials));
}

void suite_intertwiner(Suite& s)
{
    int passed = 0;
    const int trials = 200;
    s.check("intertwiner.homomorphism", "I(f *_K g) = I(f) *_K' I(g), exact", 0.0, [&] {
        CounterRng rng(s.opt.seed, 2);
        for (int t = 0; t < trials; ++t) {
            CounterRng r = rng.split(static_cast<std::uint64_t>(t));
            const int n = 2 * static_cast<int>(r.uniform_int(1, 2));
            const OrderingKey a = random_ordering(r, n);
            const OrderingKey b = a.with_K(random_ordering(r, n).K());
            const RandomPolySpec spec{n, 6, 4, 4, 3, true, 1};
            const ExactPoly f = random_poly(r, spec), g = random_poly(r, spec);
            if (intertwine(star_mul(f, g, a), a, b) == star_mul(intertwine(f, a, b), intertwine(g, a, b), b))
                ++passed;
        }
        return double(trials - passed);
    });
    s.note(std::to_string(passed) + "/" + std::to_string(trials));
}

void suite_exp_series(Suite& s)
{
    const std::vector<cplx> ts{0.5, -0.5, 0.5 * kI, -0.5 * kI, cplx(0.3, -0.4), cplx(-0.2, 0.1), cplx(0.35, 0.35)};
    for (cplx k : {cplx(0.0), cplx(1.0), cplx(0.0, 0.5)})
        s.check("exp.series.kappa=" + fmt(k), "e_*^{t 2uv/(i hbar)} solves d/dt f = H * f, f_0 = 1", 1e-8, [&] {
            const W2 o = s.ord(k);
            double m = 0.0;
            for (cplx t : ts) {
                const ExpElement e = star_exp_quadratic(t, o), ser = evolution_series(t, o);
                m = std::max(m, s.grid_max([&](cplx u, cplx v) { return e.eval(u, v) - ser.eval(u, v); }));
            }
            return m;
        });
}

void suite_sin_vanishing(Suite& s)
{
    for (cplx k : {cplx(1.0), cplx(0.0, 0.5)})
        s.check("sin.vanish.kappa=" + fmt(k), "sin_* pi(z + X) = 0 for z in Z + 1/2", 1e-8, [&] {
            double m = 0.0;
            for (double z : {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5}) {
                const ExpSum e = star_sin(z, s.ord(k));
                m = std::max(m, s.grid_max([&](cplx u, cplx v) { return e.eval(u, v); }));
            }
            return m;
        });
    s.check("sin_gamma.vanish", "sin_* pi(z + X) * Gamma_*(z + X) = 0 for z in N + 1/2", 1e-8, [&] {
        const W2 o = s.ord(cplx(-0.5, 0.5));
        double m = 0.0;
        for (double z : {0.5, 1.5, 2.5}) {
            const auto vals = reciprocal_gamma(z, o, s.opt.spec).eval_grid(s.opt.grid);
            for (const Estimate& e : vals)
                m = std::max(m, std::abs(e.value));
        }
        return m;
    });
}

void suite_inverse(Suite& s)
{
    for (cplx k : {cplx(0.0), cplx(0.0, 0.5)})
        for (cplx z : {cplx(1.0), cplx(0.1), cplx(2.0, 1.0)})
            s.check("inverse.plus.kappa=" + fmt(k) + ".z=" + fmt(z), "(z + X) * (z + X)^{-1}_+ = 1 for Re z > -1/2",
                    1e-6, [&] {
                        const W2 o = s.ord(k);
                        const auto r = inverse_plus(z, o, s.opt.spec).left_mul(x_poly(o) + C(z));
                        return s.grid_max([&](cplx u, cplx v) { return r.eval(u, v).value - 1.0; });
                    });
    for (cplx k : {cplx(0.0), cplx(0.0, 0.5)})
        s.check("inverse.defect.kappa=" + fmt(k), "(z + X) * (z + X)^{-1}_+ = 1 - vac at z = -1/2", 1e-6, [&] {
            const W2 o = s.ord(k);
            const auto r = inverse_plus_times_factor(-0.5, o, s.opt.spec);
            const ExpElement vac = vacuum(o);
            return s.grid_max([&](cplx u, cplx v) { return r.eval(u, v).value - 1.0 + vac.eval(u, v); });
        });
    double gap = 0.0;
    s.check("inverse.associativity_failure", "(X+^{-1} * (z+X)) * X-^{-1} != X+^{-1} * ((z+X) * X-^{-1})", 0.0, [&] {
        const W2 o = s.ord(0.0);
        const cplx z = 0.2;
        const XFunction plus = x_inverse_plus(z), minus = x_inverse_minus(z);
        const auto left = (plus.times_linear(z) * minus).evaluator(o, s.opt.spec);
        const auto right = (plus * minus.times_linear(z)).evaluator(o, s.opt.spec);
        gap = s.diff(left, right);
        return gap > 0.1 ? 0.0 : 1.0;
    });
    s.note("gap between the two bracketings " + std::to_string(gap));
    s.check("inverse.vacuum_antivacuum", "vac * antivac diverges", 0.0, [&] {
        try {
            exp_group_mul(vacuum(s.ord(0.0)), antivacuum(s.ord(0.0)));
        } catch (const DivergesError&) {
            return 0.0;
        }
        return 1.0;
    });
}

void suite_delta(Suite& s)
{
    const W2 o = s.ord(0.0);
    RatioFit fit;
    cplx c0 = 0.0;
    s.check("delta.bessel_shape", "delta_* is proportional to J_0(2uv/hbar)", 1e-6, [&] {
        const auto dl = star_delta(o, s.opt.spec);
        std::vector<cplx> f, g;
        for (auto [u, v] : s.opt.grid) {
            f.push_back(dl.eval(u, v).value);
            g.push_back(bessel_j0(2.0 * u * v / o.hbar));
        }
        fit = fit_ratio(f, g);
        c0 = dl.eval(0.0, 0.0).value;
        return fit.variance;
    });
    s.note("fitted constant " + fmt(fit.constant));
    s.check("delta.constant", "delta_*(uv = 0) = int sech(t/2) dt = 2 pi", 1e-6, [&] { return std::abs(c0 - 2.0 * kPi); },
            "sqrt(pi/2) would differ by " + std::to_string(2.0 * kPi - std::sqrt(kPi / 2)));
}

void suite_gamma_beta(Suite& s)
{
    s.check("gamma.functional_equation", "Gamma_*(z + 1 + X) = (z + X) * Gamma_*(z + X)", 1e-6, [&] {
        double m = 0.0;
        for (cplx k : {cplx(0.0), cplx(0.0, 0.5)})
            for (cplx z : {cplx(1.0), cplx(0.3, 0.2), cplx(-1.3, 0.1)}) {
                const W2 o = s.ord(k);
                m = std::max(m, s.diff(star_gamma(z + 1.0, o, s.opt.spec),
                                       star_gamma(z, o, s.opt.spec).left_mul(x_poly(o) + C(z))));
            }
        return m;
    });
    s.check("beta.functional_equation", "(z + y + X) * B_*(z + 1 + X, y) = (z + X) * B_*(z + X, y)", 1e-6, [&] {
        double m = 0.0;
        for (cplx k : {cplx(0.0), cplx(0.0, 0.5)})
            for (cplx y : {cplx(1.7), cplx(0.6, 0.3)}) {
                const W2 o = s.ord(k);
                const cplx z = 0.4;
                m = std::max(m, s.diff(star_beta(z + 1.0, y, o, s.opt.spec).left_mul(x_poly(o) + C(z + y)),
                                       star_beta(z, y, o, s.opt.spec).left_mul(x_poly(o) + C(z))));
            }
        return m;
    });
    s.check("beta.gamma_relation", "Gamma_*(y + z + X) * B_*(z + X, y) = Gamma(y) Gamma_*(z + X)", 1e-5, [&] {
        double m = 0.0;
        for (cplx k : {cplx(0.0), cplx(0.0, 0.5)})
            for (double y : {1.7, 0.6}) {
                const W2 o = s.ord(k);
                m = std::max(m, s.diff(gamma_beta_product(0.4, y, o, s.opt.spec),
                                       star_gamma(0.4, o, s.opt.spec).scaled(std::tgamma(y))));
            }
        return m;
    });
    cplx plus = 0.0, minus = 0.0;
    s.check("gamma.vacuum_pairing", "Gamma_*(z +- X) * vac = Gamma(z +- 1/2) vac", 1e-6, [&] {
        const W2 o = s.ord(0.0);
        const double z = 2.2;
        plus = vacuum_pairing(star_gamma(z, o, s.opt.spec, +1, Method::Direct), s.opt.fock_level).value.value;
        minus = vacuum_pairing(star_gamma(z, o, s.opt.spec, -1, Method::Direct), s.opt.fock_level).value.value;
        return std::max(std::abs(plus - std::tgamma(z + 0.5)), std::abs(minus - std::tgamma(z - 0.5)));
    });
    s.note("z = 2.2: Gamma_*(z+X) pairs to " + fmt(plus) + ", Gamma_*(z-X) pairs to " + fmt(minus));
}

void suite_products(Suite& s)
{
    s.check("product.sin", "pi x prod (1 - x^2/k^2) -> sin_* pi x, x = z + X", 1e-4, [&] {
        const W2 o = s.ord(1.0);
        const auto p = product_sin_extrapolated(0.3, 500, o);
        const ExpSum ref = star_sin(0.3, o);
        return s.grid_max([&](cplx u, cplx v) { return p.eval(u, v).value - ref.eval(u, v); });
    }, "N = 500, Richardson over N, N/2, N/4");
    s.check("product.gamma", "e_*^{-gamma x} x^{-1} prod (1 + x/k)^{-1} e_*^{x/k} -> Gamma_*(x)", 1e-3, [&] {
        const W2 o = s.ord(0.0);
        return s.diff(product_gamma(1.0, 2000, o, s.opt.spec), star_gamma(1.0, o, s.opt.spec));
    }, "N = 2000");
    ProductRun run;
    s.check("product.gamma.achieved_N", "successive partial products settle", 2e-4, [&] {
        run = product_gamma_until(1.0, 250, 4000, 2e-4, {s.opt.grid.front(), s.opt.grid.back()}, s.ord(0.0), s.opt.spec);
        return run.last_change;
    });
    s.note("achieved N = " + std::to_string(run.achieved_N));
}

void suite_fock(Suite& s)
{
    s.check("fock.matrix_elements", "vac * v^q * u^p * vac = delta_pq p! (i hbar)^p vac, p, q <= 8", 1e-10,
            [&] { return matrix_element_check(8, s.opt.hbar, s.opt.fock_level).max_residual; });
    s.check("fock.defect_rank", "1 - P_n has rank defect exactly one at level n", 0.0, [&] {
        double bad = 0.0;
        for (int n = 0; n <= 8; ++n)
            bad += defect_rank(n, s.opt.fock_level).ok ? 0.0 : 1.0;
        return bad;
    });
    s.check("fock.vanish", "vac * v^n * (-n - 1/2 + X) = 0, n <= 6", 0.0, [&] {
        double m = 0.0;
        for (int n = 0; n <= 6; ++n)
            m = std::max(m, vanish_residual(n, s.ord(cplx(0.0, 0.5), 0.3), s.opt.fock_level));
        return m;
    });
    s.check("fock.commutator", "[u, v] = -i hbar on the valid band", 1e-12,
            [&] { return commutator_residual(fock_dict(s.opt.hbar, s.opt.fock_level)); });
}

void suite_residues(Suite& s)
{
    const W2 o = s.ord(0.0);
    RatioFit fit;
    s.check("residue.bessel_shape", "residue at i pi/2 is proportional to J_0(2uv/hbar)", 1e-6, [&] {
        const auto r0 = residue_at(0, o, s.opt.spec);
        std::vector<cplx> f, g;
        for (auto [u, v] : s.opt.grid) {
            f.push_back(r0.eval(u, v).value);
            g.push_back(bessel_j0(2.0 * u * v / o.hbar));
        }
        fit = fit_ratio(f, g);
        return fit.variance;
    });
    s.note("constant " + fmt(fit.constant));
    s.check("residue.alternation", "residue at i pi (k + 1/2) is (-1)^k times the k = 0 one, k = 1, 2", 1e-8, [&] {
        const auto r0 = residue_at(0, o, s.opt.spec).eval_grid(s.opt.grid);
        double m = 0.0;
        for (int k : {1, 2}) {
            const auto rk = residue_at(k, o, s.opt.spec).eval_grid(s.opt.grid);
            for (std::size_t i = 0; i < rk.size(); ++i)
                m = std::max(m, std::abs(rk[i].value - (k % 2 ? -1.0 : 1.0) * r0[i].value));
        }
        return m;
    });
    s.check("laguerre.ode", "(iz + w) f + f' + w f'' = 0 for Psi_z", 1e-6, [&] {
        const double h = 1e-2;
        double m = 0.0;
        for (cplx z : {cplx(0.7), cplx(-0.4, 0.3)}) {
            auto f = [&](cplx w) { return laguerre_psi(z, w).value; };
            for (cplx w : {cplx(0.6, 0.1), cplx(-1.1, 0.5), cplx(0.3, -0.8)}) {
                const cplx f1 = (-f(w + 2 * h) + 8.0 * f(w + h) - 8.0 * f(w - h) + f(w - 2 * h)) / (12 * h);
                const cplx f2 =
                    (-f(w + 2 * h) + 16.0 * f(w + h) - 30.0 * f(w) + 16.0 * f(w - h) - f(w - 2 * h)) / (12 * h * h);
                m = std::max(m, std::abs((kI * z + w) * f(w) + f1 + w * f2));
            }
        }
        return m;
    });
    s.check("laguerre.dual", "e^{-iw} L_{(z-1)/2}(2iw) = e^{iw} L_{-(z+1)/2}(-2iw)", 1e-10, [&] {
        double m = 0.0;
        for (cplx z : {cplx(0.7), cplx(-0.4, 0.3), cplx(1.5)})
            for (cplx w : {cplx(1.3), cplx(0.6, 0.1), cplx(-1.1, 0.5)})
                m = std::max(m, std::abs(laguerre_psi(z, w, 0).value - laguerre_psi(z, w, 1).value));
        return m;
    });
}

void suite_theta(Suite& s)
{
    s.check("theta.partial_sums", "sum_n e_*^{2n v/(i hbar)} -> theta_3 for Im K^{vv} < 0", 1e-10, [&] {
        const W2 o = s.ord(0.2, cplx(0.0, -0.5));
        const ThetaSum t = theta_partial_sum(50, 1, o);
        const cplx q = std::exp(o.tau / o.i_hbar());
        double m = 0.0;
        for (std::size_t i = 0; i < std::min<std::size_t>(5, s.opt.grid.size()); ++i) {
            const auto [u, v] = s.opt.grid[i];
            const cplx ref = theta3_product(std::exp(2.0 * v / o.i_hbar()), q);
            m = std::max(m, std::abs(t.sum.eval(u, v) - ref) / std::max(1.0, std::abs(ref)));
        }
        return m;
    }, "N = 50, 5 points");
    s.check("theta.divergence_warning", "|q| >= 1 for Im K^{vv} > 0", 0.0,
            [&] { return theta_partial_sum(5, 1, s.ord(0.2, cplx(0.0, 0.5))).convergence_warning ? 0.0 : 1.0; });
}

void suite_hankel(Suite& s)
{
    double s10 = 0.0, s20 = 0.0;
    s.check("hankel.decay", "the Hankel loop integral decays as tau -> -inf", 1e-4, [&] {
        const W2 o = s.ord(0.0);
        for (const Estimate& e : hankel_loop(-10, o, s.opt.spec).eval_grid(s.opt.grid))
            s10 = std::max(s10, std::abs(e.value));
        for (const Estimate& e : hankel_loop(-20, o, s.opt.spec).eval_grid(s.opt.grid))
            s20 = std::max(s20, std::abs(e.value));
        // Residual is the inverse decay ratio; 1e-4 means four orders of magnitude.
        return s10 > 0 ? s20 / s10 : INFINITY;
    });
    s.note("sup at tau=-10: " + std::to_string(s10) + ", at tau=-20: " + std::to_string(s20));
}

using SuiteFn = void (*)(Suite&);

const std::vector<std::pair<std::string, SuiteFn>>& registry()
{
    static const std::vector<std::pair<std::string, SuiteFn>> r{
        {"associativity", suite_associativity}, {"intertwiner", suite_intertwiner}, {"exp-series", suite_exp_series},
        {"sin-vanishing", suite_sin_vanishing}, {"inverse", suite_inverse},         {"delta", suite_delta},
        {"gamma-beta", suite_gamma_beta},       {"products", suite_products},       {"fock", suite_fock},
        {"residues", suite_residues},           {"theta", suite_theta},             {"hankel", suite_hankel},
    };
    return r;
}

}  // namespace

bool VerificationReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, f] : registry())
            n.push_back(k);
        return n;
    }();
    return names;
}

std::vector<VerificationReport> run_suites(const std::string& name, const VerifyOptions& opt)
{
    std::vector<VerificationReport> out;
    for (const auto& [k, f] : registry()) {
        if (name != "all" && name != k)
            continue;
        Suite s{{k, {}}, opt};
        f(s);
        out.push_back(std::move(s.rep));
    }
    if (out.empty())
        throw std::invalid_argument("unknown suite: " + name);
    return out;
}

json to_json(const VerificationReport& r)
{
    json checks = json::array();
    for (const Check& c : r.checks)
        checks.push_back({{"id", c.id},
                          {"anchor", c.anchor},
                          {"max_residual", std::isfinite(c.residual) ? json(c.residual) : json("inf")},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"runtime", c.runtime},
                          {"note", c.note}});
    return {{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}};
}

RatioFit fit_ratio(const std::vector<cplx>& f, const std::vector<cplx>& g)
{
    if (f.size() != g.size() || f.empty())
        throw std::invalid_argument("ratio fit needs matching non-empty samples");
    cplx num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        num += std::conj(g[i]) * f[i];
        den += std::norm(g[i]);
    }
    RatioFit r;
    r.constant = num / den;
    for (std::size_t i = 0; i < f.size(); ++i)
        r.variance += std::norm(f[i] / g[i] - r.constant);
    r.variance /= double(f.size());
    return r;
}

cplx theta3_product(cplx zeta, cplx q, int terms)
{
    cplx prod = 1.0, q2m = 1.0;
    for (int m = 1; m <= terms; ++m) {
        const cplx q2m1 = q2m * q;
        q2m = q2m1 * q;
        prod *= (1.0 - q2m) * (1.0 + q2m1 * zeta) * (1.0 + q2m1 / zeta);
    }
    return prod;
}

}  // namespace starweyl
