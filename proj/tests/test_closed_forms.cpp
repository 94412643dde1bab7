#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "starweyl/closed_forms.hpp"
#include "starweyl/grid.hpp"
#include "starweyl/rng.hpp"
#include "starweyl/weyl_poly.hpp"

using namespace starweyl;

namespace {

constexpr double pi = 3.14159265358979323846;
const cplx I(0.0, 1.0);

W2 ordering(cplx kappa, cplx tau = 0.0, cplx hbar = 1.0) { return W2{hbar, kappa, tau}; }

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

template <class F, class G>
double grid_max_diff(F&& f, G&& g)
{
    double m = 0.0;
    for (auto [u, v] : default_grid())
        m = std::max(m, rel_diff(f(u, v), g(u, v)));
    return m;
}

CPoly mono(int a, int b, cplx c = 1.0)
{
    CPoly p(2);
    Monomial m;
    m.e[0] = static_cast<std::uint16_t>(a);
    m.e[1] = static_cast<std::uint16_t>(b);
    p.add_term(m, c);
    return p;
}

// (kappa, tau) expression of 2uv/(i hbar), obtained by hand: the intertwiner adds kappa.
CPoly H_expr(const W2& o) { return mono(1, 1, 2.0 / o.i_hbar()) + CPoly::constant(2, o.kappa); }

const std::vector<cplx> kSampleT = {0.3, -0.7, cplx(0.2, 0.4), cplx(-1.1, 0.25), 2.0, cplx(0.05, -0.9)};

}  // namespace

TEST_CASE("quadratic exponential: Weyl, normal and half-period values")
{
    for (cplx hbar : {cplx(1.0), cplx(0.6, 0.0)}) {
        auto w = ordering(0.0, 0.0, hbar), nrm = ordering(1.0, 0.0, hbar);
        for (cplx t : kSampleT) {
            auto e = star_exp_quadratic(t, w);
            CHECK(grid_max_diff([&](cplx u, cplx v) { return e.eval(u, v); },
                                [&](cplx u, cplx v) {
                                    return std::exp(2.0 * u * v * std::tanh(t) / (I * hbar)) / std::cosh(t);
                                }) < 1e-12);
            auto n = star_exp_quadratic(t, nrm);
            CHECK(grid_max_diff([&](cplx u, cplx v) { return n.eval(u, v); },
                                [&](cplx u, cplx v) {
                                    return std::exp(t) * std::exp((std::exp(2.0 * t) - 1.0) * u * v / (I * hbar));
                                }) < 1e-12);
        }
        auto h = star_exp_quadratic(I * (pi / 2), nrm);
        CHECK(grid_max_diff([&](cplx u, cplx v) { return h.eval(u, v); },
                            [&](cplx u, cplx v) { return I * std::exp(-2.0 * u * v / (I * hbar)); }) < 1e-12);
    }
}

TEST_CASE("quadratic exponential at t = 0 is the unit")
{
    for (cplx k : {cplx(0.0), cplx(1.0), cplx(0.0, 0.5), cplx(-3.0)})
        for (cplx tau : {cplx(0.0), cplx(1.0), cplx(0.0, 1.0)}) {
            auto e = star_exp_quadratic(0.0, ordering(k, tau));
            CHECK(grid_max_diff([&](cplx u, cplx v) { return e.eval(u, v); }, [](cplx, cplx) { return cplx(1.0); }) <
                  1e-15);
        }
}

TEST_CASE("(kappa, tau) family matches the unscaled formula and stays finite for large t")
{
    for (cplx k : {cplx(0.3), cplx(0.0, 0.5), cplx(-0.4, 0.2)})
        for (cplx tau : {cplx(0.0), cplx(1.0), cplx(0.0, 1.0)}) {
            auto o = ordering(k, tau);
            for (cplx t : kSampleT) {
                cplx ep = std::exp(t), em = std::exp(-t);
                cplx D = (ep + em) - k * (ep - em), r = (ep - em) / D;
                auto e = star_exp_quadratic(t, o);
                CHECK(grid_max_diff([&](cplx u, cplx v) { return e.eval(u, v); },
                                    [&](cplx u, cplx v) {
                                        return 2.0 / D * std::exp((r * r * tau * u * u + r * 2.0 * u * v) / I);
                                    }) < 1e-11);
            }
            for (double t : {300.0, -300.0}) {
                auto e = star_exp_quadratic(t, o);
                CHECK(std::isfinite(std::abs(e.eval(cplx(0.5, 0.5), cplx(-1.0, 0.5)))));
            }
        }
}

TEST_CASE("uv-family solves the evolution equation (finite differences)")
{
    const double h = 1e-4;
    for (cplx k : {cplx(0.0), cplx(1.0), cplx(0.0, 0.5), cplx(0.3)})
        for (cplx tau : {cplx(0.0), cplx(1.0), cplx(0.0, 1.0)}) {
            auto o = ordering(k, tau);
            for (cplx t : {cplx(0.2), cplx(-0.4, 0.3)}) {
                auto ep = star_exp_quadratic(t + h, o), em = star_exp_quadratic(t - h, o);
                auto rhs = poly_star_exp(H_expr(o), star_exp_quadratic(t, o), Side::Left);
                CHECK(grid_max_diff([&](cplx u, cplx v) { return (ep.eval(u, v) - em.eval(u, v)) / (2 * h); },
                                    [&](cplx u, cplx v) { return rhs.eval(u, v); }) < 1e-6);
                // H commutes with functions of H: right multiplication gives the same derivative.
                auto rhs_r = poly_star_exp(H_expr(o), star_exp_quadratic(t, o), Side::Right);
                CHECK(grid_max_diff([&](cplx u, cplx v) { return rhs_r.eval(u, v); },
                                    [&](cplx u, cplx v) { return rhs.eval(u, v); }) < 1e-12);
            }
        }
}

TEST_CASE("exponential law of the uv-family against a Taylor-polynomial left factor")
{
    for (cplx k : {cplx(0.0), cplx(1.0), cplx(0.0, 0.5)})
        for (cplx tau : {cplx(0.0), cplx(0.0, 1.0)}) {
            auto o = ordering(k, tau);
            const cplx t1 = 0.05, t2(0.3, 0.2);
            CPoly left = evolution_taylor(t1, o, 14);
            auto prod = poly_star_exp(left, star_exp_quadratic(t2, o), Side::Left);
            auto law = exp_group_mul(star_exp_quadratic(t1, o), star_exp_quadratic(t2, o));
            auto direct = star_exp_quadratic(t1 + t2, o);
            CHECK(grid_max_diff([&](cplx u, cplx v) { return prod.eval(u, v); },
                                [&](cplx u, cplx v) { return direct.eval(u, v); }) < 1e-10);
            CHECK(grid_max_diff([&](cplx u, cplx v) { return law.eval(u, v); },
                                [&](cplx u, cplx v) { return direct.eval(u, v); }) < 1e-14);
        }
    auto o = ordering(0.0);
    auto id = exp_group_mul(star_exp_quadratic(0.0, o), star_exp_quadratic(0.5, o));
    auto e = star_exp_quadratic(0.5, o);
    CHECK(grid_max_diff([&](cplx u, cplx v) { return id.eval(u, v); }, [&](cplx u, cplx v) { return e.eval(u, v); }) <
          1e-15);
}

TEST_CASE("intertwining the uv-family")
{
    auto w = ordering(0.0), nrm = ordering(1.0);
    for (double t = -1.0; t <= 1.0; t += 0.25) {
        auto a = intertwine_exp(star_exp_quadratic(t, w), nrm);
        auto b = star_exp_quadratic(t, nrm);
        CHECK(grid_max_diff([&](cplx u, cplx v) { return a.eval(u, v); }, [&](cplx u, cplx v) { return b.eval(u, v); }) <
              1e-12);
    }
    for (cplx k : {cplx(0.0, 0.5), cplx(-0.3)}) {
        auto from = ordering(k, cplx(0.0, 1.0)), to = ordering(cplx(0.2, -0.1), 1.0);
        for (cplx t : kSampleT) {
            auto a = intertwine_exp(star_exp_quadratic(t, from), to);
            auto b = star_exp_quadratic(t, to);
            CHECK(grid_max_diff([&](cplx u, cplx v) { return a.eval(u, v); },
                                [&](cplx u, cplx v) { return b.eval(u, v); }) < 1e-11);
        }
        auto same = intertwine_exp(star_exp_quadratic(0.4, from), from);
        auto orig = star_exp_quadratic(0.4, from);
        CHECK(same.amp == orig.amp);
        CHECK(same.beta == orig.beta);
    }
    // g e^{t 2uv/(i hbar)} with t (kappa' - kappa) = 1.
    ExpElement e;
    e.beta = 0.5;
    CHECK_THROWS_AS(intertwine_exp(e, ordering(2.0)), PoleError);
    e.gamma = 1.0;
    CHECK_THROWS_AS(intertwine_exp(e, ordering(1.0)), DomainError);
}

TEST_CASE("linear star exponentials")
{
    for (cplx tau : {cplx(0.0), cplx(0.7, -0.5)}) {
        auto o = ordering(0.3, tau);
        auto one = star_exp_linear(0.0, 1, o);
        CHECK(one.eval(0.4, cplx(1.0, 2.0)) == cplx(1.0));
        auto eu = star_exp_linear(cplx(0.5, 0.2), 0, o);
        CHECK(rel_diff(eu.eval(cplx(0.3, 0.1), 2.0), std::exp(cplx(0.5, 0.2) * cplx(0.3, 0.1) / I)) < 1e-15);
        for (int k : {0, 1}) {
            cplx s(0.4, -0.3), t(-1.2, 0.5);
            auto prod = linear_exp_mul(star_exp_linear(s, k, o), star_exp_linear(t, k, o));
            auto sum = star_exp_linear(s + t, k, o);
            CHECK(grid_max_diff([&](cplx u, cplx v) { return prod.eval(u, v); },
                                [&](cplx u, cplx v) { return sum.eval(u, v); }) < 1e-13);
            // d/ds e_*^{s u_k/(i hbar)} = (u_k/(i hbar)) * e_*^{s u_k/(i hbar)}
            const double h = 1e-4;
            auto rhs = poly_star_exp(mono(k == 0, k == 1, 1.0 / I), star_exp_linear(s, k, o), Side::Left);
            auto ep = star_exp_linear(s + h, k, o), em = star_exp_linear(s - h, k, o);
            CHECK(grid_max_diff([&](cplx u, cplx v) { return (ep.eval(u, v) - em.eval(u, v)) / (2 * h); },
                                [&](cplx u, cplx v) { return rhs.eval(u, v); }) < 1e-6);
        }
    }
}

TEST_CASE("poly_star_exp reduces to star_mul when the exponent vanishes")
{
    CounterRng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        auto key = random_ordering(rng, 2);
        // Keep the standard J of W_2 and a (kappa, tau) K.
        W2 o = ordering(key.K(0, 1).to_complex(), key.K(1, 1).to_complex(), 0.8);
        auto p = to_float(random_poly(rng, {2, 4, 4, 4, 3, true, 0}), o.hbar);
        auto q = to_float(random_poly(rng, {2, 4, 4, 4, 3, true, 0}), o.hbar);
        ExpElement e;
        e.ord = o;
        e.prefactor = q;
        CHECK(approx_equal(poly_star_exp(p, e, Side::Left).prefactor, star_mul(p, q, o.key(), o.hbar)));
        CHECK(approx_equal(poly_star_exp(p, e, Side::Right).prefactor, star_mul(q, p, o.key(), o.hbar)));
    }
}

TEST_CASE("associativity holds when two of three factors are polynomials")
{
    CounterRng rng(5);
    for (cplx k : {cplx(0.0), cplx(0.0, 0.5)}) {
        auto o = ordering(k, cplx(0.0, 1.0));
        auto e = star_exp_quadratic(cplx(0.3, 0.1), o);
        for (int trial = 0; trial < 4; ++trial) {
            auto p = to_float(random_poly(rng, {2, 3, 3, 3, 2, true, 0}), 1.0);
            auto q = to_float(random_poly(rng, {2, 3, 3, 3, 2, true, 0}), 1.0);
            auto pq = star_mul(p, q, o.key(), o.hbar);
            auto lhs = poly_star_exp(pq, e, Side::Left), rhs = poly_star_exp(p, poly_star_exp(q, e, Side::Left), Side::Left);
            CHECK(approx_equal(lhs.prefactor, rhs.prefactor, 1e-10));
            auto mid1 = poly_star_exp(q, poly_star_exp(p, e, Side::Left), Side::Right);
            auto mid2 = poly_star_exp(p, poly_star_exp(q, e, Side::Right), Side::Left);
            CHECK(approx_equal(mid1.prefactor, mid2.prefactor, 1e-10));
        }
    }
}

TEST_CASE("vacuum annihilation")
{
    for (cplx k : {cplx(0.0), cplx(1.0), cplx(0.0, 0.5), cplx(-0.3, 0.4)})
        for (cplx tau : {cplx(0.0), cplx(1.0), cplx(0.0, 1.0)}) {
            auto o = ordering(k, tau);
            auto vac = vacuum(o);
            CHECK(approx_equal(poly_star_exp(mono(0, 1), vac, Side::Left).prefactor, CPoly(2)));
            CHECK(approx_equal(poly_star_exp(mono(1, 0), vac, Side::Right).prefactor, CPoly(2)));
            auto uv = star_mul(mono(1, 0), mono(0, 1), o.key(), o.hbar);
            CHECK(approx_equal(poly_star_exp(uv, vac, Side::Left).prefactor, CPoly(2)));
            CHECK(approx_equal(poly_star_exp(uv, vac, Side::Right).prefactor, CPoly(2)));
            // The v side of the vacuum is not annihilated.
            CHECK(!poly_star_exp(mono(1, 0), vac, Side::Left).prefactor.is_zero());
            if (k != cplx(1.0)) {
                auto anti = antivacuum(o);
                CHECK(approx_equal(poly_star_exp(mono(1, 0), anti, Side::Left).prefactor, CPoly(2)));
                CHECK(approx_equal(poly_star_exp(mono(0, 1), anti, Side::Right).prefactor, CPoly(2)));
            }
        }
    CHECK_THROWS_AS(vacuum(ordering(-1.0)), DomainError);
    CHECK_THROWS_AS(antivacuum(ordering(1.0)), DomainError);
}

TEST_CASE("vacuums are the limits of e^{-+t} e_*^{t 2uv/(i hbar)}")
{
    auto w = ordering(0.0);
    CHECK(grid_max_diff([&](cplx u, cplx v) { return vacuum(w).eval(u, v); },
                        [](cplx u, cplx v) { return 2.0 * std::exp(-2.0 * u * v / I); }) < 1e-15);
    for (cplx k : {cplx(0.0), cplx(0.0, 0.5), cplx(0.4)})
        for (cplx tau : {cplx(0.0), cplx(0.0, 1.0)}) {
            auto o = ordering(k, tau);
            const double T = 40.0;
            auto lo = star_exp_quadratic(-T, o).scaled(std::exp(T));
            auto hi = star_exp_quadratic(T, o).scaled(std::exp(T));
            CHECK(grid_max_diff([&](cplx u, cplx v) { return lo.eval(u, v); },
                                [&](cplx u, cplx v) { return vacuum(o).eval(u, v); }) < 1e-12);
            CHECK(grid_max_diff([&](cplx u, cplx v) { return hi.eval(u, v); },
                                [&](cplx u, cplx v) { return antivacuum(o).eval(u, v); }) < 1e-12);
        }
}

TEST_CASE("group law with vacuum limits")
{
    for (cplx k : {cplx(0.0), cplx(0.0, 0.5)}) {
        auto o = ordering(k, 1.0);
        auto vac = vacuum(o), anti = antivacuum(o);
        auto vv = exp_group_mul(vac, vac);
        CHECK(grid_max_diff([&](cplx u, cplx v) { return vv.eval(u, v); },
                            [&](cplx u, cplx v) { return vac.eval(u, v); }) < 1e-15);
        CHECK_THROWS_AS(exp_group_mul(vac, anti), DivergesError);
        CHECK_THROWS_AS(exp_group_mul(anti, vac), DivergesError);
        // e_*^{z uv/(i hbar)} * vac = e^{z/2} vac.
        const cplx z(0.7, -0.4);
        auto s = exp_group_mul(uv_exp(z, o), vac);
        CHECK(grid_max_diff([&](cplx u, cplx v) { return s.eval(u, v); },
                            [&](cplx u, cplx v) { return std::exp(z / 2.0) * vac.eval(u, v); }) < 1e-14);
        // The same factor from the polynomial action of uv/(i hbar) (Weyl symbol intertwined).
        auto x = intertwine(mono(1, 1, 1.0 / I), OrderingKey::weyl(), o.key(), o.hbar);
        auto xv = poly_star_exp(x, vac, Side::Left);
        CHECK(grid_max_diff([&](cplx u, cplx v) { return xv.eval(u, v); },
                            [&](cplx u, cplx v) { return 0.5 * vac.eval(u, v); }) < 1e-14);
        auto xa = poly_star_exp(x, anti, Side::Left);
        CHECK(grid_max_diff([&](cplx u, cplx v) { return xa.eval(u, v); },
                            [&](cplx u, cplx v) { return -0.5 * anti.eval(u, v); }) < 1e-14);
    }
    ExpElement plain;
    CHECK_THROWS_AS(exp_group_mul(plain, plain), DomainError);
}

TEST_CASE("sin_* and cos_* at half periods")
{
    for (cplx k : {cplx(1.0), cplx(0.5), cplx(0.0, 0.5), cplx(-0.3)})
        for (cplx tau : {cplx(0.0), cplx(1.0), cplx(0.0, 1.0)}) {
            auto o = ordering(k, tau);
            // Cancellation is measured against the size of the exponentials being cancelled.
            double scale = 1.0;
            auto ep = star_exp_quadratic(I * (pi / 2), o);
            for (auto [u, v] : default_grid())
                scale = std::max(scale, std::abs(ep.eval(u, v)));
            for (double z = -2.5; z <= 2.5; z += 1.0) {
                auto s = star_sin(z, o);
                double m = 0.0;
                for (auto [u, v] : default_grid())
                    m = std::max(m, std::abs(s.eval(u, v)));
                CHECK(m < 1e-10 * scale);
            }
            auto c = star_cos(0.0, o);
            for (auto [u, v] : default_grid())
                CHECK(std::abs(c.eval(u, v)) < 1e-12 * scale);
            auto s0 = star_sin(0.0, o);
            CHECK(std::abs(s0.eval(0.0, 0.0)) > 0.1);
        }
    // kappa = 1: E_+ = -E_- = i e^{-2uv/(i hbar)}, so sin_* at z = 0 is e^{-2uv/(i hbar)}.
    auto s0 = star_sin(0.0, ordering(1.0));
    CHECK(rel_diff(s0.eval(0.5, 0.5), std::exp(-0.5 / I)) < 1e-14);
    CHECK_THROWS_AS(star_sin(0.3, ordering(0.0)), DivergesError);
    CHECK_THROWS_AS(star_cos(0.3, ordering(0.0)), DivergesError);
}

TEST_CASE("theta partial sums")
{
    auto conv = ordering(0.2, cplx(0.0, -0.5));
    auto t0 = theta_partial_sum(0, 1, conv);
    CHECK(t0.sum.eval(0.3, cplx(0.1, 0.2)) == cplx(1.0));
    CHECK(!t0.convergence_warning);
    const cplx q = std::exp(cplx(0.0, -0.5) / I);
    auto t50 = theta_partial_sum(50, 1, conv), t40 = theta_partial_sum(40, 1, conv);
    for (auto [u, v] : default_grid()) {
        cplx ref = oracle::theta3_product(std::exp(2.0 * v / I), q);
        CHECK(rel_diff(t50.sum.eval(u, v), ref) < 1e-10);
        CHECK(std::abs(t50.sum.eval(u, v) - t40.sum.eval(u, v)) < 1e-12);
    }
    CHECK(theta_partial_sum(5, 1, ordering(0.2, cplx(0.0, 0.5))).convergence_warning);
    CHECK(theta_partial_sum(5, 0, conv).convergence_warning);  // K^{uu} = 0 in every (kappa, tau)
}

TEST_CASE("singular locus")
{
    auto l0 = singular_locus(0.0);
    CHECK(l0.distance(I * (pi / 2)) < 1e-15);
    CHECK(singular_locus(1.0).empty);
    CHECK(singular_locus(-1.0).empty);
    CHECK(std::abs(singular_locus(3.0).base - 0.5 * std::log(2.0)) < 1e-15);
    for (cplx k : {cplx(0.0), cplx(3.0), cplx(0.0, 0.5), cplx(-2.0, 1.0)}) {
        auto loc = singular_locus(k);
        for (cplx t : loc.points(-2, 2)) {
            cplx D = (std::exp(t) + std::exp(-t)) - k * (std::exp(t) - std::exp(-t));
            CHECK(below_pole_threshold(D, t));
            CHECK_THROWS_AS(star_exp_quadratic(t, ordering(k)), SingularPointError);
            CHECK(loc.distance(t) < 1e-14);
        }
        CHECK(loc.distance(loc.base + 0.3) == doctest::Approx(0.3));
    }
}

TEST_CASE("evolution-equation series matches the closed form")
{
    for (cplx k : {cplx(0.0), cplx(1.0), cplx(0.0, 0.5)})
        for (cplx tau : {cplx(0.0), cplx(0.0, 1.0)}) {
            auto o = ordering(k, tau);
            for (cplx t : {cplx(0.5), cplx(-0.5), cplx(0.0, 0.5), cplx(0.3, -0.4), cplx(-0.2, 0.1)}) {
                auto s = evolution_series(t, o);
                auto e = star_exp_quadratic(t, o);
                CHECK(grid_max_diff([&](cplx u, cplx v) { return s.eval(u, v); },
                                    [&](cplx u, cplx v) { return e.eval(u, v); }) < 1e-8);
            }
            // Without stepping the Taylor polynomial of the star exponential is accurate for small t.
            for (cplx t : {cplx(0.1), cplx(0.0, -0.1)}) {
                CPoly p = evolution_taylor(t, o);
                auto e = star_exp_quadratic(t, o);
                CHECK(grid_max_diff([&](cplx u, cplx v) { return evaluate(p, {u, v}); },
                                    [&](cplx u, cplx v) { return e.eval(u, v); }) < 1e-8);
            }
        }
}

TEST_CASE("kappa = i/2: the exponential decays along the real t axis")
{
    auto o = ordering(cplx(0.0, 0.5));
    for (double sign : {1.0, -1.0}) {
        double prev = INFINITY;
        for (double t = 5.0; t <= 30.0; t += 5.0) {
            auto e = star_exp_quadratic(sign * t, o);
            double m = 0.0;
            for (auto [u, v] : default_grid())
                m = std::max(m, std::abs(e.eval(u, v)));
            CHECK(m < prev);
            prev = m;
        }
        CHECK(prev < 1e-11);
    }
}
