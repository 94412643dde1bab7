#include "starweyl/weyl_poly.hpp"

#include <map>
#include <stdexcept>

namespace starweyl {

namespace {

struct PairLess {
    bool operator()(const std::pair<Monomial, Monomial>& a, const std::pair<Monomial, Monomial>& b) const
    {
        GradedLex lt;
        if (lt(a.first, b.first))
            return true;
        if (lt(b.first, a.first))
            return false;
        return lt(a.second, b.second);
    }
};

template <class C>
std::vector<C> lambda_as(const OrderingKey& ord)
{
    std::vector<C> lam;
    lam.reserve(static_cast<std::size_t>(ord.n() * ord.n()));
    for (int i = 0; i < ord.n(); ++i)
        for (int j = 0; j < ord.n(); ++j)
            lam.push_back(CoeffOps<C>::from_gauss(ord.Lambda(i, j)));
    return lam;
}

void check_same_skew(const OrderingKey& a, const OrderingKey& b)
{
    if (a.n() != b.n())
        throw std::invalid_argument("intertwiner: dimension mismatch");
    if (a.J() != b.J())
        throw std::invalid_argument("intertwiner: orderings differ in their skew part");
}

// exp(s * L) f with L = sum D^{ij} d_i d_j; the series stops once the degree is exhausted.
template <class C>
Polynomial<C> apply_second_order_exp(const Polynomial<C>& f, const std::vector<C>& D, int n, const C& s)
{
    Polynomial<C> result = f, cur = f;
    C coef = CoeffOps<C>::from_ratio(1, 1);
    for (int m = 1;; ++m) {
        Polynomial<C> next(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const C& d = D[static_cast<std::size_t>(i * n + j)];
                if (CoeffOps<C>::is_zero(d))
                    continue;
                next += cur.derivative(i).derivative(j) * d;
            }
        cur = std::move(next);
        if (cur.is_zero())
            break;
        coef = coef * s;
        coef *= CoeffOps<C>::from_ratio(1, m);
        result += cur * coef;
    }
    return result;
}

}  // namespace

StarRing<HbarPoly> exact_ring(const OrderingKey& ord)
{
    return {ord.n(), lambda_as<HbarPoly>(ord), HbarPoly::i_hbar_half()};
}

StarRing<cplx> float_ring(const OrderingKey& ord, cplx hbar)
{
    return {ord.n(), lambda_as<cplx>(ord), cplx(0.0, 0.5) * hbar};
}

template <class C>
Polynomial<C> star_mul(const Polynomial<C>& f, const Polynomial<C>& g, const StarRing<C>& ring)
{
    f.check_dim(g);
    const int n = f.num_vars();
    if (n != ring.n)
        throw std::invalid_argument("star_mul: ordering dimension mismatch");

    // Tensor f(x) g(y) as a map on (x-monomial, y-monomial); each step applies the
    // bidifferential operator sum Lambda^{ij} d_{x_i} d_{y_j} once.
    std::map<std::pair<Monomial, Monomial>, C, PairLess> T;
    for (const auto& [a, ca] : f.terms())
        for (const auto& [b, cb] : g.terms())
            T.emplace(std::make_pair(a, b), ca * cb);

    std::vector<bool> live(ring.lambda.size());
    for (std::size_t k = 0; k < live.size(); ++k)
        live[k] = !CoeffOps<C>::is_zero(ring.lambda[k]);

    Polynomial<C> result(n);
    C scale = CoeffOps<C>::from_ratio(1, 1);
    for (int k = 0; !T.empty(); ++k) {
        for (const auto& [ab, c] : T)
            result.add_term(ab.first + ab.second, c * scale);

        std::map<std::pair<Monomial, Monomial>, C, PairLess> next;
        for (const auto& [ab, c] : T) {
            const auto& [a, b] = ab;
            for (int i = 0; i < n; ++i) {
                if (a.e[i] == 0)
                    continue;
                for (int j = 0; j < n; ++j) {
                    if (b.e[j] == 0 || !live[static_cast<std::size_t>(i * n + j)])
                        continue;
                    Monomial a2 = a, b2 = b;
                    a2.e[i] -= 1;
                    b2.e[j] -= 1;
                    C t = c * ring.lambda[static_cast<std::size_t>(i * n + j)];
                    t *= CoeffOps<C>::from_ratio(long(a.e[i]) * long(b.e[j]), 1);
                    auto key = std::make_pair(a2, b2);
                    auto it = next.find(key);
                    if (it == next.end())
                        next.emplace(key, t);
                    else
                        it->second += t;
                }
            }
        }
        for (auto it = next.begin(); it != next.end();)
            it = CoeffOps<C>::is_zero(it->second) ? next.erase(it) : std::next(it);
        T = std::move(next);
        scale = scale * ring.i_hbar_half;
        scale *= CoeffOps<C>::from_ratio(1, k + 1);
    }
    return result;
}

template <class C>
Polynomial<C> star_pow(const Polynomial<C>& p, int k, const StarRing<C>& ring)
{
    if (k < 0)
        throw std::invalid_argument("star_pow: negative exponent");
    Polynomial<C> r = Polynomial<C>::constant(p.num_vars(), CoeffOps<C>::from_ratio(1, 1));
    for (int i = 0; i < k; ++i)
        r = star_mul(r, p, ring);
    return r;
}

template <class C>
Polynomial<C> star_compose(const Polynomial<C>& f, const Polynomial<C>& q, const StarRing<C>& ring)
{
    if (f.num_vars() != 1)
        throw std::invalid_argument("star_compose: outer polynomial must be univariate");
    Polynomial<C> result(q.num_vars());
    Polynomial<C> power = Polynomial<C>::constant(q.num_vars(), CoeffOps<C>::from_ratio(1, 1));
    int have = 0;
    for (const auto& [m, c] : f.terms()) {
        while (have < m.e[0]) {
            power = star_mul(power, q, ring);
            ++have;
        }
        result += power * c;
    }
    return result;
}

template Polynomial<HbarPoly> star_mul(const Polynomial<HbarPoly>&, const Polynomial<HbarPoly>&,
                                       const StarRing<HbarPoly>&);
template Polynomial<cplx> star_mul(const Polynomial<cplx>&, const Polynomial<cplx>&, const StarRing<cplx>&);
template Polynomial<HbarPoly> star_pow(const Polynomial<HbarPoly>&, int, const StarRing<HbarPoly>&);
template Polynomial<cplx> star_pow(const Polynomial<cplx>&, int, const StarRing<cplx>&);
template Polynomial<HbarPoly> star_compose(const Polynomial<HbarPoly>&, const Polynomial<HbarPoly>&,
                                           const StarRing<HbarPoly>&);
template Polynomial<cplx> star_compose(const Polynomial<cplx>&, const Polynomial<cplx>&, const StarRing<cplx>&);

ExactPoly star_mul(const ExactPoly& f, const ExactPoly& g, const OrderingKey& ord)
{
    return star_mul(f, g, exact_ring(ord));
}

CPoly star_mul(const CPoly& f, const CPoly& g, const OrderingKey& ord, cplx hbar)
{
    return star_mul(f, g, float_ring(ord, hbar));
}

ExactPoly commutator(const ExactPoly& f, const ExactPoly& g, const OrderingKey& ord)
{
    auto ring = exact_ring(ord);
    return star_mul(f, g, ring) - star_mul(g, f, ring);
}

CPoly commutator(const CPoly& f, const CPoly& g, const OrderingKey& ord, cplx hbar)
{
    auto ring = float_ring(ord, hbar);
    return star_mul(f, g, ring) - star_mul(g, f, ring);
}

ExactPoly intertwine(const ExactPoly& f, const OrderingKey& from, const OrderingKey& to)
{
    check_same_skew(from, to);
    if (f.num_vars() != from.n())
        throw std::invalid_argument("intertwiner: polynomial dimension mismatch");
    std::vector<HbarPoly> D;
    for (int i = 0; i < from.n(); ++i)
        for (int j = 0; j < from.n(); ++j)
            D.emplace_back(to.K(i, j) - from.K(i, j));
    HbarPoly s(GaussQ(0, mpq_class(1, 4)), 1);
    return apply_second_order_exp(f, D, from.n(), s);
}

CPoly intertwine(const CPoly& f, const OrderingKey& from, const OrderingKey& to, cplx hbar)
{
    check_same_skew(from, to);
    if (f.num_vars() != from.n())
        throw std::invalid_argument("intertwiner: polynomial dimension mismatch");
    std::vector<cplx> D;
    for (int i = 0; i < from.n(); ++i)
        for (int j = 0; j < from.n(); ++j)
            D.push_back((to.K(i, j) - from.K(i, j)).to_complex());
    return apply_second_order_exp(f, D, from.n(), cplx(0.0, 0.25) * hbar);
}

std::pair<ExactPoly, ExactPoly> bumping_apply(const ExactPoly& f, const OrderingKey& ord)
{
    if (f.num_vars() != 1)
        throw std::invalid_argument("bumping identity needs a univariate polynomial");
    if (ord.n() != 2)
        throw std::invalid_argument("bumping identity is stated on W_2");
    auto ring = exact_ring(ord);
    ExactPoly u = ExactPoly::variable(2, 0), v = ExactPoly::variable(2, 1);
    ExactPoly uv = star_mul(u, v, ring), vu = star_mul(v, u, ring);
    ExactPoly lhs = star_mul(v, star_compose(f, uv, ring), ring);
    ExactPoly rhs = star_mul(star_compose(f, vu, ring), v, ring);
    return {lhs, rhs};
}

}  // namespace starweyl
