#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "starweyl/coeff.hpp"

namespace starweyl {

inline constexpr int kMaxVars = 8;

struct Monomial {
    std::array<std::uint16_t, kMaxVars> e{};

    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e != b.e; }
};

// Graded lexicographic: total degree first, then exponents from the first variable.
struct GradedLex {
    bool operator()(const Monomial& a, const Monomial& b) const
    {
        int da = a.degree(), db = b.degree();
        if (da != db)
            return da < db;
        return std::lexicographical_compare(b.e.begin(), b.e.end(), a.e.begin(), a.e.end());
    }
};

inline Monomial operator+(Monomial a, const Monomial& b)
{
    for (int i = 0; i < kMaxVars; ++i)
        a.e[i] = static_cast<std::uint16_t>(a.e[i] + b.e[i]);
    return a;
}

template <class C>
class Polynomial {
public:
    using Terms = std::map<Monomial, C, GradedLex>;

    explicit Polynomial(int n = 2) : n_(n)
    {
        if (n < 1 || n > kMaxVars)
            throw std::invalid_argument("number of variables must be in 1..8");
    }

    static Polynomial constant(int n, const C& c)
    {
        Polynomial p(n);
        p.add_term(Monomial{}, c);
        return p;
    }

    static Polynomial variable(int n, int i)
    {
        Polynomial p(n);
        Monomial m;
        m.e.at(static_cast<std::size_t>(i)) = 1;
        p.add_term(m, CoeffOps<C>::from_ratio(1, 1));
        return p;
    }

    int num_vars() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

    C coeff(const Monomial& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? C{} : it->second;
    }

    void add_term(const Monomial& m, const C& c)
    {
        for (int i = n_; i < kMaxVars; ++i)
            if (m.e[i] != 0)
                throw std::invalid_argument("monomial uses a variable beyond num_vars");
        if (CoeffOps<C>::is_zero(c))
            return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second += c;
        if (CoeffOps<C>::is_zero(it->second))
            terms_.erase(it);
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        check_dim(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o)
    {
        check_dim(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }

    Polynomial& operator*=(const C& s)
    {
        if (CoeffOps<C>::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second *= s;
            it = CoeffOps<C>::is_zero(it->second) ? terms_.erase(it) : std::next(it);
        }
        return *this;
    }

    Polynomial operator-() const
    {
        Polynomial r(n_);
        for (const auto& [m, c] : terms_)
            r.terms_.emplace(m, -c);
        return r;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const C& s) { return a *= s; }

    // Commutative (pointwise) product.
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        a.check_dim(b);
        Polynomial r(a.n_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_term(ma + mb, ca * cb);
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // d/du_i
    Polynomial derivative(int i) const
    {
        Polynomial r(n_);
        for (const auto& [m, c] : terms_) {
            if (m.e[i] == 0)
                continue;
            Monomial d = m;
            d.e[i] -= 1;
            C k = c;
            k *= CoeffOps<C>::from_ratio(m.e[i], 1);
            r.add_term(d, k);
        }
        return r;
    }

    void check_dim(const Polynomial& o) const
    {
        if (o.n_ != n_)
            throw std::invalid_argument("polynomial dimension mismatch");
    }

private:
    int n_;
    Terms terms_;
};

using ExactPoly = Polynomial<HbarPoly>;
using CPoly = Polynomial<cplx>;

// Substitute a numeric hbar into an exact polynomial.
CPoly to_float(const ExactPoly& p, cplx hbar);

// Evaluate a float polynomial at a point (size = num_vars).
cplx evaluate(const CPoly& p, const std::vector<cplx>& x);

// Coefficient-wise comparison with |a-b| < tol * (1 + max|coeff|).
bool approx_equal(const CPoly& a, const CPoly& b, double tol = 1e-12);

std::string to_string(const CPoly& p);
std::string to_string(const ExactPoly& p);

}  // namespace starweyl
