#pragma once

#include <complex>
#include <map>
#include <string>

#include <gmpxx.h>

namespace starweyl {

using cplx = std::complex<double>;

// Exact rational p + q i.
struct GaussQ {
    mpq_class re{0}, im{0};

    GaussQ() = default;
    // mpq_class(p, q) is not reduced; gmp arithmetic requires canonical operands.
    GaussQ(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i))
    {
        re.canonicalize();
        im.canonicalize();
    }
    GaussQ(long r) : re(r), im(0) {}

    static GaussQ from_complex(cplx z);  // exact binary expansion of the doubles
    static GaussQ parse(const std::string& re, const std::string& im);

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    cplx to_complex() const { return {re.get_d(), im.get_d()}; }
    GaussQ conj() const { return {re, -im}; }

    GaussQ& operator+=(const GaussQ& o);
    GaussQ& operator-=(const GaussQ& o);
    GaussQ& operator*=(const GaussQ& o);
    GaussQ& operator/=(const GaussQ& o);
    GaussQ operator-() const { return {-re, -im}; }

    friend GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
    friend GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
    friend GaussQ operator*(GaussQ a, const GaussQ& b) { return a *= b; }
    friend GaussQ operator/(GaussQ a, const GaussQ& b) { return a /= b; }
    friend bool operator==(const GaussQ& a, const GaussQ& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GaussQ& a, const GaussQ& b) { return !(a == b); }
};

std::string to_string(const mpq_class& q);
mpq_class parse_rational(const std::string& s);  // "p", "p/q" or a decimal literal

// Polynomial in the formal parameter hbar with Gaussian-rational coefficients.
// Only non-negative powers occur in practice but negative keys are allowed.
class HbarPoly {
public:
    HbarPoly() = default;
    HbarPoly(long c) { if (c != 0) terms_[0] = GaussQ(c); }
    HbarPoly(const GaussQ& c, int pow = 0) { if (!c.is_zero()) terms_[pow] = c; }

    static HbarPoly i_hbar_half() { return HbarPoly(GaussQ(0, mpq_class(1, 2)), 1); }

    const std::map<int, GaussQ>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    GaussQ coeff(int pow) const;
    cplx substitute(cplx hbar) const;

    HbarPoly& operator+=(const HbarPoly& o);
    HbarPoly& operator-=(const HbarPoly& o);
    HbarPoly& operator*=(const HbarPoly& o);
    HbarPoly& operator*=(const GaussQ& c);
    HbarPoly operator-() const;

    friend HbarPoly operator+(HbarPoly a, const HbarPoly& b) { return a += b; }
    friend HbarPoly operator-(HbarPoly a, const HbarPoly& b) { return a -= b; }
    friend HbarPoly operator*(const HbarPoly& a, const HbarPoly& b);
    friend bool operator==(const HbarPoly& a, const HbarPoly& b);
    friend bool operator!=(const HbarPoly& a, const HbarPoly& b) { return !(a == b); }

private:
    std::map<int, GaussQ> terms_;
};

std::string to_string(const HbarPoly& p);

// Uniform coefficient interface used by the templated polynomial code.
template <class C> struct CoeffOps;

template <> struct CoeffOps<HbarPoly> {
    static bool is_zero(const HbarPoly& c) { return c.is_zero(); }
    static HbarPoly from_ratio(long p, long q) { return HbarPoly(GaussQ(mpq_class(p, q))); }
    static HbarPoly from_gauss(const GaussQ& g) { return HbarPoly(g); }
};

template <> struct CoeffOps<cplx> {
    static bool is_zero(const cplx& c) { return c == cplx(0.0, 0.0); }
    static cplx from_ratio(long p, long q) { return cplx(double(p) / double(q), 0.0); }
    static cplx from_gauss(const GaussQ& g) { return g.to_complex(); }
};

}  // namespace starweyl
