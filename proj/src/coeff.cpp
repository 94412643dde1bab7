#include "starweyl/coeff.hpp"

#include <cmath>
#include <stdexcept>

namespace starweyl {

GaussQ GaussQ::from_complex(cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("non-finite value cannot be made exact");
    return {mpq_class(z.real()), mpq_class(z.imag())};
}

GaussQ GaussQ::parse(const std::string& r, const std::string& i)
{
    return {parse_rational(r), parse_rational(i)};
}

GaussQ& GaussQ::operator+=(const GaussQ& o)
{
    re += o.re;
    im += o.im;
    return *this;
}

GaussQ& GaussQ::operator-=(const GaussQ& o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussQ& GaussQ::operator*=(const GaussQ& o)
{
    mpq_class r = re * o.re - im * o.im;
    mpq_class i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

GaussQ& GaussQ::operator/=(const GaussQ& o)
{
    mpq_class n = o.re * o.re + o.im * o.im;
    if (sgn(n) == 0)
        throw std::domain_error("division by zero Gaussian rational");
    mpq_class r = (re * o.re + im * o.im) / n;
    mpq_class i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

std::string to_string(const mpq_class& q)
{
    return q.get_str();
}

mpq_class parse_rational(const std::string& s)
{
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    auto dot = s.find_first_of(".eE");
    if (dot == std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("bad rational literal: " + s);
        q.canonicalize();
        if (s.find('/') != std::string::npos && sgn(q.get_den()) == 0)
            throw std::invalid_argument("zero denominator: " + s);
        return q;
    }
    // Decimal literal: split mantissa and exponent, keep it exact.
    std::string mant = s, expo;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
        mant = s.substr(0, e);
        expo = s.substr(e + 1);
    }
    bool neg = !mant.empty() && mant[0] == '-';
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+'))
        mant = mant.substr(1);
    auto p = mant.find('.');
    std::string digits = mant;
    long scale = 0;
    if (p != std::string::npos) {
        digits = mant.substr(0, p) + mant.substr(p + 1);
        scale = long(mant.size() - p - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad decimal literal: " + s);
    long ex = expo.empty() ? 0 : std::stol(expo);
    mpz_class num(digits, 10);
    mpz_class ten = 10, pw;
    long net = ex - scale;
    mpz_pow_ui(pw.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(net < 0 ? -net : net));
    mpq_class q = net < 0 ? mpq_class(num, pw) : mpq_class(num * pw);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

GaussQ HbarPoly::coeff(int pow) const
{
    auto it = terms_.find(pow);
    return it == terms_.end() ? GaussQ() : it->second;
}

cplx HbarPoly::substitute(cplx hbar) const
{
    cplx acc = 0.0;
    for (const auto& [k, c] : terms_)
        acc += c.to_complex() * std::pow(hbar, k);
    return acc;
}

HbarPoly& HbarPoly::operator+=(const HbarPoly& o)
{
    for (const auto& [k, c] : o.terms_) {
        auto& slot = terms_[k];
        slot += c;
        if (slot.is_zero())
            terms_.erase(k);
    }
    return *this;
}

HbarPoly& HbarPoly::operator-=(const HbarPoly& o)
{
    for (const auto& [k, c] : o.terms_) {
        auto& slot = terms_[k];
        slot -= c;
        if (slot.is_zero())
            terms_.erase(k);
    }
    return *this;
}

HbarPoly operator*(const HbarPoly& a, const HbarPoly& b)
{
    HbarPoly r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) {
            auto& slot = r.terms_[ka + kb];
            slot += ca * cb;
        }
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
        it = it->second.is_zero() ? r.terms_.erase(it) : std::next(it);
    return r;
}

HbarPoly& HbarPoly::operator*=(const HbarPoly& o)
{
    *this = *this * o;
    return *this;
}

HbarPoly& HbarPoly::operator*=(const GaussQ& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_)
        v *= c;
    return *this;
}

HbarPoly HbarPoly::operator-() const
{
    HbarPoly r = *this;
    for (auto& [k, v] : r.terms_)
        v = -v;
    return r;
}

bool operator==(const HbarPoly& a, const HbarPoly& b)
{
    return a.terms_ == b.terms_;
}

std::string to_string(const HbarPoly& p)
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (const auto& [k, c] : p.terms()) {
        if (!out.empty())
            out += " + ";
        out += "(" + to_string(c.re) + (sgn(c.im) < 0 ? "" : "+") + to_string(c.im) + "i)";
        if (k != 0)
            out += "*hbar^" + std::to_string(k);
    }
    return out;
}

}  // namespace starweyl
