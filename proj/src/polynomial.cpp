#include "starweyl/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace starweyl {

CPoly to_float(const ExactPoly& p, cplx hbar)
{
    CPoly r(p.num_vars());
    for (const auto& [m, c] : p.terms())
        r.add_term(m, c.substitute(hbar));
    return r;
}

cplx evaluate(const CPoly& p, const std::vector<cplx>& x)
{
    if (static_cast<int>(x.size()) != p.num_vars())
        throw std::invalid_argument("evaluate: point has the wrong dimension");
    cplx acc = 0.0;
    for (const auto& [m, c] : p.terms()) {
        cplx t = c;
        for (int i = 0; i < p.num_vars(); ++i)
            for (int k = 0; k < m.e[i]; ++k)
                t *= x[static_cast<std::size_t>(i)];
        acc += t;
    }
    return acc;
}

bool approx_equal(const CPoly& a, const CPoly& b, double tol)
{
    a.check_dim(b);
    double scale = 0.0;
    for (const auto& [m, c] : a.terms())
        scale = std::max(scale, std::abs(c));
    for (const auto& [m, c] : b.terms())
        scale = std::max(scale, std::abs(c));
    CPoly d = a - b;
    for (const auto& [m, c] : d.terms())
        if (std::abs(c) >= tol * (1.0 + scale))
            return false;
    return true;
}

namespace {

std::string monomial_string(const Monomial& m, int n)
{
    static const char* uv[] = {"u", "v"};
    std::string s;
    for (int i = 0; i < n; ++i) {
        if (m.e[i] == 0)
            continue;
        if (!s.empty())
            s += "*";
        s += n == 2 ? std::string(uv[i]) : "u" + std::to_string(i + 1);
        if (m.e[i] > 1)
            s += "^" + std::to_string(m.e[i]);
    }
    return s.empty() ? "1" : s;
}

}  // namespace

std::string to_string(const CPoly& p)
{
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)*" << monomial_string(m, p.num_vars());
    }
    return os.str();
}

std::string to_string(const ExactPoly& p)
{
    if (p.is_zero())
        return "0";
    std::string s;
    for (const auto& [m, c] : p.terms()) {
        if (!s.empty())
            s += " + ";
        s += "[" + to_string(c) + "]*" + monomial_string(m, p.num_vars());
    }
    return s;
}

}  // namespace starweyl
