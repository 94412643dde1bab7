#include "starweyl/io.hpp"

#include <algorithm>
#include <stdexcept>

namespace starweyl {

namespace {

json exps(const Monomial& m, int n)
{
    json e = json::array();
    for (int i = 0; i < n; ++i)
        e.push_back(m.e[static_cast<std::size_t>(i)]);
    return e;
}

Monomial monomial_from(const json& e, int n)
{
    if (!e.is_array() || static_cast<int>(e.size()) != n)
        throw std::invalid_argument("exponent list must have n entries");
    Monomial m;
    for (int i = 0; i < n; ++i) {
        const int k = e[static_cast<std::size_t>(i)].get<int>();
        if (k < 0 || k > 65535)
            throw std::invalid_argument("exponent out of range");
        m.e[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(k);
    }
    return m;
}

mpq_class rational_from(const json& j)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return mpq_class(j.get<long>());
    if (j.is_number())
        return mpq_class(j.get<double>());
    throw std::invalid_argument("expected a rational string or a number");
}

std::string strip_plus(const std::string& s) { return !s.empty() && s[0] == '+' ? s.substr(1) : s; }

// Splits "a+bi" into ("a", "b"); the imaginary unit alone counts as 1.
std::pair<std::string, std::string> split_complex(std::string s)
{
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty())
        throw std::invalid_argument("empty complex literal");
    if (s.back() != 'i' && s.back() != 'j')
        return {strip_plus(s), "0"};
    s.pop_back();
    std::size_t cut = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            cut = k;
            break;
        }
    std::string re = cut == std::string::npos ? "0" : s.substr(0, cut);
    std::string im = cut == std::string::npos ? s : s.substr(cut);
    if (im.empty() || im == "+")
        im = "1";
    else if (im == "-")
        im = "-1";
    return {strip_plus(re), strip_plus(im)};
}

}  // namespace

json to_json(const ExactPoly& p)
{
    json terms = json::array();
    for (const auto& [m, c] : p.terms())
        for (const auto& [pow, g] : c.terms())
            terms.push_back({{"exp", exps(m, p.num_vars())},
                             {"coeff", {{"hbar_pow", pow}, {"re", to_string(g.re)}, {"im", to_string(g.im)}}}});
    return {{"n", p.num_vars()}, {"terms", terms}};
}

json to_json(const CPoly& p)
{
    json terms = json::array();
    for (const auto& [m, c] : p.terms())
        terms.push_back({{"exp", exps(m, p.num_vars())}, {"coeff", {{"re", c.real()}, {"im", c.imag()}}}});
    return {{"n", p.num_vars()}, {"terms", terms}};
}

ExactPoly exact_poly_from_json(const json& j)
{
    const int n = j.at("n").get<int>();
    ExactPoly p(n);
    for (const json& t : j.at("terms")) {
        const json& c = t.at("coeff");
        const int pow = c.value("hbar_pow", 0);
        p.add_term(monomial_from(t.at("exp"), n),
                   HbarPoly(GaussQ(rational_from(c.at("re")), rational_from(c.value("im", json(0)))), pow));
    }
    return p;
}

CPoly float_poly_from_json(const json& j, cplx hbar)
{
    const int n = j.at("n").get<int>();
    CPoly p(n);
    for (const json& t : j.at("terms")) {
        const json& c = t.at("coeff");
        const int pow = c.value("hbar_pow", 0);
        const cplx v(rational_from(c.at("re")).get_d(), rational_from(c.value("im", json(0))).get_d());
        p.add_term(monomial_from(t.at("exp"), n), v * std::pow(hbar, pow));
    }
    return p;
}

json to_json(const OrderingKey& k)
{
    json K = json::array(), J = json::array();
    for (const GaussQ& g : k.K())
        K.push_back({to_string(g.re), to_string(g.im)});
    for (const GaussQ& g : k.J())
        J.push_back({to_string(g.re), to_string(g.im)});
    return {{"n", k.n()}, {"K", K}, {"J", J}};
}

OrderingKey ordering_from_json(const json& j)
{
    const int n = j.at("n").get<int>();
    auto read = [&](const char* key) {
        std::vector<GaussQ> out;
        for (const json& e : j.at(key)) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("matrix entries are [re, im] pairs");
            out.emplace_back(rational_from(e[0]), rational_from(e[1]));
        }
        if (static_cast<int>(out.size()) != n * n)
            throw std::invalid_argument("matrix must have n*n entries");
        return out;
    };
    return OrderingKey(n, read("K"), read("J"));
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_string())
        return parse_complex(j.get<std::string>());
    if (j.is_array() && j.size() == 2)
        return {j[0].get<double>(), j[1].get<double>()};
    throw std::invalid_argument("expected [re, im]");
}

json to_json(const ExpElement& e)
{
    json j = {{"prefactor", to_json(e.prefactor)},
              {"amp", to_json(e.amp)},
              {"alpha", to_json(e.alpha)},
              {"beta", to_json(e.beta)},
              {"gamma", to_json(e.gamma)},
              {"ordering", to_json(e.ord.key())},
              {"hbar", to_json(e.ord.hbar)}};
    if (e.lin_u != cplx(0.0) || e.lin_v != cplx(0.0))
        j["lin"] = {to_json(e.lin_u), to_json(e.lin_v)};
    if (e.limit != Limit::None)
        j["limit"] = e.limit == Limit::Vacuum ? "vacuum" : "antivacuum";
    return j;
}

json to_json(const ContourSpec& c)
{
    static const char* kinds[] = {"ray_in", "ray_out", "segment", "circle"};
    json j = {{"kind", kinds[static_cast<int>(c.kind)]}, {"a", to_json(c.a)}};
    if (c.kind == ContourSpec::Kind::Circle) {
        j["radius"] = c.radius;
        j["orientation"] = c.orientation;
    } else {
        j["b"] = to_json(c.b);
    }
    return j;
}

json record(cplx u, cplx v, cplx z, const Estimate& e)
{
    return {{"point", {to_json(u), to_json(v)}}, {"z", to_json(z)}, {"value", to_json(e.value)}, {"err_est", e.err}};
}

cplx parse_complex(const std::string& s)
{
    const auto [re, im] = split_complex(s);
    auto num = [](const std::string& x) {
        std::size_t pos = 0;
        if (x.find('/') != std::string::npos)
            return parse_rational(x).get_d();
        const double d = std::stod(x, &pos);
        if (pos != x.size())
            throw std::invalid_argument("bad number: " + x);
        return d;
    };
    return {num(re), num(im)};
}

GaussQ parse_gauss(const std::string& s)
{
    const auto [re, im] = split_complex(s);
    return GaussQ::parse(re, im);
}

}  // namespace starweyl
