#include "starweyl/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "starweyl/weyl_poly.hpp"

namespace starweyl {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx I(0.0, 1.0);
constexpr double kTanhSinhRange = 6.0;  // |k h| <= 6 reaches t ~ -1270 on a ray
constexpr int kPanelNodes = 8;

double log_cosh(double x)
{
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}

// Composite Gauss-Legendre on [0, 1] with the given panel count.
void gl_unit(int panels, std::vector<double>& x, std::vector<double>& w)
{
    using G = boost::math::quadrature::gauss<double, kPanelNodes>;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    x.clear();
    w.clear();
    const double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            for (double sgn : {-1.0, 1.0}) {
                x.push_back(mid + sgn * ab[i] * h / 2);
                w.push_back(wt[i] * h / 2);
            }
        }
    }
}

int panels_for(double length, int npu, bool coarse)
{
    int p = std::max(2, static_cast<int>(std::ceil(length * npu / kPanelNodes)));
    p += p % 2;
    return coarse ? p / 2 : p;
}

std::vector<Node> segment_nodes(cplx a, cplx b, const QuadratureSpec& q, bool coarse)
{
    std::vector<double> x, w;
    gl_unit(panels_for(std::abs(b - a), q.nodes_per_unit, coarse), x, w);
    std::vector<Node> out;
    const cplx lj = std::log(b - a);
    for (std::size_t i = 0; i < x.size(); ++i)
        out.push_back({a + (b - a) * x[i], lj + std::log(w[i])});
    return out;
}

// Tanh-sinh in d on (0, pi/2] after t = 2 log tan(d/2), i.e. cos(pi - d) = tanh(t/2).
// Returns parameter s <= 0 and log(ds) for each node.
std::vector<std::pair<double, double>> half_line_params(const QuadratureSpec& q, bool coarse)
{
    const double h = (coarse ? 2.0 : 1.0) / q.nodes_per_unit;
    const int K = static_cast<int>(std::floor(kTanhSinhRange / h));
    std::vector<std::pair<double, double>> out;
    for (int k = -K; k <= K; ++k) {
        const double kh = k * h;
        const double u = kPi / 2 * std::sinh(kh);
        double s, log_sin_d;
        if (u < 0) {
            const double d = (kPi / 2) / (1.0 + std::exp(-2.0 * u));
            s = 2.0 * std::log(std::tan(d / 2));
            log_sin_d = std::log(std::sin(d));
        } else {
            const double delta = (kPi / 2) / (1.0 + std::exp(2.0 * u));
            const double x = std::tan(delta / 2);
            s = 2.0 * (std::log1p(-x) - std::log1p(x));
            log_sin_d = std::log(std::cos(delta));
        }
        const double log_dd = std::log(h * kPi * kPi / 8 * std::cosh(kh)) - 2.0 * log_cosh(u);
        out.emplace_back(s, log_dd + std::log(2.0) - log_sin_d);
    }
    return out;
}

double point_segment_distance(cplx p, cplx a, cplx b)
{
    const cplx d = b - a;
    const double L2 = std::norm(d);
    if (L2 == 0.0)
        return std::abs(p - a);
    const double s = std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0);
    return std::abs(p - a - s * d);
}

CPoly lift3(const CPoly& p)
{
    CPoly r(3);
    for (const auto& [m, c] : p.terms())
        r.add_term(m, c);
    return r;
}

bool is_one(const CPoly& p) { return p.size() == 1 && p.degree() == 0 && p.coeff(Monomial{}) == cplx(1.0); }

}  // namespace

QuadratureSpec QuadratureSpec::doubled() const
{
    QuadratureSpec q = *this;
    q.nodes_per_unit *= 2;
    return q;
}

QuadratureSpec QuadratureSpec::truncation_doubled() const
{
    QuadratureSpec q = *this;
    q.trunc *= 2;
    return q;
}

ContourSpec ContourSpec::ray_in(cplx end, cplx dir)
{
    ContourSpec c;
    c.kind = Kind::RayIn;
    c.a = end;
    c.b = dir / std::abs(dir);
    return c;
}

ContourSpec ContourSpec::ray_out(cplx start, cplx dir)
{
    ContourSpec c;
    c.kind = Kind::RayOut;
    c.a = start;
    c.b = dir / std::abs(dir);
    return c;
}

ContourSpec ContourSpec::segment(cplx from, cplx to)
{
    ContourSpec c;
    c.kind = Kind::Segment;
    c.a = from;
    c.b = to;
    return c;
}

ContourSpec ContourSpec::circle(cplx centre, double radius, int orientation)
{
    if (!(radius > 0))
        throw std::invalid_argument("circle radius must be positive");
    ContourSpec c;
    c.kind = Kind::Circle;
    c.a = centre;
    c.radius = radius;
    c.orientation = orientation >= 0 ? 1 : -1;
    return c;
}

double ContourSpec::distance(cplx p) const
{
    switch (kind) {
    case Kind::Segment:
        return point_segment_distance(p, a, b);
    case Kind::Circle:
        return std::abs(std::abs(p - a) - radius);
    case Kind::RayIn:
    case Kind::RayOut: {
        const cplx dir = kind == Kind::RayIn ? -b : b;
        const double s = std::max(0.0, ((p - a) * std::conj(dir)).real());
        return std::abs(p - a - s * dir);
    }
    }
    return INFINITY;
}

std::string ContourSpec::describe() const
{
    std::ostringstream os;
    os.precision(17);
    auto c = [&](cplx z) { os << "(" << z.real() << "," << z.imag() << ")"; };
    switch (kind) {
    case Kind::RayIn:
        os << "ray_in end=";
        c(a);
        os << " dir=";
        c(b);
        break;
    case Kind::RayOut:
        os << "ray_out start=";
        c(a);
        os << " dir=";
        c(b);
        break;
    case Kind::Segment:
        os << "segment from=";
        c(a);
        os << " to=";
        c(b);
        break;
    case Kind::Circle:
        os << "circle centre=";
        c(a);
        os << " radius=" << radius << " orientation=" << orientation;
        break;
    }
    return os.str();
}

std::vector<Node> contour_nodes(const ContourSpec& c, const QuadratureSpec& q, bool coarse)
{
    if (q.nodes_per_unit < 1)
        throw std::invalid_argument("nodes_per_unit must be positive");
    switch (c.kind) {
    case ContourSpec::Kind::Segment:
        return segment_nodes(c.a, c.b, q, coarse);
    case ContourSpec::Kind::Circle: {
        // Trapezoid rule: exponentially convergent for periodic analytic integrands, including
        // the essential singularity of the quadratic exponential at an enclosed pole.
        const int m = static_cast<int>(std::ceil(8 * q.nodes_per_unit * std::max(1.0, c.radius))) / (coarse ? 2 : 1);
        std::vector<Node> out;
        for (int i = 0; i < m; ++i) {
            const double th = 2 * kPi * i / m;
            // dt = i r e^{i theta} d theta
            cplx lw = std::log(2 * kPi * c.radius / m) + I * (th + kPi / 2);
            if (c.orientation < 0)
                lw += I * kPi;
            out.push_back({c.a + c.radius * std::exp(I * th), lw});
        }
        return out;
    }
    case ContourSpec::Kind::RayIn:
    case ContourSpec::Kind::RayOut: {
        const double sgn = c.kind == ContourSpec::Kind::RayIn ? 1.0 : -1.0;
        if (q.scheme == Scheme::GaussLegendre) {
            const cplx far = c.a - sgn * c.b * q.trunc;
            return c.kind == ContourSpec::Kind::RayIn ? segment_nodes(far, c.a, q, coarse)
                                                      : segment_nodes(c.a, far, q, coarse);
        }
        std::vector<Node> out;
        const cplx ldir = std::log(c.b);
        for (const auto& [s, lw] : half_line_params(q, coarse))
            out.push_back({c.a + sgn * c.b * s, lw + ldir});
        return out;
    }
    }
    return {};
}

cplx pairwise_sum(const std::vector<cplx>& terms)
{
    std::function<cplx(std::size_t, std::size_t)> rec = [&](std::size_t lo, std::size_t hi) -> cplx {
        if (hi - lo <= 8) {
            cplx s = 0.0;
            for (std::size_t i = lo; i < hi; ++i)
                s += terms[i];
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return rec(0, terms.size());
}

Estimate integrate(const std::function<cplx(cplx)>& f, const ContourSpec& c, const QuadratureSpec& q)
{
    cplx level[2];
    for (int lv = 0; lv < 2; ++lv) {
        std::vector<cplx> terms;
        for (const Node& n : contour_nodes(c, q, lv == 1)) {
            if (n.log_w.real() < -740)
                continue;
            const cplx fv = f(n.t);
            if (fv != cplx(0.0))
                terms.push_back(std::exp(n.log_w) * fv);
        }
        level[lv] = pairwise_sum(terms);
    }
    return {level[0], std::abs(level[0] - level[1])};
}

int worker_threads()
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("STARWEYL_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0)
            n = n > 0 ? std::min(n, cap) : cap;
    }
    return std::max(1, n);
}

StarFunctionEvaluator::StarFunctionEvaluator(const W2& ord, const QuadratureSpec& spec) : ord_(ord), spec_(spec) {}

StarFunctionEvaluator& StarFunctionEvaluator::add_piece(const Piece& p, cplx coef)
{
    if (p.family.kind == Family::Kind::UV) {
        const SingularLocus loc = singular_locus(ord_.kappa);
        if (!loc.empty)
            for (const cplx pt : loc.points(-60, 60)) {
                const cplx tp = 2.0 * pt / p.family.scale;
                if (p.contour.distance(tp) < kContourClearance)
                    throw ContourTooCloseError("contour " + p.contour.describe() + " meets the singular locus",
                                               "the path keeps a positive distance from the singular locus");
            }
    }
    auto compiled = std::make_shared<Compiled>();
    const cplx ih = ord_.i_hbar();
    for (int lv = 0; lv < 2; ++lv) {
        auto& out = lv == 0 ? compiled->fine : compiled->coarse;
        for (const Node& n : contour_nodes(p.contour, spec_, lv == 1)) {
            const cplx lw = p.log_weight(n.t);
            if (std::isinf(lw.real()) && lw.real() < 0)
                continue;
            if (p.family.kind == Family::Kind::UV) {
                const UVParams up = uv_params(p.family.scale * n.t / 2.0, ord_);
                out.push_back({n.log_w + lw + up.log_amp, up.beta, up.beta * up.beta * ord_.tau});
            } else {
                const cplx K = p.family.var == 0 ? cplx(0.0) : ord_.tau;
                out.push_back({n.log_w + lw + n.t * n.t * K / (4.0 * ih), n.t, 0.0});
            }
        }
    }
    PieceEntry pe{p, coef, compiled, CPoly::constant(2, 1.0), CPoly::constant(2, 1.0), CPoly(3)};
    compile_multiplier(pe);
    pieces_.push_back(std::move(pe));
    return *this;
}

StarFunctionEvaluator& StarFunctionEvaluator::add_closed(const ExpElement& e, cplx coef)
{
    if (!e.ord.same_as(ord_))
        throw std::invalid_argument("closed element is expressed in a different ordering");
    closed_.push_back({e, coef});
    return *this;
}

StarFunctionEvaluator& StarFunctionEvaluator::add_custom(std::function<Estimate(cplx, cplx)> f, cplx coef)
{
    custom_.push_back({std::move(f), coef});
    return *this;
}

StarFunctionEvaluator& StarFunctionEvaluator::add(const StarFunctionEvaluator& o, cplx coef)
{
    if (!o.ord_.same_as(ord_))
        throw std::invalid_argument("evaluators are expressed in different orderings");
    for (auto pe : o.pieces_) {
        pe.coef *= coef;
        pieces_.push_back(std::move(pe));
    }
    for (auto ce : o.closed_) {
        ce.coef *= coef;
        closed_.push_back(std::move(ce));
    }
    for (auto cu : o.custom_) {
        cu.coef *= coef;
        custom_.push_back(std::move(cu));
    }
    return *this;
}

void StarFunctionEvaluator::compile_multiplier(PieceEntry& pe) const
{
    if (is_one(pe.left) && is_one(pe.right)) {
        pe.R = CPoly(3);
        return;
    }
    const cplx ih = ord_.i_hbar();
    CPoly qu(3), qv(3);
    if (pe.src.family.kind == Family::Kind::UV) {
        qu.add_term(Monomial{{1, 0, 2}}, 2.0 * ord_.tau / ih);
        qu.add_term(Monomial{{0, 1, 1}}, 2.0 / ih);
        qv.add_term(Monomial{{1, 0, 1}}, 2.0 / ih);
    } else {
        (pe.src.family.var == 0 ? qu : qv).add_term(Monomial{{0, 0, 1}}, 1.0 / ih);
    }
    const auto key = ord_.key();
    CPoly R = gauss_star_poly(lift3(pe.left), CPoly::constant(3, 1.0), qu, qv, key, ord_.hbar, Side::Left);
    pe.R = gauss_star_poly(lift3(pe.right), R, qu, qv, key, ord_.hbar, Side::Right);
    if (pe.R.is_zero())
        pe.coef = 0.0;
}

StarFunctionEvaluator StarFunctionEvaluator::left_mul(const CPoly& p) const
{
    if (!custom_.empty())
        throw DomainError("pointwise components cannot be star-multiplied",
                          "the element must be built from integrals and closed elements");
    StarFunctionEvaluator r = *this;
    const auto key = ord_.key();
    for (auto& pe : r.pieces_) {
        pe.left = star_mul(p, pe.left, key, ord_.hbar);
        compile_multiplier(pe);
    }
    for (auto& ce : r.closed_)
        ce.e = poly_star_exp(p, ce.e, Side::Left);
    return r;
}

StarFunctionEvaluator StarFunctionEvaluator::right_mul(const CPoly& p) const
{
    if (!custom_.empty())
        throw DomainError("pointwise components cannot be star-multiplied",
                          "the element must be built from integrals and closed elements");
    StarFunctionEvaluator r = *this;
    const auto key = ord_.key();
    for (auto& pe : r.pieces_) {
        pe.right = star_mul(pe.right, p, key, ord_.hbar);
        compile_multiplier(pe);
    }
    for (auto& ce : r.closed_)
        ce.e = poly_star_exp(p, ce.e, Side::Right);
    return r;
}

StarFunctionEvaluator StarFunctionEvaluator::scaled(cplx c) const
{
    StarFunctionEvaluator r(ord_, spec_);
    r.add(*this, c);
    return r;
}

cplx StarFunctionEvaluator::sum_nodes(const PieceEntry& pe, const std::vector<NodeData>& nodes, cplx u, cplx v) const
{
    const cplx ih = ord_.i_hbar();
    const bool uv = pe.src.family.kind == Family::Kind::UV;
    const cplx lin = pe.src.family.var == 0 ? u : v;
    const bool plain = pe.R.is_zero();
    std::vector<cplx> terms;
    terms.reserve(nodes.size());
    for (const NodeData& n : nodes) {
        const cplx q = uv ? (n.alpha * u * u + 2.0 * n.b * u * v) / ih : n.b * lin / ih;
        const cplx lc = n.logc + q;
        if (lc.real() < -700)
            continue;
        cplx val = std::exp(lc);
        if (!plain)
            val *= evaluate(pe.R, {u, v, n.b});
        terms.push_back(val);
    }
    return pairwise_sum(terms);
}

Estimate StarFunctionEvaluator::eval(cplx u, cplx v) const
{
    std::vector<cplx> vals;
    double err = 0.0;
    for (const auto& pe : pieces_) {
        if (pe.coef == cplx(0.0))
            continue;
        const cplx f = sum_nodes(pe, pe.nodes->fine, u, v);
        const cplx c = sum_nodes(pe, pe.nodes->coarse, u, v);
        vals.push_back(pe.coef * f);
        err += std::abs(pe.coef) * std::abs(f - c);
    }
    for (const auto& ce : closed_)
        vals.push_back(ce.coef * ce.e.eval(u, v));
    for (const auto& cu : custom_) {
        const Estimate e = cu.f(u, v);
        vals.push_back(cu.coef * e.value);
        err += std::abs(cu.coef) * e.err;
    }
    Estimate r{pairwise_sum(vals), err};
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        throw ConvergenceError("evaluation produced a non-finite value",
                               "the integrand must be integrable along the contour");
    return r;
}

std::vector<Estimate> StarFunctionEvaluator::eval_grid(const std::vector<GridPoint>& pts) const
{
    std::vector<Estimate> out(pts.size());
    const int nt = std::min<int>(worker_threads(), static_cast<int>(pts.size()));
    if (nt <= 1) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            out[i] = eval(pts[i].first, pts[i].second);
        return out;
    }
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(nt));
    std::vector<std::thread> th;
    for (int w = 0; w < nt; ++w)
        th.emplace_back([&, w] {
            try {
                for (std::size_t i = static_cast<std::size_t>(w); i < pts.size(); i += static_cast<std::size_t>(nt))
                    out[i] = eval(pts[i].first, pts[i].second);
            } catch (...) {
                errs[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : th)
        t.join();
    for (auto& e : errs)
        if (e)
            std::rethrow_exception(e);
    return out;
}

// ---- XFunction ----

namespace {

using K = XTerm::Kind;

XTerm make_ray(cplx c, cplx r, cplx s, int side) { return {K::Ray, c, r, s, side}; }

void require_distinct(cplx a, cplx b)
{
    if (std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)))
        throw DomainError("convolution of rays with equal rates", "ray rates must differ");
}

std::vector<XTerm> mul_terms(const XTerm& x, const XTerm& y)
{
    if (x.kind == K::Atom) {
        switch (y.kind) {
        case K::Atom:
            return {{K::Atom, x.coef * y.coef, 0.0, x.at + y.at, -1}};
        case K::Ray:
            return {make_ray(x.coef * y.coef * std::exp(-y.rate * x.at), y.rate, y.at + x.at, y.side)};
        case K::Vacuum:
            return {{K::Vacuum, x.coef * y.coef * std::exp(x.at / 2.0), 0.0, 0.0, -1}};
        case K::AntiVacuum:
            return {{K::AntiVacuum, x.coef * y.coef * std::exp(-x.at / 2.0), 0.0, 0.0, -1}};
        }
    }
    if (y.kind == K::Atom)
        return mul_terms(y, x);
    if (x.kind == K::Ray && y.kind == K::Ray) {
        const cplx c = x.coef * y.coef;
        const cplx S = x.at + y.at;
        if (x.side == y.side) {
            const cplx a = x.rate, b = y.rate;
            require_distinct(a, b);
            if (x.side < 0)
                return {make_ray(c * std::exp((a - b) * x.at) / (a - b), b, S, -1),
                        make_ray(-c * std::exp((b - a) * y.at) / (a - b), a, S, -1)};
            return {make_ray(c * std::exp((b - a) * y.at) / (a - b), a, S, +1),
                    make_ray(-c * std::exp((a - b) * x.at) / (a - b), b, S, +1)};
        }
        const XTerm& m = x.side < 0 ? x : y;
        const XTerm& p = x.side < 0 ? y : x;
        const cplx a = m.rate, b = p.rate;
        if ((a - b).real() <= 0)
            throw DivergesError("product of a (-inf, S] and a [S, inf) inverse diverges",
                                "Re(rate_minus - rate_plus) > 0");
        return {make_ray(c * std::exp((b - a) * p.at) / (a - b), a, S, -1),
                make_ray(c * std::exp((a - b) * m.at) / (a - b), b, S, +1)};
    }
    if (x.kind == K::Ray || y.kind == K::Ray) {
        const XTerm& r = x.kind == K::Ray ? x : y;
        const XTerm& l = x.kind == K::Ray ? y : x;
        const cplx rate = r.rate + (l.kind == K::Vacuum ? 0.5 : -0.5);
        const bool ok = r.side < 0 ? rate.real() > 0 : rate.real() < 0;
        if (!ok)
            throw DivergesError("half-line integral against a vacuum diverges",
                                "the vacuum eigenvalue must make the ray integrable");
        const cplx val = std::exp(rate * r.at) / rate * (r.side < 0 ? 1.0 : -1.0);
        return {{l.kind, r.coef * l.coef * val, 0.0, 0.0, -1}};
    }
    if (x.kind != y.kind)
        throw DivergesError("product of the vacuum and the antivacuum diverges",
                            "limits t -> -inf and t -> +inf cannot be combined");
    return {{x.kind, x.coef * y.coef, 0.0, 0.0, -1}};
}

}  // namespace

XFunction XFunction::ray(cplx coef, cplx rate, cplx start, int side)
{
    return XFunction{{make_ray(coef, rate, start, side < 0 ? -1 : 1)}};
}

XFunction XFunction::atom(cplx coef, cplx t0) { return XFunction{{{K::Atom, coef, 0.0, t0, -1}}}; }
XFunction XFunction::vacuum(cplx coef) { return XFunction{{{K::Vacuum, coef, 0.0, 0.0, -1}}}; }
XFunction XFunction::antivacuum(cplx coef) { return XFunction{{{K::AntiVacuum, coef, 0.0, 0.0, -1}}}; }

XFunction XFunction::operator*(const XFunction& o) const
{
    XFunction r;
    for (const auto& x : terms)
        for (const auto& y : o.terms)
            for (auto& t : mul_terms(x, y))
                r.terms.push_back(t);
    return r;
}

XFunction XFunction::operator+(const XFunction& o) const
{
    XFunction r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    return r;
}

XFunction XFunction::scaled(cplx c) const
{
    XFunction r = *this;
    for (auto& t : r.terms)
        t.coef *= c;
    return r;
}

XFunction XFunction::times_linear(cplx a) const
{
    XFunction r;
    for (const auto& t : terms) {
        switch (t.kind) {
        case K::Vacuum:
            r.terms.push_back({K::Vacuum, t.coef * (a + 0.5), 0.0, 0.0, -1});
            break;
        case K::AntiVacuum:
            r.terms.push_back({K::AntiVacuum, t.coef * (a - 0.5), 0.0, 0.0, -1});
            break;
        case K::Atom:
            throw DomainError("(a + X) times a single exponential is not a measure",
                              "integration by parts needs an integral term");
        case K::Ray: {
            // int c e^{rt} (a + d/dt) e_*^{tX} dt over the ray.
            const double s = t.side < 0 ? 1.0 : -1.0;
            if (a != t.rate)
                r.terms.push_back(make_ray(t.coef * (a - t.rate), t.rate, t.at, t.side));
            r.terms.push_back({K::Atom, s * t.coef * std::exp(t.rate * t.at), 0.0, t.at, -1});
            const cplx lim = t.rate + (t.side < 0 ? 0.5 : -0.5);
            if (std::abs(lim) < 1e-14) {
                r.terms.push_back({t.side < 0 ? K::Vacuum : K::AntiVacuum, -s * t.coef, 0.0, 0.0, -1});
            } else if (t.side < 0 ? lim.real() <= 0 : lim.real() >= 0) {
                throw DivergesError("boundary term of the half-line integral diverges",
                                    "e^{rt} e_*^{tX} must have a limit at the open end");
            }
            break;
        }
        }
    }
    return r;
}

StarFunctionEvaluator XFunction::evaluator(const W2& ord, const QuadratureSpec& spec) const
{
    StarFunctionEvaluator ev(ord, spec);
    for (const auto& t : terms) {
        switch (t.kind) {
        case K::Atom:
            ev.add_closed(star_exp_quadratic(t.at / 2.0, ord), t.coef);
            break;
        case K::Vacuum:
            ev.add_closed(starweyl::vacuum(ord), t.coef);
            break;
        case K::AntiVacuum:
            ev.add_closed(starweyl::antivacuum(ord), t.coef);
            break;
        case K::Ray: {
            const bool ok = t.side < 0 ? t.rate.real() > -0.5 : t.rate.real() < 0.5;
            if (!ok)
                throw DivergesError("half-line integral diverges",
                                    t.side < 0 ? "Re rate > -1/2 on (-inf, S]" : "Re rate < 1/2 on [S, inf)");
            const cplx r = t.rate;
            const ContourSpec c = t.side < 0 ? ContourSpec::ray_in(t.at) : ContourSpec::ray_out(t.at);
            ev.add_piece({c, [r](cplx x) { return r * x; }, Family::uv()}, t.coef);
            break;
        }
        }
    }
    return ev;
}

XFunction x_inverse_plus(cplx z) { return XFunction::ray(1.0, z, 0.0, -1); }
XFunction x_inverse_minus(cplx z) { return XFunction::ray(-1.0, z, 0.0, +1); }
XFunction x_inverse_minus_reflected(cplx w) { return XFunction::ray(1.0, -w, 0.0, +1); }

}  // namespace starweyl
