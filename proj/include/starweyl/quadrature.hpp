#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "starweyl/closed_forms.hpp"
#include "starweyl/grid.hpp"

namespace starweyl {

enum class Scheme { TanhSinh, GaussLegendre };

struct QuadratureSpec {
    Scheme scheme = Scheme::TanhSinh;
    double trunc = 40.0;  // half-infinite contours are cut at this length (Gauss-Legendre only)
    int nodes_per_unit = 16;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;

    QuadratureSpec doubled() const;
    QuadratureSpec truncation_doubled() const;
};

struct Estimate {
    cplx value{0.0};
    double err = 0.0;  // |fine - coarse|
};

// A ray (-inf, end] or [start, +inf) along a unit direction, a segment, or a circle.
struct ContourSpec {
    enum class Kind { RayIn, RayOut, Segment, Circle };
    Kind kind = Kind::Segment;
    cplx a{0.0};  // ray endpoint, segment start, circle centre
    cplx b{1.0};  // ray direction, segment end
    double radius = 0.0;
    int orientation = 1;

    static ContourSpec ray_in(cplx end, cplx dir = 1.0);
    static ContourSpec ray_out(cplx start, cplx dir = 1.0);
    static ContourSpec segment(cplx from, cplx to);
    static ContourSpec circle(cplx centre, double radius, int orientation = 1);

    // Euclidean distance from the path to a point.
    double distance(cplx p) const;
    std::string describe() const;
};

// Minimal clearance between a contour and the singular set of its integrand.
inline constexpr double kContourClearance = 1e-9;

struct Node {
    cplx t;
    cplx log_w;  // log of the quadrature weight including dt/ds
};

std::vector<Node> contour_nodes(const ContourSpec& c, const QuadratureSpec& q, bool coarse = false);

// Sum with a fixed binary tree, independent of thread count.
cplx pairwise_sum(const std::vector<cplx>& terms);

Estimate integrate(const std::function<cplx(cplx)>& f, const ContourSpec& c, const QuadratureSpec& q);

// STARWEYL_THREADS, or the hardware concurrency.
int worker_threads();

// Which star exponential an integrand carries.
struct Family {
    enum class Kind { UV, Linear };
    Kind kind = Kind::UV;
    cplx scale{1.0};  // UV: e_*^{scale t X}, X = uv/(i hbar)
    int var = 1;      // Linear: e_*^{t u_var/(i hbar)}

    static Family uv(cplx scale = 1.0) { return {Kind::UV, scale, 1}; }
    static Family linear(int var) { return {Kind::Linear, 1.0, var}; }
};

// t -> log of the scalar weight; a real part of -inf means zero.
using LogWeight = std::function<cplx(cplx)>;

struct Piece {
    ContourSpec contour;
    LogWeight log_weight;
    Family family;
};

// Sum of integrals  coef * left * (int exp(log_weight(t)) F(t) dt) * right  plus closed elements
// and opaque pointwise components. Immutable once built.
class StarFunctionEvaluator {
public:
    StarFunctionEvaluator(const W2& ord, const QuadratureSpec& spec);

    StarFunctionEvaluator& add_piece(const Piece& p, cplx coef = 1.0);
    StarFunctionEvaluator& add_closed(const ExpElement& e, cplx coef = 1.0);
    StarFunctionEvaluator& add_custom(std::function<Estimate(cplx, cplx)> f, cplx coef = 1.0);
    StarFunctionEvaluator& add(const StarFunctionEvaluator& o, cplx coef = 1.0);

    // p * this and this * p; DomainError for custom components.
    StarFunctionEvaluator left_mul(const CPoly& p) const;
    StarFunctionEvaluator right_mul(const CPoly& p) const;
    StarFunctionEvaluator scaled(cplx c) const;

    Estimate eval(cplx u, cplx v) const;
    std::vector<Estimate> eval_grid(const std::vector<GridPoint>& pts) const;

    const W2& ordering() const { return ord_; }
    const QuadratureSpec& spec() const { return spec_; }
    std::size_t piece_count() const { return pieces_.size(); }
    const Piece& piece(std::size_t i) const { return pieces_[i].src; }
    cplx piece_coef(std::size_t i) const { return pieces_[i].coef; }
    // No polynomial multiplier on either side.
    bool piece_plain(std::size_t i) const { return pieces_[i].R.is_zero(); }
    std::size_t closed_count() const { return closed_.size(); }
    const ExpElement& closed(std::size_t i) const { return closed_[i].e; }
    cplx closed_coef(std::size_t i) const { return closed_[i].coef; }
    std::size_t custom_count() const { return custom_.size(); }

private:
    struct NodeData {
        cplx logc;  // log weight + log amplitude
        cplx b;     // beta (UV) or t (Linear)
        cplx alpha; // u^2 coefficient (UV)
    };
    struct Compiled {
        std::vector<NodeData> fine, coarse;
    };
    struct PieceEntry {
        Piece src;
        cplx coef;
        std::shared_ptr<const Compiled> nodes;
        CPoly left, right;
        CPoly R;  // prefactor in (u, v, b); empty means 1
    };
    struct ClosedEntry {
        ExpElement e;
        cplx coef;
    };
    struct CustomEntry {
        std::function<Estimate(cplx, cplx)> f;
        cplx coef;
    };

    void compile_multiplier(PieceEntry& pe) const;
    cplx sum_nodes(const PieceEntry& pe, const std::vector<NodeData>& nodes, cplx u, cplx v) const;

    W2 ord_;
    QuadratureSpec spec_;
    std::vector<PieceEntry> pieces_;
    std::vector<ClosedEntry> closed_;
    std::vector<CustomEntry> custom_;
};

// Functions of X = uv/(i hbar) represented as measures against e_*^{tX}: rays c e^{rt} dt on
// (-inf, S] (side -1) or [S, inf) (side +1), atoms c e_*^{t0 X}, and multiples of the vacuum
// or antivacuum. The star product is convolution of measures.
struct XTerm {
    enum class Kind { Ray, Atom, Vacuum, AntiVacuum };
    Kind kind = Kind::Atom;
    cplx coef{1.0};
    cplx rate{0.0};
    cplx at{0.0};  // ray start or atom position
    int side = -1;
};

class XFunction {
public:
    std::vector<XTerm> terms;

    static XFunction ray(cplx coef, cplx rate, cplx start, int side);
    static XFunction atom(cplx coef, cplx t0);
    static XFunction one() { return atom(1.0, 0.0); }
    static XFunction vacuum(cplx coef = 1.0);
    static XFunction antivacuum(cplx coef = 1.0);

    XFunction operator*(const XFunction& o) const;
    XFunction operator+(const XFunction& o) const;
    XFunction scaled(cplx c) const;

    // (a + X) * this, by integration by parts. DomainError on atoms.
    XFunction times_linear(cplx a) const;

    StarFunctionEvaluator evaluator(const W2& ord, const QuadratureSpec& spec) const;
};

// The (kappa, tau)-expression of X = uv/(i hbar): uv/(i hbar) + kappa/2.
CPoly x_poly(const W2& ord);

// DomainError when kappa lies on the excluded real rays |kappa| >= 1.
void require_kappa_domain(const W2& ord);

// (z + X)^{-1} as +/- half-line measures.
XFunction x_inverse_plus(cplx z);
XFunction x_inverse_minus(cplx z);
// (w - X)^{-1} = int_0^inf e^{-wt} e_*^{tX} dt.
XFunction x_inverse_minus_reflected(cplx w);

// P_n = (1/n!) (u/(i hbar))^n * vac * v^n (Vacuum) and
// (1/n!) (v/(-i hbar))^n * antivac * u^n (AntiVacuum), eigenvalues X = +-(n + 1/2).
ExpElement vacuum_level(int n, const W2& ord, Limit side = Limit::Vacuum);

// P_n(u, v), n < count, at one point from the Taylor coefficients of the generating function
// e_*^{sX} e^{-s/2} in q = e^s (Vacuum) or e_*^{sX} e^{s/2} in p = e^{-s} (AntiVacuum).
std::vector<cplx> vacuum_series(cplx u, cplx v, const W2& ord, Limit side, int count);

// Radius of convergence of the vacuum (resp. antivacuum) expansion in q: |(1+k)/(1-k)|.
double vacuum_radius(const W2& ord, Limit side = Limit::Vacuum);

enum class Method { Auto, Direct, Tail };

// Half-line integrals  sum_k coef_k int_{-inf}^{end_k} w(e^t) e^{zt} e_*^{tX} dt  (horizontal rays)
// continued in z. w is analytic in |q| < w_radius with Taylor coefficients w_taylor.
struct HalfLineSpec {
    struct End {
        cplx coef;
        cplx end;
        bool full = false;  // also integrate [end, +inf), where w must decay
    };
    std::vector<End> ends;
    LogWeight log_w;  // log w(e^t), without e^{zt}
    std::function<std::vector<cplx>(int)> w_taylor;
    double w_radius = INFINITY;
};

StarFunctionEvaluator half_lines(const HalfLineSpec& h, cplx z, const W2& ord, const QuadratureSpec& spec,
                                 Method method = Method::Auto, int sign = +1);

StarFunctionEvaluator inverse_plus(cplx z, const W2& ord, const QuadratureSpec& spec = {},
                                   Method method = Method::Auto);
StarFunctionEvaluator inverse_minus(cplx z, const W2& ord, const QuadratureSpec& spec = {});

// (z+X) * (z+X)^{-1}_+ with the factor taken under the integral, so Re z = -1/2 is allowed:
// the boundary term at -inf leaves 1 - vac there.
StarFunctionEvaluator inverse_plus_times_factor(cplx z, const W2& ord, const QuadratureSpec& spec = {});

struct LinearInverses {
    StarFunctionEvaluator plus, minus;
};

// Inverses of z + v/(i hbar).
LinearInverses linear_inverse(cplx z, const W2& ord, const QuadratureSpec& spec = {});

StarFunctionEvaluator star_delta(const W2& ord, const QuadratureSpec& spec = {});

struct LeftRightInverses {
    StarFunctionEvaluator v_circ;  // u * (v*u)^{-1}_+
    StarFunctionEvaluator u_bullet;  // v * (u*v)^{-1}_-
};

LeftRightInverses left_right_inverses(const W2& ord, const QuadratureSpec& spec = {});

// (z + X)^{-1}_+ continued by sliding with v-circ; min_steps forces extra steps.
StarFunctionEvaluator continue_inverse(cplx z, const W2& ord, const QuadratureSpec& spec = {}, int min_steps = 0);

// 1 - P_n.
ExpSum defect_projection(int n, const W2& ord);

StarFunctionEvaluator star_gamma(cplx z, const W2& ord, const QuadratureSpec& spec = {}, int sign = +1,
                                 Method method = Method::Auto);
StarFunctionEvaluator star_beta(cplx z, cplx y, const W2& ord, const QuadratureSpec& spec = {}, int sign = +1);

// Gamma_*(y+z+X) * B_*(z+X, y) by convolving the two measures: the scalar weight of the product
// at each node is an inner quadrature.
StarFunctionEvaluator gamma_beta_product(cplx z, cplx y, const W2& ord, const QuadratureSpec& spec = {});

// pi x prod_{k<=N} (1 - x^2/k^2) at x = z + X, summed over the X-eigenbasis P_n.
StarFunctionEvaluator product_sin(cplx z, int N, const W2& ord);
// pi e_*^{-gamma x} * prod_{k<=N} (1 - x/k) e_*^{x/k}, x = z + X, summed the same way; the
// partial products of sin_* pi x * Gamma_*(x).
StarFunctionEvaluator product_reciprocal_gamma(cplx z, int N, const W2& ord);
// Richardson extrapolation in 1/N over N, N/2, N/4.
StarFunctionEvaluator product_sin_extrapolated(cplx z, int N, const W2& ord);
StarFunctionEvaluator product_reciprocal_gamma_extrapolated(cplx z, int N, const W2& ord);

double euler_gamma();

// e_*^{-gamma x} * x^{-1} * prod_{k<=N} ((1 + x/k)^{-1} * e_*^{x/k}), x = z + X.
StarFunctionEvaluator product_gamma(cplx z, int N, const W2& ord, const QuadratureSpec& spec = {});

struct ProductRun {
    int achieved_N = 0;
    double last_change = 0.0;
    std::vector<Estimate> values;
};

// Doubles N from N0 until successive partial products differ by < rel_tol on the probes.
ProductRun product_gamma_until(cplx z, int N0, int N_max, double rel_tol, const std::vector<GridPoint>& probes,
                               const W2& ord, const QuadratureSpec& spec = {});

// sin_* pi(z+X) * Gamma_*(z+X) as the difference of the lines Im t = +-pi. Needs Re kappa < 0.
StarFunctionEvaluator reciprocal_gamma(cplx z, const W2& ord, const QuadratureSpec& spec = {});

// -pi times the residue of e^{e^t} e^{zt} e_*^{tX} at the pole inside |Im t| < pi. The line
// difference equals the product form plus this term.
StarFunctionEvaluator reciprocal_gamma_pole_term(cplx z, const W2& ord, const QuadratureSpec& spec = {});

// sin_* pi(z+X) * (z+X)^{-1}_+ as the same line difference with weight 1.
StarFunctionEvaluator sin_times_inverse(cplx z, const W2& ord, const QuadratureSpec& spec = {});

// (1/2 pi) int_0^{2 pi} e^{e^t + t} e_*^{factor t X} d theta, t = tau + i theta.
StarFunctionEvaluator hankel_loop(double tau, const W2& ord, const QuadratureSpec& spec = {}, double factor = 1.0);

// The two axis rays of the Hankel contour: int_{-inf}^{tau} over Im t = 0 minus Im t = 2 pi.
StarFunctionEvaluator hankel_axis_parts(double tau, const W2& ord, const QuadratureSpec& spec = {},
                                        double factor = 1.0);

// (1/2 pi i) on the circle of radius pi/4 about i pi (k + 1/2) of e^{zt} e_*^{t 2X}.
StarFunctionEvaluator residue_at(int k, const W2& ord, const QuadratureSpec& spec = {}, cplx z = 0.0);

struct LaguerreValue {
    cplx value{0.0};
    int terms = 0;
    bool converged = true;
};

cplx laguerre_l(cplx nu, cplx x, int* terms = nullptr, bool* converged = nullptr);

// e^{-iw} L_{(z-1)/2}(2iw) (form 0) or e^{iw} L_{-(z+1)/2}(-2iw) (form 1).
LaguerreValue laguerre_psi(cplx z, cplx w, int form = 0);

// (1/(z+w)) ((z+X)^{-1}_+ + (w-X)^{-1}_-).
StarFunctionEvaluator resolvent_combination(cplx z, cplx w, const W2& ord, const QuadratureSpec& spec = {});

// J_0 by its power series.
cplx bessel_j0(cplx x);

// int_{ray} e^{zs} e_*^{sX} ds along (-inf, 0] rotated by e^{i theta}.
StarFunctionEvaluator rotated_inverse(cplx z, double theta, const W2& ord, const QuadratureSpec& spec = {});

// e_*^{c uv/hbar} * delta_* two ways: the evolution equation leaves delta_* unchanged; the
// truncation limit is the line integral along Im t = Re c.
struct DeltaShiftReport {
    StarFunctionEvaluator evolution;
    StarFunctionEvaluator limit;
};

DeltaShiftReport delta_shift(cplx c, const W2& ord, const QuadratureSpec& spec = {});

// The horizontal rays ending at +-i pi (as in sin_*(z+X) * (z+X)^{-1}_+), the vertical segment
// (1/2) int_{-pi}^{pi} e_*^{it(z+X)} dt, and the residues enclosed between them.
struct SinResidueCheck {
    StarFunctionEvaluator rays;
    StarFunctionEvaluator segment;
    StarFunctionEvaluator residues;  // (1/2i) sum of 2 pi i Res over poles with Re t < 0, |Im t| < pi
    int poles_inside = 0;
};

SinResidueCheck sin_residue_check(cplx z, const W2& ord, const QuadratureSpec& spec = {});

// Residue of (1 + x/m) * e_*^{-x/m} * Gamma_*(x), x = z + X, at z = -(n + m + 1/2), measured by
// symmetric differences and predicted from the vacuum expansion. The P_n component of the
// predicted residue is the removed one.
struct RemovedLevelReport {
    double max_diff = 0.0;      // measured vs predicted residue over the points
    double removed_level = 0.0; // |coefficient of P_n| in the predicted residue
    std::vector<cplx> measured, predicted;
};

RemovedLevelReport removed_level_residue(int m, int n, const std::vector<GridPoint>& pts, const W2& ord,
                           const QuadratureSpec& spec = {});

}  // namespace starweyl
