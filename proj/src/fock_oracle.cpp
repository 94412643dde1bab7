#include "starweyl/fock_oracle.hpp"

#include <Eigen/LU>
#include <cmath>

#include "starweyl/weyl_poly.hpp"

namespace starweyl {

namespace {

FockMatrix zero_matrix(int N)
{
    FockMatrix r;
    r.N = N;
    r.m = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    r.valid = N;
    return r;
}

void check_level(int N)
{
    if (N < 1)
        throw std::invalid_argument("truncation level must be positive");
}

void same_level(const FockMatrix& a, const FockMatrix& b)
{
    if (a.N != b.N)
        throw std::invalid_argument("Fock matrices at different truncation levels");
}

// a^dagger^j a^j is diagonal with entries m!/(m-j)!.
double falling(int m, int j)
{
    double r = 1.0;
    for (int i = 0; i < j; ++i)
        r *= double(m - i);
    return r;
}

W2 normal_ordering(cplx hbar) { return W2{hbar, 1.0, 0.0}; }

}  // namespace

FockMatrix FockMatrix::operator*(const FockMatrix& o) const
{
    same_level(*this, o);
    FockMatrix r = *this;
    r.m = m * o.m;
    // Degrees add, so does the excluded band.
    r.valid = std::max(-1, valid + o.valid - N);
    return r;
}

FockMatrix FockMatrix::operator+(const FockMatrix& o) const
{
    same_level(*this, o);
    FockMatrix r = *this;
    r.m = m + o.m;
    r.valid = std::min(valid, o.valid);
    return r;
}

FockMatrix FockMatrix::operator-(const FockMatrix& o) const { return *this + o.scaled(-1.0); }

FockMatrix FockMatrix::scaled(cplx c) const
{
    FockMatrix r = *this;
    r.m *= c;
    return r;
}

double FockMatrix::band_norm() const
{
    if (valid < 0)
        return 0.0;
    return m.topLeftCorner(valid + 1, valid + 1).cwiseAbs().maxCoeff();
}

FockMatrix fock_identity(int N)
{
    check_level(N);
    FockMatrix r = zero_matrix(N);
    r.m.setIdentity();
    return r;
}

FockMatrix fock_projector(int n, int N)
{
    check_level(N);
    if (n < 0 || n > N)
        throw TruncationError("level " + std::to_string(n) + " beyond truncation " + std::to_string(N), "n <= N");
    FockMatrix r = zero_matrix(N);
    r.m(n, n) = 1.0;
    return r;
}

OperatorDict fock_dict(cplx hbar, int N)
{
    check_level(N);
    OperatorDict d{hbar, zero_matrix(N), zero_matrix(N)};
    const cplx ih = cplx(0, 1) * hbar;
    for (int q = 0; q < N; ++q)
        d.u.m(q + 1, q) = 1.0;
    for (int q = 1; q <= N; ++q)
        d.v.m(q - 1, q) = ih * double(q);
    d.u.valid = N - 1;
    d.v.valid = N - 1;
    return d;
}

FockMatrix represent(const CPoly& p, cplx hbar, int N)
{
    check_level(N);
    if (p.num_vars() != 2)
        throw std::invalid_argument("represent expects a polynomial in (u, v)");
    if (p.degree() > N)
        throw TruncationError("degree " + std::to_string(p.degree()) + " exceeds truncation " + std::to_string(N),
                              "deg p <= N");
    const OperatorDict d = fock_dict(hbar, N);
    FockMatrix r = zero_matrix(N);
    r.valid = N - std::max(0, p.degree());
    std::vector<Eigen::MatrixXcd> upow{Eigen::MatrixXcd::Identity(N + 1, N + 1)};
    std::vector<Eigen::MatrixXcd> vpow{Eigen::MatrixXcd::Identity(N + 1, N + 1)};
    for (const auto& [mono, c] : p.terms()) {
        const std::size_t a = mono.e[0], b = mono.e[1];
        while (upow.size() <= a)
            upow.push_back(d.u.m * upow.back());
        while (vpow.size() <= b)
            vpow.push_back(d.v.m * vpow.back());
        r.m += c * (upow[a] * vpow[b]);
    }
    return r;
}

FockMatrix represent(const CPoly& p, const W2& ord, int N)
{
    const W2 normal = normal_ordering(ord.hbar);
    return represent(intertwine(p, ord.key(), normal.key(), ord.hbar), ord.hbar, N);
}

FockMatrix represent(const ExactPoly& p, const OrderingKey& from, cplx hbar, int N)
{
    check_level(N);
    const ExactPoly pn = intertwine(p, from, OrderingKey::kappa_tau(GaussQ(1), GaussQ(0)));
    if (pn.num_vars() != 2)
        throw std::invalid_argument("represent expects a polynomial in (u, v)");
    if (pn.degree() > N)
        throw TruncationError("degree " + std::to_string(pn.degree()) + " exceeds truncation " + std::to_string(N),
                              "deg p <= N");
    FockMatrix r = zero_matrix(N);
    r.valid = N - std::max(0, pn.degree());
    const HbarPoly ih(GaussQ(0, 1), 1);
    for (const auto& [mono, c] : pn.terms()) {
        const int a = mono.e[0], b = mono.e[1];
        HbarPoly k = c;
        for (int i = 0; i < b; ++i)
            k *= ih;
        const cplx kv = k.substitute(hbar);
        // a^dagger^a a^b maps e_q to q!/(q-b)! e_{q-b+a}.
        for (int q = b; q <= N && q - b + a <= N; ++q)
            r.m(q - b + a, q) += kv * falling(q, b);
    }
    return r;
}

FockMatrix represent_normal_series(const std::vector<cplx>& c, int N)
{
    check_level(N);
    FockMatrix r = zero_matrix(N);
    for (int m = 0; m <= N; ++m) {
        cplx s = 0.0;
        for (int j = 0; j < static_cast<int>(c.size()) && j <= m; ++j)
            s += c[static_cast<std::size_t>(j)] * falling(m, j);
        r.m(m, m) = s;
    }
    return r;
}

FockMatrix represent_normal_series(const std::vector<mpq_class>& c, int N)
{
    check_level(N);
    FockMatrix r = zero_matrix(N);
    for (int m = 0; m <= N; ++m) {
        mpq_class s = 0;
        mpz_class fall = 1;
        for (int j = 0; j < static_cast<int>(c.size()) && j <= m; ++j) {
            s += c[static_cast<std::size_t>(j)] * fall;
            fall *= m - j;
        }
        r.m(m, m) = s.get_d();
    }
    return r;
}

std::vector<mpq_class> vacuum_level_symbol(int n, int N)
{
    std::vector<mpq_class> c(static_cast<std::size_t>(std::max(N + 1, 0)), mpq_class(0));
    mpz_class nfact = 1, kfact = 1;
    for (int i = 2; i <= n; ++i)
        nfact *= i;
    for (int k = 0; n + k <= N; ++k) {
        if (k > 0)
            kfact *= k;
        c[static_cast<std::size_t>(n + k)] = mpq_class(k % 2 == 0 ? 1 : -1, nfact * kfact);
    }
    return c;
}

FockMatrix defect_matrix(int n, int N)
{
    if (n < 0 || n > N)
        throw TruncationError("level " + std::to_string(n) + " beyond truncation " + std::to_string(N), "n <= N");
    return fock_identity(N) - represent_normal_series(vacuum_level_symbol(n, N), N);
}

RankReport defect_rank(int n, int N)
{
    const FockMatrix d = defect_matrix(n, N);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(d.m);
    lu.setThreshold(1e-10);
    RankReport r;
    r.dim = N + 1;
    r.rank = static_cast<int>(lu.rank());
    r.kernel_residual = d.m.col(n).cwiseAbs().maxCoeff();
    r.ok = r.rank == N && r.kernel_residual == 0.0;
    return r;
}

double commutator_residual(const OperatorDict& d)
{
    const int N = d.u.N;
    FockMatrix c = d.u * d.v - d.v * d.u + fock_identity(N).scaled(cplx(0, 1) * d.hbar);
    // The commutator has degree two.
    c.valid = N - 2;
    return c.band_norm();
}

cplx matrix_element(int p, int q, cplx hbar, int N)
{
    if (p < 0 || q < 0 || p > N - 2 || q > N - 2)
        throw TruncationError("matrix element (" + std::to_string(p) + "," + std::to_string(q) +
                                  ") needs a larger truncation than " + std::to_string(N),
                              "p, q <= N - 2");
    const OperatorDict d = fock_dict(hbar, N);
    const FockMatrix vac = fock_projector(0, N);
    FockMatrix m = vac;
    for (int i = 0; i < q; ++i)
        m = m * d.v;
    for (int i = 0; i < p; ++i)
        m = m * d.u;
    m = m * vac;
    return m.m(0, 0);
}

MatrixElementReport matrix_element_check(int pmax, cplx hbar, int N)
{
    MatrixElementReport r{0.0, pmax, N};
    const cplx ih = cplx(0, 1) * hbar;
    for (int p = 0; p <= pmax; ++p)
        for (int q = 0; q <= pmax; ++q) {
            const cplx expect = p == q ? std::tgamma(double(p) + 1.0) * std::pow(ih, p) : cplx(0.0);
            const double res = std::abs(matrix_element(p, q, hbar, N) - expect) / std::max(1.0, std::abs(expect));
            r.max_residual = std::max(r.max_residual, res);
        }
    return r;
}

double vacuum_sandwich_residual(int pmax, cplx hbar, int N)
{
    double r = 0.0;
    for (int p = 1; p <= pmax; ++p) {
        r = std::max(r, std::abs(matrix_element(p, 0, hbar, N)));
        r = std::max(r, std::abs(matrix_element(0, p, hbar, N)));
    }
    return r;
}

double vacuum_polynomial_residual(const CPoly& f, cplx hbar, int N)
{
    const FockMatrix vac = fock_projector(0, N);
    const FockMatrix s = vac * represent(f, hbar, N) * vac;
    Eigen::MatrixXcd diff = s.m - f.coeff(Monomial{}) * vac.m;
    return diff.cwiseAbs().maxCoeff();
}

namespace {

// X from its exact ordering expression; uv/(i hbar) + 1/2 in the normal ordering.
FockMatrix x_matrix(const W2& ord, int N)
{
    const GaussQ k = GaussQ::from_complex(ord.kappa), t = GaussQ::from_complex(ord.tau);
    ExactPoly x(2);
    x.add_term(Monomial{{1, 1}}, HbarPoly(GaussQ(0, -1), -1));
    x.add_term(Monomial{}, HbarPoly(k * GaussQ(mpq_class(1, 2))));
    return represent(x, OrderingKey::kappa_tau(k, t), ord.hbar, N);
}

}  // namespace

double vanish_residual(int n, const W2& ord, int N)
{
    if (n < 0 || n + 2 > N)
        throw TruncationError("level " + std::to_string(n) + " needs a larger truncation", "n <= N - 2");
    const OperatorDict d = fock_dict(ord.hbar, N);
    FockMatrix m = fock_projector(0, N);
    for (int i = 0; i < n; ++i)
        m = m * d.v;
    const FockMatrix x = x_matrix(ord, N);
    m = m * (x - fock_identity(N).scaled(double(n) + 0.5));
    // Row 0 is the only nonzero row; columns up to n + 1 are untouched by truncation.
    return m.m.row(0).head(n + 2).cwiseAbs().maxCoeff();
}

double bumping_residual(const std::vector<cplx>& f, cplx hbar, int N)
{
    const OperatorDict d = fock_dict(hbar, N);
    const FockMatrix uv = d.u * d.v, vu = d.v * d.u;
    FockMatrix fuv = zero_matrix(N), fvu = zero_matrix(N);
    FockMatrix puv = fock_identity(N), pvu = fock_identity(N);
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (k > 0) {
            puv = puv * uv;
            pvu = pvu * vu;
        }
        fuv = fuv + puv.scaled(f[k]);
        fvu = fvu + pvu.scaled(f[k]);
    }
    FockMatrix diff = d.v * fuv - fvu * d.v;
    diff.valid = N - 2 * static_cast<int>(f.size()) - 1;
    return diff.band_norm();
}

cplx vacuum_eigenvalue(const W2& ord, int N)
{
    const FockMatrix x = x_matrix(ord, N);
    const cplx lambda = x.m(0, 0);
    if (x.m.col(0).tail(N).cwiseAbs().maxCoeff() != 0.0)
        throw DomainError("the vacuum is not an eigenvector of X in this representation", "X * vac = lambda vac");
    return lambda;
}

PairingReport vacuum_pairing(const StarFunctionEvaluator& ev, int N)
{
    if (ev.custom_count() != 0)
        throw DomainError("pointwise components have no scalar reduction", "integrals and closed elements only");
    const W2& ord = ev.ordering();
    PairingReport r{{}, vacuum_eigenvalue(ord, N)};
    const cplx lambda = r.eigenvalue;
    for (std::size_t i = 0; i < ev.piece_count(); ++i) {
        const Piece& p = ev.piece(i);
        if (!ev.piece_plain(i))
            throw DomainError("integral carries a polynomial multiplier", "a scalar weight on e_*^{tX}");
        if (p.family.kind != Family::Kind::UV)
            throw DomainError("linear families do not act diagonally on the vacuum", "a scalar weight on e_*^{tX}");
        const cplx s = p.family.scale;
        const LogWeight lw = p.log_weight;
        const Estimate e = integrate(
            [&](cplx t) {
                const cplx l = lw(t);
                if (std::isinf(l.real()) && l.real() < 0)
                    return cplx(0.0);
                return std::exp(l + s * t * lambda);
            },
            p.contour, ev.spec());
        r.value.value += ev.piece_coef(i) * e.value;
        r.value.err += std::abs(ev.piece_coef(i)) * e.err;
    }
    for (std::size_t i = 0; i < ev.closed_count(); ++i) {
        const ExpElement& e = ev.closed(i);
        const cplx c = ev.closed_coef(i) * e.family_c;
        if (e.limit == Limit::Vacuum)
            r.value.value += c;
        else if (e.limit == Limit::None && e.family_t)
            r.value.value += c * std::exp(2.0 * *e.family_t * lambda);
        else
            throw DomainError("closed element is not in the uv-family", "a scalar weight on e_*^{tX}");
    }
    return r;
}

nlohmann::json to_json(const FockMatrix& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int p = 0; p <= m.N; ++p) {
        nlohmann::json row = nlohmann::json::array();
        for (int q = 0; q <= m.N; ++q)
            row.push_back({m.m(p, q).real(), m.m(p, q).imag()});
        rows.push_back(row);
    }
    return {{"N", m.N}, {"valid", m.valid}, {"entries", rows}};
}

}  // namespace starweyl
