#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <json.hpp>

#include "starweyl/quadrature.hpp"

namespace starweyl {

// Truncated Fock space in the unnormalized basis e_n = (a^dagger)^n e_0, so that
// a^dagger e_n = e_{n+1} and a e_n = n e_{n-1}. With pi(u) = a^dagger and pi(v) = i hbar a every
// entry is an integer times a power of i hbar.
inline constexpr int kDefaultFockLevel = 24;

struct FockMatrix {
    int N = kDefaultFockLevel;
    Eigen::MatrixXcd m;  // (N+1) x (N+1), m(p, q) = coefficient of e_p in the image of e_q
    int valid = N;       // identities hold on indices <= valid; the band above is a truncation artifact

    FockMatrix operator*(const FockMatrix& o) const;
    FockMatrix operator+(const FockMatrix& o) const;
    FockMatrix operator-(const FockMatrix& o) const;
    FockMatrix scaled(cplx c) const;

    // max |m(p, q)| over p, q <= valid.
    double band_norm() const;
};

FockMatrix fock_identity(int N);
// E_nn: the projection onto e_n along the other basis vectors.
FockMatrix fock_projector(int n, int N);

struct OperatorDict {
    cplx hbar{1.0};
    FockMatrix u, v;
};

OperatorDict fock_dict(cplx hbar, int N = kDefaultFockLevel);

// Sum c_ab pi(u)^a pi(v)^b for a polynomial in the normal ordering kappa = 1, tau = 0
// (u to the left). TruncationError when deg p > N.
FockMatrix represent(const CPoly& p, cplx hbar, int N = kDefaultFockLevel);
// Intertwines p from ord to the normal ordering first.
FockMatrix represent(const CPoly& p, const W2& ord, int N = kDefaultFockLevel);
// Exact intertwining; hbar is substituted after the powers of i hbar from pi(v) are collected.
FockMatrix represent(const ExactPoly& p, const OrderingKey& from, cplx hbar, int N = kDefaultFockLevel);

// The normal-ordered symbol sum_j c_j (uv/(i hbar))^j, i.e. sum_j c_j a^dagger^j a^j. Terms
// beyond N act as zero, so the result is exact on the whole truncated space.
FockMatrix represent_normal_series(const std::vector<cplx>& c, int N = kDefaultFockLevel);
// Rational coefficients, summed exactly before rounding.
FockMatrix represent_normal_series(const std::vector<mpq_class>& c, int N = kDefaultFockLevel);

// Coefficients of w^n e^{-w} / n!, the normal-ordered symbol of P_n, up to w^N.
std::vector<mpq_class> vacuum_level_symbol(int n, int N = kDefaultFockLevel);

// I - P_n from its normal-ordered symbol.
FockMatrix defect_matrix(int n, int N = kDefaultFockLevel);

struct RankReport {
    int rank = 0;
    int dim = 0;
    double kernel_residual = 0.0;  // |M e_n| for the expected kernel vector
    bool ok = false;
};

// Rank of I - P_n on the truncated space; the defect must be exactly one with kernel e_n.
RankReport defect_rank(int n, int N = kDefaultFockLevel);

// [pi(u), pi(v)] + i hbar I on the valid band.
double commutator_residual(const OperatorDict& d);

// Coefficient of vac in vac * v^q * u^p * vac, vac = E_00. TruncationError unless p, q <= N - 2.
cplx matrix_element(int p, int q, cplx hbar, int N = kDefaultFockLevel);

struct MatrixElementReport {
    double max_residual = 0.0;  // against delta_pq p! (i hbar)^p, relative to max(1, |expected|)
    int pmax = 0;
    int N = 0;
};

MatrixElementReport matrix_element_check(int pmax, cplx hbar, int N = kDefaultFockLevel);

// max over p >= 1 of |vac * u^p * vac| and |vac * v^p * vac|.
double vacuum_sandwich_residual(int pmax, cplx hbar, int N = kDefaultFockLevel);

// vac * f * vac - f(0,0) vac for a normal-ordered polynomial f.
double vacuum_polynomial_residual(const CPoly& f, cplx hbar, int N = kDefaultFockLevel);

// max entry of vac * v^n * (X - n - 1/2); X is intertwined exactly from its ordering expression.
double vanish_residual(int n, const W2& ord, int N = kDefaultFockLevel);

// v * f(u*v) - f(v*u) * v on the valid band for a univariate f.
double bumping_residual(const std::vector<cplx>& f, cplx hbar, int N = kDefaultFockLevel);

// X * vac = lambda vac; returns lambda after checking column 0 has no other entries.
cplx vacuum_eigenvalue(const W2& ord, int N = kDefaultFockLevel);

struct PairingReport {
    Estimate value;   // integrals paired with the vacuum eigenvalue
    cplx eigenvalue;  // of X on vac
};

// Replaces e_*^{s t X} by e^{s t lambda} in every integral of ev and integrates the scalar weight.
// Closed elements of the uv-family pair to c e^{2 t lambda}, the vacuum to c. DomainError for
// polynomial multipliers, pointwise components and other closed elements.
PairingReport vacuum_pairing(const StarFunctionEvaluator& ev, int N = kDefaultFockLevel);

nlohmann::json to_json(const FockMatrix& m);

}  // namespace starweyl
