#pragma once

#include <vector>

#include "starweyl/coeff.hpp"

namespace starweyl {

// Lambda = K + J with K symmetric and J skew, stored exactly.
class OrderingKey {
public:
    OrderingKey(int n, std::vector<GaussQ> K, std::vector<GaussQ> J);

    // W_2 with u = u_1, v = u_2 and J = [[0,-1],[1,0]].
    static OrderingKey weyl();
    static OrderingKey kappa(const GaussQ& k);
    static OrderingKey kappa_tau(const GaussQ& k, const GaussQ& t);
    static OrderingKey kappa_tau(cplx k, cplx t);
    // Standard symplectic J in 2m variables (u_1..u_m, v_1..v_m) with K = 0.
    static OrderingKey symplectic(int n);

    int n() const { return n_; }
    const GaussQ& K(int i, int j) const { return K_[idx(i, j)]; }
    const GaussQ& J(int i, int j) const { return J_[idx(i, j)]; }
    GaussQ Lambda(int i, int j) const { return K_[idx(i, j)] + J_[idx(i, j)]; }

    const std::vector<GaussQ>& K() const { return K_; }
    const std::vector<GaussQ>& J() const { return J_; }

    OrderingKey with_K(std::vector<GaussQ> K) const { return OrderingKey(n_, std::move(K), J_); }

    friend bool operator==(const OrderingKey& a, const OrderingKey& b)
    {
        return a.n_ == b.n_ && a.K_ == b.K_ && a.J_ == b.J_;
    }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n_ + j); }

    int n_;
    std::vector<GaussQ> K_, J_;
};

}  // namespace starweyl
