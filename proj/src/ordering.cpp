#include "starweyl/ordering.hpp"

#include <stdexcept>

namespace starweyl {

OrderingKey::OrderingKey(int n, std::vector<GaussQ> K, std::vector<GaussQ> J)
    : n_(n), K_(std::move(K)), J_(std::move(J))
{
    if (n < 1 || n > 8)
        throw std::invalid_argument("ordering dimension must be in 1..8");
    auto nn = static_cast<std::size_t>(n * n);
    if (K_.size() != nn || J_.size() != nn)
        throw std::invalid_argument("ordering matrices must be n x n");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (K_[idx(i, j)] != K_[idx(j, i)])
                throw std::invalid_argument("K must be symmetric");
            if (J_[idx(i, j)] != -J_[idx(j, i)])
                throw std::invalid_argument("J must be skew-symmetric");
        }
}

OrderingKey OrderingKey::weyl()
{
    return kappa_tau(GaussQ(0), GaussQ(0));
}

OrderingKey OrderingKey::kappa(const GaussQ& k)
{
    return kappa_tau(k, GaussQ(0));
}

OrderingKey OrderingKey::kappa_tau(const GaussQ& k, const GaussQ& t)
{
    return OrderingKey(2, {GaussQ(0), k, k, t}, {GaussQ(0), GaussQ(-1), GaussQ(1), GaussQ(0)});
}

OrderingKey OrderingKey::kappa_tau(cplx k, cplx t)
{
    return kappa_tau(GaussQ::from_complex(k), GaussQ::from_complex(t));
}

OrderingKey OrderingKey::symplectic(int n)
{
    if (n % 2 != 0)
        throw std::invalid_argument("symplectic ordering needs an even dimension");
    int m = n / 2;
    std::vector<GaussQ> K(static_cast<std::size_t>(n * n)), J(K.size());
    for (int i = 0; i < m; ++i) {
        J[static_cast<std::size_t>(i * n + i + m)] = GaussQ(-1);
        J[static_cast<std::size_t>((i + m) * n + i)] = GaussQ(1);
    }
    return OrderingKey(n, K, J);
}

}  // namespace starweyl
