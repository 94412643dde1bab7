#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include "starweyl/coeff.hpp"

namespace starweyl {

using GridPoint = std::pair<cplx, cplx>;  // (u, v)

// w_k = x + iy over x, y in an n-point grid on [lo, hi] (k = n*ix + iy). The n^2 sample points
// pair u = w_k with v = w_{(s k + 3) mod n^2}, s the first odd step >= 7 coprime to n^2.
inline std::vector<GridPoint> sample_grid(double lo, double hi, int n)
{
    std::vector<cplx> w;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
            const double y = n == 1 ? lo : lo + (hi - lo) * j / (n - 1);
            w.emplace_back(x, y);
        }
    const std::size_t m = w.size();
    std::size_t step = 7;
    while (std::gcd(step, m) != 1)
        step += 2;
    std::vector<GridPoint> g;
    for (std::size_t k = 0; k < m; ++k)
        g.emplace_back(w[k], w[(step * k + 3) % m]);
    return g;
}

// x, y in {-1, -0.5, 0, 0.5, 1}; uv covers moduli from 0 to 2.
inline std::vector<GridPoint> default_grid() { return sample_grid(-1.0, 1.0, 5); }

}  // namespace starweyl
