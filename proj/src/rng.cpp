#include "starweyl/rng.hpp"

#include <stdexcept>

namespace starweyl {

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

GaussQ random_gauss(CounterRng& rng, int range, int max_den, bool gaussian)
{
    mpq_class re(rng.uniform_int(-range, range), static_cast<unsigned long>(rng.uniform_int(1, max_den)));
    mpq_class im = 0;
    if (gaussian)
        im = mpq_class(rng.uniform_int(-range, range), static_cast<unsigned long>(rng.uniform_int(1, max_den)));
    re.canonicalize();
    im.canonicalize();
    return {re, im};
}

}  // namespace

std::uint64_t CounterRng::next()
{
    std::uint64_t k = counter_++;
    return splitmix(splitmix(seed_ ^ splitmix(stream_)) + k);
}

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi)
{
    if (hi < lo)
        throw std::invalid_argument("uniform_int: empty range");
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
}

double CounterRng::uniform01()
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

CounterRng CounterRng::split(std::uint64_t child) const
{
    return CounterRng(seed_, splitmix(stream_ * 0x2545f4914f6cdd1dULL + child + 1));
}

ExactPoly random_poly(CounterRng& rng, const RandomPolySpec& spec)
{
    ExactPoly p(spec.n);
    auto nterms = rng.uniform_int(1, spec.max_terms);
    for (std::int64_t t = 0; t < nterms; ++t) {
        Monomial m;
        auto deg = rng.uniform_int(0, spec.max_degree);
        for (std::int64_t d = 0; d < deg; ++d)
            m.e[static_cast<std::size_t>(rng.uniform_int(0, spec.n - 1))] += 1;
        auto pow = static_cast<int>(rng.uniform_int(0, spec.max_hbar_pow));
        p.add_term(m, HbarPoly(random_gauss(rng, spec.coeff_range, spec.max_denominator, spec.gaussian), pow));
    }
    return p;
}

OrderingKey random_ordering(CounterRng& rng, int n)
{
    std::vector<GaussQ> K(static_cast<std::size_t>(n * n)), J(K.size());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            GaussQ k = random_gauss(rng, 3, 2, true);
            K[static_cast<std::size_t>(i * n + j)] = k;
            K[static_cast<std::size_t>(j * n + i)] = k;
            if (j > i) {
                GaussQ s = random_gauss(rng, 2, 1, false);
                J[static_cast<std::size_t>(i * n + j)] = s;
                J[static_cast<std::size_t>(j * n + i)] = -s;
            }
        }
    return OrderingKey(n, K, J);
}

}  // namespace starweyl
