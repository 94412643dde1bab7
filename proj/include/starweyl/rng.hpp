#pragma once

#include <cstdint>

#include "starweyl/ordering.hpp"
#include "starweyl/polynomial.hpp"

namespace starweyl {

// Counter-based generator: draw k of stream s is mix(seed, s, k), so any stream
// can be replayed or split without shared state.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    std::uint64_t next();
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive
    double uniform01();
    CounterRng split(std::uint64_t child) const;

private:
    std::uint64_t seed_, stream_, counter_ = 0;
};

struct RandomPolySpec {
    int n = 2;
    int max_degree = 6;
    int max_terms = 6;
    int coeff_range = 5;     // numerators in [-range, range]
    int max_denominator = 3;
    bool gaussian = true;    // random imaginary parts
    int max_hbar_pow = 1;
};

ExactPoly random_poly(CounterRng& rng, const RandomPolySpec& spec);

// Random symmetric K with the standard symplectic J (n even) or a random skew J.
OrderingKey random_ordering(CounterRng& rng, int n);

}  // namespace starweyl
