#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "starweyl/fock_oracle.hpp"
#include "starweyl/io.hpp"

namespace starweyl {

struct VerifyOptions {
    cplx hbar{1.0};
    std::vector<GridPoint> grid = default_grid();
    QuadratureSpec spec;
    std::uint64_t seed = 1;
    int fock_level = kDefaultFockLevel;
};

// anchor states the identity or hypothesis the check exercises.
struct Check {
    std::string id;
    std::string anchor;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime = 0.0;  // seconds
    std::string note;
};

struct VerificationReport {
    std::string suite;
    std::vector<Check> checks;

    bool pass() const;
};

const std::vector<std::string>& suite_names();

// One suite by name, or every suite for "all". std::invalid_argument for unknown names.
std::vector<VerificationReport> run_suites(const std::string& name, const VerifyOptions& opt);

json to_json(const VerificationReport& r);

// Least-squares c in f ~ c g over the samples, and the mean squared deviation of f/g from c.
struct RatioFit {
    cplx constant{0.0};
    double variance = 0.0;
};

RatioFit fit_ratio(const std::vector<cplx>& f, const std::vector<cplx>& g);

// theta_3 by the Jacobi triple product: prod (1 - q^{2m})(1 + q^{2m-1} zeta)(1 + q^{2m-1}/zeta).
cplx theta3_product(cplx zeta, cplx q, int terms = 400);

}  // namespace starweyl
