#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rigidemt/conformal.hpp"
#include "rigidemt/elastic.hpp"

namespace rigidemt {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;     // measured metric
    double threshold = 0.0; // limit it was held against
    std::string detail;
};

struct VerifyOptions {
    double tol = 1e-10;       // identity-class checks
    std::uint64_t seed = 2024;
    bool corrupt_kappa = false; // deliberately mismatch the Kolosov constant in the
                                // identity checks (negative test, expected to fail)
    int oracle_modes = 32;
    bool with_oracle = true;
};

// Full invariant battery for one shape/material pair. Never throws on a
// failing check; throws only on unusable inputs.
std::vector<CheckResult> run_verification(const ExteriorMap& map, const LameMaterial& mat,
                                          const VerifyOptions& opts = {});

bool all_passed(const std::vector<CheckResult>& checks);
std::string verification_report_json(const std::vector<CheckResult>& checks);

} // namespace rigidemt
