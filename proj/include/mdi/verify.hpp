#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mdi {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
};

// Numerical checks of the bounds and identities the methods rest on. Each
// group returns one line per instance; `verify_all` concatenates them.
std::vector<CheckResult> verify_sum_identity(int n_min = 2, int n_max = 64);
std::vector<CheckResult> verify_inverse_operator_bound(int k_max = 3, int n_max = 40);
std::vector<CheckResult> verify_inverse_estimate(int draws = 20, std::uint64_t seed = 2024);
std::vector<CheckResult> verify_coefficient_optimality(int instances = 10,
                                                       std::uint64_t seed = 512);
std::vector<CheckResult> verify_polynomial_reproduction();
std::vector<CheckResult> verify_solver_equivalence(int instances = 20, std::uint64_t seed = 99);

std::vector<CheckResult> verify_all();

} // namespace mdi
