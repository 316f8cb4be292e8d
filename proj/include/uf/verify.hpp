#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uf {

struct VerifyCheck {
    std::string suite;
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

// Suites: projection, derivative, antisymmetry, gauss, conservation; "all" runs every one.
const std::vector<std::string>& verify_suites();
std::vector<VerifyCheck> run_verify(const std::string& suite, std::uint64_t seed = 1);

}  // namespace uf
