#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace structbo {

// Flat point in the normalized search domain [0,1]^D. Every component
// (optimizer, Hessian oracles, policies) trades in this currency; callers
// owning native parameter ranges supply their own affine maps.
using Vec = std::vector<double>;

// A caller broke a documented precondition.
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// An oracle produced a non-finite entry; row/col identify the offender.
struct PoisonedEntry : std::runtime_error {
    PoisonedEntry(const std::string& what, int row_, int col_)
        : std::runtime_error(what), row(row_), col(col_) {}
    int row = -1;
    int col = -1;
};

// Input sits on a removable singularity of a closed-form expression.
struct SingularInput : std::runtime_error {
    explicit SingularInput(const std::string& what) : std::runtime_error(what) {}
};

// Linear algebra gave up (factorization failure after jitter escalation etc).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Bad experiment configuration; `path` is the dotted key that failed.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& path_, const std::string& what)
        : std::runtime_error(path_ + ": " + what), path(path_) {}
    std::string path;
};

// String construction only on the throwing path; this sits inside hot loops.
inline void require(bool cond, const char* what) {
    if (!cond) throw ContractViolation(what);
}

}  // namespace structbo
