#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"
#include "quadrature.hpp"

namespace rl {

struct ValidationCheck {
    std::string name;
    bool pass = false;
    std::string detail;  // observed z-scores / gaps, fixed formatting
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_pass() const;
    // One line per check plus a summary line; byte-stable for fixed inputs.
    std::string to_text() const;
};

// Cross-validates every analytic expression against the Monte Carlo estimators
// on the given scenario: closed-form direct-transmission outage, the two
// decode-and-forward event probabilities and the total, bound directions for
// the DF upper / SDF lower / CF upper bounds, the one-bit CF rate-gap scan,
// the transform sign arbiter (joint transform vs. empirical mean and vs. the
// product of marginals, run at a fixed reference density), and the
// zero-density degeneracies. flip_sign_hook is a negative control: it flips
// the cross-term sign inside the transform so the sign arbiter must fail.
ValidationReport run_validation(const Scenario& sc, const QuadratureSpec& spec,
                                std::uint64_t n_samples, std::uint64_t seed, int n_threads,
                                bool flip_sign_hook);

}  // namespace rl
