#pragma once

#include <stdexcept>
#include <string>

namespace rpp {

// Parameters outside the mathematical domain of an operation (bad d, p, tolerances).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Geometry that does not make sense (empty window, negative radius, mesh mismatch).
struct geometry_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation at a point where the quantity is genuinely infinite.
struct singularity_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A combination of options that is invalid in this regime (e.g. positive
// exponent with p >= 2, where the quantity being estimated is infinite).
struct regime_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An iterative scheme ran out of budget.  Carries the last bracket / estimate
// so the caller can inspect how far it got.
struct convergence_error : std::runtime_error {
    double last_estimate;
    double last_error;

    convergence_error(const std::string& what, double estimate, double err)
        : std::runtime_error(what), last_estimate(estimate), last_error(err) {}
};

} // namespace rpp
