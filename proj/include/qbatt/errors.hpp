#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qbatt {

// A requested state or evolution does not fit the truncated cavity space.
struct TruncationError : std::runtime_error {
    int required_dim;
    TruncationError(const std::string& msg, int required = -1)
        : std::runtime_error(msg), required_dim(required) {}
};

// Parameter combination outside the supported regime of an analytic path.
struct UnsupportedRegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive integrator could not reach the requested time.
struct IntegrationError : std::runtime_error {
    double t_reached;
    IntegrationError(const std::string& msg, double reached)
        : std::runtime_error(msg), t_reached(reached) {}
};

// A quantity that must form a probability distribution failed to.
struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested problem size exceeds a hard resource bound.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration rejected; carries every issue found, each path-qualified.
struct ConfigError : std::runtime_error {
    std::vector<std::string> issues;
    explicit ConfigError(std::vector<std::string> found)
        : std::runtime_error(join(found)), issues(std::move(found)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& e : v) {
            s += "\n  ";
            s += e;
        }
        return s;
    }
};

}  // namespace qbatt
