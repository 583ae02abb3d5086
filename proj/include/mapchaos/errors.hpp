#pragma once

#include <stdexcept>
#include <string>

namespace mapchaos {

enum class FailureKind { energy_drift, divergence, singularity };

const char* to_string(FailureKind kind);

/// Trajectory-level failure. segment is the Benettin segment index when the
/// failure happened inside a Lyapunov run, otherwise -1.
class DynamicsError : public std::runtime_error {
public:
    DynamicsError(FailureKind kind, const std::string& what, double time = 0.0, int segment = -1)
        : std::runtime_error(what), kind_(kind), time_(time), segment_(segment) {}

    FailureKind kind() const { return kind_; }
    double time() const { return time_; }
    int segment() const { return segment_; }
    void set_segment(int segment) { segment_ = segment; }

private:
    FailureKind kind_;
    double time_;
    int segment_;
};

/// Raised by the adiabatic force at a conical intersection (J = 0, V_A = V_B).
class SingularityError : public DynamicsError {
public:
    explicit SingularityError(const std::string& what) : DynamicsError(FailureKind::singularity, what) {}
};

} // namespace mapchaos
