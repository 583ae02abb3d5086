// Two-mode-two-state (TMTS) model: diabatic harmonic potentials, the
// mapping (Schwinger-boson) Hamiltonian and the lower adiabatic surface.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "mapchaos/errors.hpp"

namespace mapchaos {

/// Physical constants of the model. Defaults are artifact choices for the
/// frequencies and well distance; only eps_b - eps_a = 0.173 and gamma = 1/2
/// are fixed by the model definition.
struct ModelParams {
    double omega_x = 1.0;
    double omega_y = 1.4142135623730951; // sqrt(2)
    double a = 2.0;       // half-distance between the two minima
    double theta = 1.0471975511965976; // Duschinsky angle, pi/3
    double J = 1.5;       // diabatic coupling
    double eps_a = 0.0;
    double eps_b = 0.173;
    double gamma = 0.5;   // mapping zero-point parameter

    double delta_eps() const { return eps_b - eps_a; }

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Phase point of the mapped system. Layout of as_array():
/// (x, y, px, py, xa, pa, xb, pb).
struct MappingState {
    static constexpr std::size_t dim = 8;
    double x = 0, y = 0, px = 0, py = 0;
    double xa = 0, pa = 0, xb = 0, pb = 0;

    std::array<double, dim> as_array() const { return {x, y, px, py, xa, pa, xb, pb}; }
    static MappingState from_array(const std::array<double, dim>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    }
};

/// Phase point on the lower adiabatic surface: (x, y, px, py).
struct AdiabaticState {
    static constexpr std::size_t dim = 4;
    double x = 0, y = 0, px = 0, py = 0;

    std::array<double, dim> as_array() const { return {x, y, px, py}; }
    static AdiabaticState from_array(const std::array<double, dim>& v) {
        return {v[0], v[1], v[2], v[3]};
    }
};

enum class SystemKind { mapping, adiabatic };

const char* to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& name);

struct Vec2 {
    double x = 0, y = 0;
};

inline double occupation(double xi, double pi, double gamma) {
    return 0.5 * (xi * xi + pi * pi) - gamma;
}

/// Lower eigenvalue of [[va, J], [J, vb]].
inline double lower_adiabatic_value(double va, double vb, double J) {
    const double half_gap = 0.5 * (va - vb);
    return 0.5 * (va + vb) - std::sqrt(half_gap * half_gap + J * J);
}

/// Model with the rotation geometry evaluated once. All evaluation routines
/// are const and safe to share across threads.
class TmtsModel {
public:
    explicit TmtsModel(const ModelParams& params);

    const ModelParams& params() const { return params_; }

    /// Shift to the minimum of state B followed by a rotation by 2*theta.
    Vec2 displaced_coords(double x, double y) const {
        const double u = x + shift_x_;
        const double v = y - shift_y_;
        return {u * cos2_ + v * sin2_, -u * sin2_ + v * cos2_};
    }

    /// Location of the minimum of V_B.
    Vec2 minimum_b() const { return {-shift_x_, shift_y_}; }

    double potential_a(double x, double y) const {
        return 0.5 * (wx2_ * x * x + wy2_ * y * y) + params_.eps_a;
    }
    double potential_b(double x, double y) const {
        const Vec2 d = displaced_coords(x, y);
        return 0.5 * (wx2_ * d.x * d.x + wy2_ * d.y * d.y) + params_.eps_b;
    }
    Vec2 grad_potential_a(double x, double y) const { return {wx2_ * x, wy2_ * y}; }
    Vec2 grad_potential_b(double x, double y) const {
        const Vec2 d = displaced_coords(x, y);
        const double dxi = wx2_ * d.x;
        const double deta = wy2_ * d.y;
        // chain rule through (xi, eta)
        return {dxi * cos2_ - deta * sin2_, dxi * sin2_ + deta * cos2_};
    }

    double mapping_energy(const MappingState& s) const {
        const double na = occupation(s.xa, s.pa, params_.gamma);
        const double nb = occupation(s.xb, s.pb, params_.gamma);
        return 0.5 * (s.px * s.px + s.py * s.py) + na * potential_a(s.x, s.y) + nb * potential_b(s.x, s.y) +
               params_.J * (s.xa * s.xb + s.pa * s.pb);
    }

    MappingState mapping_vector_field(const MappingState& s) const {
        const double J = params_.J;
        const double va = potential_a(s.x, s.y);
        const Vec2 d = displaced_coords(s.x, s.y);
        const double vb = 0.5 * (wx2_ * d.x * d.x + wy2_ * d.y * d.y) + params_.eps_b;
        const double dxi = wx2_ * d.x, deta = wy2_ * d.y;
        const Vec2 ga = grad_potential_a(s.x, s.y);
        const Vec2 gb{dxi * cos2_ - deta * sin2_, dxi * sin2_ + deta * cos2_};
        const double na = occupation(s.xa, s.pa, params_.gamma);
        const double nb = occupation(s.xb, s.pb, params_.gamma);
        return {s.px,
                s.py,
                -ga.x * na - gb.x * nb,
                -ga.y * na - gb.y * nb,
                va * s.pa + J * s.pb,
                -va * s.xa - J * s.xb,
                vb * s.pb + J * s.pa,
                -vb * s.xb - J * s.xa};
    }

    double adiabatic_lower_potential(double x, double y) const {
        return lower_adiabatic_value(potential_a(x, y), potential_b(x, y), params_.J);
    }

    /// Throws SingularityError at a degenerate point (J = 0 and V_A = V_B).
    Vec2 grad_adiabatic_lower_potential(double x, double y) const {
        const double va = potential_a(x, y);
        const double vb = potential_b(x, y);
        const double half_gap = 0.5 * (va - vb);
        const double root = std::sqrt(half_gap * half_gap + params_.J * params_.J);
        if (root == 0.0) throw_degenerate(x, y);
        const Vec2 ga = grad_potential_a(x, y);
        const Vec2 gb = grad_potential_b(x, y);
        const double w = half_gap / (2 * root);
        return {0.5 * (ga.x + gb.x) - w * (ga.x - gb.x), 0.5 * (ga.y + gb.y) - w * (ga.y - gb.y)};
    }

    double adiabatic_energy(const AdiabaticState& s) const {
        return 0.5 * (s.px * s.px + s.py * s.py) + adiabatic_lower_potential(s.x, s.y);
    }

    AdiabaticState adiabatic_vector_field(const AdiabaticState& s) const {
        const Vec2 g = grad_adiabatic_lower_potential(s.x, s.y);
        return {s.px, s.py, -g.x, -g.y};
    }

    /// Right-hand side of the crossing-seam inequality y < x tan(theta) + a / cos(theta).
    bool below_seam(double x, double y) const { return y < x * tan_ + seam_offset_; }

private:
    [[noreturn]] static void throw_degenerate(double x, double y);

    ModelParams params_;
    double wx2_, wy2_;
    double shift_x_, shift_y_;
    double cos2_, sin2_;
    double tan_, seam_offset_;
};

// Convenience wrappers; each builds a TmtsModel, so prefer the class in loops.
Vec2 displaced_coords(double x, double y, const ModelParams& p);
double potential_a(double x, double y, const ModelParams& p);
double potential_b(double x, double y, const ModelParams& p);
Vec2 grad_potential_a(double x, double y, const ModelParams& p);
Vec2 grad_potential_b(double x, double y, const ModelParams& p);
double mapping_energy(const MappingState& s, const ModelParams& p);
MappingState mapping_vector_field(const MappingState& s, const ModelParams& p);
double adiabatic_lower_potential(double x, double y, const ModelParams& p);
Vec2 grad_adiabatic_lower_potential(double x, double y, const ModelParams& p);
AdiabaticState adiabatic_vector_field(const AdiabaticState& s, const ModelParams& p);

inline double kinetic_energy(double px, double py) { return 0.5 * (px * px + py * py); }

/// (p_x^2 + omega_x^2 x^2) / 2, conserved by mapping dynamics at theta = 0.
inline double x_mode_energy(double x, double px, const ModelParams& p) {
    return 0.5 * (px * px + p.omega_x * p.omega_x * x * x);
}

/// Reverses every momentum, including the mapping-oscillator ones.
MappingState reverse_momenta(const MappingState& s);
AdiabaticState reverse_momenta(const AdiabaticState& s);

} // namespace mapchaos
