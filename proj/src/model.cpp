#include "mapchaos/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mapchaos {

void ModelParams::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid model parameter: " + what); };
    if (!(omega_x > 0)) fail("omega_x must be > 0");
    if (!(omega_y > 0)) fail("omega_y must be > 0");
    if (!(a >= 0)) fail("a must be >= 0");
    if (!(gamma > 0)) fail("gamma must be > 0");
    if (!(theta >= 0 && theta < std::numbers::pi / 2)) fail("theta must lie in [0, pi/2)");
    if (!std::isfinite(J) || !std::isfinite(eps_a) || !std::isfinite(eps_b)) fail("J, eps_a, eps_b must be finite");
}

const char* to_string(SystemKind kind) {
    return kind == SystemKind::mapping ? "mapping" : "adiabatic";
}

SystemKind system_kind_from_string(const std::string& name) {
    if (name == "mapping") return SystemKind::mapping;
    if (name == "adiabatic") return SystemKind::adiabatic;
    throw std::invalid_argument("unknown system kind '" + name + "' (expected mapping|adiabatic)");
}

TmtsModel::TmtsModel(const ModelParams& params) : params_(params) {
    params_.validate();
    wx2_ = params_.omega_x * params_.omega_x;
    wy2_ = params_.omega_y * params_.omega_y;
    shift_x_ = 2 * params_.a * std::sin(params_.theta);
    shift_y_ = 2 * params_.a * std::cos(params_.theta);
    cos2_ = std::cos(2 * params_.theta);
    sin2_ = std::sin(2 * params_.theta);
    tan_ = std::tan(params_.theta);
    seam_offset_ = params_.a / std::cos(params_.theta);
}

void TmtsModel::throw_degenerate(double x, double y) {
    throw SingularityError("lower adiabatic force undefined at degenerate point (J = 0, V_A = V_B), x=" +
                           std::to_string(x) + " y=" + std::to_string(y));
}

Vec2 displaced_coords(double x, double y, const ModelParams& p) { return TmtsModel(p).displaced_coords(x, y); }
double potential_a(double x, double y, const ModelParams& p) { return TmtsModel(p).potential_a(x, y); }
double potential_b(double x, double y, const ModelParams& p) { return TmtsModel(p).potential_b(x, y); }
Vec2 grad_potential_a(double x, double y, const ModelParams& p) { return TmtsModel(p).grad_potential_a(x, y); }
Vec2 grad_potential_b(double x, double y, const ModelParams& p) { return TmtsModel(p).grad_potential_b(x, y); }
double mapping_energy(const MappingState& s, const ModelParams& p) { return TmtsModel(p).mapping_energy(s); }
MappingState mapping_vector_field(const MappingState& s, const ModelParams& p) {
    return TmtsModel(p).mapping_vector_field(s);
}
double adiabatic_lower_potential(double x, double y, const ModelParams& p) {
    return TmtsModel(p).adiabatic_lower_potential(x, y);
}
Vec2 grad_adiabatic_lower_potential(double x, double y, const ModelParams& p) {
    return TmtsModel(p).grad_adiabatic_lower_potential(x, y);
}
AdiabaticState adiabatic_vector_field(const AdiabaticState& s, const ModelParams& p) {
    return TmtsModel(p).adiabatic_vector_field(s);
}

MappingState reverse_momenta(const MappingState& s) {
    return {s.x, s.y, -s.px, -s.py, s.xa, -s.pa, s.xb, -s.pb};
}

AdiabaticState reverse_momenta(const AdiabaticState& s) {
    return {s.x, s.y, -s.px, -s.py};
}

} // namespace mapchaos
