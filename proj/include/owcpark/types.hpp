#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace owc {

using Complex = std::complex<double>;

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec2 = Eigen::Vector2d;
using Mat2X = Eigen::Matrix2Xd;

// Operating-limit flags attached to simulation and control results.
enum class Flag : std::uint32_t {
    none = 0,
    cavitation = 1u << 0,        // p_min fell below vapor pressure
    turbine_uncovered = 1u << 1, // water column dropped below the turbine
    overflow = 1u << 2,          // water column exceeded the duct top
    curve_clamped = 1u << 3,     // flow coefficient outside the tabulated range
    model_validity = 1u << 4,    // flow coefficient beyond the torque-fit range
    solver_failure = 1u << 5,
};

inline Flag operator|(Flag a, Flag b) {
    return static_cast<Flag>(static_cast<std::uint32_t>(a) | static_cast<std::uint32_t>(b));
}
inline Flag& operator|=(Flag& a, Flag b) { return a = a | b; }
inline bool has_flag(Flag set, Flag f) {
    return (static_cast<std::uint32_t>(set) & static_cast<std::uint32_t>(f)) != 0;
}

std::string flags_to_string(Flag f);

} // namespace owc
