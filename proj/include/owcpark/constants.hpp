#pragma once

#include <stdexcept>

namespace owc {

// Sea water and air properties. Defaults are the values used throughout:
// ρ = 1025 kg/m³, g = 9.81 m/s², p_atm = 101325 Pa, p_v = 2.34 kPa (20 °C),
// ν = 1e-6 m²/s.
struct PhysicalConstants {
    double rho = 1025.0;    // water density, kg/m³
    double g = 9.81;        // gravity, m/s²
    double p_atm = 101325.0; // atmospheric pressure, Pa
    double p_v = 2340.0;    // vapor pressure, Pa
    double nu = 1.0e-6;     // kinematic viscosity, m²/s

    void validate() const {
        if (rho <= 0 || g <= 0 || p_atm <= 0 || p_v <= 0 || nu <= 0)
            throw std::invalid_argument("PhysicalConstants: all fields must be positive");
    }
};

} // namespace owc
