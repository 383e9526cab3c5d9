#pragma once

#include <filesystem>
#include <vector>

#include "owcpark/constants.hpp"
#include "owcpark/types.hpp"

namespace owc {

// Frequency-tabulated hydrodynamic data of the isolated device in the
// pressure form of the dynamic equation: added mass A(ω) (kg/m²), radiation
// damping B(ω) (Pa·s/m) and complex excitation pressure p̂_e(ω). The
// excitation may be stored per unit incident wave amplitude or as an
// absolute pressure; the file header declares which.
class HydroCoefficients {
public:
    enum class Normalization { per_unit_amplitude, absolute };

    HydroCoefficients(std::vector<double> omega, std::vector<double> added_mass,
                      std::vector<double> damping, std::vector<Complex> excitation,
                      Normalization norm);

    double added_mass(double omega) const;
    double damping(double omega) const;
    // Excitation pressure for an incident wave of the given amplitude (H/2).
    Complex excitation(double omega, double wave_amplitude) const;

    Normalization normalization() const { return norm_; }
    double omega_min() const { return omega_.front(); }
    double omega_max() const { return omega_.back(); }

    // Smooth synthetic data set for a column of the given draft and surface
    // section, used by the self-contained examples and tests. Not measured
    // data: magnitudes are chosen so A ≪ ρ·draft and B ≪ Λ·S(0).
    static HydroCoefficients synthetic(double draft, double s0, const PhysicalConstants& pc,
                                       double omega_lo = 0.25, double omega_hi = 2.5,
                                       int n = 46);

private:
    double interp(const std::vector<double>& y, double omega) const;
    std::vector<double> omega_, a_, b_;
    std::vector<Complex> pe_;
    Normalization norm_;
};

} // namespace owc
