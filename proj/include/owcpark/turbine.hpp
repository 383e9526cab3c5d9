#pragma once

#include <vector>

#include "owcpark/constants.hpp"
#include "owcpark/types.hpp"

namespace owc {

// Wells turbine geometry. S_t, K_a and σ are derived from the primary
// dimensions: S_t = π(R₂² - r_h²), K_a = ρ c (r_t - r_h) n / 2,
// σ = c (r_t - r_h) n / S_t.
struct TurbineSpec {
    double tip_radius;    // r_t, m
    double hub_radius;    // r_h, m
    double chord;         // c, m
    int blades;           // n
    double duct_radius;   // R₂ at the turbine section, m
    double omega_min;     // rotational speed bounds, rad/s
    double omega_max;

    double flow_area;     // S_t, m²
    double ka;            // K_a, kg/m
    double solidity;      // σ

    static TurbineSpec make(double r_t, double r_h, double c, int n, double duct_r,
                            double w_min, double w_max, const PhysicalConstants& pc = {});

    // Geometric similarity: all lengths multiplied by `factor` (areas by factor²).
    TurbineSpec scaled(double factor, const PhysicalConstants& pc = {}) const;
};

// Tabulated C_a(φ), C_t(φ) characteristics with the even-polynomial torque fit
// used by the frequency-domain power model. The fit pins c_0 to the tabulated
// C_t(0) and raises the degree until the max residual drops below `fit_tol`
// (or the degree cap is hit).
class CharacteristicCurves {
public:
    CharacteristicCurves(std::vector<double> phi, std::vector<double> ca,
                         std::vector<double> ct, double fit_tol = 1e-3, int max_half_degree = 6);

    // Piecewise-linear interpolants on |φ|, clamped at the table edge.
    // `clamped`, when given, is set if the query fell outside the table.
    double ca(double phi_abs, bool* clamped = nullptr) const;
    double ct(double phi_abs, bool* clamped = nullptr) const;

    // Even-polynomial torque model Σ c_{2k} φ^{2k}.
    double ct_poly(double phi) const;
    const std::vector<double>& poly_coefficients() const { return coeff_; } // c_0, c_2, ..., c_{2d}
    int half_degree() const { return static_cast<int>(coeff_.size()) - 1; }
    double fit_residual() const { return fit_residual_; }

    double ca_slope0() const { return ca_slope0_; }   // ∂C_a/∂φ at φ = 0
    double phi_opt() const { return phi_opt_; }       // argmax of C_t over the table range
    double phi_max_model() const { return phi_max_; } // validity bound of the fit

    const std::vector<double>& phi_table() const { return phi_; }
    const std::vector<double>& ca_table() const { return ca_; }
    const std::vector<double>& ct_table() const { return ct_; }

private:
    std::vector<double> phi_, ca_, ct_;
    std::vector<double> coeff_;
    double fit_residual_ = 0.0;
    double ca_slope0_ = 0.0;
    double phi_opt_ = 0.0;
    double phi_max_ = 0.0;
};

// Minimum pressure coefficient C_p,min(φ) of the blade section, tabulated per
// airfoil. All entries must be negative; C̃_p,min is the table minimum.
class CavitationTable {
public:
    CavitationTable(std::vector<double> phi, std::vector<double> cpmin);

    double cpmin(double phi_abs) const; // piecewise linear, clamped
    double cpmin_floor() const { return cpmin_floor_; } // C̃_p,min = min over φ

private:
    std::vector<double> phi_, cpmin_;
    double cpmin_floor_ = 0.0;
};

// φ = v_t / (ω_t r_t)
double flow_coefficient(double v_t, double omega_t, const TurbineSpec& spec);

// Δp = C_a(|φ|) K_a/S_t (v_t² + ω_t²r_t²), sign following v_t.
double pressure_jump(double v_t, double omega_t, const TurbineSpec& spec,
                     const CharacteristicCurves& curves, bool* clamped = nullptr);

// 𝒯 = C_t(|φ|) K_a r_t (v_t² + ω_t²r_t²), from the tabulated curve; even in v_t.
double torque(double v_t, double omega_t, const TurbineSpec& spec,
              const CharacteristicCurves& curves, bool* clamped = nullptr);

// First-order turbine damping Λ = ∂Δp/∂Q at Q = 0 = C_a'(0) K_a ω_t r_t / S_t².
double linear_damping_lambda(double omega_t, const TurbineSpec& spec,
                             const CharacteristicCurves& curves);

// Rotational speed whose linear damping equals `lambda` (inverse of the above).
double omega_t_for_lambda(double lambda, const TurbineSpec& spec,
                          const CharacteristicCurves& curves);

// I_n = (1/2π)∫_{-π}^{π} sinⁿx dx: 1 for n = 0, 0 for odd n, (n-1)!!/n!! for even n.
double sine_power_average(int n);

// Coefficients p_n of the mean mechanical power series P = Σ p_n (ω|ζ̂|)^{2n}.
// The returned vector has d+2 entries so the series reproduces the exact
// period average of 𝒯(t)ω_t for the polynomial torque model:
//   p_n = I_{2n} (c_{2(n-1)} + c_{2n}) K_a (r_t ω_t)^{3-2n} (S(0)/S_t)^{2n},
// with out-of-range c treated as zero (n = 0 reduces to c_0 K_a ω_t³ r_t³).
Vec mean_power_coefficients(const TurbineSpec& spec, const CharacteristicCurves& curves,
                            double omega_t, double s0);

// Cycle minimum of the cavitation pressure bound
//   p̃(t) = p_atm + ρg(ζ(t) - z_t) + ½ρ(v_t² + ω_t²r_t²) C̃_p,min
// for ζ(t) = |ζ̂| cos ωt, v_t = -(ω|ζ̂| S(0)/S_t) sin ωt. The minimum over the
// cycle is located analytically: either the ζ = -|ζ̂| endpoint or the interior
// stationary point when cos ωt = g|ζ̂|/(V² C̃) falls inside [-1, 0).
double min_pressure_bound(double zeta_amp, double omega, double omega_t, double z_t,
                          const TurbineSpec& spec, const CavitationTable& cav,
                          const PhysicalConstants& pc, double s0);

} // namespace owc
