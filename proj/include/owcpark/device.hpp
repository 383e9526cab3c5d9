#pragma once

#include "owcpark/duct.hpp"
#include "owcpark/hydro.hpp"
#include "owcpark/ode.hpp"
#include "owcpark/turbine.hpp"
#include "owcpark/wave.hpp"

namespace owc {

// A complete OWC converter: duct, Wells turbine, characteristic curves and
// the blade cavitation table.
struct Device {
    DuctGeometry duct;
    TurbineSpec turbine;
    CharacteristicCurves curves;
    CavitationTable cavitation;
};

// Acceleration of the water column from the nonlinear balance
//   [ρC(ζ)S(ζ) + A]ζ̈ + ρC(ζ)S'(ζ)ζ̇² + ½ρζ̇²(1 - S²(ζ)/S²(z₁))
//     + Δp(v_t, ω_t) + Bζ̇ + ρgζ = p_e(t),  v_t = S(ζ)ζ̇/S_t.
double nonlinear_acceleration(const DuctGeometry& duct, const TurbineSpec& spec,
                              const CharacteristicCurves& curves, double added_mass,
                              double damping, double pe_t, double omega_t, double zeta,
                              double zetadot, const PhysicalConstants& pc,
                              bool* clamped = nullptr);

struct TimeSeries {
    Vec t;
    Vec zeta, zetadot;
    Vec flow;     // Q = S(ζ)ζ̇
    Vec dp;       // turbine pressure jump
    Vec torque;
    Vec power;    // 𝒯 ω_t
    Vec pmin;     // minimum pressure on the blades
    Flag flags = Flag::none;

    // Statistics over the trailing window (second half of the run).
    double mean_power = 0.0;
    double mean_hydraulic_power = 0.0;
    double zeta_min = 0.0, zeta_max = 0.0;
    double pmin_min = 0.0;
    double amplitude = 0.0; // half peak-to-peak of ζ
};

// Monochromatic forcing p_e(t) = Re[p̂_e(ω) e^{-iωt}], startup from rest,
// adaptive explicit integration; A(ω), B(ω), p̂_e(ω) frozen at the forcing
// frequency. Output on a uniform grid of samples_per_period per wave period.
TimeSeries integrate_nonlinear(const Device& dev, const HydroCoefficients& hydro,
                               const MonochromaticWave& wave, double omega_t,
                               int n_periods = 16, int samples_per_period = 256,
                               const PhysicalConstants& pc = {}, const OdeOptions& opts = {});

// ζ̂ = p̂_e / (-ω²m - iωc + k); throws on a vanishing denominator.
Complex linear_response(double mass, double damping, double stiffness, double omega, Complex pe);

// Frequency-domain solve of the linearized device:
//   {-ω²[ρC(0)S(0) + A] - iω[ΛS(0) + B] + ρg} ζ̂ = p̂_e.
Complex linear_frequency_solve(const DuctGeometry& duct, double lambda, double added_mass,
                               double radiation_damping, Complex pe, double omega,
                               const PhysicalConstants& pc = {});

// Mean hydraulic power P_hyd = ½ Λ ω² S²(0) |ζ̂|².
double hydraulic_power(double zeta_abs, double omega, double lambda, double s0);

// Σ p_n x^{2n} with x = ω|ζ̂|.
double power_series(const Vec& p, double x);

// Mean mechanical power from the series coefficients.
double mechanical_power(const Vec& p, double omega, double zeta_abs);

// |φ̂| = ω|ζ̂| S(0) / (S_t ω_t r_t): flow-coefficient amplitude of the
// linearized motion, checked against the torque-fit validity bound.
double flow_coefficient_amplitude(double omega, double zeta_abs, double s0,
                                  const TurbineSpec& spec, double omega_t);

} // namespace owc
