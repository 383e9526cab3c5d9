#pragma once

#include <functional>
#include <string>
#include <vector>

#include "owcpark/device.hpp"

namespace owc {

enum class ModelKind { linear, nonlinear };

// Bounded derivative-free scalar minimization (golden section with parabolic
// acceleration, Brent). xtol is relative on x.
struct ScalarMinResult {
    double x = 0.0;
    double f = 0.0;
    int evals = 0;
};
ScalarMinResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                                double xtol = 1e-3, int max_evals = 200);

// Turbine damping that maximizes the mean hydraulic power at frequency ω:
//   Λ = (1/S(0)) √( B² + [ -ω²(ρC(0)S(0)+A) + ρg ]² / ω² ).
double lambda_max_hydraulic(double omega, const HydroCoefficients& hydro,
                            const DuctGeometry& duct, const PhysicalConstants& pc = {});

struct ControlResult {
    double omega_t = 0.0;      // optimal rotational speed, rad/s
    double power = 0.0;        // mean mechanical power, W
    double hydraulic_power = 0.0;
    double zeta_min = 0.0, zeta_max = 0.0;
    double p_min = 0.0;        // minimum blade pressure over the cycle, Pa
    double cwr = 0.0;          // capture width ratio P/(2 R₁ J)
    Flag flags = Flag::none;
};

// Per-sea-state maximization of the mean mechanical power over ω_t within the
// turbine speed bounds. The sea state is converted to its flux-equivalent
// monochromatic wave; the speed of maximum hydraulic power seeds the bracket.
ControlResult optimize_rotation_speed(const SeaState& sea, const Device& dev,
                                      const HydroCoefficients& hydro, ModelKind model,
                                      const PhysicalConstants& pc = {});

struct PowerMatrix {
    std::vector<double> hs;   // axis values
    std::vector<double> te;
    std::vector<ControlResult> cells; // row-major, index = i_hs * te.size() + i_te
    std::vector<std::string> errors;  // empty string per cell when clean

    const ControlResult& at(std::size_t i_hs, std::size_t i_te) const {
        return cells[i_hs * te.size() + i_te];
    }
};

PowerMatrix build_power_matrix(const std::vector<double>& hs_axis,
                               const std::vector<double>& te_axis, const Device& dev,
                               const HydroCoefficients& hydro, ModelKind model,
                               const PhysicalConstants& pc = {});

// Σ_cells P · occurrence over the scatter diagram; every cell with nonzero
// occurrence must exist in the matrix.
double annual_power(const PowerMatrix& pm, const ScatterDiagram& scatter);

// Hydrodynamic scalars of one device geometry at a single frequency.
struct PointHydro {
    double added_mass = 0.0; // A(ω)
    double damping = 0.0;    // B(ω)
    Complex excitation;      // p̂_e (absolute, Pa)
};

// Small-body surrogate for a floating cylinder of the given radius and draft:
// diffraction and radiation neglected, excitation from the undisturbed
// incident pressure at the bottom, deep water.
PointHydro small_body_hydro(double draft, const MonochromaticWave& wave,
                            const PhysicalConstants& pc = {});

// Incipient-stall speed: the ω_t at which the linear response reaches
// |φ̂| = φ_opt, solving
//   {[-ω²(A+ρL)+ρg]² + ω²(B+SΛ(ω_t))²} a(ω_t)² - |p̂_e|² = 0,
//   a(ω_t) = φ_opt S_t r_t ω_t / (ωS),
// by safeguarded Newton iteration.
struct StallSpeedResult {
    double omega_t = 0.0;
    double zeta_amp = 0.0; // |ζ̂| at the root
    double residual = 0.0; // defining-equation residual, relative to |p̂_e|²
};
StallSpeedResult stall_speed_newton(const MonochromaticWave& wave, double column_length,
                                    double section, const PointHydro& hydro,
                                    const TurbineSpec& spec, const CharacteristicCurves& curves,
                                    const PhysicalConstants& pc = {});

// Rotational speed at which the linearized flow-coefficient amplitude equals
// phi_target (the amplitude decreases monotonically with ω_t). `mass` is the
// full inertia ρC(0)S(0)+A, `section` the surface section S(0). Returns 0
// when the excitation vanishes.
StallSpeedResult speed_for_flow_amplitude(double phi_target, double omega, double mass,
                                          double damping_b, double section, Complex pe,
                                          const TurbineSpec& spec,
                                          const CharacteristicCurves& curves,
                                          const PhysicalConstants& pc = {});

// Constraint scales for the quadratic penalty: c₁ in meters, c₂/c₃ normalized
// by atmospheric pressure, c₄ dimensionless. Violation tolerance 1e-3 in
// these units.
inline constexpr double penalty_tolerance = 1e-3;

struct PenaltyConstraints {
    double c1 = 0.0; // |ζ̂| - |z_t| (turbine immersion)
    double c2 = 0.0; // endpoint cavitation branch
    double c3 = 0.0; // interior cavitation branch
    double c4 = 0.0; // |φ̂| - φ_max,model
    double max_scaled_violation() const;
};

// One geometry of the dimension study: constant-section cylinder of the given
// radius and draft, turbine at z_t = -0.6 d, turbine geometry scaled with the
// radius.
struct DimensionPoint {
    double radius;
    double draft;
    double turbine_z() const { return -0.6 * draft; }
    double section() const { return M_PI * radius * radius; }
};

// Q_μ(ω_t) = -P(ω_t) + μ Σ [cᵢ]₊² with the scaled constraints, for the
// linear model response of the dimension-study geometry.
double penalized_dimension_objective(double omega_t, const DimensionPoint& dims,
                                     const MonochromaticWave& wave, const PointHydro& hydro,
                                     const TurbineSpec& spec, const CharacteristicCurves& curves,
                                     const CavitationTable& cav, double mu,
                                     const PhysicalConstants& pc = {},
                                     PenaltyConstraints* out = nullptr);

// Penalty continuation: minimize Q_μ over ω_t, doubling μ until the largest
// scaled violation drops below the tolerance.
struct PenaltyOutcome {
    double omega_t = 0.0;
    double power = 0.0;
    double max_violation = 0.0;
    double mu_final = 0.0;
    int continuations = 0;
    bool converged = false;
    PenaltyConstraints constraints;
};
PenaltyOutcome penalty_continuation(const DimensionPoint& dims, const MonochromaticWave& wave,
                                    const PointHydro& hydro, const TurbineSpec& spec,
                                    const CharacteristicCurves& curves, const CavitationTable& cav,
                                    const PhysicalConstants& pc = {}, double mu0 = 1.0,
                                    int max_continuations = 60);

struct DimensionStudyConfig {
    std::vector<double> radius;
    std::vector<double> draft;
    TurbineSpec base_turbine;      // turbine matching base_radius
    double base_radius = 0.75;
    bool constrained = false;
};

struct DimensionSweepResult {
    std::vector<double> radius, draft;
    Mat annual;          // W, indexed (i_radius, i_draft)
    Mat linear_density;  // W/m, annual / (2r)
    Mat surface_density; // W/m², annual / (πr²)
    std::vector<std::vector<Flag>> flags;
};

DimensionSweepResult dimension_sweep(const DimensionStudyConfig& cfg,
                                     const ScatterDiagram& scatter,
                                     const CharacteristicCurves& curves,
                                     const CavitationTable& cav,
                                     const PhysicalConstants& pc = {});

// Optimal-control mean power of a small floating cylinder under the
// deep-water incident wave, in the exact pre-expansion form
//   P = (ρgωH²/16) πr² e^{-2kd}/(1 - kd)
// and the first-order expansion (ρgωH²/16) πr² (1 - kd).
struct SmallBodyPower {
    double exact = 0.0;
    double approx = 0.0;     // NaN when kd ≥ 1
    double c_opt = 0.0;      // optimal damping coefficient |-ω²m + k|/ω
    bool expansion_valid = true;
};
SmallBodyPower small_body_power(double radius, double draft, const MonochromaticWave& wave,
                                const PhysicalConstants& pc = {});

} // namespace owc
