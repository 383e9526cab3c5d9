#pragma once

#include <vector>

#include "owcpark/bessel.hpp"
#include "owcpark/device.hpp"

namespace owc {

// One body of the interaction model: its scattering operator (diffraction
// transfer matrix over azimuthal orders -M..M), the radiated-wave coefficient
// vector per unit column velocity, the excitation coupling row, and the
// pressure-form dynamic coefficients. Fields describing waves use the surface
// elevation amplitude normalization, so incident coefficients carry meters.
struct BodyHydro {
    int order = 0;            // truncation M
    double radius = 0.0;      // cylinder radius, m (sets the mode normalization)
    CMat dtm;                 // (2M+1)², column-regular coefficients → scattered
    CVec radiated;            // (2M+1), outgoing coefficients per unit -iωζ̂
    CVec excitation_row;      // (2M+1), incident coefficients → excitation Pa
    double self_added_mass = 0.0; // A(ω)
    double self_damping = 0.0;    // B(ω)
    double mass = 0.0;            // ρC(0)S(0)
    double damping = 0.0;         // ΛS(0)
    double stiffness = 0.0;       // ρg (piles: 1e9 × ρg)
    bool is_pile = false;

    int modes() const { return 2 * order + 1; }

    // Surrogate converter: rigid-cylinder diagonal scattering at the duct
    // radius, monopole radiation calibrated so its far-field carries the
    // radiated power ½S(0)B(ω)ω²|ζ̂|², and excitation picking the local
    // isotropic incident component with the single-device p̂_e(ω).
    static BodyHydro synthetic_device(int order, double radius, double k, double s0,
                                      double column_inertia0, double lambda, double omega,
                                      double a_self, double b_self, Complex pe_unit,
                                      const PhysicalConstants& pc = {});
};

// Fixed pile of the support structure: rigid-cylinder scattering, no
// radiation, stiffness 1e9 × the device hydrostatic stiffness.
BodyHydro make_pile(int order, double radius, double k, const PhysicalConstants& pc = {});

struct ParkProblem {
    std::vector<Vec2> positions;
    std::vector<BodyHydro> bodies;
    MonochromaticWave wave;
    PhysicalConstants constants;

    int order() const { return bodies.empty() ? 0 : bodies.front().order; }
    std::size_t size() const { return bodies.size(); }
    double wavenumber() const {
        return dispersion_wavenumber(wave.omega(), wave.depth, constants);
    }
    void validate() const;
};

// Regular-wave coefficients of the ambient incident wave about `position`:
// a_m = (H/2) e^{ik(x cosθ + y sinθ)} i^m e^{-imθ}.
CVec ambient_incident_coefficients(const Vec2& position, const MonochromaticWave& wave,
                                   int order, const PhysicalConstants& pc = {});

// Graf translation: T_ij(m,n) = H_{m-n}(kL_ij) e^{i(m-n)α_ij} expresses the
// outgoing wave of order m about body i as regular waves about body j, with
// α_ij the bearing of j seen from i. Index (m+M, n+M). Position derivatives
// are filled when requested.
struct TransferMatrix {
    CMat value;
    CMat d_xi, d_yi, d_xj, d_yj;
};
TransferMatrix basis_transformation(const Vec2& from, const Vec2& to, double k, int order,
                                    bool with_derivatives = false);

// Block system [M_γγ M_γζ; M_ζγ M_ζζ][γ̃; ζ̂] = [h₁; h₂]: the first block row
// is the multiple-scattering identity, the second the body dynamics. The
// scattered unknowns are stored in the surface-normalized basis
// γ̃_{ℓ,m} = |H_m(k a_ℓ)| γ_{ℓ,m}, which keeps every matrix entry bounded at
// close spacing; `gamma_norm` records the per-mode factors.
struct ParkSystem {
    CMat m_gg, m_gz, m_zg, m_zz;
    CVec h1, h2;
    Vec gamma_norm;

    CMat assembled() const;
    CVec rhs() const;
};
ParkSystem assemble_block_system(const ParkProblem& problem);

struct ParkState {
    CVec gamma; // N_b (2M+1) scattered-wave coefficients
    CVec zeta;  // N_b response amplitudes
    double residual = 0.0;
};

// Dense direct solve with power-of-two row/column equilibration; residual is
// relative to ‖b‖ on the unscaled system.
CVec equilibrated_solve(const CMat& m, const CVec& b, double& residual, double& rcond);
ParkState solve_park(const ParkProblem& problem);
ParkState solve_park(const ParkProblem& problem, const ParkSystem& system);

// Mean mechanical power Σ_ℓ Σ_n p_n (ω|ζ̂_ℓ|)^{2n} over the converter bodies
// (piles contribute zero).
struct ParkPower {
    double total = 0.0;
    Vec per_device; // per body; zero at pile entries
};
ParkPower park_power(const ParkState& state, const ParkProblem& problem, const Vec& p_coeffs,
                     double omega);

// Dense interaction matrices of the devices, extracted from the linearized
// coupling by eliminating the scattered-wave coefficients and condensing the
// pile responses: Z_eff = -ω²(A + diag ρC(0)S(0)) - iω(B + diag ΛS(0)) + ρg,
// with A, B real and p̂_e the effective (diffraction-aware) excitation.
struct InteractionMatrices {
    Mat added_mass;          // device × device
    Mat damping;
    CVec excitation;         // absolute complex amplitude per device
    std::vector<std::size_t> device_index; // rows → problem body indices
};
InteractionMatrices extract_interaction(const ParkProblem& problem, const ParkSystem& system);
InteractionMatrices extract_interaction(const ParkProblem& problem);

// Multibody nonlinear time-domain run:
//   ρC(ζ_ℓ)S(ζ_ℓ)ζ̈_ℓ + Σ_m A_ℓm ζ̈_m + Δp(v_t,ℓ, ω_t) + Σ_m B_ℓm ζ̇_m + ρg ζ_ℓ = p_e,ℓ(t)
// over n_periods, with the park power averaged over the trailing half.
struct ParkVerifyResult {
    Vec per_device_power;
    double total = 0.0;
};
ParkVerifyResult timedomain_verify(const InteractionMatrices& im, const Device& dev,
                                   const MonochromaticWave& wave, double omega_t,
                                   int n_periods = 8, int samples_per_period = 256,
                                   const PhysicalConstants& pc = {}, const OdeOptions& opts = {});

} // namespace owc
