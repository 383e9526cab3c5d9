#pragma once

#include <filesystem>
#include <vector>

#include "owcpark/device.hpp"
#include "owcpark/io.hpp"
#include "owcpark/park.hpp"

// Shared fixtures: the shipped example converter (constant-section column,
// radius 0.75 m, draft 5.65 m) and its stepped-profile variant.

inline std::filesystem::path data_dir() { return std::filesystem::path(OWC_DATA_DIR); }

inline const owc::CharacteristicCurves& example_curves() {
    static const owc::CharacteristicCurves c =
        owc::load_turbine_curves(data_dir() / "turbine_curves.csv");
    return c;
}

inline const owc::CavitationTable& example_cavitation() {
    static const owc::CavitationTable c =
        owc::load_cavitation_table(data_dir() / "cavitation_cpmin.csv");
    return c;
}

inline const owc::HydroCoefficients& example_hydro() {
    static const owc::HydroCoefficients h =
        owc::load_hydro_coefficients(data_dir() / "device_hydro.csv");
    return h;
}

inline owc::TurbineSpec example_turbine() {
    return owc::TurbineSpec::make(0.48, 0.16, 0.12, 7, 0.5, 2.0, 80.0);
}

inline owc::DuctGeometry constant_duct() {
    return owc::DuctGeometry::uniform_column(0.75, 5.65, 2.0, -0.6 * 5.65);
}

inline owc::DuctGeometry reference_duct() {
    return owc::DuctGeometry({{-5.65, 1.4}, {-3.65, 0.5}, {-3.64, 0.75}, {2.0, 0.75}}, -3.65);
}

inline owc::Device example_device(bool constant_section = true) {
    return owc::Device{constant_section ? constant_duct() : reference_duct(), example_turbine(),
                       example_curves(), example_cavitation()};
}

// Synthetic interaction-model body for the example converter at (ω, ω_t).
inline owc::BodyHydro example_body(double omega, double omega_t, int order = 6) {
    const owc::PhysicalConstants pc;
    const auto duct = constant_duct();
    const auto& hydro = example_hydro();
    const double k = omega * omega / pc.g;
    return owc::BodyHydro::synthetic_device(
        order, 0.75, k, duct.surface_section(), duct.column_inertia(0.0),
        owc::linear_damping_lambda(omega_t, example_turbine(), example_curves()), omega,
        hydro.added_mass(omega), hydro.damping(omega), hydro.excitation(omega, 1.0), pc);
}

inline owc::ParkProblem make_example_park(const std::vector<owc::Vec2>& device_positions,
                                          const owc::MonochromaticWave& wave, double omega_t,
                                          int order = 6,
                                          const std::vector<owc::Vec2>& pile_positions = {},
                                          double pile_radius = 5.0) {
    const owc::PhysicalConstants pc;
    owc::ParkProblem p{{}, {}, wave, pc};
    const owc::BodyHydro dev = example_body(wave.omega(), omega_t, order);
    for (const auto& x : device_positions) {
        p.positions.push_back(x);
        p.bodies.push_back(dev);
    }
    if (!pile_positions.empty()) {
        const double k = owc::dispersion_wavenumber(wave.omega(), wave.depth, pc);
        const owc::BodyHydro pile = owc::make_pile(order, pile_radius, k, pc);
        for (const auto& x : pile_positions) {
            p.positions.push_back(x);
            p.bodies.push_back(pile);
        }
    }
    return p;
}

// Linear-model response amplitude of the isolated example converter.
inline owc::Complex isolated_response(const owc::MonochromaticWave& wave, double omega_t) {
    const owc::PhysicalConstants pc;
    const auto& hydro = example_hydro();
    const double omega = wave.omega();
    return owc::linear_frequency_solve(
        constant_duct(), owc::linear_damping_lambda(omega_t, example_turbine(), example_curves()),
        hydro.added_mass(omega), hydro.damping(omega), hydro.excitation(omega, wave.amplitude()),
        omega, pc);
}
