#pragma once

#include <filesystem>

#include "owcpark/csv.hpp"
#include "owcpark/device.hpp"
#include "owcpark/hydro.hpp"
#include "owcpark/layout.hpp"
#include "owcpark/park.hpp"
#include "owcpark/turbine.hpp"
#include "owcpark/wave.hpp"

namespace owc {

// CSV `phi,Ca,Ct`, strictly increasing phi starting at 0.
CharacteristicCurves load_turbine_curves(const std::filesystem::path& path,
                                         double fit_tol = 1e-3, int max_half_degree = 6);

// CSV `phi,Cpmin`, all entries negative.
CavitationTable load_cavitation_table(const std::filesystem::path& path);

// CSV `omega,A,B,Re_pe,Im_pe`; a leading comment must declare
// `normalization: per-unit-amplitude` or `normalization: absolute`.
HydroCoefficients load_hydro_coefficients(const std::filesystem::path& path);

// CSV `Hs,Te,occurrence`.
ScatterDiagram load_scatter_diagram(const std::filesystem::path& path);

void write_time_series(const std::filesystem::path& path, const TimeSeries& ts);

// JSON-shaped body data: complex entries as [re, im] pairs.
void save_body_hydro(const std::filesystem::path& path, const BodyHydro& body, double omega);
BodyHydro load_body_hydro(const std::filesystem::path& path, double* omega = nullptr);

// Park layout file: {"bodies": [{"x":…, "y":…, "kind": "device"|"pile"}]}.
struct ParkLayoutEntry {
    double x, y;
    bool is_pile;
};
void save_park_layout(const std::filesystem::path& path, const std::vector<ParkLayoutEntry>& bodies);
std::vector<ParkLayoutEntry> load_park_layout(const std::filesystem::path& path);

// Dense interaction matrices with a dimension header.
void save_interaction_matrices(const std::filesystem::path& path, const InteractionMatrices& im,
                               double omega);
InteractionMatrices load_interaction_matrices(const std::filesystem::path& path,
                                              double* omega = nullptr);

// Self-contained layout-optimization record consumed by the verification
// command: seed, domain, positions, powers, control speed, wave and trace.
struct LayoutRecord {
    std::uint64_t seed = 0;
    std::vector<Vec2> domain_vertices;
    double d_min = 0.0;
    Mat2X positions;
    Vec per_device_power;
    double total_power = 0.0;
    double omega_t = 0.0;
    double hs = 0.0, te = 0.0, direction = 0.0;
    OptimizerTrace trace; // may be empty for plain random layouts
};
void save_layout_record(const std::filesystem::path& path, const LayoutRecord& rec);
LayoutRecord load_layout_record(const std::filesystem::path& path);

} // namespace owc
