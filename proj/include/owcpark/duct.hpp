#pragma once

#include <utility>
#include <vector>

#include "owcpark/types.hpp"

namespace owc {

// Duct geometry as a piecewise-linear radius profile r(z) between the inflow
// section z₁ < 0 and the duct top. Section area S(z) = π r(z)². Radius steps
// are expected to be pre-blended into short ramps so S is continuous.
class DuctGeometry {
public:
    // breakpoints: (z, r) pairs, z strictly increasing, first entry is the
    // inflow section, last is the duct top (above z = 0).
    DuctGeometry(std::vector<std::pair<double, double>> breakpoints, double turbine_z);

    static DuctGeometry uniform_column(double radius, double draft, double freeboard,
                                       double turbine_z);

    double section(double z) const;      // S(z), m²
    double dsection_dz(double z) const;  // dS/dz, m

    // C(ζ) = ∫_{z₁}^{ζ} dz/S(z), assembled from per-segment closed forms.
    double column_inertia(double zeta) const;

    double inflow_z() const { return breakpoints_.front().first; }   // z₁
    double top_z() const { return breakpoints_.back().first; }
    double turbine_z() const { return turbine_z_; }                  // z_t
    double inflow_section() const { return section(inflow_z()); }    // S₁
    double surface_section() const { return s0_; }                   // S(0)
    double max_radius() const;                                       // widest section radius

private:
    double radius(double z) const;
    std::vector<std::pair<double, double>> breakpoints_;
    double turbine_z_;
    double s0_;
};

} // namespace owc
