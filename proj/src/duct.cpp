#include "owcpark/duct.hpp"

#include <algorithm>
#include <cmath>

namespace owc {

DuctGeometry::DuctGeometry(std::vector<std::pair<double, double>> breakpoints, double turbine_z)
    : breakpoints_(std::move(breakpoints)), turbine_z_(turbine_z) {
    if (breakpoints_.size() < 2)
        throw std::invalid_argument("DuctGeometry: need at least two breakpoints");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (breakpoints_[i].second <= 0)
            throw std::invalid_argument("DuctGeometry: radii must be positive");
        if (i > 0 && !(breakpoints_[i].first > breakpoints_[i - 1].first))
            throw std::invalid_argument("DuctGeometry: z breakpoints must be strictly increasing");
    }
    if (!(inflow_z() < 0.0) || !(top_z() > 0.0))
        throw std::invalid_argument("DuctGeometry: profile must span z = 0");
    if (!(inflow_z() < turbine_z_ && turbine_z_ < 0.0))
        throw std::invalid_argument("DuctGeometry: need z1 < z_t < 0");
    s0_ = section(0.0);
}

DuctGeometry DuctGeometry::uniform_column(double radius, double draft, double freeboard,
                                          double turbine_z) {
    return DuctGeometry({{-draft, radius}, {freeboard, radius}}, turbine_z);
}

double DuctGeometry::radius(double z) const {
    if (z < inflow_z() || z > top_z())
        throw std::domain_error("DuctGeometry: z outside the profile range");
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), z,
                               [](double v, const auto& bp) { return v < bp.first; });
    if (it == breakpoints_.begin()) return breakpoints_.front().second;
    if (it == breakpoints_.end()) return breakpoints_.back().second;
    const auto& [zb, rb] = *it;
    const auto& [za, ra] = *(it - 1);
    const double t = (z - za) / (zb - za);
    return ra + t * (rb - ra);
}

double DuctGeometry::section(double z) const {
    const double r = radius(z);
    return M_PI * r * r;
}

double DuctGeometry::dsection_dz(double z) const {
    if (z < inflow_z() || z > top_z())
        throw std::domain_error("DuctGeometry: z outside the profile range");
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), z,
                               [](double v, const auto& bp) { return v < bp.first; });
    if (it == breakpoints_.begin() || it == breakpoints_.end()) return 0.0;
    const auto& [zb, rb] = *it;
    const auto& [za, ra] = *(it - 1);
    const double slope = (rb - ra) / (zb - za);
    const double r = ra + (z - za) / (zb - za) * (rb - ra);
    return 2.0 * M_PI * r * slope;
}

double DuctGeometry::column_inertia(double zeta) const {
    if (zeta < inflow_z() || zeta > top_z())
        throw std::domain_error("DuctGeometry: zeta outside the profile range");
    double c = 0.0;
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        const auto& [za, ra] = breakpoints_[i - 1];
        const auto& [zb, rb] = breakpoints_[i];
        if (zeta <= za) break;
        const double z_hi = std::min(zeta, zb);
        const double slope = (rb - ra) / (zb - za);
        if (slope == 0.0) {
            c += (z_hi - za) / (M_PI * ra * ra);
        } else {
            // ∫ dz / (π r(z)²) = (1/(π m)) (1/r(za) - 1/r(z)) for r linear with slope m
            const double r_hi = ra + slope * (z_hi - za);
            c += (1.0 / ra - 1.0 / r_hi) / (M_PI * slope);
        }
    }
    return c;
}

double DuctGeometry::max_radius() const {
    double r = 0.0;
    for (const auto& bp : breakpoints_) r = std::max(r, bp.second);
    return r;
}

} // namespace owc
