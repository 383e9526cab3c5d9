#include "owcpark/wave.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace owc {

std::string flags_to_string(Flag f) {
    if (f == Flag::none) return "ok";
    std::ostringstream os;
    const char* sep = "";
    auto emit = [&](Flag bit, const char* name) {
        if (has_flag(f, bit)) { os << sep << name; sep = "+"; }
    };
    emit(Flag::cavitation, "cavitation");
    emit(Flag::turbine_uncovered, "uncovered");
    emit(Flag::overflow, "overflow");
    emit(Flag::curve_clamped, "clamped");
    emit(Flag::model_validity, "validity");
    emit(Flag::solver_failure, "solver");
    return os.str();
}

ScatterDiagram::ScatterDiagram(std::vector<SeaState> cells) : cells_(std::move(cells)) {
    std::set<std::pair<double, double>> seen;
    double total = 0.0;
    for (const auto& s : cells_) {
        if (!seen.insert({s.hs, s.te}).second)
            throw std::invalid_argument("ScatterDiagram: duplicate (Hs, Te) cell");
        total += s.occurrence;
    }
    if (total > 1.0 + 1e-9)
        throw std::invalid_argument("ScatterDiagram: occurrences sum to more than 1");
}

double ScatterDiagram::total_occurrence() const {
    double total = 0.0;
    for (const auto& s : cells_) total += s.occurrence;
    return total;
}

double dispersion_wavenumber(double omega, Depth depth, const PhysicalConstants& c) {
    if (omega <= 0) throw std::domain_error("dispersion_wavenumber: omega must be positive");
    const double k_deep = omega * omega / c.g;
    if (depth.deep) return k_deep;
    if (depth.value <= 0) throw std::domain_error("dispersion_wavenumber: depth must be positive");

    const double h = depth.value;
    // Effectively deep: tanh(kh) indistinguishable from 1.
    if (std::tanh(k_deep * h) > 1.0 - 1e-12) return k_deep;

    auto residual = [&](double k) { return omega * omega - c.g * k * std::tanh(k * h); };

    // Bracket: residual(k_deep) >= 0 (tanh <= 1), and residual < 0 for k large.
    double lo = k_deep;
    double hi = std::max(k_deep, omega / std::sqrt(c.g * h)) * 2.0;
    while (residual(hi) > 0) hi *= 2.0;

    double k = std::max(k_deep, omega / std::sqrt(c.g * h)); // deep/shallow hybrid guess
    for (int it = 0; it < 100; ++it) {
        const double th = std::tanh(k * h);
        const double f = omega * omega - c.g * k * th;
        const double df = -c.g * (th + k * h * (1.0 - th * th));
        double k_next = k - f / df;
        if (!(k_next > lo && k_next < hi)) k_next = 0.5 * (lo + hi); // bisect when Newton escapes
        if (residual(k_next) > 0) lo = k_next; else hi = k_next;
        if (std::abs(k_next - k) < 1e-16 * k) { k = k_next; break; }
        k = k_next;
        if (std::abs(residual(k)) < 1e-13 * omega * omega) break;
    }
    return k;
}

double monochromatic_flux(const MonochromaticWave& w, const PhysicalConstants& c) {
    return c.rho * c.g * c.g / (32.0 * M_PI) * w.period * w.height * w.height;
}

double seastate_flux(const SeaState& s, const PhysicalConstants& c) {
    return c.rho * c.g * c.g / (64.0 * M_PI) * s.te * s.hs * s.hs;
}

MonochromaticWave equivalent_monochromatic(const SeaState& s, double direction, Depth depth) {
    return MonochromaticWave(s.hs / std::sqrt(2.0), s.te, direction, depth);
}

Complex incident_pressure_amplitude(const MonochromaticWave& w, double z,
                                    const PhysicalConstants& c) {
    if (z > 0) throw std::domain_error("incident_pressure_amplitude: z must be below the surface");
    const double k = dispersion_wavenumber(w.omega(), w.depth, c);
    double depth_factor;
    if (w.depth.deep) {
        depth_factor = std::exp(k * z);
    } else {
        if (z < -w.depth.value)
            throw std::domain_error("incident_pressure_amplitude: z below the sea bottom");
        depth_factor = std::cosh(k * (z + w.depth.value)) / std::cosh(k * w.depth.value);
    }
    // p̂ = iωρ φ̂_i with φ̂_i = -i (H/2)(g/ω) f(z) at x = y = 0.
    return Complex(c.rho * c.g * w.amplitude() * depth_factor, 0.0);
}

} // namespace owc
