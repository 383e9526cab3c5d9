#pragma once

#include <optional>
#include <vector>

#include "owcpark/constants.hpp"
#include "owcpark/types.hpp"

namespace owc {

// Water depth: finite positive value or deep water.
struct Depth {
    double value = 0.0;
    bool deep = false;

    static Depth deep_water() { return Depth{0.0, true}; }
    static Depth finite(double h) {
        if (h <= 0) throw std::invalid_argument("Depth: h must be positive");
        return Depth{h, false};
    }
};

struct MonochromaticWave {
    double height;    // H, m (crest to trough)
    double period;    // T, s
    double direction = 0.0; // θ, rad, counterclockwise from +x
    Depth depth = Depth::deep_water();

    MonochromaticWave(double H, double T, double theta = 0.0, Depth h = Depth::deep_water())
        : height(H), period(T), direction(theta), depth(h) {
        if (H < 0) throw std::invalid_argument("MonochromaticWave: H must be non-negative");
        if (T <= 0) throw std::invalid_argument("MonochromaticWave: T must be positive");
    }

    double omega() const { return 2.0 * M_PI / period; }
    double amplitude() const { return 0.5 * height; }
};

struct SeaState {
    double hs;         // significant wave height H_s, m
    double te;         // energy period T_e, s
    double occurrence = 0.0; // relative occurrence fraction

    SeaState(double Hs, double Te, double occ = 0.0) : hs(Hs), te(Te), occurrence(occ) {
        if (Hs < 0) throw std::invalid_argument("SeaState: Hs must be non-negative");
        if (Te <= 0) throw std::invalid_argument("SeaState: Te must be positive");
        if (occ < 0 || occ > 1) throw std::invalid_argument("SeaState: occurrence must be in [0,1]");
    }
};

// Scatter diagram of wave statistics: occurrence of (H_s, T_e) cells at a site.
// Missing mass is calm. Cells with zero occurrence are kept.
class ScatterDiagram {
public:
    ScatterDiagram() = default;
    explicit ScatterDiagram(std::vector<SeaState> cells);

    const std::vector<SeaState>& cells() const { return cells_; }
    double total_occurrence() const;
    std::size_t size() const { return cells_.size(); }

private:
    std::vector<SeaState> cells_;
};

// Solves ω² = g k tanh(kh) for k (deep water: k = ω²/g) to relative
// residual below 1e-12. Newton from the deep-water guess with a bracketed
// bisection fallback.
double dispersion_wavenumber(double omega, Depth depth, const PhysicalConstants& c = {});

// Energy flux per unit crest width of a monochromatic wave: J = ρg²TH²/(32π).
double monochromatic_flux(const MonochromaticWave& w, const PhysicalConstants& c = {});

// Energy flux of an irregular sea: J = ρg²T_eH_s²/(64π).
double seastate_flux(const SeaState& s, const PhysicalConstants& c = {});

// Flux-equivalent monochromatic wave: H = H_s/√2, T = T_e.
MonochromaticWave equivalent_monochromatic(const SeaState& s, double direction = 0.0,
                                           Depth depth = Depth::deep_water());

// Complex amplitude of the incident dynamic pressure at (x=0, y=0, z),
// p̂ = iωρ φ̂_i, with the incident-wave potential depth factor
// cosh[k(z+h)]/cosh(kh) (deep water: e^{kz}). Time convention e^{-iωt}.
Complex incident_pressure_amplitude(const MonochromaticWave& w, double z,
                                    const PhysicalConstants& c = {});

} // namespace owc
