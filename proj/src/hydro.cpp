#include "owcpark/hydro.hpp"

#include <algorithm>
#include <cmath>

#include "owcpark/wave.hpp"

namespace owc {

HydroCoefficients::HydroCoefficients(std::vector<double> omega, std::vector<double> added_mass,
                                     std::vector<double> damping, std::vector<Complex> excitation,
                                     Normalization norm)
    : omega_(std::move(omega)), a_(std::move(added_mass)), b_(std::move(damping)),
      pe_(std::move(excitation)), norm_(norm) {
    if (omega_.size() < 2 || omega_.size() != a_.size() || omega_.size() != b_.size() ||
        omega_.size() != pe_.size())
        throw std::invalid_argument("HydroCoefficients: inconsistent table sizes");
    for (std::size_t i = 1; i < omega_.size(); ++i)
        if (!(omega_[i] > omega_[i - 1]))
            throw std::invalid_argument("HydroCoefficients: omega grid must be strictly increasing");
    for (double v : b_)
        if (v < 0) throw std::invalid_argument("HydroCoefficients: B(omega) must be non-negative");
}

double HydroCoefficients::interp(const std::vector<double>& y, double omega) const {
    if (omega < omega_.front() || omega > omega_.back())
        throw std::domain_error("HydroCoefficients: omega outside the tabulated range");
    const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
    if (it == omega_.end()) return y.back();
    const std::size_t i = std::max<std::size_t>(1, static_cast<std::size_t>(it - omega_.begin()));
    const double t = (omega - omega_[i - 1]) / (omega_[i] - omega_[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

double HydroCoefficients::added_mass(double omega) const { return interp(a_, omega); }
double HydroCoefficients::damping(double omega) const { return interp(b_, omega); }

Complex HydroCoefficients::excitation(double omega, double wave_amplitude) const {
    std::vector<double> re(pe_.size()), im(pe_.size());
    for (std::size_t i = 0; i < pe_.size(); ++i) { re[i] = pe_[i].real(); im[i] = pe_[i].imag(); }
    const Complex pe(interp(re, omega), interp(im, omega));
    return norm_ == Normalization::per_unit_amplitude ? pe * wave_amplitude : pe;
}

HydroCoefficients HydroCoefficients::synthetic(double draft, double s0,
                                               const PhysicalConstants& pc,
                                               double omega_lo, double omega_hi, int n) {
    if (draft <= 0 || s0 <= 0) throw std::invalid_argument("synthetic hydro: bad geometry");
    std::vector<double> w(n), a(n), b(n);
    std::vector<Complex> pe(n);
    const double d_eff = 0.75 * draft; // effective depth of the inflow pressure
    for (int i = 0; i < n; ++i) {
        const double omega = omega_lo + (omega_hi - omega_lo) * i / (n - 1);
        const double k = omega * omega / pc.g; // deep water
        w[i] = omega;
        a[i] = pc.rho * draft * (0.06 + 0.05 * std::exp(-(omega - 1.2) * (omega - 1.2)));
        b[i] = 6.0 * pc.rho * omega * omega * omega / pc.g * s0 * std::exp(-2.0 * k * d_eff);
        const double mag = pc.rho * pc.g * std::exp(-k * d_eff);
        const double phase = -0.15 * k * draft;
        pe[i] = mag * Complex(std::cos(phase), std::sin(phase));
    }
    return HydroCoefficients(std::move(w), std::move(a), std::move(b), std::move(pe),
                             Normalization::per_unit_amplitude);
}

} // namespace owc
