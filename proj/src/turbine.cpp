#include "owcpark/turbine.hpp"

#include <algorithm>
#include <cmath>

namespace owc {

namespace {

// Piecewise-linear lookup on a strictly increasing grid, clamped at the ends.
double interp_clamped(const std::vector<double>& x, const std::vector<double>& y,
                      double q, bool* clamped) {
    if (q <= x.front()) {
        if (q < x.front() && clamped) *clamped = true;
        return y.front();
    }
    if (q >= x.back()) {
        if (q > x.back() && clamped) *clamped = true;
        return y.back();
    }
    const auto it = std::upper_bound(x.begin(), x.end(), q);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double t = (q - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

void require_strictly_increasing(const std::vector<double>& x, const char* what) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument(std::string(what) + ": phi grid must be strictly increasing");
}

} // namespace

TurbineSpec TurbineSpec::make(double r_t, double r_h, double c, int n, double duct_r,
                              double w_min, double w_max, const PhysicalConstants& pc) {
    if (!(0 < r_h && r_h < r_t)) throw std::invalid_argument("TurbineSpec: need 0 < r_h < r_t");
    if (c <= 0 || n <= 0) throw std::invalid_argument("TurbineSpec: chord and blade count must be positive");
    if (duct_r <= r_h) throw std::invalid_argument("TurbineSpec: duct radius must exceed hub radius");
    if (!(0 < w_min && w_min < w_max)) throw std::invalid_argument("TurbineSpec: bad speed bounds");
    TurbineSpec s;
    s.tip_radius = r_t;
    s.hub_radius = r_h;
    s.chord = c;
    s.blades = n;
    s.duct_radius = duct_r;
    s.omega_min = w_min;
    s.omega_max = w_max;
    s.flow_area = M_PI * (duct_r * duct_r - r_h * r_h);
    s.ka = pc.rho * c * (r_t - r_h) * n / 2.0;
    s.solidity = c * (r_t - r_h) * n / s.flow_area;
    return s;
}

TurbineSpec TurbineSpec::scaled(double factor, const PhysicalConstants& pc) const {
    if (factor <= 0) throw std::invalid_argument("TurbineSpec::scaled: factor must be positive");
    return make(tip_radius * factor, hub_radius * factor, chord * factor, blades,
                duct_radius * factor, omega_min, omega_max, pc);
}

CharacteristicCurves::CharacteristicCurves(std::vector<double> phi, std::vector<double> ca,
                                           std::vector<double> ct, double fit_tol,
                                           int max_half_degree)
    : phi_(std::move(phi)), ca_(std::move(ca)), ct_(std::move(ct)) {
    if (phi_.size() < 3 || phi_.size() != ca_.size() || phi_.size() != ct_.size())
        throw std::invalid_argument("CharacteristicCurves: inconsistent table sizes");
    require_strictly_increasing(phi_, "CharacteristicCurves");
    if (phi_.front() != 0.0)
        throw std::invalid_argument("CharacteristicCurves: table must start at phi = 0");
    if (ca_.front() < 0.0)
        throw std::invalid_argument("CharacteristicCurves: C_a(0) must be non-negative");
    phi_max_ = phi_.back();
    ca_slope0_ = (ca_[1] - ca_[0]) / (phi_[1] - phi_[0]);

    // Even-polynomial fit of C_t with c_0 pinned to the tabulated C_t(0).
    // Raise the degree until the residual target is met or the cap is hit.
    const double c0 = ct_.front();
    const int n_pts = static_cast<int>(phi_.size());
    for (int d = 1; d <= max_half_degree; ++d) {
        Mat A(n_pts, d);
        Vec b(n_pts);
        for (int i = 0; i < n_pts; ++i) {
            const double x = phi_[i] * phi_[i];
            double p = x;
            for (int k = 0; k < d; ++k) { A(i, k) = p; p *= x; }
            b(i) = ct_[i] - c0;
        }
        Vec sol = A.colPivHouseholderQr().solve(b);
        std::vector<double> coeff(static_cast<std::size_t>(d) + 1);
        coeff[0] = c0;
        for (int k = 0; k < d; ++k) coeff[static_cast<std::size_t>(k) + 1] = sol(k);
        double res = 0.0;
        coeff_ = coeff;
        for (int i = 0; i < n_pts; ++i)
            res = std::max(res, std::abs(ct_[i] - ct_poly(phi_[i])));
        fit_residual_ = res;
        if (res < fit_tol) break;
    }

    // Optimum flow coefficient: argmax of the fitted torque over the table range.
    const int n_scan = 4001;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_scan; ++i) {
        const double p = phi_max_ * i / (n_scan - 1);
        const double v = ct_poly(p);
        if (v > best) { best = v; phi_opt_ = p; }
    }
}

double CharacteristicCurves::ca(double phi_abs, bool* clamped) const {
    return interp_clamped(phi_, ca_, std::abs(phi_abs), clamped);
}

double CharacteristicCurves::ct(double phi_abs, bool* clamped) const {
    return interp_clamped(phi_, ct_, std::abs(phi_abs), clamped);
}

double CharacteristicCurves::ct_poly(double phi) const {
    const double x = phi * phi;
    double v = 0.0;
    for (std::size_t k = coeff_.size(); k-- > 0;) v = v * x + coeff_[k];
    return v;
}

CavitationTable::CavitationTable(std::vector<double> phi, std::vector<double> cpmin)
    : phi_(std::move(phi)), cpmin_(std::move(cpmin)) {
    if (phi_.size() < 2 || phi_.size() != cpmin_.size())
        throw std::invalid_argument("CavitationTable: inconsistent table sizes");
    require_strictly_increasing(phi_, "CavitationTable");
    for (double v : cpmin_)
        if (v >= 0.0) throw std::invalid_argument("CavitationTable: C_p,min entries must be negative");
    cpmin_floor_ = *std::min_element(cpmin_.begin(), cpmin_.end());
}

double CavitationTable::cpmin(double phi_abs) const {
    return interp_clamped(phi_, cpmin_, std::abs(phi_abs), nullptr);
}

double flow_coefficient(double v_t, double omega_t, const TurbineSpec& spec) {
    if (omega_t <= 0) throw std::domain_error("flow_coefficient: omega_t must be positive");
    return v_t / (omega_t * spec.tip_radius);
}

double pressure_jump(double v_t, double omega_t, const TurbineSpec& spec,
                     const CharacteristicCurves& curves, bool* clamped) {
    const double phi = flow_coefficient(v_t, omega_t, spec);
    const double ca = curves.ca(std::abs(phi), clamped);
    const double wr = omega_t * spec.tip_radius;
    const double q = v_t * v_t + wr * wr;
    const double sign = (v_t > 0) - (v_t < 0);
    return sign * ca * spec.ka / spec.flow_area * q;
}

double torque(double v_t, double omega_t, const TurbineSpec& spec,
              const CharacteristicCurves& curves, bool* clamped) {
    const double phi = flow_coefficient(v_t, omega_t, spec);
    const double ct = curves.ct(std::abs(phi), clamped);
    const double wr = omega_t * spec.tip_radius;
    return ct * spec.ka * spec.tip_radius * (v_t * v_t + wr * wr);
}

double linear_damping_lambda(double omega_t, const TurbineSpec& spec,
                             const CharacteristicCurves& curves) {
    if (omega_t <= 0) throw std::domain_error("linear_damping_lambda: omega_t must be positive");
    return curves.ca_slope0() * spec.ka * omega_t * spec.tip_radius /
           (spec.flow_area * spec.flow_area);
}

double omega_t_for_lambda(double lambda, const TurbineSpec& spec,
                          const CharacteristicCurves& curves) {
    const double k = curves.ca_slope0() * spec.ka * spec.tip_radius /
                     (spec.flow_area * spec.flow_area);
    if (k <= 0) throw std::domain_error("omega_t_for_lambda: non-positive damping slope");
    return lambda / k;
}

double sine_power_average(int n) {
    if (n < 0) throw std::domain_error("sine_power_average: n must be non-negative");
    if (n % 2 == 1) return 0.0;
    double v = 1.0;
    for (int m = n; m >= 2; m -= 2) v *= (m - 1.0) / m;
    return v;
}

Vec mean_power_coefficients(const TurbineSpec& spec, const CharacteristicCurves& curves,
                            double omega_t, double s0) {
    if (omega_t <= 0) throw std::domain_error("mean_power_coefficients: omega_t must be positive");
    const auto& c = curves.poly_coefficients();
    const int d = static_cast<int>(c.size()) - 1;
    const double wr = omega_t * spec.tip_radius;
    const double ratio = s0 / spec.flow_area;
    auto c_at = [&](int k) { return (k >= 0 && k <= d) ? c[static_cast<std::size_t>(k)] : 0.0; };

    Vec p(d + 2);
    for (int n = 0; n <= d + 1; ++n)
        p(n) = sine_power_average(2 * n) * (c_at(n - 1) + c_at(n)) * spec.ka *
               std::pow(wr, 3 - 2 * n) * std::pow(ratio, 2 * n);
    return p;
}

double min_pressure_bound(double zeta_amp, double omega, double omega_t, double z_t,
                          const TurbineSpec& spec, const CavitationTable& cav,
                          const PhysicalConstants& pc, double s0) {
    if (z_t >= 0) throw std::domain_error("min_pressure_bound: turbine must sit below z = 0");
    const double a = std::abs(zeta_amp);
    const double ctil = cav.cpmin_floor();
    const double wr = omega_t * spec.tip_radius;
    const double pbar = pc.p_atm - pc.rho * pc.g * z_t + 0.5 * pc.rho * wr * wr * ctil;
    if (a == 0.0) return pbar;

    const double vamp = omega * a * s0 / spec.flow_area; // axial velocity amplitude
    double result = pbar - pc.rho * pc.g * a;             // ζ = -|ζ̂| endpoint
    if (ctil < 0.0 && vamp > 0.0) {
        const double cstar = pc.g * a / (vamp * vamp * ctil);
        if (cstar >= -1.0) {
            const double interior =
                pbar + 0.5 * pc.rho * (pc.g * pc.g * a * a / (vamp * vamp * ctil) +
                                       vamp * vamp * ctil);
            result = std::min(result, interior);
        }
    }
    return result;
}

} // namespace owc
