#include "owcpark/device.hpp"

#include <cmath>

namespace owc {

double nonlinear_acceleration(const DuctGeometry& duct, const TurbineSpec& spec,
                              const CharacteristicCurves& curves, double added_mass,
                              double damping, double pe_t, double omega_t, double zeta,
                              double zetadot, const PhysicalConstants& pc, bool* clamped) {
    const double s = duct.section(zeta);
    const double s1 = duct.inflow_section();
    const double c = duct.column_inertia(zeta);
    const double mass = pc.rho * c * s + added_mass;
    if (mass <= 0)
        throw std::runtime_error("nonlinear_acceleration: degenerate mass term");

    const double v_t = s * zetadot / spec.flow_area;
    const double dp = pressure_jump(v_t, omega_t, spec, curves, clamped);
    const double convective = pc.rho * c * duct.dsection_dz(zeta) * zetadot * zetadot;
    const double bernoulli = 0.5 * pc.rho * zetadot * zetadot * (1.0 - (s * s) / (s1 * s1));
    return (pe_t - convective - bernoulli - dp - damping * zetadot - pc.rho * pc.g * zeta) / mass;
}

TimeSeries integrate_nonlinear(const Device& dev, const HydroCoefficients& hydro,
                               const MonochromaticWave& wave, double omega_t, int n_periods,
                               int samples_per_period, const PhysicalConstants& pc,
                               const OdeOptions& opts) {
    if (n_periods < 2) throw std::invalid_argument("integrate_nonlinear: need at least 2 periods");
    const double omega = wave.omega();
    const double period = wave.period;
    const double a_w = hydro.added_mass(omega);
    const double b_w = hydro.damping(omega);
    const Complex pe_hat = hydro.excitation(omega, wave.amplitude());

    bool clamped = false;
    auto rhs = [&](double t, const Vec& y, Vec& dydt) {
        const double pe_t = std::real(pe_hat * std::exp(Complex(0.0, -omega * t)));
        dydt(0) = y(1);
        dydt(1) = nonlinear_acceleration(dev.duct, dev.turbine, dev.curves, a_w, b_w, pe_t,
                                         omega_t, y(0), y(1), pc, &clamped);
    };

    const int n_out = n_periods * samples_per_period + 1;
    std::vector<double> times(n_out);
    for (int i = 0; i < n_out; ++i) times[i] = period * n_periods * i / (n_out - 1);

    TimeSeries ts;
    ts.t.resize(n_out);
    ts.zeta.resize(n_out);
    ts.zetadot.resize(n_out);
    ts.flow.resize(n_out);
    ts.dp.resize(n_out);
    ts.torque.resize(n_out);
    ts.power.resize(n_out);
    ts.pmin.resize(n_out);

    const double c_zt = dev.duct.column_inertia(dev.duct.turbine_z());
    const double s_zt = dev.duct.section(dev.duct.turbine_z());
    const double z_t = dev.duct.turbine_z();
    const double wr = omega_t * dev.turbine.tip_radius;

    int idx = 0;
    auto record = [&](double t, const Vec& y) {
        const double zeta = y(0), zetadot = y(1);
        const double s = dev.duct.section(zeta);
        const double v_t = s * zetadot / dev.turbine.flow_area;
        const double pe_t = std::real(pe_hat * std::exp(Complex(0.0, -omega * t)));
        const double acc = nonlinear_acceleration(dev.duct, dev.turbine, dev.curves, a_w, b_w,
                                                  pe_t, omega_t, zeta, zetadot, pc, &clamped);
        const double dp = pressure_jump(v_t, omega_t, dev.turbine, dev.curves);
        const double tq = torque(v_t, omega_t, dev.turbine, dev.curves);
        const double q_dot = s * acc + dev.duct.dsection_dz(zeta) * zetadot * zetadot;
        const double phi = std::abs(v_t) / wr;
        const double pmin = pc.p_atm + pc.rho * pc.g * (zeta - z_t) +
                            0.5 * pc.rho * (v_t * v_t + wr * wr) * dev.cavitation.cpmin(phi) +
                            pc.rho * q_dot * (dev.duct.column_inertia(zeta) - c_zt) +
                            0.5 * pc.rho * zetadot * zetadot * (1.0 - (s * s) / (s_zt * s_zt)) +
                            (zetadot > 0 ? dp : 0.0);
        ts.t(idx) = t;
        ts.zeta(idx) = zeta;
        ts.zetadot(idx) = zetadot;
        ts.flow(idx) = s * zetadot;
        ts.dp(idx) = dp;
        ts.torque(idx) = tq;
        ts.power(idx) = tq * omega_t;
        ts.pmin(idx) = pmin;
        ++idx;
    };

    Vec y0 = Vec::Zero(2);
    integrate_dopri5(rhs, y0, 0.0, period * n_periods, opts, times, record);

    if (clamped) ts.flags |= Flag::curve_clamped;

    // Trailing-window statistics over the last ⌊n/2⌋ complete periods.
    const int n_tail = n_periods / 2;
    const int first = (n_periods - n_tail) * samples_per_period;
    const int count = n_out - first;
    double p_sum = 0.0, ph_sum = 0.0;
    ts.zeta_min = ts.zeta(first);
    ts.zeta_max = ts.zeta(first);
    ts.pmin_min = ts.pmin(first);
    for (int i = first; i < n_out; ++i) {
        const double w = (i == first || i == n_out - 1) ? 0.5 : 1.0;
        p_sum += w * ts.power(i);
        ph_sum += w * ts.flow(i) * ts.dp(i);
        ts.zeta_min = std::min(ts.zeta_min, ts.zeta(i));
        ts.zeta_max = std::max(ts.zeta_max, ts.zeta(i));
        ts.pmin_min = std::min(ts.pmin_min, ts.pmin(i));
    }
    ts.mean_power = p_sum / (count - 1);
    ts.mean_hydraulic_power = ph_sum / (count - 1);
    ts.amplitude = 0.5 * (ts.zeta_max - ts.zeta_min);

    if (ts.pmin_min < pc.p_v) ts.flags |= Flag::cavitation;
    if (ts.zeta_min < dev.duct.turbine_z()) ts.flags |= Flag::turbine_uncovered;
    if (ts.zeta_max > dev.duct.top_z()) ts.flags |= Flag::overflow;
    return ts;
}

Complex linear_response(double mass, double damping, double stiffness, double omega, Complex pe) {
    const Complex den(stiffness - omega * omega * mass, -omega * damping);
    if (std::abs(den) == 0.0)
        throw std::runtime_error("linear_response: resonance singularity (zero denominator)");
    return pe / den;
}

Complex linear_frequency_solve(const DuctGeometry& duct, double lambda, double added_mass,
                               double radiation_damping, Complex pe, double omega,
                               const PhysicalConstants& pc) {
    const double s0 = duct.surface_section();
    const double mass = pc.rho * duct.column_inertia(0.0) * s0 + added_mass;
    const double damping = lambda * s0 + radiation_damping;
    return linear_response(mass, damping, pc.rho * pc.g, omega, pe);
}

double hydraulic_power(double zeta_abs, double omega, double lambda, double s0) {
    if (lambda < 0) throw std::domain_error("hydraulic_power: lambda must be non-negative");
    return 0.5 * lambda * omega * omega * s0 * s0 * zeta_abs * zeta_abs;
}

double power_series(const Vec& p, double x) {
    const double x2 = x * x;
    double v = 0.0;
    for (Eigen::Index n = p.size(); n-- > 0;) v = v * x2 + p(n);
    return v;
}

double mechanical_power(const Vec& p, double omega, double zeta_abs) {
    return power_series(p, omega * std::abs(zeta_abs));
}

double flow_coefficient_amplitude(double omega, double zeta_abs, double s0,
                                  const TurbineSpec& spec, double omega_t) {
    return omega * std::abs(zeta_abs) * s0 /
           (spec.flow_area * omega_t * spec.tip_radius);
}

} // namespace owc
