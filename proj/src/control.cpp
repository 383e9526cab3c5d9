#include "owcpark/control.hpp"

#include <algorithm>
#include <cmath>

namespace owc {

ScalarMinResult minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                                double xtol, int max_evals) {
    if (!(lo < hi)) throw std::invalid_argument("minimize_scalar: empty interval");
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    double a = lo, b = hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x);
    double fw = fx, fv = fx;
    int evals = 1;
    double d = 0.0, e = 0.0;

    while (evals < max_evals) {
        const double m = 0.5 * (a + b);
        const double tol1 = xtol * std::abs(x) + 1e-14;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

        bool parabolic = false;
        if (std::abs(e) > tol1) {
            // parabola through x, v, w
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0) ? tol1 : -tol1);
        const double fu = f(u);
        ++evals;
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx, evals};
}

double lambda_max_hydraulic(double omega, const HydroCoefficients& hydro,
                            const DuctGeometry& duct, const PhysicalConstants& pc) {
    const double s0 = duct.surface_section();
    const double mass = pc.rho * duct.column_inertia(0.0) * s0 + hydro.added_mass(omega);
    const double b = hydro.damping(omega);
    const double restoring = -omega * omega * mass + pc.rho * pc.g;
    return std::sqrt(b * b + restoring * restoring / (omega * omega)) / s0;
}

namespace {

struct LinearOperatingPoint {
    double lambda;
    double zeta_abs;
    double phi_hat;
    double power;
};

// Damping of maximum hydraulic power from precomputed restoring/damping scalars.
double lambda_seed(double restoring, double damping, double omega, double section) {
    return std::sqrt(damping * damping + restoring * restoring / (omega * omega)) / section;
}

LinearOperatingPoint linear_point(double omega_t, const Device& dev, double a_w, double b_w,
                                  Complex pe, double omega, const PhysicalConstants& pc) {
    const double s0 = dev.duct.surface_section();
    const double lam = linear_damping_lambda(omega_t, dev.turbine, dev.curves);
    const Complex zh = linear_frequency_solve(dev.duct, lam, a_w, b_w, pe, omega, pc);
    const Vec p = mean_power_coefficients(dev.turbine, dev.curves, omega_t, s0);
    LinearOperatingPoint pt;
    pt.lambda = lam;
    pt.zeta_abs = std::abs(zh);
    pt.phi_hat = flow_coefficient_amplitude(omega, pt.zeta_abs, s0, dev.turbine, omega_t);
    pt.power = mechanical_power(p, omega, pt.zeta_abs);
    return pt;
}

} // namespace

ControlResult optimize_rotation_speed(const SeaState& sea, const Device& dev,
                                      const HydroCoefficients& hydro, ModelKind model,
                                      const PhysicalConstants& pc) {
    const MonochromaticWave wave = equivalent_monochromatic(sea);
    const double omega = wave.omega();
    const double a_w = hydro.added_mass(omega);
    const double b_w = hydro.damping(omega);
    const Complex pe = hydro.excitation(omega, wave.amplitude());
    const auto& spec = dev.turbine;

    auto objective = [&](double omega_t) {
        if (model == ModelKind::linear)
            return -linear_point(omega_t, dev, a_w, b_w, pe, omega, pc).power;
        return -integrate_nonlinear(dev, hydro, wave, omega_t, 14, 128, pc).mean_power;
    };

    // Speeds below which the motion would exceed the torque-fit validity
    // bound |φ̂| ≤ φ_max are excluded from the search.
    const double s0 = dev.duct.surface_section();
    const double mass = pc.rho * dev.duct.column_inertia(0.0) * s0 + a_w;
    const double w_valid = speed_for_flow_amplitude(dev.curves.phi_max_model(), omega, mass,
                                                    b_w, s0, pe, spec, dev.curves, pc).omega_t;
    const double w_floor = std::min(std::max(spec.omega_min, w_valid), 0.999 * spec.omega_max);

    double w_seed = omega_t_for_lambda(lambda_max_hydraulic(omega, hydro, dev.duct, pc),
                                       spec, dev.curves);
    w_seed = std::clamp(w_seed, w_floor, spec.omega_max);
    double lo = std::max(w_floor, w_seed / 2.5);
    double hi = std::min(spec.omega_max, w_seed * 2.5);
    ScalarMinResult r = minimize_scalar(objective, lo, hi, 1e-3, 200);

    const double edge_tol = 2e-3 * std::max(1.0, std::abs(r.x));
    const bool at_lo = r.x - lo < edge_tol && lo > w_floor;
    const bool at_hi = hi - r.x < edge_tol && hi < spec.omega_max;
    if (at_lo || at_hi) {
        r = minimize_scalar(objective, w_floor, spec.omega_max, 1e-3, 200);
    }

    ControlResult res;
    res.omega_t = r.x;
    const double z_t = dev.duct.turbine_z();
    if (model == ModelKind::linear) {
        const auto pt = linear_point(r.x, dev, a_w, b_w, pe, omega, pc);
        res.power = pt.power;
        res.hydraulic_power = hydraulic_power(pt.zeta_abs, omega, pt.lambda, s0);
        res.zeta_max = pt.zeta_abs;
        res.zeta_min = -pt.zeta_abs;
        res.p_min = min_pressure_bound(pt.zeta_abs, omega, r.x, z_t, spec, dev.cavitation, pc, s0);
        if (pt.phi_hat > dev.curves.phi_max_model()) res.flags |= Flag::model_validity;
        if (pt.zeta_abs > std::abs(z_t)) res.flags |= Flag::turbine_uncovered;
        if (res.p_min < pc.p_v) res.flags |= Flag::cavitation;
    } else {
        const auto ts = integrate_nonlinear(dev, hydro, wave, r.x, 18, 256, pc);
        res.power = ts.mean_power;
        res.hydraulic_power = ts.mean_hydraulic_power;
        res.zeta_min = ts.zeta_min;
        res.zeta_max = ts.zeta_max;
        res.p_min = ts.pmin_min;
        res.flags = ts.flags;
    }
    const double j = seastate_flux(sea, pc);
    res.cwr = j > 0 ? res.power / (2.0 * dev.duct.max_radius() * j) : 0.0;
    return res;
}

PowerMatrix build_power_matrix(const std::vector<double>& hs_axis,
                               const std::vector<double>& te_axis, const Device& dev,
                               const HydroCoefficients& hydro, ModelKind model,
                               const PhysicalConstants& pc) {
    PowerMatrix pm;
    pm.hs = hs_axis;
    pm.te = te_axis;
    pm.cells.resize(hs_axis.size() * te_axis.size());
    pm.errors.resize(pm.cells.size());
    for (std::size_t i = 0; i < hs_axis.size(); ++i) {
        for (std::size_t j = 0; j < te_axis.size(); ++j) {
            const std::size_t idx = i * te_axis.size() + j;
            try {
                pm.cells[idx] =
                    optimize_rotation_speed(SeaState(hs_axis[i], te_axis[j]), dev, hydro, model, pc);
            } catch (const std::exception& e) {
                pm.cells[idx].flags |= Flag::solver_failure;
                pm.errors[idx] = e.what();
            }
        }
    }
    return pm;
}

double annual_power(const PowerMatrix& pm, const ScatterDiagram& scatter) {
    double total = 0.0;
    for (const auto& cell : scatter.cells()) {
        if (cell.occurrence == 0.0) continue;
        bool found = false;
        for (std::size_t i = 0; i < pm.hs.size() && !found; ++i) {
            if (std::abs(pm.hs[i] - cell.hs) > 1e-9) continue;
            for (std::size_t j = 0; j < pm.te.size() && !found; ++j) {
                if (std::abs(pm.te[j] - cell.te) > 1e-9) continue;
                total += pm.at(i, j).power * cell.occurrence;
                found = true;
            }
        }
        if (!found)
            throw std::invalid_argument("annual_power: scatter cell not present in the power matrix");
    }
    return total;
}

PointHydro small_body_hydro(double draft, const MonochromaticWave& wave,
                            const PhysicalConstants& pc) {
    const double k = wave.omega() * wave.omega() / pc.g;
    PointHydro h;
    h.excitation = Complex(pc.rho * pc.g * wave.amplitude() * std::exp(-k * draft), 0.0);
    return h;
}

StallSpeedResult speed_for_flow_amplitude(double phi_target, double omega, double mass,
                                          double damping_b, double section, Complex pe,
                                          const TurbineSpec& spec,
                                          const CharacteristicCurves& curves,
                                          const PhysicalConstants& pc) {
    const double e = std::norm(pe);
    if (e == 0.0) return {};
    const double restoring = -omega * omega * mass + pc.rho * pc.g;
    const double kappa = curves.ca_slope0() * spec.ka * spec.tip_radius /
                         (spec.flow_area * spec.flow_area); // Λ = κ ω_t
    const double a_slope = phi_target * spec.flow_area * spec.tip_radius /
                           (omega * section); // |ζ̂| = a_slope ω_t

    auto f_and_df = [&](double w_t, double& f, double& df) {
        const double cdamp = damping_b + section * kappa * w_t;
        const double d = restoring * restoring + omega * omega * cdamp * cdamp;
        const double a = a_slope * w_t;
        f = d * a * a - e;
        const double dd = 2.0 * omega * omega * cdamp * section * kappa;
        df = dd * a * a + 2.0 * d * a * a_slope;
    };

    // Bracket: f < 0 as ω_t → 0⁺, grows without bound with ω_t.
    double lo = 1e-9, hi = std::max(1.0, omega_t_for_lambda(
        lambda_seed(restoring, damping_b, omega, section), spec, curves));
    double f_hi, df_unused;
    f_and_df(hi, f_hi, df_unused);
    int guard = 0;
    while (f_hi < 0 && guard++ < 200) {
        hi *= 2.0;
        f_and_df(hi, f_hi, df_unused);
    }
    if (f_hi < 0)
        throw std::runtime_error("speed_for_flow_amplitude: failed to bracket the root");

    double w = 0.5 * (lo + hi);
    double f, df;
    for (int it = 0; it < 200; ++it) {
        f_and_df(w, f, df);
        if (std::abs(f) < 1e-12 * e) break;
        if (f > 0) hi = w; else lo = w;
        double w_next = (df != 0.0) ? w - f / df : 0.5 * (lo + hi);
        if (!(w_next > lo && w_next < hi)) w_next = 0.5 * (lo + hi);
        w = w_next;
    }
    f_and_df(w, f, df);
    StallSpeedResult res;
    res.omega_t = w;
    res.zeta_amp = a_slope * w;
    res.residual = std::abs(f) / e;
    return res;
}

StallSpeedResult stall_speed_newton(const MonochromaticWave& wave, double column_length,
                                    double section, const PointHydro& hydro,
                                    const TurbineSpec& spec, const CharacteristicCurves& curves,
                                    const PhysicalConstants& pc) {
    if (std::norm(hydro.excitation) == 0.0)
        throw std::invalid_argument("stall_speed_newton: zero excitation");
    return speed_for_flow_amplitude(curves.phi_opt(), wave.omega(),
                                    hydro.added_mass + pc.rho * column_length, hydro.damping,
                                    section, hydro.excitation, spec, curves, pc);
}

double PenaltyConstraints::max_scaled_violation() const {
    const double atm = 101325.0;
    return std::max({c1, c2 / atm, c3 / atm, c4, 0.0});
}

double penalized_dimension_objective(double omega_t, const DimensionPoint& dims,
                                     const MonochromaticWave& wave, const PointHydro& hydro,
                                     const TurbineSpec& spec, const CharacteristicCurves& curves,
                                     const CavitationTable& cav, double mu,
                                     const PhysicalConstants& pc, PenaltyConstraints* out) {
    if (mu <= 0) throw std::invalid_argument("penalized_dimension_objective: mu must be positive");
    const double omega = wave.omega();
    const double s = dims.section();
    const double lam = linear_damping_lambda(omega_t, spec, curves);
    const Complex z = linear_response(pc.rho * dims.draft + hydro.added_mass,
                                      lam * s + hydro.damping, pc.rho * pc.g, omega,
                                      hydro.excitation);
    const double zeta = std::abs(z);
    const double phi_hat = omega * zeta * s / (spec.flow_area * omega_t * spec.tip_radius);
    const Vec p = mean_power_coefficients(spec, curves, omega_t, s);
    const double power = mechanical_power(p, omega, zeta);

    const double z_t = dims.turbine_z();
    const double ctil = cav.cpmin_floor();
    const double wr = omega_t * spec.tip_radius;
    const double pbar = pc.p_atm - pc.rho * pc.g * z_t + 0.5 * pc.rho * wr * wr * ctil;
    const double st = spec.flow_area;

    PenaltyConstraints c;
    c.c1 = zeta - std::abs(z_t);
    c.c2 = -pbar + pc.rho * pc.g * zeta + pc.p_v;
    // interior stationary point exists iff C̃ ≤ -g S_t²/(S² ω² |ζ̂|)
    const bool interior = zeta > 0 && ctil <= -pc.g * st * st / (s * s * omega * omega * zeta);
    if (interior) {
        const double under = std::pow(omega * omega * zeta * s * s * ctil, 2) -
                             std::pow(pc.g * st * st, 2);
        c.c3 = -pbar - pc.rho * pc.g * pc.g * st * st / (omega * omega * s * s * ctil) -
               0.5 * pc.rho * zeta / (st * st) * std::sqrt(std::max(0.0, under)) + pc.p_v;
    }
    c.c4 = phi_hat - curves.phi_max_model();
    if (out) *out = c;

    const double atm = 101325.0;
    auto hinge = [](double v) { return v > 0 ? v * v : 0.0; };
    return -power + mu * (hinge(c.c1) + hinge(c.c2 / atm) + hinge(c.c3 / atm) + hinge(c.c4));
}

PenaltyOutcome penalty_continuation(const DimensionPoint& dims, const MonochromaticWave& wave,
                                    const PointHydro& hydro, const TurbineSpec& spec,
                                    const CharacteristicCurves& curves, const CavitationTable& cav,
                                    const PhysicalConstants& pc, double mu0,
                                    int max_continuations) {
    PenaltyOutcome out;
    double mu = mu0;
    for (int it = 0; it < max_continuations; ++it) {
        auto q = [&](double w_t) {
            return penalized_dimension_objective(w_t, dims, wave, hydro, spec, curves, cav, mu, pc);
        };
        const auto r = minimize_scalar(q, spec.omega_min, spec.omega_max, 1e-4, 400);
        PenaltyConstraints c;
        penalized_dimension_objective(r.x, dims, wave, hydro, spec, curves, cav, mu, pc, &c);
        out.omega_t = r.x;
        out.constraints = c;
        out.max_violation = c.max_scaled_violation();
        out.mu_final = mu;
        out.continuations = it + 1;
        // objective value without the penalty part
        const double s = dims.section();
        const Vec p = mean_power_coefficients(spec, curves, r.x, s);
        const double lam = linear_damping_lambda(r.x, spec, curves);
        const Complex z = linear_response(pc.rho * dims.draft + hydro.added_mass,
                                          lam * s + hydro.damping, pc.rho * pc.g, wave.omega(),
                                          hydro.excitation);
        out.power = mechanical_power(p, wave.omega(), std::abs(z));
        if (out.max_violation < penalty_tolerance) {
            out.converged = true;
            return out;
        }
        mu *= 2.0;
    }
    return out;
}

DimensionSweepResult dimension_sweep(const DimensionStudyConfig& cfg,
                                     const ScatterDiagram& scatter,
                                     const CharacteristicCurves& curves,
                                     const CavitationTable& cav, const PhysicalConstants& pc) {
    DimensionSweepResult res;
    res.radius = cfg.radius;
    res.draft = cfg.draft;
    const auto nr = static_cast<Eigen::Index>(cfg.radius.size());
    const auto nd = static_cast<Eigen::Index>(cfg.draft.size());
    res.annual = Mat::Zero(nr, nd);
    res.linear_density = Mat::Zero(nr, nd);
    res.surface_density = Mat::Zero(nr, nd);
    res.flags.assign(cfg.radius.size(), std::vector<Flag>(cfg.draft.size(), Flag::none));

    for (Eigen::Index i = 0; i < nr; ++i) {
        const double r = cfg.radius[static_cast<std::size_t>(i)];
        const TurbineSpec spec = cfg.base_turbine.scaled(r / cfg.base_radius, pc);
        for (Eigen::Index j = 0; j < nd; ++j) {
            const double d = cfg.draft[static_cast<std::size_t>(j)];
            const DimensionPoint dims{r, d};
            double total = 0.0;
            Flag flags = Flag::none;
            try {
                for (const auto& cell : scatter.cells()) {
                    const MonochromaticWave wave = equivalent_monochromatic(cell);
                    const PointHydro hydro = small_body_hydro(d, wave, pc);
                    double p_cell;
                    if (cfg.constrained) {
                        const auto pen = penalty_continuation(dims, wave, hydro, spec, curves,
                                                              cav, pc);
                        p_cell = pen.power;
                        if (!pen.converged) flags |= Flag::solver_failure;
                        if (pen.constraints.c1 > 0) flags |= Flag::turbine_uncovered;
                        if (pen.constraints.c2 > 0 || pen.constraints.c3 > 0)
                            flags |= Flag::cavitation;
                        if (pen.constraints.c4 > 0) flags |= Flag::model_validity;
                    } else {
                        const auto stall = stall_speed_newton(wave, d, dims.section(), hydro,
                                                              spec, curves, pc);
                        const Vec p = mean_power_coefficients(spec, curves, stall.omega_t,
                                                              dims.section());
                        p_cell = mechanical_power(p, wave.omega(), stall.zeta_amp);
                        if (stall.zeta_amp > std::abs(dims.turbine_z()))
                            flags |= Flag::turbine_uncovered;
                        const double pmin = min_pressure_bound(stall.zeta_amp, wave.omega(),
                                                               stall.omega_t, dims.turbine_z(),
                                                               spec, cav, pc, dims.section());
                        if (pmin < pc.p_v) flags |= Flag::cavitation;
                    }
                    total += p_cell * cell.occurrence;
                }
            } catch (const std::exception&) {
                flags |= Flag::solver_failure;
                total = std::numeric_limits<double>::quiet_NaN();
            }
            res.annual(i, j) = total;
            res.linear_density(i, j) = total / (2.0 * r);
            res.surface_density(i, j) = total / (M_PI * r * r);
            res.flags[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = flags;
        }
    }
    return res;
}

SmallBodyPower small_body_power(double radius, double draft, const MonochromaticWave& wave,
                                const PhysicalConstants& pc) {
    if (radius <= 0) throw std::invalid_argument("small_body_power: radius must be positive");
    const double omega = wave.omega();
    const double k = omega * omega / pc.g; // deep water
    const double kd = k * draft;
    const double area = M_PI * radius * radius;
    const double m = pc.rho * area * draft;
    const double stiff = pc.rho * pc.g * area;

    SmallBodyPower out;
    out.c_opt = std::abs(-omega * omega * m + stiff) / omega;
    const double base = pc.rho * pc.g * omega * wave.height * wave.height / 16.0 * area;
    out.exact = base * std::exp(-2.0 * kd) / std::abs(1.0 - kd);
    if (kd < 1.0) {
        out.approx = base * (1.0 - kd);
    } else {
        out.approx = std::numeric_limits<double>::quiet_NaN();
        out.expansion_valid = false;
    }
    return out;
}

} // namespace owc
