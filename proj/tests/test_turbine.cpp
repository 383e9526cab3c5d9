#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "owcpark/turbine.hpp"

using namespace owc;

namespace {

// Constant-coefficient curve tables for arithmetic checks.
CharacteristicCurves flat_curves(double ca, double ct) {
    return CharacteristicCurves({0.0, 0.2, 0.4}, {ca, ca, ca}, {ct, ct, ct});
}

// (1/2π) ∫ f over one period, trapezoid on a uniform grid: spectrally exact
// for trigonometric polynomials of degree below n.
template <class F>
double period_average(F&& f, int n = 4096) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += f(2.0 * M_PI * i / n);
    return sum / n;
}

} // namespace

TEST_CASE("turbine spec derived quantities") {
    const auto s = example_turbine();
    CHECK(s.flow_area == doctest::Approx(M_PI * (0.25 - 0.16 * 0.16)).epsilon(1e-15));
    CHECK(s.ka == doctest::Approx(1025.0 * 0.12 * 0.32 * 7 / 2.0).epsilon(1e-15));
    CHECK(s.solidity == doctest::Approx(0.12 * 0.32 * 7 / s.flow_area).epsilon(1e-15));
    CHECK_THROWS_AS(TurbineSpec::make(0.1, 0.2, 0.1, 5, 0.3, 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(TurbineSpec::make(0.4, 0.2, 0.1, 5, 0.1, 1, 10), std::invalid_argument);

    const auto t = s.scaled(2.0);
    CHECK(t.flow_area == doctest::Approx(4.0 * s.flow_area).epsilon(1e-15));
    CHECK(t.ka == doctest::Approx(4.0 * s.ka).epsilon(1e-15));
    CHECK(t.solidity == doctest::Approx(s.solidity).epsilon(1e-14));
}

TEST_CASE("flow coefficient") {
    const auto s = TurbineSpec::make(0.25, 0.05, 0.25, 4, 0.3, 1.0, 100.0);
    CHECK(flow_coefficient(0.0, 8.0, s) == 0.0);
    CHECK(flow_coefficient(2.0, 8.0, s) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(flow_coefficient(-1.3, 8.0, s) == doctest::Approx(-flow_coefficient(1.3, 8.0, s)));
    CHECK_THROWS_AS(flow_coefficient(1.0, 0.0, s), std::domain_error);
}

TEST_CASE("pressure jump arithmetic") {
    // K_a = 100 kg/m, S_t = 0.5 m², ω_t r_t = 8 m/s, C_a ≡ 0.5
    const PhysicalConstants fresh{1000.0, 9.81, 101325.0, 2340.0, 1e-6};
    const double r2 = std::sqrt(0.5 / M_PI + 0.3 * 0.3);
    const auto s = TurbineSpec::make(0.8, 0.3, 0.1, 4, r2, 1.0, 100.0, fresh);
    CHECK(s.ka == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(s.flow_area == doctest::Approx(0.5).epsilon(1e-15));
    const auto curves = flat_curves(0.5, 0.1);
    const double dp = pressure_jump(2.0, 10.0, s, curves);
    CHECK(dp == doctest::Approx(6800.0).epsilon(1e-12));
    CHECK(pressure_jump(-2.0, 10.0, s, curves) == doctest::Approx(-6800.0).epsilon(1e-12));

    const auto zero_ca = CharacteristicCurves({0.0, 0.2, 0.4}, {0.0, 0.6, 1.2}, {0.0, 0.1, 0.1});
    CHECK(pressure_jump(0.0, 10.0, s, zero_ca) == 0.0);
}

TEST_CASE("torque arithmetic and symmetry") {
    const PhysicalConstants fresh{1000.0, 9.81, 101325.0, 2340.0, 1e-6};
    const auto s = TurbineSpec::make(0.25, 0.05, 0.25, 4, 0.41, 1.0, 100.0, fresh);
    CHECK(s.ka == doctest::Approx(100.0).epsilon(1e-15));
    const auto curves = flat_curves(0.5, 0.1);
    // v_t² + ω_t²r_t² = 4 + 64 = 68
    CHECK(torque(2.0, 32.0, s, curves) == doctest::Approx(170.0).epsilon(1e-12));
    CHECK(torque(-2.0, 32.0, s, curves) == doctest::Approx(torque(2.0, 32.0, s, curves)));

    const auto& ex = example_curves();
    CHECK(ex.poly_coefficients()[0] < 0.0);
    CHECK(torque(0.0, 32.0, example_turbine(), ex) < 0.0); // zero-incidence drag
}

TEST_CASE("linear damping lambda") {
    const PhysicalConstants fresh{1000.0, 9.81, 101325.0, 2340.0, 1e-6};
    // K_a = 100, r_t = 0.25, S_t = 0.5 → Λ = 3·100·32·0.25/0.25 = 9600
    const double r2 = std::sqrt(0.5 / M_PI + 0.05 * 0.05);
    const auto s = TurbineSpec::make(0.25, 0.05, 0.25, 4, r2, 1.0, 100.0, fresh);
    const CharacteristicCurves lin({0.0, 0.2, 0.4}, {0.0, 0.6, 1.2}, {0.01, 0.01, 0.01});
    CHECK(lin.ca_slope0() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(linear_damping_lambda(32.0, s, lin) == doctest::Approx(9600.0).epsilon(1e-12));

    CHECK(omega_t_for_lambda(9600.0, s, lin) == doctest::Approx(32.0).epsilon(1e-12));
}

TEST_CASE("reference-device lambda magnitude") {
    // Typical Λ of the shipped converter: order 6·10³ Pa·s/m³ at mid speeds.
    const auto s = example_turbine();
    const auto& c = example_curves();
    const double lam = linear_damping_lambda(15.0, s, c);
    CHECK(lam > 1e3);
    CHECK(lam < 4e4);
    CHECK(linear_damping_lambda(30.0, s, c) == doctest::Approx(2.0 * lam).epsilon(1e-12));
}

TEST_CASE("lambda equals finite difference of the pressure jump at Q = 0") {
    const auto s = example_turbine();
    const auto& c = example_curves();
    for (double omega_t : {5.0, 15.0, 40.0, 78.0}) {
        const double lam = linear_damping_lambda(omega_t, s, c);
        const double v_eps = 1e-6 * omega_t * s.tip_radius;
        const double dp_p = pressure_jump(v_eps, omega_t, s, c);
        const double dp_m = pressure_jump(-v_eps, omega_t, s, c);
        const double lam_fd = (dp_p - dp_m) / (2.0 * v_eps * s.flow_area);
        CHECK(std::abs(lam_fd - lam) / lam < 1e-6);
    }
}

TEST_CASE("sine power averages match quadrature") {
    for (int n = 0; n <= 10; ++n) {
        const double oracle = period_average([&](double x) { return std::pow(std::sin(x), n); });
        CHECK(std::abs(sine_power_average(n) - oracle) < 1e-12);
    }
    CHECK(sine_power_average(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sine_power_average(4) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(sine_power_average(3) == 0.0);
    CHECK_THROWS_AS(sine_power_average(-2), std::domain_error);
}

TEST_CASE("mean power coefficient p0 arithmetic") {
    const PhysicalConstants fresh{1000.0, 9.81, 101325.0, 2340.0, 1e-6};
    const auto s = TurbineSpec::make(0.25, 0.05, 0.25, 4, 0.41, 1.0, 100.0, fresh);
    const auto curves = flat_curves(0.5, -0.01);
    const Vec p = mean_power_coefficients(s, curves, 32.0, 1.0);
    CHECK(p(0) == doctest::Approx(-512.0).epsilon(1e-12));
    // constant C_t: all higher even coefficients vanish except the v² carry-over
    CHECK(power_series(p, 0.0) == doctest::Approx(-512.0).epsilon(1e-12));
}

TEST_CASE("mean power series equals one-period torque quadrature") {
    const auto spec = example_turbine();
    const auto& curves = example_curves();
    const double s0 = M_PI * 0.75 * 0.75;
    const double omega = 2.0 * M_PI / 8.0;
    for (double omega_t : {8.0, 14.0, 22.0}) {
        const Vec p = mean_power_coefficients(spec, curves, omega_t, s0);
        const double phi_cap = curves.phi_max_model();
        const double zeta_cap = phi_cap * spec.flow_area * omega_t * spec.tip_radius / (omega * s0);
        for (double f : {0.05, 0.3, 0.7, 1.0}) {
            const double zeta_amp = f * zeta_cap;
            const double v_amp = omega * zeta_amp * s0 / spec.flow_area;
            const double wr = omega_t * spec.tip_radius;
            const double oracle = period_average([&](double x) {
                const double v = -v_amp * std::sin(x);
                const double phi = v / wr;
                return curves.ct_poly(phi) * spec.ka * spec.tip_radius * (v * v + wr * wr) * omega_t;
            });
            const double series = mechanical_power(p, omega, zeta_amp);
            CHECK(std::abs(series - oracle) <= 1e-8 * std::abs(oracle));
        }
    }
}

TEST_CASE("torque fit quality and optimum flow coefficient") {
    const auto& c = example_curves();
    CHECK(c.fit_residual() < 1e-3);
    CHECK(c.poly_coefficients()[0] == doctest::Approx(c.ct_table()[0]).epsilon(1e-14)); // pinned
    CHECK(c.poly_coefficients()[0] < 0.0);
    CHECK(c.phi_opt() > 0.15);
    CHECK(c.phi_opt() < 0.35);
    CHECK(c.phi_max_model() == doctest::Approx(0.40).epsilon(1e-12));
    // φ_opt maximizes the fitted torque over the table range
    const double at_opt = c.ct_poly(c.phi_opt());
    for (double phi = 0.0; phi <= c.phi_max_model(); phi += 0.001)
        CHECK(c.ct_poly(phi) <= at_opt + 1e-12);
}

TEST_CASE("curve table validation and clamping") {
    CHECK_THROWS_AS(CharacteristicCurves({0.0, 0.2, 0.1}, {0, 1, 2}, {0, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CharacteristicCurves({0.1, 0.2, 0.3}, {0, 1, 2}, {0, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CharacteristicCurves({0.0, 0.2, 0.3}, {-0.1, 1, 2}, {0, 0, 0}),
                    std::invalid_argument);

    bool clamped = false;
    const auto& c = example_curves();
    c.ca(0.2, &clamped);
    CHECK_FALSE(clamped);
    c.ca(0.5, &clamped);
    CHECK(clamped);

    CHECK_THROWS_AS(CavitationTable({0.0, 0.1}, {-0.5, 0.1}), std::invalid_argument);
    const auto& cav = example_cavitation();
    CHECK(cav.cpmin_floor() < -0.6);
    CHECK(cav.cpmin_floor() <= cav.cpmin(0.0));
}

TEST_CASE("cavitation bound: analytic cycle minimum") {
    const PhysicalConstants pc;
    const auto spec = example_turbine();
    const auto& cav = example_cavitation();
    const double s0 = M_PI * 0.75 * 0.75;
    const double z_t = -3.39;

    SUBCASE("no motion leaves the constant part") {
        const double expected = pc.p_atm - pc.rho * pc.g * z_t +
                                0.5 * pc.rho * std::pow(14.0 * spec.tip_radius, 2) * cav.cpmin_floor();
        CHECK(min_pressure_bound(0.0, 0.785, 14.0, z_t, spec, cav, pc, s0) ==
              doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("vanishing suction leaves the hydrostatic endpoint") {
        const CavitationTable tiny({0.0, 0.4}, {-1e-12, -1e-12});
        const double a = 0.5, omega = 0.785, omega_t = 14.0;
        const double pbar = pc.p_atm - pc.rho * pc.g * z_t +
                            0.5 * pc.rho * std::pow(omega_t * spec.tip_radius, 2) * (-1e-12);
        CHECK(min_pressure_bound(a, omega, omega_t, z_t, spec, tiny, pc, s0) ==
              doctest::Approx(pbar - pc.rho * pc.g * a).epsilon(1e-12));
    }

    SUBCASE("dense phase sampling agrees to 1e-9 and never undercuts") {
        for (double a : {0.1, 0.5, 1.2, 2.5}) {
            for (double omega_t : {6.0, 14.0, 30.0}) {
                const double omega = 2.0 * M_PI / 8.0;
                const double analytic =
                    min_pressure_bound(a, omega, omega_t, z_t, spec, cav, pc, s0);
                const double wr = omega_t * spec.tip_radius;
                const double vamp = omega * a * s0 / spec.flow_area;
                auto bound = [&](double x) {
                    const double v = -vamp * std::sin(x);
                    return pc.p_atm + pc.rho * pc.g * (a * std::cos(x) - z_t) +
                           0.5 * pc.rho * (v * v + wr * wr) * cav.cpmin_floor();
                };
                const int n = 100000;
                double sampled = std::numeric_limits<double>::infinity();
                int best = 0;
                for (int i = 0; i < n; ++i) {
                    const double p = bound(2.0 * M_PI * i / n);
                    if (p < sampled) { sampled = p; best = i; }
                }
                // parabolic sharpening of the sampled minimum (still sampling-only)
                const double h = 2.0 * M_PI / n;
                const double pm = bound(2.0 * M_PI * best / n - h);
                const double pp = bound(2.0 * M_PI * best / n + h);
                const double denom = pm - 2.0 * sampled + pp;
                double refined = sampled;
                if (denom > 0) refined = sampled - (pp - pm) * (pp - pm) / (8.0 * denom);
                CHECK(std::abs(analytic - refined) <= 1e-9 * std::abs(refined));
                CHECK(analytic <= sampled + 1e-12 * std::abs(sampled));
            }
        }
    }

    CHECK_THROWS_AS(min_pressure_bound(0.5, 0.785, 14.0, +1.0, spec, cav, pc, s0),
                    std::domain_error);
}
