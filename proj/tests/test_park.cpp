#include <doctest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "owcpark/control.hpp"
#include "owcpark/park.hpp"

using namespace owc;

namespace {

Complex ipow(int m) {
    return std::exp(Complex(0.0, m * M_PI / 2.0));
}

// direct evaluation of the plane wave at a field point
Complex plane_wave(const Vec2& p, double k, double theta, double amp) {
    return amp * std::exp(Complex(0.0, k * (p.x() * std::cos(theta) + p.y() * std::sin(theta))));
}

} // namespace

TEST_CASE("ambient incident coefficients") {
    const PhysicalConstants pc;
    const MonochromaticWave unit(2.0, 8.0); // amplitude 1
    const double k = dispersion_wavenumber(unit.omega(), unit.depth, pc);
    const int order = 8;

    SUBCASE("body at the origin, wave along +x") {
        const CVec a = ambient_incident_coefficients(Vec2(0, 0), unit, order, pc);
        for (int m = -order; m <= order; ++m)
            CHECK(std::abs(a(m + order) - ipow(m)) < 1e-13);
    }

    SUBCASE("translation multiplies every coefficient by the carrier phase") {
        const double dx = 7.3;
        const CVec a0 = ambient_incident_coefficients(Vec2(0, 0), unit, order, pc);
        const CVec a1 = ambient_incident_coefficients(Vec2(dx, 0), unit, order, pc);
        const Complex shift = std::exp(Complex(0.0, k * dx));
        for (int i = 0; i < a0.size(); ++i) CHECK(std::abs(a1(i) - shift * a0(i)) < 1e-12);
    }

    SUBCASE("partial-wave sum reproduces the plane wave near the body") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> ur(0.05, 2.0 / k), ua(0.0, 2.0 * M_PI);
        std::uniform_real_distribution<double> uth(0.0, 2.0 * M_PI);
        for (int trial = 0; trial < 5; ++trial) {
            const double theta = uth(rng);
            const MonochromaticWave w(2.0, 8.0, theta);
            const Vec2 center(3.0, -2.0);
            const CVec a = ambient_incident_coefficients(center, w, order, pc);
            for (int i = 0; i < 50; ++i) {
                const double r = ur(rng), ang = ua(rng);
                const Vec2 p = center + r * Vec2(std::cos(ang), std::sin(ang));
                Complex sum = 0.0;
                for (int m = -order; m <= order; ++m)
                    sum += a(m + order) * bessel_j(m, k * r) * std::exp(Complex(0.0, m * ang));
                const Complex exact = plane_wave(p, k, theta, 1.0);
                // Jacobi–Anger tail bound of the truncated expansion
                double tail = 0.0;
                for (int m = order + 1; m <= order + 24; ++m) tail += 2.0 * std::abs(bessel_j(m, k * r));
                CHECK(std::abs(sum - exact) < std::max(1e-6 * std::abs(exact), 1.1 * tail));
            }
        }
    }
}

TEST_CASE("Graf translation identity and derivatives") {
    const double k = 0.0629;
    const int order = 10;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ul(2.0, 80.0), ua(0.0, 2.0 * M_PI);
    // evaluation radii well inside the convergence disk: the slow side of the
    // series decays like (r_j/L)·|m-n|/|n|, so the envelope keeps a margin
    std::uniform_real_distribution<double> ur(0.02, 0.15);
    std::uniform_int_distribution<int> um(-3, 3);

    SUBCASE("outgoing field reproduced by the regular expansion") {
        for (int draw = 0; draw < 100; ++draw) {
            const Vec2 xi(ul(rng) * std::cos(ua(rng)), ul(rng) * std::sin(ua(rng)));
            const double l = ul(rng), bearing = ua(rng);
            const Vec2 xj = xi + l * Vec2(std::cos(bearing), std::sin(bearing));
            const auto t = basis_transformation(xi, xj, k, order);
            const int m = um(rng);
            for (int p = 0; p < 50; ++p) {
                const double rj = ur(rng) * l, ang = ua(rng);
                const Vec2 pt = xj + rj * Vec2(std::cos(ang), std::sin(ang));
                const Vec2 di = pt - xi;
                const Complex lhs = hankel1(m, k * di.norm()) *
                                    std::exp(Complex(0.0, m * std::atan2(di.y(), di.x())));
                Complex rhs = 0.0;
                for (int n = -order; n <= order; ++n)
                    rhs += t.value(m + order, n + order) * bessel_j(n, k * rj) *
                           std::exp(Complex(0.0, n * ang));
                CHECK(std::abs(lhs - rhs) < 1e-6 * std::abs(lhs));
            }
        }
    }

    SUBCASE("analytic position derivatives match finite differences") {
        for (int draw = 0; draw < 20; ++draw) {
            const Vec2 xi(ul(rng), ul(rng));
            const double l = ul(rng), bearing = ua(rng);
            const Vec2 xj = xi + l * Vec2(std::cos(bearing), std::sin(bearing));
            const auto t = basis_transformation(xi, xj, k, order, true);
            const double h = 1e-6 * l;
            auto check = [&](const CMat& analytic, const Vec2& dxi, const Vec2& dxj) {
                const CMat plus = basis_transformation(xi + h * dxi, xj + h * dxj, k, order).value;
                const CMat minus = basis_transformation(xi - h * dxi, xj - h * dxj, k, order).value;
                const CMat fd = (plus - minus) / (2.0 * h);
                const double scale = analytic.cwiseAbs().maxCoeff();
                CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-5 * scale);
            };
            check(t.d_xi, Vec2(1, 0), Vec2(0, 0));
            check(t.d_yi, Vec2(0, 1), Vec2(0, 0));
            check(t.d_xj, Vec2(0, 0), Vec2(1, 0));
            check(t.d_yj, Vec2(0, 0), Vec2(0, 1));
        }
    }

    SUBCASE("rotation covariance") {
        const Vec2 xi(4.0, 1.0), xj(21.0, -8.0);
        const double phi = 0.73;
        const Eigen::Rotation2D<double> rot(phi);
        const auto t = basis_transformation(xi, xj, k, order);
        const auto tr = basis_transformation(rot * xi, rot * xj, k, order);
        for (int m = -order; m <= order; ++m)
            for (int n = -order; n <= order; ++n) {
                const Complex expected = t.value(m + order, n + order) *
                                         std::exp(Complex(0.0, (m - n) * phi));
                CHECK(std::abs(tr.value(m + order, n + order) - expected) <
                      1e-12 * std::abs(expected) + 1e-12);
            }
    }

    CHECK_THROWS_AS(basis_transformation(Vec2(1, 1), Vec2(1, 1), k, 3), std::invalid_argument);
}

TEST_CASE("park assembly and solve") {
    const PhysicalConstants pc;
    const MonochromaticWave wave(3.0 / std::sqrt(2.0), 8.0);
    const double omega_t = 14.0;

    SUBCASE("single body embeds the isolated solution") {
        const auto problem = make_example_park({Vec2(0, 0)}, wave, omega_t);
        const auto state = solve_park(problem);
        const Complex iso = isolated_response(wave, omega_t);
        CHECK(std::abs(state.zeta(0) - iso) <= 1e-12 * std::abs(iso));
        CHECK(state.residual < 1e-10);
    }

    SUBCASE("no scattering and no radiation decouples every body") {
        auto problem = make_example_park({Vec2(0, 0), Vec2(30, 0), Vec2(0, 25)}, wave, omega_t);
        for (auto& b : problem.bodies) {
            b.dtm.setZero();
            b.radiated.setZero();
        }
        const auto sys = assemble_block_system(problem);
        CHECK((sys.m_gg - CMat::Identity(sys.m_gg.rows(), sys.m_gg.cols())).norm() == 0.0);
        const auto state = solve_park(problem, sys);
        CHECK(state.gamma.norm() < 1e-12);
        for (int l = 0; l < 3; ++l) {
            const CVec a = ambient_incident_coefficients(problem.positions[static_cast<std::size_t>(l)],
                                                         wave, problem.order(), pc);
            const Complex pe = problem.bodies[static_cast<std::size_t>(l)].excitation_row.transpose() * a;
            const Complex iso = isolated_response(wave, omega_t) * (pe / example_hydro().excitation(wave.omega(), wave.amplitude()));
            CHECK(std::abs(state.zeta(l) - iso) < 1e-10 * std::abs(iso));
        }
    }

    SUBCASE("permuting the body order permutes the solution") {
        const std::vector<Vec2> pos{Vec2(0, 0), Vec2(12, 3), Vec2(-4, 18)};
        const auto s1 = solve_park(make_example_park(pos, wave, omega_t));
        const std::vector<Vec2> shuffled{pos[2], pos[0], pos[1]};
        const auto s2 = solve_park(make_example_park(shuffled, wave, omega_t));
        CHECK(std::abs(s1.zeta(0) - s2.zeta(1)) < 1e-12);
        CHECK(std::abs(s1.zeta(1) - s2.zeta(2)) < 1e-12);
        CHECK(std::abs(s1.zeta(2) - s2.zeta(0)) < 1e-12);
    }

    SUBCASE("mirror-symmetric layout under an axis-aligned wave") {
        const auto state =
            solve_park(make_example_park({Vec2(5, 9), Vec2(5, -9), Vec2(14, 0)}, wave, omega_t));
        CHECK(std::abs(std::abs(state.zeta(0)) - std::abs(state.zeta(1))) <
              1e-12 * std::abs(state.zeta(0)));
    }

    SUBCASE("randomized admissible layouts always solve with finite responses") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> ux(0.0, 40.0), uy(-20.0, 20.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec2> pos;
            while (pos.size() < 10) {
                const Vec2 cand(ux(rng), uy(rng));
                bool ok = true;
                for (const auto& p : pos)
                    if ((p - cand).norm() < 1.6) ok = false;
                if (ok) pos.push_back(cand);
            }
            const auto state = solve_park(make_example_park(pos, wave, omega_t));
            CHECK(state.zeta.allFinite());
            CHECK(state.residual < 1e-10);
        }
    }

    SUBCASE("far-separated pair decouples") {
        const double k = dispersion_wavenumber(wave.omega(), wave.depth, pc);
        const double l = 200.0 / k;
        const auto state = solve_park(make_example_park({Vec2(0, 0), Vec2(l, 0)}, wave, omega_t));
        const Vec p = mean_power_coefficients(example_turbine(), example_curves(), omega_t,
                                              constant_duct().surface_section());
        const auto power = park_power(state, make_example_park({Vec2(0, 0), Vec2(l, 0)}, wave, omega_t),
                                      p, wave.omega());
        const double iso = mechanical_power(p, wave.omega(),
                                            std::abs(isolated_response(wave, omega_t)));
        CHECK(std::abs(power.total - 2.0 * iso) < 0.005 * 2.0 * iso);
    }
}

TEST_CASE("park power") {
    const MonochromaticWave wave(3.0 / std::sqrt(2.0), 8.0);
    const double omega_t = 14.0;
    const Vec p = mean_power_coefficients(example_turbine(), example_curves(), omega_t,
                                          constant_duct().surface_section());

    SUBCASE("all still devices produce the motoring loss") {
        auto problem = make_example_park({Vec2(0, 0), Vec2(20, 0)}, wave, omega_t);
        ParkState state;
        state.gamma = CVec::Zero(2 * problem.bodies[0].modes());
        state.zeta = CVec::Zero(2);
        const auto power = park_power(state, problem, p, wave.omega());
        CHECK(power.total == doctest::Approx(2.0 * p(0)).epsilon(1e-14));
    }

    SUBCASE("single body matches the isolated mechanical power") {
        const auto problem = make_example_park({Vec2(0, 0)}, wave, omega_t);
        const auto state = solve_park(problem);
        const auto power = park_power(state, problem, p, wave.omega());
        CHECK(power.total ==
              doctest::Approx(mechanical_power(p, wave.omega(), std::abs(state.zeta(0))))
                  .epsilon(1e-14));
    }

    SUBCASE("the upwave body gains from a downwave partner at favorable spacing") {
        const double iso = mechanical_power(p, wave.omega(),
                                            std::abs(isolated_response(wave, omega_t)));
        double best_gain = -1.0;
        for (double l = 3.0; l <= 40.0; l += 1.0) {
            const auto problem = make_example_park({Vec2(0, 0), Vec2(l, 0)}, wave, omega_t);
            const auto state = solve_park(problem);
            const auto power = park_power(state, problem, p, wave.omega());
            best_gain = std::max(best_gain, power.per_device(0) - iso);
        }
        CHECK(best_gain > 0.0);
    }
}

TEST_CASE("piles") {
    const PhysicalConstants pc;
    const MonochromaticWave wave(3.0 / std::sqrt(2.0), 8.0);
    const double omega_t = 14.0;
    const std::vector<Vec2> piles{Vec2(0, 0), Vec2(43.3, 25.0), Vec2(43.3, -25.0)};

    SUBCASE("pile response is negligible under stiffness forcing") {
        const auto problem = make_example_park({Vec2(20, 0)}, wave, omega_t, 6, piles);
        const auto state = solve_park(problem);
        for (int l = 1; l < 4; ++l) CHECK(std::abs(state.zeta(l)) < 1e-6);
    }

    SUBCASE("pile reflections change the device power") {
        const Vec p = mean_power_coefficients(example_turbine(), example_curves(), omega_t,
                                              constant_duct().surface_section());
        const auto with = solve_park(make_example_park({Vec2(20, 0)}, wave, omega_t, 6, piles));
        const auto problem = make_example_park({Vec2(20, 0)}, wave, omega_t, 6, piles);
        const auto without = solve_park(make_example_park({Vec2(20, 0)}, wave, omega_t));
        const double p_with = power_series(p, wave.omega() * std::abs(with.zeta(0)));
        const double p_without = power_series(p, wave.omega() * std::abs(without.zeta(0)));
        CHECK(std::abs(p_with - p_without) > 1e-6 * std::abs(p_without));
    }

    SUBCASE("an empty pile list reproduces the bare park bitwise") {
        const auto a = solve_park(make_example_park({Vec2(3, 4), Vec2(9, -2)}, wave, omega_t));
        const auto b =
            solve_park(make_example_park({Vec2(3, 4), Vec2(9, -2)}, wave, omega_t, 6, {}));
        CHECK(a.zeta == b.zeta);
        CHECK(a.gamma == b.gamma);
    }
}

TEST_CASE("interaction extraction and time-domain verification") {
    const PhysicalConstants pc;
    const auto dev = example_device();

    SUBCASE("single body at tiny amplitude matches the frequency-domain power") {
        const MonochromaticWave wave(1e-3, 8.0);
        const double omega_t = 14.0;
        const auto problem = make_example_park({Vec2(0, 0)}, wave, omega_t);
        const auto im = extract_interaction(problem);
        CHECK(im.added_mass(0, 0) ==
              doctest::Approx(example_hydro().added_mass(wave.omega())).epsilon(1e-9));
        CHECK(im.damping(0, 0) ==
              doctest::Approx(example_hydro().damping(wave.omega())).epsilon(1e-9));

        const auto tv = timedomain_verify(im, dev, wave, omega_t, 16);
        const Vec p = mean_power_coefficients(dev.turbine, dev.curves, omega_t,
                                              dev.duct.surface_section());
        const double freq_power =
            mechanical_power(p, wave.omega(), std::abs(isolated_response(wave, omega_t)));
        CHECK(std::abs(tv.total - freq_power) < 1e-3 * std::abs(freq_power));
    }

    SUBCASE("diagonal interaction matrices decouple into single-device runs") {
        const MonochromaticWave wave(3.0 / std::sqrt(2.0), 8.0);
        const double omega_t = 14.0;
        const double omega = wave.omega();
        InteractionMatrices im;
        im.added_mass = Mat::Zero(2, 2);
        im.damping = Mat::Zero(2, 2);
        im.excitation = CVec(2);
        const auto& hydro = example_hydro();
        for (int l = 0; l < 2; ++l) {
            im.added_mass(l, l) = hydro.added_mass(omega);
            im.damping(l, l) = hydro.damping(omega);
            im.excitation(l) = hydro.excitation(omega, wave.amplitude());
        }
        im.device_index = {0, 1};
        const auto tv = timedomain_verify(im, dev, wave, omega_t, 16);
        const auto ts = integrate_nonlinear(dev, hydro, wave, omega_t, 16, 256, pc);
        CHECK(tv.per_device_power(0) == doctest::Approx(ts.mean_power).epsilon(1e-6));
        CHECK(tv.per_device_power(1) == doctest::Approx(ts.mean_power).epsilon(1e-6));
    }

    SUBCASE("linear and nonlinear park powers agree within 20% at desk scale") {
        const MonochromaticWave wave(3.0 / std::sqrt(2.0), 8.0);
        const SeaState sea(3.0, 8.0);
        const auto ctrl = optimize_rotation_speed(sea, dev, example_hydro(), ModelKind::linear, pc);
        const std::vector<Vec2> pos{Vec2(0, 0), Vec2(8, 3), Vec2(16, -4), Vec2(22, 6), Vec2(30, 0)};
        const auto problem = make_example_park(pos, wave, ctrl.omega_t);
        const auto state = solve_park(problem);
        const Vec p = mean_power_coefficients(dev.turbine, dev.curves, ctrl.omega_t,
                                              dev.duct.surface_section());
        const auto lin = park_power(state, problem, p, wave.omega());
        const auto im = extract_interaction(problem);
        const auto tv = timedomain_verify(im, dev, wave, ctrl.omega_t);
        const double ratio = tv.total / lin.total;
        CHECK(ratio > 0.8);
        CHECK(ratio < 1.2);
    }
}
