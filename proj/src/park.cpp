#include "owcpark/park.hpp"

#include <cmath>

namespace owc {

namespace {

Complex unit_imag_power(int m) {
    switch (((m % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

} // namespace

// The assembled blocks mix meter-scale scattering rows with pascal-scale
// dynamics rows, and transfer-matrix entries span many orders of magnitude at
// close spacing. A power-of-two row/column equilibration keeps the LU
// backward error at the level of the physically meaningful products.
CVec equilibrated_solve(const CMat& m, const CVec& b, double& residual, double& rcond) {
    const Eigen::Index n = m.rows();
    Vec row_scale(n), col_scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mx = m.row(i).cwiseAbs().maxCoeff();
        row_scale(i) = mx > 0 ? std::exp2(-std::round(std::log2(mx))) : 1.0;
    }
    CMat scaled = row_scale.asDiagonal() * m;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double mx = scaled.col(j).cwiseAbs().maxCoeff();
        col_scale(j) = mx > 0 ? std::exp2(-std::round(std::log2(mx))) : 1.0;
    }
    scaled = scaled * col_scale.asDiagonal();

    Eigen::PartialPivLU<CMat> lu(scaled);
    rcond = lu.rcond();
    const CVec y = lu.solve(row_scale.asDiagonal() * b);
    const CVec x = col_scale.asDiagonal() * y;
    const double b_norm = b.norm();
    residual = b_norm > 0 ? (m * x - b).norm() / b_norm : 0.0;
    return x;
}

BodyHydro BodyHydro::synthetic_device(int order, double radius, double k, double s0,
                                      double column_inertia0, double lambda, double omega,
                                      double a_self, double b_self, Complex pe_unit,
                                      const PhysicalConstants& pc) {
    if (order < 0 || radius <= 0 || k <= 0)
        throw std::invalid_argument("synthetic_device: bad order, radius or wavenumber");
    BodyHydro b;
    b.order = order;
    b.radius = radius;
    const int n = b.modes();
    b.dtm = CMat::Zero(n, n);
    for (int m = -order; m <= order; ++m)
        b.dtm(m + order, m + order) =
            -bessel_j_derivative(m, k * radius) / hankel1_derivative(m, k * radius);

    // monopole radiated wave; |r₀|² from the radiated-power balance
    // (ρg²ω/k)|r₀ ζ̂|² = ½ S(0) B ω² |ζ̂|²
    b.radiated = CVec::Zero(n);
    const double r0 = std::sqrt(s0 * b_self * omega * k / (2.0 * pc.rho * pc.g * pc.g));
    b.radiated(order) = Complex(0.0, 1.0) * r0;

    b.excitation_row = CVec::Zero(n);
    b.excitation_row(order) = pe_unit;

    b.self_added_mass = a_self;
    b.self_damping = b_self;
    b.mass = pc.rho * column_inertia0 * s0;
    b.damping = lambda * s0;
    b.stiffness = pc.rho * pc.g;
    return b;
}

BodyHydro make_pile(int order, double radius, double k, const PhysicalConstants& pc) {
    if (radius <= 0) throw std::invalid_argument("make_pile: radius must be positive");
    BodyHydro b;
    b.order = order;
    b.radius = radius;
    const int n = b.modes();
    b.dtm = CMat::Zero(n, n);
    for (int m = -order; m <= order; ++m)
        b.dtm(m + order, m + order) =
            -bessel_j_derivative(m, k * radius) / hankel1_derivative(m, k * radius);
    b.radiated = CVec::Zero(n);
    b.excitation_row = CVec::Zero(n);
    b.excitation_row(order) = pc.rho * pc.g;
    b.mass = pc.rho;
    b.damping = 0.0;
    b.stiffness = 1e9 * pc.rho * pc.g;
    b.is_pile = true;
    return b;
}

void ParkProblem::validate() const {
    if (positions.size() != bodies.size())
        throw std::invalid_argument("ParkProblem: positions/bodies size mismatch");
    if (bodies.empty()) throw std::invalid_argument("ParkProblem: no bodies");
    for (const auto& b : bodies) {
        if (b.order != bodies.front().order)
            throw std::invalid_argument("ParkProblem: inconsistent truncation orders");
        if (b.stiffness <= 0) throw std::invalid_argument("ParkProblem: non-positive stiffness");
    }
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if ((positions[i] - positions[j]).norm() <= 0)
                throw std::invalid_argument("ParkProblem: coincident body centers");
}

CVec ambient_incident_coefficients(const Vec2& position, const MonochromaticWave& wave,
                                   int order, const PhysicalConstants& pc) {
    const double k = dispersion_wavenumber(wave.omega(), wave.depth, pc);
    const double theta = wave.direction;
    const Complex phase =
        std::exp(Complex(0.0, k * (position.x() * std::cos(theta) +
                                   position.y() * std::sin(theta))));
    CVec a(2 * order + 1);
    for (int m = -order; m <= order; ++m)
        a(m + order) = wave.amplitude() * phase * unit_imag_power(m) *
                       std::exp(Complex(0.0, -m * theta));
    return a;
}

TransferMatrix basis_transformation(const Vec2& from, const Vec2& to, double k, int order,
                                    bool with_derivatives) {
    const Vec2 d = to - from;
    const double dist = d.norm();
    if (dist <= 0) throw std::invalid_argument("basis_transformation: coincident centers");
    const double alpha = std::atan2(d.y(), d.x());
    const int n_modes = 2 * order + 1;

    // one radial sweep: H_ν(kL) for ν = 0 … 2M+1, reflected to negative orders
    const int top = 2 * order + 1;
    std::vector<Complex> h_pos(static_cast<std::size_t>(top) + 1);
    for (int nu = 0; nu <= top; ++nu) h_pos[static_cast<std::size_t>(nu)] = hankel1(nu, k * dist);
    auto h_at = [&](int nu) {
        const Complex v = h_pos[static_cast<std::size_t>(std::abs(nu))];
        return (nu < 0 && (nu & 1)) ? -v : v;
    };
    std::vector<Complex> phase(static_cast<std::size_t>(2 * top) + 1);
    for (int nu = -top; nu <= top; ++nu)
        phase[static_cast<std::size_t>(nu + top)] = std::exp(Complex(0.0, nu * alpha));

    TransferMatrix t;
    t.value.resize(n_modes, n_modes);
    if (with_derivatives) {
        t.d_xi.resize(n_modes, n_modes);
        t.d_yi.resize(n_modes, n_modes);
        t.d_xj.resize(n_modes, n_modes);
        t.d_yj.resize(n_modes, n_modes);
    }

    const double ca = std::cos(alpha), sa = std::sin(alpha);
    for (int m = -order; m <= order; ++m) {
        for (int n = -order; n <= order; ++n) {
            const int nu = m - n;
            const Complex ang = phase[static_cast<std::size_t>(nu + top)];
            const Complex h = h_at(nu);
            t.value(m + order, n + order) = h * ang;
            if (!with_derivatives) continue;
            const Complex dT_dL = 0.5 * k * (h_at(nu - 1) - h_at(nu + 1)) * ang;
            const Complex dT_da = Complex(0.0, nu) * h * ang;
            // ∂L/∂x_i = -cosα, ∂α/∂x_i = sinα/L; opposite signs at j
            t.d_xi(m + order, n + order) = -ca * dT_dL + sa / dist * dT_da;
            t.d_yi(m + order, n + order) = -sa * dT_dL - ca / dist * dT_da;
            t.d_xj(m + order, n + order) = ca * dT_dL - sa / dist * dT_da;
            t.d_yj(m + order, n + order) = sa * dT_dL + ca / dist * dT_da;
        }
    }
    return t;
}

CMat ParkSystem::assembled() const {
    const Eigen::Index g = m_gg.rows(), z = m_zz.rows();
    CMat full(g + z, g + z);
    full.topLeftCorner(g, g) = m_gg;
    full.topRightCorner(g, z) = m_gz;
    full.bottomLeftCorner(z, g) = m_zg;
    full.bottomRightCorner(z, z) = m_zz;
    return full;
}

CVec ParkSystem::rhs() const {
    CVec r(h1.size() + h2.size());
    r << h1, h2;
    return r;
}

ParkSystem assemble_block_system(const ParkProblem& problem) {
    problem.validate();
    const int n_b = static_cast<int>(problem.size());
    const int order = problem.order();
    const int nm = 2 * order + 1;
    const Eigen::Index g = static_cast<Eigen::Index>(n_b) * nm;
    const double omega = problem.wave.omega();
    const double k = problem.wavenumber();

    ParkSystem sys;
    sys.m_gg = CMat::Identity(g, g);
    sys.m_gz = CMat::Zero(g, n_b);
    sys.m_zg = CMat::Zero(n_b, g);
    sys.m_zz = CMat::Zero(n_b, n_b);
    sys.h1 = CVec::Zero(g);
    sys.h2 = CVec::Zero(n_b);

    sys.gamma_norm.resize(g);
    for (int j = 0; j < n_b; ++j) {
        const double a = problem.bodies[static_cast<std::size_t>(j)].radius;
        if (a <= 0) throw std::invalid_argument("assemble_block_system: body radius not set");
        for (int m = -order; m <= order; ++m)
            sys.gamma_norm(j * nm + m + order) = std::abs(hankel1(m, k * a));
    }

    for (int j = 0; j < n_b; ++j) {
        const auto& body = problem.bodies[static_cast<std::size_t>(j)];
        const auto nj = sys.gamma_norm.segment(j * nm, nm);
        const CVec a_j = ambient_incident_coefficients(problem.positions[static_cast<std::size_t>(j)],
                                                       problem.wave, order, problem.constants);
        sys.h1.segment(j * nm, nm) = nj.asDiagonal() * (body.dtm * a_j);
        sys.h2(j) = body.excitation_row.transpose() * a_j;
        sys.m_gz.block(j * nm, j, nm, 1) =
            nj.asDiagonal() * (Complex(0.0, omega) * body.radiated);
        sys.m_zz(j, j) = Complex(body.stiffness -
                                     omega * omega * (body.mass + body.self_added_mass),
                                 -omega * (body.damping + body.self_damping));
        for (int i = 0; i < n_b; ++i) {
            if (i == j) continue;
            const auto ni = sys.gamma_norm.segment(i * nm, nm);
            const TransferMatrix t =
                basis_transformation(problem.positions[static_cast<std::size_t>(i)],
                                     problem.positions[static_cast<std::size_t>(j)], k, order);
            sys.m_gg.block(j * nm, i * nm, nm, nm) -=
                nj.asDiagonal() * (body.dtm * t.value.transpose()) *
                ni.cwiseInverse().asDiagonal();
            sys.m_zg.block(j, i * nm, 1, nm) -=
                ((t.value * body.excitation_row).cwiseQuotient(ni.cast<Complex>())).transpose();
        }
    }
    return sys;
}

ParkState solve_park(const ParkProblem& problem) {
    return solve_park(problem, assemble_block_system(problem));
}

ParkState solve_park(const ParkProblem& problem, const ParkSystem& system) {
    const CMat full = system.assembled();
    const CVec rhs = system.rhs();
    double residual = 0.0, rcond = 0.0;
    const CVec x = equilibrated_solve(full, rhs, residual, rcond);
    if (!(residual < 1e-10))
        throw std::runtime_error("solve_park: residual " + std::to_string(residual) +
                                 ", rcond " + std::to_string(rcond));
    const Eigen::Index g = system.m_gg.rows();
    ParkState state;
    state.gamma = x.head(g).cwiseQuotient(system.gamma_norm.cast<Complex>());
    state.zeta = x.tail(static_cast<Eigen::Index>(problem.size()));
    state.residual = residual;
    return state;
}

ParkPower park_power(const ParkState& state, const ParkProblem& problem, const Vec& p_coeffs,
                     double omega) {
    ParkPower out;
    out.per_device = Vec::Zero(static_cast<Eigen::Index>(problem.size()));
    for (std::size_t l = 0; l < problem.size(); ++l) {
        if (problem.bodies[l].is_pile) continue;
        const double p = power_series(p_coeffs, omega * std::abs(state.zeta(static_cast<Eigen::Index>(l))));
        out.per_device(static_cast<Eigen::Index>(l)) = p;
        out.total += p;
    }
    return out;
}

InteractionMatrices extract_interaction(const ParkProblem& problem) {
    return extract_interaction(problem, assemble_block_system(problem));
}

InteractionMatrices extract_interaction(const ParkProblem& problem, const ParkSystem& system) {
    const double omega = problem.wave.omega();
    const Eigen::Index n_b = static_cast<Eigen::Index>(problem.size());

    // eliminate the scattered-wave coefficients
    Eigen::PartialPivLU<CMat> lu_gg(system.m_gg);
    const CMat z_eff = system.m_zz - system.m_zg * lu_gg.solve(system.m_gz);
    const CVec f_eff = system.h2 - system.m_zg * lu_gg.solve(system.h1);

    InteractionMatrices im;
    std::vector<Eigen::Index> piles;
    for (Eigen::Index l = 0; l < n_b; ++l) {
        if (problem.bodies[static_cast<std::size_t>(l)].is_pile)
            piles.push_back(l);
        else
            im.device_index.push_back(static_cast<std::size_t>(l));
    }
    const Eigen::Index n_d = static_cast<Eigen::Index>(im.device_index.size());
    const Eigen::Index n_p = static_cast<Eigen::Index>(piles.size());

    CMat z_dd(n_d, n_d), z_dp(n_d, n_p), z_pd(n_p, n_d), z_pp(n_p, n_p);
    CVec f_d(n_d), f_p(n_p);
    for (Eigen::Index a = 0; a < n_d; ++a) {
        const auto ia = static_cast<Eigen::Index>(im.device_index[static_cast<std::size_t>(a)]);
        f_d(a) = f_eff(ia);
        for (Eigen::Index b = 0; b < n_d; ++b)
            z_dd(a, b) = z_eff(ia, static_cast<Eigen::Index>(
                                       im.device_index[static_cast<std::size_t>(b)]));
        for (Eigen::Index b = 0; b < n_p; ++b) z_dp(a, b) = z_eff(ia, piles[static_cast<std::size_t>(b)]);
    }
    for (Eigen::Index a = 0; a < n_p; ++a) {
        f_p(a) = f_eff(piles[static_cast<std::size_t>(a)]);
        for (Eigen::Index b = 0; b < n_d; ++b)
            z_pd(a, b) = z_eff(piles[static_cast<std::size_t>(a)],
                               static_cast<Eigen::Index>(im.device_index[static_cast<std::size_t>(b)]));
        for (Eigen::Index b = 0; b < n_p; ++b)
            z_pp(a, b) = z_eff(piles[static_cast<std::size_t>(a)], piles[static_cast<std::size_t>(b)]);
    }

    CMat z_cond = z_dd;
    CVec f_cond = f_d;
    if (n_p > 0) {
        Eigen::PartialPivLU<CMat> lu_pp(z_pp);
        z_cond -= z_dp * lu_pp.solve(z_pd);
        f_cond -= z_dp * lu_pp.solve(f_p);
    }

    // strip the structural parts, leaving -ω²A - iωB
    for (Eigen::Index a = 0; a < n_d; ++a) {
        const auto& body = problem.bodies[im.device_index[static_cast<std::size_t>(a)]];
        z_cond(a, a) -= Complex(body.stiffness - omega * omega * body.mass,
                                -omega * body.damping);
    }
    im.added_mass = (-z_cond.real() / (omega * omega)).eval();
    im.damping = (-z_cond.imag() / omega).eval();
    im.excitation = f_cond;
    return im;
}

ParkVerifyResult timedomain_verify(const InteractionMatrices& im, const Device& dev,
                                   const MonochromaticWave& wave, double omega_t, int n_periods,
                                   int samples_per_period, const PhysicalConstants& pc,
                                   const OdeOptions& opts) {
    const Eigen::Index n_d = im.added_mass.rows();
    if (n_d == 0) throw std::invalid_argument("timedomain_verify: no devices");
    const double omega = wave.omega();
    const double period = wave.period;

    Mat mass(n_d, n_d);
    Vec accel(n_d), rhs_vec(n_d);
    auto rhs = [&](double t, const Vec& y, Vec& dydt) {
        const Complex rot = std::exp(Complex(0.0, -omega * t));
        for (Eigen::Index l = 0; l < n_d; ++l) {
            const double zeta = y(l), zdot = y(n_d + l);
            const double s = dev.duct.section(zeta);
            const double v_t = s * zdot / dev.turbine.flow_area;
            rhs_vec(l) = std::real(im.excitation(l) * rot) -
                         pressure_jump(v_t, omega_t, dev.turbine, dev.curves) -
                         pc.rho * pc.g * zeta;
        }
        rhs_vec.noalias() -= im.damping * y.tail(n_d);
        mass = im.added_mass;
        for (Eigen::Index l = 0; l < n_d; ++l)
            mass(l, l) += pc.rho * dev.duct.column_inertia(y(l)) * dev.duct.section(y(l));
        accel = mass.partialPivLu().solve(rhs_vec);
        dydt.head(n_d) = y.tail(n_d);
        dydt.tail(n_d) = accel;
    };

    const int n_out = n_periods * samples_per_period + 1;
    std::vector<double> times(static_cast<std::size_t>(n_out));
    for (int i = 0; i < n_out; ++i) times[static_cast<std::size_t>(i)] = period * n_periods * i / (n_out - 1);

    const int n_tail = n_periods / 2;
    const int first = (n_periods - n_tail) * samples_per_period;
    Vec power_sum = Vec::Zero(n_d);
    int idx = 0;
    double weight_sum = 0.0;
    auto record = [&](double, const Vec& y) {
        if (idx >= first) {
            const double w = (idx == first || idx == n_out - 1) ? 0.5 : 1.0;
            for (Eigen::Index l = 0; l < n_d; ++l) {
                const double s = dev.duct.section(y(l));
                const double v_t = s * y(n_d + l) / dev.turbine.flow_area;
                power_sum(l) += w * torque(v_t, omega_t, dev.turbine, dev.curves) * omega_t;
            }
            weight_sum += w;
        }
        ++idx;
    };

    Vec y0 = Vec::Zero(2 * n_d);
    integrate_dopri5(rhs, y0, 0.0, period * n_periods, opts, times, record);

    ParkVerifyResult res;
    res.per_device_power = power_sum / weight_sum;
    res.total = res.per_device_power.sum();
    return res;
}

} // namespace owc
