#include "owcpark/layout.hpp"

#include <cmath>
#include <random>

namespace owc {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// closest point of segment [a, b]
Vec2 segment_closest(const Vec2& a, const Vec2& b, const Vec2& p) {
    const Vec2 d = b - a;
    const double t = std::clamp(d.dot(p - a) / d.squaredNorm(), 0.0, 1.0);
    return a + t * d;
}

// clip a convex polygon by the half-plane n·x ≥ c
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& n, double c) {
    std::vector<Vec2> out;
    const std::size_t sz = poly.size();
    for (std::size_t i = 0; i < sz; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % sz];
        const double fa = n.dot(a) - c, fb = n.dot(b) - c;
        if (fa >= 0) out.push_back(a);
        if ((fa > 0 && fb < 0) || (fa < 0 && fb > 0)) {
            out.push_back(a + (fa / (fa - fb)) * (b - a));
        }
    }
    return out;
}

} // namespace

LayoutDomain::LayoutDomain(std::vector<Vec2> vertices, double d_min)
    : vertices_(std::move(vertices)), d_min_(d_min) {
    if (vertices_.size() < 3) throw std::invalid_argument("LayoutDomain: need a polygon");
    if (d_min_ <= 0) throw std::invalid_argument("LayoutDomain: d_min must be positive");
    // normalize to counterclockwise
    double twice_area = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Vec2& a = vertices_[i];
        const Vec2& b = vertices_[(i + 1) % vertices_.size()];
        twice_area += cross2(a, b);
    }
    if (twice_area < 0) std::reverse(vertices_.begin(), vertices_.end());
    if (std::abs(twice_area) < 1e-12)
        throw std::invalid_argument("LayoutDomain: degenerate polygon");
    // convexity
    const std::size_t sz = vertices_.size();
    for (std::size_t i = 0; i < sz; ++i) {
        const Vec2 e1 = vertices_[(i + 1) % sz] - vertices_[i];
        const Vec2 e2 = vertices_[(i + 2) % sz] - vertices_[(i + 1) % sz];
        if (cross2(e1, e2) < -1e-9 * e1.norm() * e2.norm())
            throw std::invalid_argument("LayoutDomain: polygon is not convex");
    }
}

double LayoutDomain::area() const {
    double twice_area = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        twice_area += cross2(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    return 0.5 * std::abs(twice_area);
}

Vec2 LayoutDomain::centroid() const {
    Vec2 c(0, 0);
    double twice_area = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Vec2& a = vertices_[i];
        const Vec2& b = vertices_[(i + 1) % vertices_.size()];
        const double w = cross2(a, b);
        twice_area += w;
        c += w * (a + b);
    }
    return c / (3.0 * twice_area);
}

bool LayoutDomain::contains(const Vec2& p, double tol) const {
    const std::size_t sz = vertices_.size();
    for (std::size_t i = 0; i < sz; ++i) {
        const Vec2& a = vertices_[i];
        const Vec2& b = vertices_[(i + 1) % sz];
        if (cross2(b - a, p - a) < -tol * (b - a).norm()) return false;
    }
    return true;
}

Vec2 LayoutDomain::project(const Vec2& p) const {
    if (contains(p, 0.0)) return p;
    Vec2 best = vertices_[0];
    double best_d = std::numeric_limits<double>::infinity();
    const std::size_t sz = vertices_.size();
    for (std::size_t i = 0; i < sz; ++i) {
        const Vec2 q = segment_closest(vertices_[i], vertices_[(i + 1) % sz], p);
        const double d = (q - p).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = q;
        }
    }
    return best;
}

LayoutDomain make_triangle(double edge, double d_min) {
    if (edge <= 0) throw std::invalid_argument("make_triangle: edge must be positive");
    return LayoutDomain({Vec2(0, 0), Vec2(edge * std::sqrt(3.0) / 2.0, edge / 2.0),
                         Vec2(edge * std::sqrt(3.0) / 2.0, -edge / 2.0)},
                        d_min);
}

LayoutDomain build_truncated_triangle(const std::vector<Vec2>& pile_centers, double pile_radius,
                                      double device_radius, double d_min) {
    if (pile_centers.size() != 3)
        throw std::invalid_argument("build_truncated_triangle: need three pile centers");
    if (pile_radius < 0 || device_radius < 0)
        throw std::invalid_argument("build_truncated_triangle: negative radius");

    std::vector<Vec2> tri = pile_centers;
    double twice_area = 0.0;
    for (int i = 0; i < 3; ++i) twice_area += cross2(tri[static_cast<std::size_t>(i)], tri[(static_cast<std::size_t>(i) + 1) % 3]);
    if (std::abs(twice_area) < 1e-12)
        throw std::invalid_argument("build_truncated_triangle: collinear pile centers");
    if (twice_area < 0) std::swap(tri[1], tri[2]);

    std::vector<Vec2> poly = tri;
    // edges offset inward by the device radius
    for (int i = 0; i < 3; ++i) {
        const Vec2& a = tri[static_cast<std::size_t>(i)];
        const Vec2& b = tri[(static_cast<std::size_t>(i) + 1) % 3];
        const Vec2 dir = (b - a).normalized();
        const Vec2 inward(-dir.y(), dir.x());
        poly = clip_halfplane(poly, inward, inward.dot(a) + device_radius);
        if (poly.size() < 3)
            throw std::invalid_argument("build_truncated_triangle: device radius too large");
    }
    // corner cuts tangent to the pile clearance circles
    const double clearance = pile_radius + device_radius;
    if (clearance > 0) {
        const Vec2 inner = (tri[0] + tri[1] + tri[2]) / 3.0;
        for (int i = 0; i < 3; ++i) {
            const Vec2& v = tri[static_cast<std::size_t>(i)];
            const Vec2 bis = (inner - v).normalized();
            poly = clip_halfplane(poly, bis, bis.dot(v) + clearance);
            if (poly.size() < 3)
                throw std::invalid_argument("build_truncated_triangle: clearance too large");
        }
    }
    return LayoutDomain(poly, d_min);
}

Mat2X project_layout(const Mat2X& points, const LayoutDomain& domain) {
    Mat2X out(2, points.cols());
    for (Eigen::Index i = 0; i < points.cols(); ++i) out.col(i) = domain.project(points.col(i));
    return out;
}

Mat2X sample_random_layout(const LayoutDomain& domain, int n_bodies, std::uint64_t seed) {
    if (n_bodies < 1) throw std::invalid_argument("sample_random_layout: need at least one body");
    const double spacing_area = n_bodies * M_PI * domain.min_distance() * domain.min_distance() / 4.0;
    if (spacing_area > 0.7 * domain.area())
        throw std::runtime_error("sample_random_layout: packing infeasible by the area heuristic");

    double xmin = domain.vertices()[0].x(), xmax = xmin;
    double ymin = domain.vertices()[0].y(), ymax = ymin;
    for (const auto& v : domain.vertices()) {
        xmin = std::min(xmin, v.x());
        xmax = std::max(xmax, v.x());
        ymin = std::min(ymin, v.y());
        ymax = std::max(ymax, v.y());
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
    Mat2X pts(2, n_bodies);
    const long max_attempts = 200000L * n_bodies;
    long attempts = 0;
    int placed = 0;
    while (placed < n_bodies) {
        if (++attempts > max_attempts)
            throw std::runtime_error("sample_random_layout: rejection sampling exhausted");
        const Vec2 cand(ux(rng), uy(rng));
        if (!domain.contains(cand, 0.0)) continue;
        bool clear = true;
        for (int i = 0; i < placed && clear; ++i)
            if ((pts.col(i) - cand).norm() < domain.min_distance()) clear = false;
        if (!clear) continue;
        pts.col(placed++) = cand;
    }
    return pts;
}

CVec adjoint_rhs(const ParkProblem& problem, const ParkState& state, const Vec& p_coeffs,
                 double omega) {
    const Eigen::Index n_b = state.zeta.size();
    CVec h(n_b);
    for (Eigen::Index l = 0; l < n_b; ++l) {
        if (problem.bodies[static_cast<std::size_t>(l)].is_pile) {
            h(l) = 0.0;
            continue;
        }
        // (ζ̂*)^{n-1} ζ̂^n = ζ̂ |ζ̂|^{2(n-1)}
        const Complex z = state.zeta(l);
        const double r2 = std::norm(z);
        double sum = 0.0, r2pow = 1.0;
        for (Eigen::Index n = 1; n < p_coeffs.size(); ++n) {
            sum += 2.0 * static_cast<double>(n) * p_coeffs(n) * std::pow(omega, 2 * n) * r2pow;
            r2pow *= r2;
        }
        h(l) = sum * z;
    }
    return h;
}

AdjointState adjoint_solve(const ParkProblem& problem, const ParkSystem& system,
                           const ParkState& state, const Vec& p_coeffs, double omega) {
    const CVec h2t = adjoint_rhs(problem, state, p_coeffs, omega);
    const Eigen::Index g = system.m_gg.rows();
    CVec rhs(g + h2t.size());
    rhs.head(g).setZero();
    rhs.tail(h2t.size()) = h2t;

    const CMat full_h = system.assembled().adjoint();
    double residual = 0.0, rcond = 0.0;
    const CVec x = equilibrated_solve(full_h, rhs, residual, rcond);
    if (!(residual < 1e-10))
        throw std::runtime_error("adjoint_solve: residual " + std::to_string(residual) +
                                 ", rcond " + std::to_string(rcond));
    AdjointState adj;
    // back to the raw scattered-coefficient convention used by the gradient
    adj.lambda = x.head(g).cwiseProduct(system.gamma_norm.cast<Complex>());
    adj.mu = x.tail(h2t.size());
    return adj;
}

Vec layout_gradient(const ParkProblem& problem, const ParkState& state,
                    const AdjointState& adjoint) {
    const int n_b = static_cast<int>(problem.size());
    const int order = problem.order();
    const int nm = 2 * order + 1;
    const double k = problem.wavenumber();
    const double theta = problem.wave.direction;
    const Complex ikx(0.0, k * std::cos(theta));
    const Complex iky(0.0, k * std::sin(theta));

    Vec grad = Vec::Zero(2 * n_b);
    for (int j = 0; j < n_b; ++j) {
        const auto& body = problem.bodies[static_cast<std::size_t>(j)];
        const CVec lambda_j = adjoint.lambda.segment(j * nm, nm);
        const Complex mu_j = adjoint.mu(j);

        // ambient phase derivatives enter through -∂h₁/∂x_j and -∂h₂/∂x_j
        const CVec a_j = ambient_incident_coefficients(problem.positions[static_cast<std::size_t>(j)],
                                                       problem.wave, order, problem.constants);
        const CVec bdta = body.dtm * a_j;
        const Complex edta = body.excitation_row.transpose() * a_j;
        grad(2 * j) -= std::real(lambda_j.dot(ikx * bdta) + std::conj(mu_j) * (ikx * edta));
        grad(2 * j + 1) -= std::real(lambda_j.dot(iky * bdta) + std::conj(mu_j) * (iky * edta));

        for (int i = 0; i < n_b; ++i) {
            if (i == j) continue;
            const auto t = basis_transformation(problem.positions[static_cast<std::size_t>(i)],
                                                problem.positions[static_cast<std::size_t>(j)], k,
                                                order, true);
            const CVec gamma_i = state.gamma.segment(i * nm, nm);
            auto accumulate = [&](const CMat& dt, int coord_index) {
                // blocks M_γγ[j,i] = -B_j T^T and M_ζγ[j,i] = -(T e_j)^T
                const CVec da = dt.transpose() * gamma_i;
                const Complex gg = lambda_j.dot(body.dtm * da); // λ_jᴴ B_j dTᵀ γ_i
                const Complex zg = std::conj(mu_j) *
                                   (body.excitation_row.transpose() * da)(0, 0);
                grad(coord_index) -= std::real(gg + zg);
            };
            accumulate(t.d_xi, 2 * i);
            accumulate(t.d_yi, 2 * i + 1);
            accumulate(t.d_xj, 2 * j);
            accumulate(t.d_yj, 2 * j + 1);
        }
    }
    return grad;
}

double ParkLayoutProblem::cost(const Mat2X& positions) const {
    const ParkProblem p = build(positions);
    const ParkState state = solve_park(p);
    return -park_power(state, p, p_coeffs, omega).total;
}

namespace {

std::vector<std::pair<int, int>> overlapping_pairs(const Mat2X& pts, double d_min) {
    std::vector<std::pair<int, int>> pairs;
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
        for (Eigen::Index j = i + 1; j < pts.cols(); ++j)
            if ((pts.col(i) - pts.col(j)).norm() < d_min - 1e-12)
                pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return pairs;
}

} // namespace

LayoutResult optimize_layout(const Mat2X& initial, const ParkLayoutProblem& problem,
                             const LayoutDomain& domain, const OptimizerConfig& config) {
    const int n = static_cast<int>(initial.cols());
    for (int i = 0; i < n; ++i)
        if (!domain.contains(initial.col(i)))
            throw std::invalid_argument("optimize_layout: initial layout outside the domain");
    if (!overlapping_pairs(initial, domain.min_distance()).empty())
        throw std::invalid_argument("optimize_layout: initial layout violates the spacing");

    LayoutResult result;
    Mat2X x = initial;
    double step = config.step;

    ParkProblem park = problem.build(x);
    ParkSystem system = assemble_block_system(park);
    ParkState state = solve_park(park, system);
    double cost_k = -park_power(state, park, problem.p_coeffs, problem.omega).total;

    result.trace.cost.push_back(cost_k);
    result.trace.layouts.push_back(x);
    result.status = OptimizerStatus::max_iterations;

    for (int it = 0; it < config.maxit; ++it) {
        const AdjointState adj = adjoint_solve(park, system, state, problem.p_coeffs, problem.omega);
        const Vec grad_full = layout_gradient(park, state, adj);
        Mat2X grad(2, n);
        for (int i = 0; i < n; ++i) {
            grad(0, i) = grad_full(2 * i);
            grad(1, i) = grad_full(2 * i + 1);
        }
        const double gnorm = grad.norm();
        if (step <= 0) {
            // first step moves the strongest-pulled device about one d_min;
            // the Armijo loop cuts back when that overshoots
            const double gmax = grad.colwise().norm().maxCoeff();
            step = gmax > 0 ? domain.min_distance() / gmax : 1.0;
        }

        Vec d_scale = Vec::Ones(n);
        double global_scale = 1.0;
        int backtracks = 0, shrinks = 0;
        Mat2X x_trial;
        double cost_trial = 0.0;
        bool stagnated = false;

        auto attempt = [&]() -> bool {
            x_trial.resize(2, n);
            for (int i = 0; i < n; ++i)
                x_trial.col(i) = domain.project(x.col(i) - step * d_scale(i) * grad.col(i));
            auto pairs = overlapping_pairs(x_trial, domain.min_distance());
            while (!pairs.empty()) {
                if (++shrinks > config.max_shrink) return false;
                for (const auto& [a, b] : pairs) {
                    d_scale(a) *= config.shrink;
                    d_scale(b) *= config.shrink;
                }
                for (int i = 0; i < n; ++i)
                    x_trial.col(i) = domain.project(x.col(i) - step * d_scale(i) * grad.col(i));
                pairs = overlapping_pairs(x_trial, domain.min_distance());
            }
            cost_trial = problem.cost(x_trial);
            return true;
        };

        if (!attempt()) {
            result.status = OptimizerStatus::stagnated;
            break;
        }
        while (cost_trial - cost_k >
               -config.armijo * (x_trial - x).squaredNorm() / (d_scale.maxCoeff() * step)) {
            if (++backtracks > config.max_shrink) {
                stagnated = true;
                break;
            }
            d_scale *= config.shrink;
            global_scale *= config.shrink;
            if (!attempt()) {
                stagnated = true;
                break;
            }
        }
        if (stagnated) {
            result.status = OptimizerStatus::stagnated;
            break;
        }

        const double err = std::abs(cost_k - cost_trial);
        x = x_trial;
        park = problem.build(x);
        system = assemble_block_system(park);
        state = solve_park(park, system);
        cost_k = -park_power(state, park, problem.p_coeffs, problem.omega).total;

        result.trace.cost.push_back(cost_k);
        result.trace.grad_norm.push_back(gnorm);
        result.trace.step_scale.push_back(global_scale);
        result.trace.backtracks.push_back(backtracks);
        result.trace.overlap_shrinks.push_back(shrinks);
        result.trace.layouts.push_back(x);

        if (err < config.tol) {
            result.status = OptimizerStatus::converged;
            break;
        }
    }

    result.positions = x;
    result.cost = cost_k;
    result.step_used = step;
    return result;
}

} // namespace owc
