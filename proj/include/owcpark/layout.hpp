#pragma once

#include <cstdint>
#include <functional>

#include "owcpark/park.hpp"

namespace owc {

// Convex admissible region for device centers with a minimum center spacing.
class LayoutDomain {
public:
    LayoutDomain(std::vector<Vec2> vertices, double d_min);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    double min_distance() const { return d_min_; }
    double area() const;
    Vec2 centroid() const;

    bool contains(const Vec2& p, double tol = 1e-9) const;
    // Euclidean projection: identity inside, closest edge or vertex outside.
    Vec2 project(const Vec2& p) const;

private:
    std::vector<Vec2> vertices_; // counterclockwise
    double d_min_;
};

// Equilateral triangle with one vertex at the origin and the opposite edge
// upwave-normal along +x.
LayoutDomain make_triangle(double edge, double d_min);

// Admissible region inside a triangle of piles: edges offset inward by the
// device radius, corners cut by the tangents to the pile clearance circles
// (radius pile_radius + device_radius), keeping the region convex.
LayoutDomain build_truncated_triangle(const std::vector<Vec2>& pile_centers, double pile_radius,
                                      double device_radius, double d_min);

Mat2X project_layout(const Mat2X& points, const LayoutDomain& domain);

// Uniform rejection sampling inside the polygon honoring the minimum
// spacing; deterministic for a fixed seed.
Mat2X sample_random_layout(const LayoutDomain& domain, int n_bodies, std::uint64_t seed);

// Adjoint right-hand side h̃₂,ℓ = Σ_n 2n p_n ω^{2n} (ζ̂_ℓ*)^{n-1} ζ̂_ℓ^n
// (zero at pile entries).
CVec adjoint_rhs(const ParkProblem& problem, const ParkState& state, const Vec& p_coeffs,
                 double omega);

struct AdjointState {
    CVec lambda; // multipliers of the scattering rows
    CVec mu;     // multipliers of the dynamics rows
};

// Solves the conjugate-transposed block system with right-hand side [0; h̃₂].
AdjointState adjoint_solve(const ParkProblem& problem, const ParkSystem& system,
                           const ParkState& state, const Vec& p_coeffs, double omega);

// Reduced gradient of J = -P with respect to all body coordinates, ordered
// (x₀, y₀, x₁, y₁, ...). Pile entries are computed but typically unused.
Vec layout_gradient(const ParkProblem& problem, const ParkState& state,
                    const AdjointState& adjoint);

// Layout optimization problem: builds the park for given device positions
// (devices must come first in body order) and evaluates the power series.
struct ParkLayoutProblem {
    std::function<ParkProblem(const Mat2X&)> build;
    Vec p_coeffs;
    double omega;

    double cost(const Mat2X& positions) const; // J = -P
};

struct OptimizerConfig {
    double step = 0.0;   // s; 0 = calibrate so the first step moves ~0.1 d_min
    double armijo = 1e-4; // α
    double shrink = 0.5;  // k_d
    double tol = 1e-3;    // W
    int maxit = 200;
    int max_shrink = 60;  // cap on step-scale halvings per iteration
};

enum class OptimizerStatus { converged, max_iterations, stagnated };

struct OptimizerTrace {
    std::vector<double> cost;       // accepted J^k, including the initial cost
    std::vector<double> grad_norm;
    std::vector<double> step_scale; // global backtracking factor at acceptance
    std::vector<int> backtracks;
    std::vector<int> overlap_shrinks;
    std::vector<Mat2X> layouts;     // accepted iterates, including the start
};

struct LayoutResult {
    Mat2X positions;
    double cost = 0.0;
    OptimizerStatus status = OptimizerStatus::max_iterations;
    OptimizerTrace trace;
    double step_used = 0.0;
};

// Projected-gradient descent with per-point step shrinking for overlapping
// pairs and Armijo backtracking on the diagonal scaling:
//   x̃ = P(x^k - s D ∇J^k),  accept when
//   J̃ - J^k ≤ -α ‖x̃ - x^k‖² / (max_ℓ d_ℓℓ · s).
LayoutResult optimize_layout(const Mat2X& initial, const ParkLayoutProblem& problem,
                             const LayoutDomain& domain, const OptimizerConfig& config = {});

} // namespace owc
