#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "owcpark/types.hpp"

namespace owc {

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 0.0; // 0 = automatic
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 20'000'000;
};

// Dormand–Prince 5(4) with the standard 4th-order dense-output interpolant.
// f(t, y, dydt) evaluates the right-hand side. `sample(t, y)` is called at
// every requested output time (out_times must be increasing and within
// [t0, t1]). Returns the final state.
template <class RHS, class Sampler>
Vec integrate_dopri5(RHS&& f, Vec y, double t0, double t1, const OdeOptions& opts,
                     const std::vector<double>& out_times, Sampler&& sample) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    const Eigen::Index n = y.size();
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y_new(n), y_err(n), y_stage(n);

    double t = t0;
    f(t, y, k1);
    std::size_t out_idx = 0;
    while (out_idx < out_times.size() && out_times[out_idx] <= t0) {
        sample(t0, y);
        ++out_idx;
    }

    double h = opts.h_init;
    if (h <= 0) {
        const double ynorm = y.cwiseAbs().maxCoeff() + opts.atol;
        const double fnorm = k1.cwiseAbs().maxCoeff() + opts.atol;
        h = std::min(0.01 * ynorm / fnorm, (t1 - t0) / 100.0);
        if (!(h > 0) || !std::isfinite(h)) h = (t1 - t0) * 1e-6;
    }
    h = std::min(h, opts.h_max);

    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > opts.max_steps) throw std::runtime_error("integrate_dopri5: step limit exceeded");
        h = std::min({h, opts.h_max, t1 - t});

        y_stage = y + h * a21 * k1;
        f(t + c2 * h, y_stage, k2);
        y_stage = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, y_stage, k3);
        y_stage = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, y_stage, k4);
        y_stage = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, y_stage, k5);
        y_stage = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, y_stage, k6);
        y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + h, y_new, k7);
        y_err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = opts.atol + opts.rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
            const double r = y_err(i) / sc;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0) {
            // dense output over [t, t+h] for any crossed sample times
            if (out_idx < out_times.size() && out_times[out_idx] <= t + h) {
                const Vec ydiff = y_new - y;
                const Vec bspl = h * k1 - ydiff;
                const Vec r4 = ydiff - h * k7 - bspl;
                const Vec r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (out_idx < out_times.size() && out_times[out_idx] <= t + h) {
                    const double theta = (out_times[out_idx] - t) / h;
                    const Vec ys = y + theta * (ydiff + (1.0 - theta) *
                                   (bspl + theta * (r4 + (1.0 - theta) * r5)));
                    sample(out_times[out_idx], ys);
                    ++out_idx;
                }
            }
            t += h;
            y.swap(y_new);
            k1.swap(k7); // FSAL
            const double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 10.0;
            h *= std::clamp(factor, 0.2, 10.0);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (!(h > 0) || !std::isfinite(h))
            throw std::runtime_error("integrate_dopri5: step size underflow");
    }
    while (out_idx < out_times.size()) { sample(t1, y); ++out_idx; }
    return y;
}

} // namespace owc
