#pragma once

#include "owcpark/types.hpp"

namespace owc {

// Integer-order cylinder functions of positive real argument, with the
// negative-order reflections J_{-n} = (-1)^n J_n, Y_{-n} = (-1)^n Y_n.
double bessel_j(int n, double x);
double bessel_y(int n, double x);

// Hankel function of the first kind, H_n = J_n + iY_n (outgoing waves under
// the e^{-iωt} time convention).
Complex hankel1(int n, double x);

// dH_n/dx = (H_{n-1} - H_{n+1})/2
Complex hankel1_derivative(int n, double x);

// dJ_n/dx = (J_{n-1} - J_{n+1})/2
double bessel_j_derivative(int n, double x);

} // namespace owc
