#include "owcpark/bessel.hpp"

#include <cmath>

namespace owc {

double bessel_j(int n, double x) {
    if (x <= 0) throw std::domain_error("bessel_j: x must be positive");
    const double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), x);
    return (n < 0 && (n & 1)) ? -v : v;
}

double bessel_y(int n, double x) {
    if (x <= 0) throw std::domain_error("bessel_y: x must be positive");
    const double v = std::cyl_neumann(static_cast<double>(std::abs(n)), x);
    return (n < 0 && (n & 1)) ? -v : v;
}

Complex hankel1(int n, double x) { return {bessel_j(n, x), bessel_y(n, x)}; }

Complex hankel1_derivative(int n, double x) {
    return 0.5 * (hankel1(n - 1, x) - hankel1(n + 1, x));
}

double bessel_j_derivative(int n, double x) {
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x));
}

} // namespace owc
