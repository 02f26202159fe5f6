#pragma once

// Outgoing Helmholtz fundamental solution and the Hankel functions it needs.

#include "screenbem/types.hpp"

namespace screenbem {

class Wavenumber {
public:
    explicit Wavenumber(double k);
    double value() const { return k_; }

private:
    double k_;
};

// H^{(1)}_order(x) = J_order(x) + i Y_order(x) for order 0 or 1, x > 0.
// Ascending series up to x = 12, Hankel asymptotic expansion beyond.
Complex hankel1(int order, double x);

// Phi(x, y) = exp(ik r) / (4 pi r) for n = 3 and (i/4) H0(k r) for n = 2.
Complex phi(const Point& x, const Point& y, Wavenumber k, int dimension);

// Same kernel as a function of the distance alone; r > 0.
Complex phi_radial(double r, double k, int dimension);

// d Phi / d r as a function of distance.
Complex phi_radial_derivative(double r, double k, int dimension);

// Gradient of Phi with respect to the second argument y.
Eigen::Vector3cd grad_phi_y(const Point& x, const Point& y, Wavenumber k, int dimension);

}  // namespace screenbem
