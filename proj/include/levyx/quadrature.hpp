#pragma once

#include <Eigen/Core>

namespace levyx {

struct QuadRule {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;
};

// Gauss-Legendre on [-1,1]; exact for polynomials of degree 2n-1.
const QuadRule& gauss_legendre(int n);

// Gauss-Legendre mapped to [a,b].
QuadRule gauss_legendre(int n, double a, double b);

// Gauss-Hermite against the standard normal probability density: weights sum
// to 1 and quadrature of f equals E[f(Z)], Z ~ N(0,1).
const QuadRule& gauss_hermite_prob(int n);

} // namespace levyx
