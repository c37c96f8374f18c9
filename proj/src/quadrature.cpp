#include "levyx/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace levyx {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the orthogonal
// polynomial recurrence, weights are mu0 * (first eigenvector component)^2.
QuadRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n - 1; ++k) {
        J(k, k + 1) = offdiag(k);
        J(k + 1, k) = offdiag(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("quadrature: eigen decomposition failed");
    QuadRule rule;
    rule.nodes = es.eigenvalues().array();
    rule.weights = mu0 * es.eigenvectors().row(0).array().square();
    return rule;
}

QuadRule make_legendre(int n) {
    Eigen::VectorXd off(n - 1);
    for (int k = 1; k < n; ++k) {
        double kk = static_cast<double>(k);
        off(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    return golub_welsch(off, 2.0);
}

QuadRule make_hermite_prob(int n) {
    Eigen::VectorXd off(n - 1);
    for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
    return golub_welsch(off, 1.0);
}

template <class F>
const QuadRule& cached(std::map<int, QuadRule>& cache, std::mutex& mtx, int n, F make) {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

} // namespace

const QuadRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, make_legendre);
}

QuadRule gauss_legendre(int n, double a, double b) {
    const QuadRule& base = gauss_legendre(n);
    QuadRule rule;
    rule.nodes = 0.5 * (a + b) + 0.5 * (b - a) * base.nodes;
    rule.weights = 0.5 * (b - a) * base.weights;
    return rule;
}

const QuadRule& gauss_hermite_prob(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_prob: n must be positive");
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    return cached(cache, mtx, n, make_hermite_prob);
}

} // namespace levyx
