#pragma once

#include <cmath>
#include <vector>

namespace levyx {

// Real polynomial in a single variable, coefficients in increasing degree.
class Polynomial {
public:
    Polynomial() : c_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0.0);
    }
    static Polynomial monomial(int degree, double scale = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
        c.back() = scale;
        return Polynomial(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<double>& coeffs() const { return c_; }
    double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }

    double operator()(double u) const {
        double acc = c_.back();
        for (int k = degree() - 1; k >= 0; --k) acc = acc * u + c_[static_cast<std::size_t>(k)];
        return acc;
    }

private:
    std::vector<double> c_;
};

// Orthonormal Hermite polynomial of degree n for the N(0, sigma^2) weight:
// Hv_n(u) = He_n(u/sigma)/sqrt(n!), so <Hv_m, Hv_n> = delta_{mn} under the
// Gaussian probability measure.
inline Polynomial hermite_orthonormal(int n, double sigma) {
    // He recurrence in the scaled variable v = u/sigma:
    // He_0 = 1, He_1 = v, He_{k+1} = v He_k - k He_{k-1}
    std::vector<std::vector<double>> he(static_cast<std::size_t>(n) + 1);
    he[0] = {1.0};
    if (n >= 1) he[1] = {0.0, 1.0};
    for (int k = 1; k < n; ++k) {
        std::vector<double> next(static_cast<std::size_t>(k) + 2, 0.0);
        for (std::size_t j = 0; j < he[static_cast<std::size_t>(k)].size(); ++j)
            next[j + 1] += he[static_cast<std::size_t>(k)][j];
        for (std::size_t j = 0; j < he[static_cast<std::size_t>(k) - 1].size(); ++j)
            next[j] -= static_cast<double>(k) * he[static_cast<std::size_t>(k) - 1][j];
        he[static_cast<std::size_t>(k) + 1] = std::move(next);
    }
    double norm = 1.0;
    for (int k = 2; k <= n; ++k) norm *= static_cast<double>(k);
    norm = 1.0 / std::sqrt(norm);
    std::vector<double> out(he[static_cast<std::size_t>(n)].size());
    double sp = 1.0; // sigma^-j accumulated per power
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = he[static_cast<std::size_t>(n)][j] * norm * sp;
        sp /= sigma;
    }
    return Polynomial(std::move(out));
}

} // namespace levyx
