#pragma once

#include <vector>

#include "levyx/expansion.hpp"
#include "levyx/jet.hpp"

namespace levyx {

// Compositions of n grouped by length: by_length[h-1] holds the h-tuples of
// positive integers summing to n; |I_{n,h}| = C(n-1, h-1).
struct IndexSets {
    int n = 0;
    std::vector<std::vector<std::vector<int>>> by_length;
};

IndexSets index_sets(int n); // 1 <= n <= 12

// Order-0 characteristic exponent pieces over a time window, built from the
// expansion's order-0 coefficients by Gauss-Legendre integration in time.
class Order0Exponent {
public:
    Order0Exponent(CoefficientSeries series, int timeQ = 8);

    double mv(double t, double s) const;   // integral of gamma0 - a0 - kappa0
    double Cv(double t, double s) const;   // integral of 2 a0
    double kill(double t, double s) const; // integral of gamma0
    Jet Psi(double t, double s, cplx xi0, int D) const; // integral of chi0(tau,.)
    // F(xi,t,s) = -i d/dxi Psi + mv + i xi Cv
    Jet F(double t, double s, cplx xi0, int D) const;

    const CoefficientSeries& series() const { return series_; }

private:
    CoefficientSeries series_;
    int timeQ_;
};

Order0Exponent build_order0(const CoefficientSeries& series, double t, double T,
                            int timeQ = 8);

// Approximated characteristic function: phat_n = phat_0 * c_n with
// c_n(t,x,T,xi) = e^{-i x xi} Lhat_n(t,T) e^{i x xi} evaluated by jet
// arithmetic over the composition simplex.
class CharApprox {
public:
    static constexpr int max_supported_order = 6;

    CharApprox(CoefficientSeries series, int N, int timeQ = 8);

    int order() const { return N_; }
    const CoefficientSeries& series() const { return series_; }
    const Order0Exponent& exponent() const { return exponent_; }

    cplx phat0(double t, double x, double T, cplx xi) const;

    // c_0..c_N (c_0 == 1).
    std::vector<cplx> corrections(double t, double x, double T, cplx xi) const;
    cplx correction(int n, double t, double x, double T, cplx xi) const;
    cplx phat(int n, double t, double x, double T, cplx xi) const;

    // One application of Ghat_i(t,s): basis polynomial of (Mhat - xbar)
    // innermost, multiplication by psi_i(s,.) outermost.
    Jet apply_Ghat(int i, double t, double s, const Jet& state) const;

private:
    int jet_order() const;

    CoefficientSeries series_;
    int N_;
    int timeQ_;
    Order0Exponent exponent_;
};

} // namespace levyx
