#pragma once

#include <array>
#include <functional>
#include <vector>

#include "levyx/expansion.hpp"
#include "levyx/pricer.hpp"

namespace levyx {

// ---------------------------------------------------------------------------
// Order-0 compound Poisson density with Gaussian jumps, as a closed series:
// an independent route to the Fourier-inverted phat_0.
// ---------------------------------------------------------------------------

struct CompoundPoissonParams {
    std::function<double(double)> a0;      // of t
    std::function<double(double)> lambda0; // of t
    std::function<double(double)> gamma0;  // of t
    double m0 = 0.0;
    double delta0 = 0.0;
};

// Build from an expansion with a frozen Gaussian family.
CompoundPoissonParams cp_params(const CoefficientSeries& series);

// p_0(t,x;T,y): series over jump counts, Poisson tail certified below 1e-14.
double cp_density(const CompoundPoissonParams& p, double t, double x, double T, double y);

// ---------------------------------------------------------------------------
// Parametrix error envelopes
// ---------------------------------------------------------------------------

// C^k Gamma-bar: k-fold Gaussian convolution of the constant-coefficient
// jump-diffusion kernel with diffusion Mbar, intensity Mbar, jumps N(Mbar,Mbar).
double envelope_conv_gamma_bar(int k, double Mbar, double t, double x, double T, double y);

inline double envelope_gamma_bar(double Mbar, double t, double x, double T, double y) {
    return envelope_conv_gamma_bar(0, Mbar, t, x, T, y);
}

double envelope_gamma_tilde(double Mbar, double t, double x, double T, double y);

// ---------------------------------------------------------------------------
// JDCEV: exact survival series and the closed-form expansion orders
// ---------------------------------------------------------------------------

// Kummer confluent hypergeometric by its power series (terminates for
// nonpositive integer a).
double hyp1f1(double a, double b, double z);

struct JdcevParams {
    double b = 0.01;   // constant hazard
    double c = 2.0;    // hazard loading on instantaneous variance
    double delta = 0.3;
    double beta = -1.0 / 3.0; // < 0
};

// Survival probability by the eigenfunction series truncated at truncN.
double jdcev_exact(const JdcevParams& p, double t, double x, double T, int truncN = 70);

// Adaptive truncation: extends until the terms are negligible.
double jdcev_exact_converged(const JdcevParams& p, double t, double x, double T);

// Closed-form u_0, u_1, u_2 of the Taylor-at-spot expansion.
std::array<double, 3> jdcev_expansion(const JdcevParams& p, double t, double x, double T);

// ---------------------------------------------------------------------------
// Exponential-eta reference price series (state dependence eta(x) = e^{beta x})
// ---------------------------------------------------------------------------

struct ExpEtaParams {
    double beta = -2.0;
    double b0 = 0.15, b1 = 0.15; // diffusion: a(x) = (b0^2 + eps b1^2 e^{beta x})/2
    double c0 = 0.0, c1 = 0.0;   // killing: gamma(x) = c0 + eps c1 e^{beta x}
    double eps = 1.0;
    double lambda = 0.2;         // Gaussian Levy measure nu = lambda N(m, eta^2)
    double m = -0.2;
    double eta = 0.2;
};

// European option price by the eigenvalue-expansion reference series,
// truncated at truncN; independent of the polynomial-expansion engine.
double exp_eta_reference(const ExpEtaParams& p, PayoffKind kind, double K, double t,
                         double x, double T, int truncN = 8);

// ---------------------------------------------------------------------------
// Empirical convergence rates
// ---------------------------------------------------------------------------

struct RateEstimate {
    double slope = 0.0;
    double stderr_ = 0.0;
    std::vector<double> taus;
    std::vector<double> errors;
};

// Log-log regression of |error(tau)| against tau over the given grid.
RateEstimate rate_study(const std::function<double(double)>& error_at_tau,
                        const std::vector<double>& taus);

} // namespace levyx
