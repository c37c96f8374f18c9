#pragma once

#include <functional>
#include <vector>

#include "levyx/char_engine.hpp"

namespace levyx {

enum class PayoffKind { Call, Put, Digital, Density, Constant };

// Generalized Fourier transform of the payoff, evaluated as hhat(-xi) along
// the contour Im(xi) = omega.  Conventions are pinned by the Black-Scholes
// reduction test: puts need omega > 0, calls omega < -1, digitals omega > 0,
// densities and constants omega = 0.
struct PayoffTransform {
    PayoffKind kind = PayoffKind::Put;
    double omega = 0.0;
    double strike = 1.0; // K for Call/Put/Digital, target y for Density
    std::function<cplx(cplx)> hhat_neg; // xi on the contour -> hhat(-xi)
};

PayoffTransform payoff_transform(PayoffKind kind, double K, double omega);
PayoffTransform density_payoff(double y);
PayoffTransform constant_payoff();

struct QuadDiagnostics {
    double xi_max = 0.0;
    int node_count = 0;
    double tail_estimate = 0.0;
    int refinements = 0;
    double symmetry_defect = 0.0;
};

struct PriceResult {
    double total = 0.0;
    std::vector<double> per_order; // u_0..u_N
    QuadDiagnostics quad;
    double omega = 0.0;
};

struct InvertOptions {
    double tol = 1e-9;
    int max_refinements = 9;
    int nodes_per_panel = 16;
};

// u_n = (1/2pi) integral over Im(xi)=omega of phat_n(t,x,T,xi) hhat(-xi) dxi.
PriceResult invert(const CharApprox& ca, const PayoffTransform& payoff, double t,
                   double x, double T, const InvertOptions& opts = {});

// Shared-grid batch: all payoffs must sit on one contour.  The correction
// multipliers are evaluated once per xi node and reused across payoffs.
std::vector<PriceResult> invert_many(const CharApprox& ca,
                                     const std::vector<PayoffTransform>& payoffs,
                                     double t, double x, double T,
                                     const InvertOptions& opts = {});

// ---------------------------------------------------------------------------
// Black-Scholes utilities and implied volatility
// ---------------------------------------------------------------------------

double norm_cdf(double x);
double norm_pdf(double x);

// Zero-rate Black-Scholes price on the forward F.
double black_scholes(PayoffKind kind, double F, double K, double tau, double sigma);

struct ImpliedVol {
    double sigma = 0.0;
    double residual = 0.0;
};

// Bracketed bisection to 1e-12 width, then Newton polish.
ImpliedVol implied_vol(double price, double forward, double K, double tau,
                       PayoffKind kind);

struct SmilePoint {
    double log_strike = 0.0;
    double strike = 0.0;
    std::vector<double> iv_per_order; // IV of u^(0), u^(1), ..., u^(N)
};

std::vector<SmilePoint> smile(const CharApprox& ca, const std::vector<double>& strikes,
                              double t, double x, double T,
                              PayoffKind kind = PayoffKind::Put,
                              const InvertOptions& opts = {});

} // namespace levyx
