#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levyx/jet.hpp"

namespace levyx {

// Scalar coefficient of (t, x).  Spatial Taylor coefficients come from an
// exact provider when the coefficient was built from a closed form, and from
// central differences with Richardson extrapolation otherwise.
class CoefficientFn {
public:
    CoefficientFn() = default;

    double operator()(double t, double x) const;

    // Taylor coefficients f_k = d^k f(t,.)|_xbar / k!, k = 0..order.
    std::vector<double> taylor(double t, double xbar, int order) const;

    bool exact_derivatives() const { return static_cast<bool>(jet_); }
    bool time_independent() const { return time_independent_; }

    static CoefficientFn constant(double v);
    // A + B * exp(w x), time independent.
    static CoefficientFn exp_affine(double A, double B, double w);
    // Arbitrary value function; derivatives by finite differences.
    static CoefficientFn generic(std::function<double(double, double)> f,
                                 bool time_independent = false);
    // Value plus exact Taylor provider.
    static CoefficientFn with_jet(
        std::function<double(double, double)> f,
        std::function<std::vector<double>(double, double, int)> jet,
        bool time_independent);

private:
    std::function<double(double, double)> value_;
    std::function<std::vector<double>(double, double, int)> jet_;
    bool time_independent_ = false;
};

// State-dependent compound Poisson family with Gaussian jumps:
// nu(t,x,dz) = lambda(t,x) * N(m(x), delta(x)^2)(dz).
struct GaussianJumpFamily {
    CoefficientFn lambda;
    CoefficientFn m;      // x only
    CoefficientFn delta;  // x only, > 0

    bool time_independent() const { return lambda.time_independent(); }
};

// Jump family given directly through its compensated symbol
// chi(t,x,xi) = integral (e^{iz xi} - 1 - iz xi) nu(t,x,dz),
// with chi(t,x,0) = 0 and chi(t,x,-i) real.
struct LevySymbolFamily {
    std::function<cplx(double, double, cplx)> symbol;
    // x-jet of chi(t,.,xi) at xbar: outer order dx, inner xi-jets of order dxi
    // about xi0.
    std::function<XJet(double, double, int, cplx, int)> symbol_xjet;
    double strip_lo = -1e300; // admissible Im(xi) range
    double strip_hi = 1e300;
    bool time_indep = true;

    // Set when built through nig(); the frozen-step Monte Carlo scheme needs
    // the raw parameterization back.
    double nig_alpha = 0.0;
    double nig_beta = 0.0;
    CoefficientFn nig_delta;

    bool time_independent() const { return time_indep; }

    // NIG-type family: chi(x,xi) = deltaScale(x) * chihat(xi) with
    // chihat(xi) = -(sqrt(alpha^2-(beta+i xi)^2) - sqrt(alpha^2-beta^2))
    //              - i xi beta / sqrt(alpha^2-beta^2).
    static LevySymbolFamily nig(double alpha, double beta, CoefficientFn deltaScale);
};

using JumpFamily = std::variant<std::monostate, GaussianJumpFamily, LevySymbolFamily>;

struct Domain {
    double t_lo = 0.0, t_hi = 10.0;
    double x_lo = -2.0, x_hi = 2.0;
};

struct ModelSpec {
    CoefficientFn a;      // sigma^2 / 2
    CoefficientFn gamma;  // default intensity, >= 0
    JumpFamily jumps;
    Domain domain;

    bool has_jumps() const { return !std::holds_alternative<std::monostate>(jumps); }
    bool time_independent() const;
    // Admissible Im(xi) strip for the symbol.
    std::pair<double, double> contour_strip() const;
};

// chi(t,x,xi) for whichever jump family is present (0 if none).
cplx jump_symbol(const ModelSpec& m, double t, double x, cplx xi);

// x-jet of chi(t,.,.) at xbar; coefficients are xi-jets about xi0.
XJet jump_symbol_xjet(const ModelSpec& m, double t, double xbar, int dx, cplx xi0, int dxi);

// kappa(t,x) = chi(t,x,-i) = integral (e^z - 1 - z) nu(t,x,dz).
double jump_compensator(const ModelSpec& m, double t, double x);

// mu(t,x) = gamma - a - kappa (martingale condition).
double martingale_drift(const ModelSpec& m, double t, double x);

// phi_A(t,x,xi) = -(xi^2 + i xi) a + (i xi - 1) gamma - i xi kappa + chi(xi).
cplx generator_symbol(const ModelSpec& m, double t, double x, cplx xi);

struct ValidationReport {
    bool parabolicity_ok = true;
    bool nondegenerate_jumps = true;
    bool gamma_nonnegative = true;
    bool lambda_nonnegative = true;
    bool exponential_moments_finite = true;
    double a_min = 0, a_max = 0;
    double gamma_min = 0, gamma_max = 0;
    double lambda_min = 0, lambda_max = 0;
    double delta2_min = 0, delta2_max = 0;
    std::vector<std::string> warnings;

    bool pass() const {
        return parabolicity_ok && nondegenerate_jumps && gamma_nonnegative &&
               lambda_nonnegative;
    }
};

// Lattice scan of the declared domain against the standing assumptions with
// bound M.  Report-only; unbounded coefficients produce warnings, not errors.
ValidationReport validate(const ModelSpec& m, double M, int lattice_t = 11,
                          int lattice_x = 81);

} // namespace levyx
