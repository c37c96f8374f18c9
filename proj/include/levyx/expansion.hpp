#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "levyx/jet.hpp"
#include "levyx/model.hpp"
#include "levyx/polynomial.hpp"

namespace levyx {

enum class SchemeKind { Taylor, TimeTaylor, Hermite };

// Order-0 jump data frozen at the expansion center, available when the model
// carries a Gaussian jump family and the center is time-constant.  Feeds the
// closed-form compound Poisson density.
struct GaussianFreeze {
    std::function<double(double)> lambda0; // of t
    double m0 = 0.0;
    double delta0 = 0.0;
};

// N-th order polynomial expansion of the generator: per order n a basis
// polynomial P_n in (x - xbar) and the frozen symbol coefficient psi_n(t,xi),
// with psi_n = -(xi^2 + i xi) a_n + (i xi - 1) gamma_n - i xi kappa_n + chi_n.
class CoefficientSeries {
public:
    int order() const;
    SchemeKind scheme() const;
    double center(double t) const;
    bool time_homogeneous() const;

    const Polynomial& basis(int n) const;
    Jet psi(int n, double t, cplx xi0, int D) const;
    // All of psi_0..psi_N at once; shares the underlying symbol expansion.
    std::vector<Jet> psi_all(double t, cplx xi0, int D) const;

    double a0(double t) const;
    double gamma0(double t) const;
    double kappa0(double t) const;
    Jet chi0(double t, cplx xi0, int D) const;

    std::pair<double, double> contour_strip() const;
    const std::optional<GaussianFreeze>& gauss0() const;

    bool fd_fallback_used() const;
    bool lambda0_clamped() const;

    struct Impl;
    explicit CoefficientSeries(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

CoefficientSeries expand_taylor(const ModelSpec& model, double xbar, int N);

CoefficientSeries expand_time_taylor(const ModelSpec& model,
                                     std::function<double(double)> trajectory, int N);

CoefficientSeries expand_hermite(const ModelSpec& model, double xbar, double weightStd,
                                 int N);

// Order-0 mean trajectory xbar(s) = x0 + integral_t0^s mu0(tau) dtau with the
// drift frozen at (tau, x0); the documented default for the time-dependent
// Taylor scheme.
std::function<double(double)> default_time_trajectory(const ModelSpec& model, double t0,
                                                      double x0);

} // namespace levyx
