#include "levyx/model.hpp"

#include <cmath>
#include <limits>

#include "levyx/errors.hpp"

namespace levyx {

namespace {

double check_finite(double v, double t, double x, const char* what) {
    if (!std::isfinite(v))
        throw EvaluationError(std::string(what) + " not finite at (t=" + std::to_string(t) +
                              ", x=" + std::to_string(x) + ")");
    return v;
}

// k-th derivative by nested central differences, then one Richardson level.
double fd_derivative(const std::function<double(double)>& f, double x, int k, double h) {
    std::function<double(double, int, double)> d = [&](double x0, int kk, double hh) -> double {
        if (kk == 0) return f(x0);
        return (d(x0 + hh, kk - 1, hh) - d(x0 - hh, kk - 1, hh)) / (2.0 * hh);
    };
    double coarse = d(x, k, h);
    double fine = d(x, k, h / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

} // namespace

double CoefficientFn::operator()(double t, double x) const {
    if (!value_) return 0.0;
    return check_finite(value_(t, x), t, x, "coefficient");
}

std::vector<double> CoefficientFn::taylor(double t, double xbar, int order) const {
    if (jet_) return jet_(t, xbar, order);
    std::vector<double> out(static_cast<std::size_t>(order) + 1);
    out[0] = (*this)(t, xbar);
    double fact = 1.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int k = 1; k <= order; ++k) {
        fact *= static_cast<double>(k);
        double h = std::pow(eps, 1.0 / (k + 2)) * std::max(1.0, std::abs(xbar));
        double dk = fd_derivative([&](double xx) { return value_(t, xx); }, xbar, k, h);
        if (!std::isfinite(dk))
            throw EvaluationError("finite-difference derivative not finite at order " +
                                  std::to_string(k));
        out[static_cast<std::size_t>(k)] = dk / fact;
    }
    return out;
}

CoefficientFn CoefficientFn::constant(double v) {
    CoefficientFn f;
    f.value_ = [v](double, double) { return v; };
    f.jet_ = [v](double, double, int order) {
        std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
        c[0] = v;
        return c;
    };
    f.time_independent_ = true;
    return f;
}

CoefficientFn CoefficientFn::exp_affine(double A, double B, double w) {
    CoefficientFn f;
    f.value_ = [=](double, double x) { return A + B * std::exp(w * x); };
    f.jet_ = [=](double, double xbar, int order) {
        std::vector<double> c(static_cast<std::size_t>(order) + 1);
        double e = B * std::exp(w * xbar);
        c[0] = A + e;
        double fact = 1.0, wp = 1.0;
        for (int k = 1; k <= order; ++k) {
            fact *= static_cast<double>(k);
            wp *= w;
            c[static_cast<std::size_t>(k)] = e * wp / fact;
        }
        return c;
    };
    f.time_independent_ = true;
    return f;
}

CoefficientFn CoefficientFn::generic(std::function<double(double, double)> fn,
                                     bool time_independent) {
    CoefficientFn f;
    f.value_ = std::move(fn);
    f.time_independent_ = time_independent;
    return f;
}

CoefficientFn CoefficientFn::with_jet(
    std::function<double(double, double)> fn,
    std::function<std::vector<double>(double, double, int)> jet, bool time_independent) {
    CoefficientFn f;
    f.value_ = std::move(fn);
    f.jet_ = std::move(jet);
    f.time_independent_ = time_independent;
    return f;
}

// ---------------------------------------------------------------------------
// Gaussian jump family: chi(t,x,xi) = lambda(t,x) (g(x,xi) - 1 - i m(x) xi),
// g(x,xi) = exp(i m(x) xi - delta(x)^2 xi^2 / 2).
// The x-jet is assembled with nested jets so all spatial derivatives are
// exact whenever lambda, m, delta carry exact Taylor providers.
// ---------------------------------------------------------------------------

namespace {

XJet gaussian_chi_xjet(const GaussianJumpFamily& fam, double t, double xbar, int dx,
                       cplx xi0, int dxi) {
    auto lam = fam.lambda.taylor(t, xbar, dx);
    auto mm = fam.m.taylor(0.0, xbar, dx);
    auto dd = fam.delta.taylor(0.0, xbar, dx);

    auto lift = [&](double v) { return Jet::constant(cplx(v, 0.0), xi0, dxi); };

    Jet xi = Jet::variable(xi0, dxi);
    Jet ixi = xi * cplx(0.0, 1.0);
    Jet xi2 = xi * xi;

    XJet mjet(cplx(xbar, 0.0), dx), d2jet(cplx(xbar, 0.0), dx), lamjet(cplx(xbar, 0.0), dx);
    for (int k = 0; k <= dx; ++k) {
        mjet[k] = lift(mm[static_cast<std::size_t>(k)]);
        lamjet[k] = lift(lam[static_cast<std::size_t>(k)]);
        // delta^2 via Cauchy product of the delta coefficients
        double acc = 0.0;
        for (int j = 0; j <= k; ++j)
            acc += dd[static_cast<std::size_t>(j)] * dd[static_cast<std::size_t>(k - j)];
        d2jet[k] = lift(acc);
    }

    // H(x,xi) = i m(x) xi - delta^2(x) xi^2 / 2
    XJet H(cplx(xbar, 0.0), dx);
    for (int k = 0; k <= dx; ++k)
        H[k] = mjet[k] * ixi - d2jet[k] * (xi2 * cplx(0.5, 0.0));
    XJet G = exp(H);

    // chi = lambda * (G - 1 - i m xi)
    XJet inner = G;
    inner[0] -= Jet::constant(cplx(1.0, 0.0), xi0, dxi);
    for (int k = 0; k <= dx; ++k) inner[k] -= mjet[k] * ixi;
    return lamjet * inner;
}

} // namespace

LevySymbolFamily LevySymbolFamily::nig(double alpha, double beta, CoefficientFn deltaScale) {
    if (alpha <= 0.0 || std::abs(beta) >= alpha)
        throw DomainError("nig: require alpha > 0 and |beta| < alpha");
    const double gtil = std::sqrt(alpha * alpha - beta * beta);

    auto chihat_jet = [=](cplx xi0, int dxi) -> Jet {
        Jet xi = Jet::variable(xi0, dxi);
        // w(xi) = alpha^2 - (beta + i xi)^2
        Jet bixi = xi * cplx(0.0, 1.0);
        bixi += cplx(beta, 0.0);
        Jet w = -(bixi * bixi);
        w += cplx(alpha * alpha, 0.0);
        cplx w0 = w.value();
        if (std::abs(w0) < 1e-12 || (w0.real() < 0.0 && std::abs(w0.imag()) < 1e-12))
            throw BranchError("nig symbol: sqrt branch cut at xi0");
        Jet s = sqrt(w);
        Jet out = -s;
        out += cplx(gtil, 0.0);
        out -= xi * cplx(0.0, beta / gtil);
        return out;
    };

    LevySymbolFamily fam;
    fam.strip_lo = beta - alpha;
    fam.strip_hi = beta + alpha;
    fam.time_indep = deltaScale.time_independent();
    fam.nig_alpha = alpha;
    fam.nig_beta = beta;
    fam.nig_delta = deltaScale;
    fam.symbol = [=](double t, double x, cplx xi) -> cplx {
        cplx bixi = beta + cplx(0.0, 1.0) * xi;
        cplx w = alpha * alpha - bixi * bixi;
        cplx s = std::sqrt(w);
        return deltaScale(t, x) * (gtil - s - cplx(0.0, 1.0) * xi * (beta / gtil));
    };
    fam.symbol_xjet = [=](double t, double xbar, int dx, cplx xi0, int dxi) -> XJet {
        auto ds = deltaScale.taylor(t, xbar, dx);
        Jet chihat = chihat_jet(xi0, dxi);
        XJet out(cplx(xbar, 0.0), dx);
        for (int k = 0; k <= dx; ++k) out[k] = chihat * cplx(ds[static_cast<std::size_t>(k)], 0.0);
        return out;
    };
    return fam;
}

bool ModelSpec::time_independent() const {
    bool jumps_ti = true;
    if (auto* g = std::get_if<GaussianJumpFamily>(&jumps)) jumps_ti = g->time_independent();
    if (auto* l = std::get_if<LevySymbolFamily>(&jumps)) jumps_ti = l->time_independent();
    return a.time_independent() && gamma.time_independent() && jumps_ti;
}

std::pair<double, double> ModelSpec::contour_strip() const {
    if (auto* l = std::get_if<LevySymbolFamily>(&jumps))
        return {l->strip_lo, l->strip_hi};
    return {-1e300, 1e300};
}

cplx jump_symbol(const ModelSpec& m, double t, double x, cplx xi) {
    if (auto* g = std::get_if<GaussianJumpFamily>(&m.jumps)) {
        double lam = g->lambda(t, x), mm = (g->m)(0.0, x), del = (g->delta)(0.0, x);
        cplx imxi = cplx(0.0, 1.0) * mm * xi;
        return lam * (std::exp(imxi - 0.5 * del * del * xi * xi) - 1.0 - imxi);
    }
    if (auto* l = std::get_if<LevySymbolFamily>(&m.jumps)) return l->symbol(t, x, xi);
    return cplx(0.0, 0.0);
}

XJet jump_symbol_xjet(const ModelSpec& m, double t, double xbar, int dx, cplx xi0, int dxi) {
    if (auto* g = std::get_if<GaussianJumpFamily>(&m.jumps))
        return gaussian_chi_xjet(*g, t, xbar, dx, xi0, dxi);
    if (auto* l = std::get_if<LevySymbolFamily>(&m.jumps))
        return l->symbol_xjet(t, xbar, dx, xi0, dxi);
    XJet out(cplx(xbar, 0.0), dx);
    for (int k = 0; k <= dx; ++k) out[k] = Jet(xi0, dxi);
    return out;
}

double jump_compensator(const ModelSpec& m, double t, double x) {
    cplx k = jump_symbol(m, t, x, cplx(0.0, -1.0));
    return k.real();
}

double martingale_drift(const ModelSpec& m, double t, double x) {
    return m.gamma(t, x) - m.a(t, x) - jump_compensator(m, t, x);
}

cplx generator_symbol(const ModelSpec& m, double t, double x, cplx xi) {
    auto [lo, hi] = m.contour_strip();
    if (xi.imag() < lo || xi.imag() > hi)
        throw ContourError("generator_symbol: Im(xi) outside admissible strip");
    const cplx i(0.0, 1.0);
    double a = m.a(t, x), g = m.gamma(t, x);
    double kap = jump_compensator(m, t, x);
    return -(xi * xi + i * xi) * a + (i * xi - 1.0) * g - i * xi * kap +
           jump_symbol(m, t, x, xi);
}

ValidationReport validate(const ModelSpec& m, double M, int lattice_t, int lattice_x) {
    ValidationReport r;
    double inf = std::numeric_limits<double>::infinity();
    r.a_min = inf; r.a_max = -inf;
    r.gamma_min = inf; r.gamma_max = -inf;
    r.lambda_min = 0.0; r.lambda_max = 0.0;
    r.delta2_min = 0.0; r.delta2_max = 0.0;

    auto* gj = std::get_if<GaussianJumpFamily>(&m.jumps);
    if (gj) { r.lambda_min = inf; r.lambda_max = -inf; r.delta2_min = inf; r.delta2_max = -inf; }

    for (int it = 0; it < lattice_t; ++it) {
        double t = m.domain.t_lo +
                   (m.domain.t_hi - m.domain.t_lo) * it / std::max(1, lattice_t - 1);
        for (int ix = 0; ix < lattice_x; ++ix) {
            double x = m.domain.x_lo +
                       (m.domain.x_hi - m.domain.x_lo) * ix / std::max(1, lattice_x - 1);
            double a = m.a(t, x), g = m.gamma(t, x);
            r.a_min = std::min(r.a_min, a); r.a_max = std::max(r.a_max, a);
            r.gamma_min = std::min(r.gamma_min, g); r.gamma_max = std::max(r.gamma_max, g);
            if (gj) {
                double lam = gj->lambda(t, x);
                double d = (gj->delta)(0.0, x);
                r.lambda_min = std::min(r.lambda_min, lam);
                r.lambda_max = std::max(r.lambda_max, lam);
                r.delta2_min = std::min(r.delta2_min, d * d);
                r.delta2_max = std::max(r.delta2_max, d * d);
            }
        }
    }

    if (r.a_min < 1.0 / M || r.a_max > M) {
        r.parabolicity_ok = false;
        r.warnings.push_back("parabolicity bounds violated on lattice: a in [" +
                             std::to_string(r.a_min) + ", " + std::to_string(r.a_max) + "]");
    }
    if (r.gamma_min < 0.0) {
        r.gamma_nonnegative = false;
        r.warnings.push_back("gamma takes negative values on lattice");
    }
    if (gj) {
        if (r.delta2_min <= 0.0 || r.delta2_min < 1.0 / M || r.delta2_max > M) {
            if (r.delta2_min <= 0.0) {
                r.nondegenerate_jumps = false;
                r.warnings.push_back("non-degeneracy violated: delta reaches 0 on lattice");
            } else {
                r.warnings.push_back("jump variance bounds outside [1/M, M] on lattice");
            }
        }
        if (r.lambda_min < 0.0) {
            r.lambda_nonnegative = false;
            r.warnings.push_back("lambda takes negative values on lattice");
        }
        if (r.lambda_max > M)
            r.warnings.push_back("lambda exceeds M on lattice");
        // Gaussian tails: exponential moments always finite.
        r.exponential_moments_finite = true;
    }
    // Off-lattice behaviour cannot be checked; note it when the lattice shows
    // strong variation (unbounded CEV-like coefficients).
    if (r.a_max > 10.0 * std::max(r.a_min, 1e-300))
        r.warnings.push_back("a varies by more than 10x across lattice; bounds may fail off-lattice");
    return r;
}

} // namespace levyx
