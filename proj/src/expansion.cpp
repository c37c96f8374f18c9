#include "levyx/expansion.hpp"

#include <cmath>

#include "levyx/errors.hpp"
#include "levyx/quadrature.hpp"

namespace levyx {

struct CoefficientSeries::Impl {
    ModelSpec model;
    SchemeKind kind = SchemeKind::Taylor;
    int N = 0;
    double xbar = 0.0;
    std::function<double(double)> trajectory; // TimeTaylor only
    double weight_std = 1.0;                  // Hermite only
    int hermite_nodes = 64;                   // Hermite only
    std::vector<Polynomial> basis;
    bool time_homog = false;
    bool fd_fallback = false;
    bool lambda0_clamped = false;
    std::optional<GaussianFreeze> gauss0;

    double center(double t) const {
        return kind == SchemeKind::TimeTaylor ? trajectory(t) : xbar;
    }

    // Scalar projections a_n, gamma_n, kappa_n and jet projections chi_n.
    struct Coeffs {
        std::vector<double> a, g, kap;
        std::vector<Jet> chi;
    };

    Coeffs coeffs(double t, cplx xi0, int D) const {
        Coeffs out;
        const double c = center(t);
        if (kind != SchemeKind::Hermite) {
            out.a = model.a.taylor(t, c, N);
            out.g = model.gamma.taylor(t, c, N);
            XJet chix = jump_symbol_xjet(model, t, c, N, xi0, D);
            XJet kapx = jump_symbol_xjet(model, t, c, N, cplx(0.0, -1.0), 0);
            out.kap.resize(static_cast<std::size_t>(N) + 1);
            out.chi.reserve(static_cast<std::size_t>(N) + 1);
            for (int n = 0; n <= N; ++n) {
                out.kap[static_cast<std::size_t>(n)] = kapx[n].value().real();
                out.chi.push_back(chix[n]);
            }
        } else {
            const QuadRule& rule = gauss_hermite_prob(hermite_nodes);
            out.a.assign(static_cast<std::size_t>(N) + 1, 0.0);
            out.g.assign(static_cast<std::size_t>(N) + 1, 0.0);
            out.kap.assign(static_cast<std::size_t>(N) + 1, 0.0);
            out.chi.assign(static_cast<std::size_t>(N) + 1, Jet(xi0, D));
            for (int i = 0; i < rule.nodes.size(); ++i) {
                const double u = weight_std * rule.nodes(i);
                const double x = c + u;
                const double w = rule.weights(i);
                const double av = model.a(t, x);
                const double gv = model.gamma(t, x);
                double kv = 0.0;
                Jet chix(xi0, D);
                if (model.has_jumps()) {
                    kv = jump_compensator(model, t, x);
                    chix = jump_symbol_xjet(model, t, x, 0, xi0, D)[0];
                }
                for (int n = 0; n <= N; ++n) {
                    const double hw = w * basis[static_cast<std::size_t>(n)](u);
                    out.a[static_cast<std::size_t>(n)] += hw * av;
                    out.g[static_cast<std::size_t>(n)] += hw * gv;
                    out.kap[static_cast<std::size_t>(n)] += hw * kv;
                    if (model.has_jumps()) out.chi[static_cast<std::size_t>(n)] += chix * hw;
                }
            }
            if (lambda0_clamped) {
                out.kap[0] = 0.0;
                out.chi[0] = Jet(xi0, D);
            }
        }
        return out;
    }
};

int CoefficientSeries::order() const { return impl_->N; }
SchemeKind CoefficientSeries::scheme() const { return impl_->kind; }
double CoefficientSeries::center(double t) const { return impl_->center(t); }
bool CoefficientSeries::time_homogeneous() const { return impl_->time_homog; }
const Polynomial& CoefficientSeries::basis(int n) const {
    return impl_->basis[static_cast<std::size_t>(n)];
}

std::vector<Jet> CoefficientSeries::psi_all(double t, cplx xi0, int D) const {
    auto co = impl_->coeffs(t, xi0, D);
    const cplx i(0.0, 1.0);
    Jet xi = Jet::variable(xi0, D);
    Jet q_a = -(xi * xi + xi * i); // diffusion multiplier
    Jet q_g = xi * i;              // killing multiplier (i xi - 1)
    q_g += cplx(-1.0, 0.0);
    Jet q_k = xi * (-i);           // drift-compensator multiplier
    std::vector<Jet> out;
    out.reserve(static_cast<std::size_t>(impl_->N) + 1);
    for (int n = 0; n <= impl_->N; ++n) {
        Jet p = q_a * co.a[static_cast<std::size_t>(n)];
        p += q_g * co.g[static_cast<std::size_t>(n)];
        p += q_k * co.kap[static_cast<std::size_t>(n)];
        p += co.chi[static_cast<std::size_t>(n)];
        out.push_back(p);
    }
    return out;
}

Jet CoefficientSeries::psi(int n, double t, cplx xi0, int D) const {
    return psi_all(t, xi0, D)[static_cast<std::size_t>(n)];
}

double CoefficientSeries::a0(double t) const {
    return impl_->coeffs(t, cplx(0.0, 0.0), 0).a[0];
}
double CoefficientSeries::gamma0(double t) const {
    return impl_->coeffs(t, cplx(0.0, 0.0), 0).g[0];
}
double CoefficientSeries::kappa0(double t) const {
    return impl_->coeffs(t, cplx(0.0, 0.0), 0).kap[0];
}
Jet CoefficientSeries::chi0(double t, cplx xi0, int D) const {
    return impl_->coeffs(t, xi0, D).chi[0];
}
std::pair<double, double> CoefficientSeries::contour_strip() const {
    return impl_->model.contour_strip();
}
const std::optional<GaussianFreeze>& CoefficientSeries::gauss0() const {
    return impl_->gauss0;
}
bool CoefficientSeries::fd_fallback_used() const { return impl_->fd_fallback; }
bool CoefficientSeries::lambda0_clamped() const { return impl_->lambda0_clamped; }

namespace {

bool uses_fd(const ModelSpec& m) {
    bool fd = !m.a.exact_derivatives() || !m.gamma.exact_derivatives();
    if (auto* g = std::get_if<GaussianJumpFamily>(&m.jumps))
        fd = fd || !g->lambda.exact_derivatives() || !g->m.exact_derivatives() ||
             !g->delta.exact_derivatives();
    return fd;
}

std::optional<GaussianFreeze> freeze_gauss(const ModelSpec& m, double xbar) {
    auto* g = std::get_if<GaussianJumpFamily>(&m.jumps);
    if (!g) return std::nullopt;
    GaussianFreeze fr;
    CoefficientFn lam = g->lambda;
    fr.lambda0 = [lam, xbar](double t) { return lam(t, xbar); };
    fr.m0 = (g->m)(0.0, xbar);
    fr.delta0 = (g->delta)(0.0, xbar);
    return fr;
}

} // namespace

CoefficientSeries expand_taylor(const ModelSpec& model, double xbar, int N) {
    if (N < 0) throw ExpansionError("expand_taylor: order must be >= 0");
    auto impl = std::make_shared<CoefficientSeries::Impl>();
    impl->model = model;
    impl->kind = SchemeKind::Taylor;
    impl->N = N;
    impl->xbar = xbar;
    for (int n = 0; n <= N; ++n) impl->basis.push_back(Polynomial::monomial(n));
    impl->time_homog = model.time_independent();
    impl->fd_fallback = uses_fd(model);
    impl->gauss0 = freeze_gauss(model, xbar);
    return CoefficientSeries(impl);
}

CoefficientSeries expand_time_taylor(const ModelSpec& model,
                                     std::function<double(double)> trajectory, int N) {
    if (!trajectory) throw ExpansionError("expand_time_taylor: missing trajectory");
    auto impl = std::make_shared<CoefficientSeries::Impl>();
    impl->model = model;
    impl->kind = SchemeKind::TimeTaylor;
    impl->N = N;
    impl->trajectory = std::move(trajectory);
    for (int n = 0; n <= N; ++n) impl->basis.push_back(Polynomial::monomial(n));
    // Time-homogeneity requires a time-constant trajectory; probe it.
    double v0 = impl->trajectory(model.domain.t_lo);
    double v1 = impl->trajectory(0.5 * (model.domain.t_lo + model.domain.t_hi));
    double v2 = impl->trajectory(model.domain.t_hi);
    bool const_traj = (v0 == v1) && (v1 == v2);
    impl->xbar = v0;
    impl->time_homog = model.time_independent() && const_traj;
    impl->fd_fallback = uses_fd(model);
    if (const_traj) impl->gauss0 = freeze_gauss(model, v0);
    return CoefficientSeries(impl);
}

CoefficientSeries expand_hermite(const ModelSpec& model, double xbar, double weightStd,
                                 int N) {
    if (weightStd <= 0.0) throw ExpansionError("expand_hermite: weightStd must be > 0");
    auto impl = std::make_shared<CoefficientSeries::Impl>();
    impl->model = model;
    impl->kind = SchemeKind::Hermite;
    impl->N = N;
    impl->xbar = xbar;
    impl->weight_std = weightStd;
    for (int n = 0; n <= N; ++n)
        impl->basis.push_back(hermite_orthonormal(n, weightStd));
    impl->time_homog = model.time_independent();
    impl->fd_fallback = false; // projections need values only

    // Node-doubling until the scalar projections settle.
    const double t_ref = model.domain.t_lo;
    auto project = [&](int nodes) {
        std::vector<double> p(static_cast<std::size_t>(2 * (N + 1)), 0.0);
        const QuadRule& rule = gauss_hermite_prob(nodes);
        for (int i = 0; i < rule.nodes.size(); ++i) {
            double u = weightStd * rule.nodes(i);
            double x = xbar + u;
            double w = rule.weights(i);
            double av = model.a(t_ref, x), gv = model.gamma(t_ref, x);
            for (int n = 0; n <= N; ++n) {
                double hw = w * impl->basis[static_cast<std::size_t>(n)](u);
                p[static_cast<std::size_t>(2 * n)] += hw * av;
                p[static_cast<std::size_t>(2 * n + 1)] += hw * gv;
            }
        }
        return p;
    };
    int nodes = 32;
    auto prev = project(nodes);
    bool converged = false;
    while (nodes <= 128) {
        nodes *= 2;
        auto cur = project(nodes);
        double rel = 0.0;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            double scale = std::max(1e-12, std::abs(cur[k]));
            rel = std::max(rel, std::abs(cur[k] - prev[k]) / scale);
        }
        prev = cur;
        if (rel < 1e-10) { converged = true; break; }
    }
    if (!converged)
        throw ExpansionError("expand_hermite: quadrature did not converge at 256 nodes");
    impl->hermite_nodes = nodes;

    // Order-0 jump coefficient must stay a nonnegative measure; clamp if the
    // projection turned negative.
    if (auto* g = std::get_if<GaussianJumpFamily>(&model.jumps)) {
        const QuadRule& rule = gauss_hermite_prob(nodes);
        double lam0 = 0.0;
        for (int i = 0; i < rule.nodes.size(); ++i)
            lam0 += rule.weights(i) * g->lambda(t_ref, xbar + weightStd * rule.nodes(i));
        if (lam0 < 0.0) impl->lambda0_clamped = true;
    }
    return CoefficientSeries(impl);
}

std::function<double(double)> default_time_trajectory(const ModelSpec& model, double t0,
                                                      double x0) {
    ModelSpec m = model;
    return [m, t0, x0](double s) {
        if (s <= t0) return x0;
        const QuadRule rule = gauss_legendre(8, t0, s);
        double acc = 0.0;
        for (int i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights(i) * martingale_drift(m, rule.nodes(i), x0);
        return x0 + acc;
    };
}

} // namespace levyx
