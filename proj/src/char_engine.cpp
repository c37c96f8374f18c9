#include "levyx/char_engine.hpp"

#include <cmath>

#include "levyx/errors.hpp"
#include "levyx/quadrature.hpp"

namespace levyx {

IndexSets index_sets(int n) {
    if (n < 1 || n > 12) throw DomainError("index_sets: n must be in [1,12]");
    IndexSets out;
    out.n = n;
    out.by_length.resize(static_cast<std::size_t>(n));
    std::vector<int> cur;
    // depth-first enumeration of compositions in lexicographic order
    std::function<void(int)> rec = [&](int rem) {
        if (rem == 0) {
            out.by_length[cur.size() - 1].push_back(cur);
            return;
        }
        for (int i = 1; i <= rem; ++i) {
            cur.push_back(i);
            rec(rem - i);
            cur.pop_back();
        }
    };
    rec(n);
    return out;
}

// ---------------------------------------------------------------------------
// Order0Exponent
// ---------------------------------------------------------------------------

Order0Exponent::Order0Exponent(CoefficientSeries series, int timeQ)
    : series_(std::move(series)), timeQ_(timeQ) {}

double Order0Exponent::mv(double t, double s) const {
    if (s == t) return 0.0;
    if (series_.time_homogeneous()) {
        double mu0 = series_.gamma0(t) - series_.a0(t) - series_.kappa0(t);
        return (s - t) * mu0;
    }
    QuadRule rule = gauss_legendre(timeQ_, t, s);
    double acc = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
        double tau = rule.nodes(i);
        acc += rule.weights(i) *
               (series_.gamma0(tau) - series_.a0(tau) - series_.kappa0(tau));
    }
    return acc;
}

double Order0Exponent::Cv(double t, double s) const {
    if (s == t) return 0.0;
    if (series_.time_homogeneous()) return (s - t) * 2.0 * series_.a0(t);
    QuadRule rule = gauss_legendre(timeQ_, t, s);
    double acc = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights(i) * 2.0 * series_.a0(rule.nodes(i));
    return acc;
}

double Order0Exponent::kill(double t, double s) const {
    if (s == t) return 0.0;
    if (series_.time_homogeneous()) return (s - t) * series_.gamma0(t);
    QuadRule rule = gauss_legendre(timeQ_, t, s);
    double acc = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights(i) * series_.gamma0(rule.nodes(i));
    return acc;
}

Jet Order0Exponent::Psi(double t, double s, cplx xi0, int D) const {
    if (s == t) return Jet(xi0, D);
    if (series_.time_homogeneous()) return series_.chi0(t, xi0, D) * (s - t);
    QuadRule rule = gauss_legendre(timeQ_, t, s);
    Jet acc(xi0, D);
    for (int i = 0; i < rule.nodes.size(); ++i)
        acc += series_.chi0(rule.nodes(i), xi0, D) * rule.weights(i);
    return acc;
}

Jet Order0Exponent::F(double t, double s, cplx xi0, int D) const {
    Jet psi = Psi(t, s, xi0, D + 1);
    Jet out = psi.derivative() * cplx(0.0, -1.0);
    out += cplx(mv(t, s), 0.0);
    Jet xi = Jet::variable(xi0, D);
    out += xi * cplx(0.0, Cv(t, s));
    return out;
}

Order0Exponent build_order0(const CoefficientSeries& series, double t, double T,
                            int timeQ) {
    if (!(T > t)) throw DomainError("build_order0: require T > t");
    return Order0Exponent(series, timeQ);
}

// ---------------------------------------------------------------------------
// CharApprox
// ---------------------------------------------------------------------------

CharApprox::CharApprox(CoefficientSeries series, int N, int timeQ)
    : series_(std::move(series)), N_(N), timeQ_(timeQ), exponent_(series_, timeQ) {
    if (N < 0 || N > max_supported_order)
        throw DomainError("CharApprox: order must be in [0," +
                          std::to_string(max_supported_order) + "]");
    if (N > series_.order())
        throw DomainError("CharApprox: expansion order smaller than requested N");
}

int CharApprox::jet_order() const {
    // Derivative budget: the largest total basis degree over all composition
    // chains, plus one for margin.  For Taylor/Hermite bases this is N.
    std::vector<int> maxdeg(static_cast<std::size_t>(N_) + 1, 0);
    for (int n = 1; n <= N_; ++n) {
        int best = 0;
        for (int i = 1; i <= n; ++i) {
            int d = series_.basis(i).degree() + maxdeg[static_cast<std::size_t>(n - i)];
            best = std::max(best, d);
        }
        maxdeg[static_cast<std::size_t>(n)] = best;
    }
    int D = std::max(N_, maxdeg[static_cast<std::size_t>(N_)]) + 1;
    if (D > Jet::max_order)
        throw JetError("jet budget " + std::to_string(D) + " exceeds capacity");
    return D;
}

cplx CharApprox::phat0(double t, double x, double T, cplx xi) const {
    const cplx i(0.0, 1.0);
    cplx expo = i * xi * (x + exponent_.mv(t, T)) - 0.5 * exponent_.Cv(t, T) * xi * xi -
                exponent_.kill(t, T);
    expo += exponent_.Psi(t, T, xi, 0).value();
    return std::exp(expo);
}

namespace {

// One application of (Mhat(t,s) - xbar): g -> (F - xbar) g - i g'.
Jet apply_M_minus_center(const Jet& F, double xbar, const Jet& g) {
    Jet out = F * g;
    Jet shift = g * cplx(-xbar, 0.0);
    out += shift;
    out += g.derivative() * cplx(0.0, -1.0);
    return out;
}

Jet apply_basis_of_M(const Polynomial& p, const Jet& F, double xbar, const Jet& g) {
    Jet acc = g * cplx(p[0], 0.0);
    Jet power = g;
    for (int k = 1; k <= p.degree(); ++k) {
        power = apply_M_minus_center(F, xbar, power);
        if (p[k] != 0.0) acc += power * cplx(p[k], 0.0);
    }
    return acc;
}

} // namespace

Jet CharApprox::apply_Ghat(int i, double t, double s, const Jet& state) const {
    if (i < 1 || i > N_) throw DomainError("apply_Ghat: index out of range");
    const int D = state.order();
    Jet F = exponent_.F(t, s, state.center(), D);
    Jet psi = series_.psi(i, s, state.center(), D);
    double xbar = series_.center(s);
    Jet inner = apply_basis_of_M(series_.basis(i), F, xbar, state);
    return psi * inner;
}

std::vector<cplx> CharApprox::corrections(double t, double x, double T, cplx xi) const {
    std::vector<cplx> out(static_cast<std::size_t>(N_) + 1, cplx(0.0, 0.0));
    out[0] = cplx(1.0, 0.0);
    if (N_ == 0) return out;
    if (!(T > t)) throw DomainError("corrections: require T > t");

    const int D = jet_order();
    Jet E(xi, D);
    {
        // jet of e^{i x (xi - xi0)}: the e^{i x xi0} factor divides out of c_n
        cplx ix(0.0, 0.0);
        ix = cplx(0.0, 1.0) * x;
        E[0] = cplx(1.0, 0.0);
        for (int k = 1; k <= D; ++k) E[k] = E[k - 1] * ix * (1.0 / k);
    }

    const QuadRule& base = gauss_legendre(timeQ_);
    const bool homog = series_.time_homogeneous();

    // Time-homogeneous fast path: psi and the F slope are time-constant.
    std::vector<Jet> psis;
    Jet Fhat(xi, 0);
    double xbar_const = series_.center(t);
    if (homog) {
        psis = series_.psi_all(t, xi, D);
        Jet chi0 = series_.chi0(t, xi, D + 1);
        Fhat = chi0.derivative() * cplx(0.0, -1.0);
        double mu0 = series_.gamma0(t) - series_.a0(t) - series_.kappa0(t);
        Fhat += cplx(mu0, 0.0);
        Jet xiv = Jet::variable(xi, D);
        Fhat += xiv * cplx(0.0, 2.0 * series_.a0(t));
    }

    // W(b, u) = sum_{j=1..b} int_t^u Ghat_j(t,s) W(b-j, s) ds, W(0,.) = E.
    // The operator at the latest time is applied last, matching the symbol
    // transcription of the composition chain.
    std::function<std::vector<Jet>(int, double)> W = [&](int bmax,
                                                         double u) -> std::vector<Jet> {
        std::vector<Jet> acc(static_cast<std::size_t>(bmax) + 1, Jet(xi, D));
        acc[0] = E;
        if (bmax == 0) return acc;
        for (int q = 0; q < base.nodes.size(); ++q) {
            const double s = 0.5 * (t + u) + 0.5 * (u - t) * base.nodes(q);
            const double w = 0.5 * (u - t) * base.weights(q);
            std::vector<Jet> child = W(bmax - 1, s);
            Jet F(xi, 0);
            double xbar = xbar_const;
            std::vector<Jet> const* psis_s = &psis;
            std::vector<Jet> psis_local;
            if (homog) {
                F = Fhat * (s - t);
            } else {
                F = exponent_.F(t, s, xi, D);
                xbar = series_.center(s);
                psis_local = series_.psi_all(s, xi, D);
                psis_s = &psis_local;
            }
            for (int b = 1; b <= bmax; ++b) {
                for (int j = 1; j <= b; ++j) {
                    Jet inner = apply_basis_of_M(series_.basis(j), F, xbar,
                                                 child[static_cast<std::size_t>(b - j)]);
                    Jet term = (*psis_s)[static_cast<std::size_t>(j)] * inner;
                    acc[static_cast<std::size_t>(b)] += term * w;
                }
            }
        }
        return acc;
    };

    std::vector<Jet> res = W(N_, T);
    for (int n = 1; n <= N_; ++n) out[static_cast<std::size_t>(n)] =
        res[static_cast<std::size_t>(n)].value();
    return out;
}

cplx CharApprox::correction(int n, double t, double x, double T, cplx xi) const {
    if (n < 0 || n > N_) throw DomainError("correction: order out of range");
    return corrections(t, x, T, xi)[static_cast<std::size_t>(n)];
}

cplx CharApprox::phat(int n, double t, double x, double T, cplx xi) const {
    if (n == 0) return phat0(t, x, T, xi);
    return phat0(t, x, T, xi) * correction(n, t, x, T, xi);
}

} // namespace levyx
