#include "levyx/analytics.hpp"

#include <cmath>

#include "levyx/errors.hpp"
#include "levyx/quadrature.hpp"

namespace levyx {

CompoundPoissonParams cp_params(const CoefficientSeries& series) {
    const auto& fr = series.gauss0();
    if (!fr)
        throw DomainError("cp_params: expansion has no frozen Gaussian jump family");
    CompoundPoissonParams p;
    CoefficientSeries s = series;
    p.a0 = [s](double t) { return s.a0(t); };
    p.gamma0 = [s](double t) { return s.gamma0(t); };
    p.lambda0 = fr->lambda0;
    p.m0 = fr->m0;
    p.delta0 = fr->delta0;
    return p;
}

namespace {

double time_integral(const std::function<double(double)>& f, double t, double T) {
    QuadRule rule = gauss_legendre(8, t, T);
    double acc = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) acc += rule.weights(i) * f(rule.nodes(i));
    return acc;
}

double gauss_pdf(double u, double var) {
    return std::exp(-0.5 * u * u / var) / std::sqrt(2.0 * M_PI * var);
}

} // namespace

double cp_density(const CompoundPoissonParams& p, double t, double x, double T, double y) {
    if (!(T > t)) throw DomainError("cp_density: require T > t");
    const double IA = time_integral(p.a0, t, T);      // int a0
    const double IL = time_integral(p.lambda0, t, T); // int lambda0
    const double IG = time_integral(p.gamma0, t, T);  // int gamma0
    const double kap_rate = std::exp(p.m0 + 0.5 * p.delta0 * p.delta0) - 1.0 - p.m0;
    // X_T | n jumps ~ N(x + mv - m0 IL + n m0, 2 IA + n delta0^2)
    const double mean_base = x + (IG - IA - kap_rate * IL) - p.m0 * IL;
    const double var_base = 2.0 * IA;
    if (!(var_base > 0.0))
        throw DomainError("cp_density: a0 must be positive for a density at order 0");

    double acc = 0.0;
    double pois = std::exp(-IL); // Poisson weight for n = 0
    const double dens_cap = 1.0 / std::sqrt(2.0 * M_PI * var_base);
    int n = 0;
    while (true) {
        acc += pois * gauss_pdf(mean_base + n * p.m0 - y,
                                var_base + n * p.delta0 * p.delta0);
        if (n > IL) {
            // geometric bound on the remaining Poisson mass times sup density
            double ratio = IL / (n + 1.0);
            if (pois * ratio / (1.0 - ratio) * dens_cap < 1e-14) break;
        }
        ++n;
        pois *= IL / n;
        if (n > 4000) break;
    }
    return std::exp(-IG) * acc;
}

// ---------------------------------------------------------------------------

double envelope_conv_gamma_bar(int k, double Mbar, double t, double x, double T,
                               double y) {
    if (!(T > t)) throw DomainError("envelope: require T > t");
    if (!(Mbar > 0.0)) throw DomainError("envelope: Mbar must be positive");
    const double tau = T - t;
    const double lt = Mbar * tau;
    double acc = 0.0;
    double w = std::exp(-lt); // (Mbar tau)^n / n! * e^{-Mbar tau}
    int n = 0;
    while (true) {
        const double var = Mbar * (tau + n + k);
        const double shift = x - y + Mbar * (n + k);
        acc += w * gauss_pdf(shift, var);
        if (n > lt && w < 1e-18) break;
        ++n;
        w *= lt / n;
        if (n > 4000) break;
    }
    return acc;
}

double envelope_gamma_tilde(double Mbar, double t, double x, double T, double y) {
    if (!(T > t)) throw DomainError("envelope: require T > t");
    const double tau = T - t;
    const double lt = Mbar * tau;
    double acc = 0.0;
    double wk = 1.0; // (Mbar tau)^{k/2} / sqrt(k!)
    for (int k = 0; k <= 400; ++k) {
        double wn = std::exp(-lt); // (Mbar tau)^n / n!
        double inner = 0.0;
        int n = 0;
        while (true) {
            const double var = Mbar * (tau + n + k + 1);
            const double shift = x - y + Mbar * (n + k + 1);
            inner += wn * gauss_pdf(shift, var);
            if (n > lt && wn < 1e-18) break;
            ++n;
            wn *= lt / n;
            if (n > 4000) break;
        }
        acc += wk * inner;
        if (k > std::sqrt(lt) && wk < 1e-15 * std::max(1.0, acc)) break;
        wk *= std::sqrt(lt) / std::sqrt(static_cast<double>(k + 1));
    }
    return acc;
}

// ---------------------------------------------------------------------------

double hyp1f1(double a, double b, double z) {
    if (b <= 0.0 && b == std::floor(b))
        throw DomainError("hyp1f1: b must not be a nonpositive integer");
    double term = 1.0, acc = 1.0;
    for (int k = 0; k < 200000; ++k) {
        term *= (a + k) * z / ((b + k) * (k + 1));
        acc += term;
        if (term == 0.0) break; // terminated polynomial (a nonpositive integer)
        if (k > 4 && std::abs(term) < 1e-17 * std::max(1.0, std::abs(acc))) break;
        if (k == 199999)
            throw DomainError("hyp1f1: series did not converge");
    }
    return acc;
}

namespace {

double jdcev_term(const JdcevParams& p, double x, double tau, int n) {
    const double ab = std::abs(p.beta);
    const double s = 1.0 / (2.0 * ab);
    const double eta = p.c / ab;
    const double nu = (1.0 + 2.0 * p.c) * s;
    const double A = p.b / (p.delta * p.delta * ab);
    const double om = 2.0 * ab * p.b;
    const double z = A * std::exp(-2.0 * p.beta * x);
    const double logc = std::lgamma(1.0 + eta) + std::lgamma(n + s) - std::lgamma(nu + 1.0) -
                        std::lgamma(s) - std::lgamma(n + 1.0) + s * std::log(A) + x - z -
                        (p.b + om * n) * tau;
    return std::exp(logc) * hyp1f1(1.0 - n + eta, nu + 1.0, z);
}

} // namespace

double jdcev_exact(const JdcevParams& p, double t, double x, double T, int truncN) {
    if (!(T > t)) throw DomainError("jdcev_exact: require T > t");
    if (!(p.beta < 0.0) || !(p.b > 0.0) || p.c < 0.0)
        throw DomainError("jdcev_exact: require beta < 0, b > 0, c >= 0");
    const double tau = T - t;
    double acc = 0.0;
    for (int n = 0; n <= truncN; ++n) acc += jdcev_term(p, x, tau, n);
    return acc;
}

double jdcev_exact_converged(const JdcevParams& p, double t, double x, double T) {
    if (!(T > t)) throw DomainError("jdcev_exact: require T > t");
    const double tau = T - t;
    double acc = 0.0;
    double run = 0.0; // running max of recent |terms|
    for (int n = 0; n <= 2000; ++n) {
        double term = jdcev_term(p, x, tau, n);
        acc += term;
        run = std::max(std::abs(term), 0.8 * run);
        if (n > 40 && run < 1e-11 * std::max(1.0, std::abs(acc))) break;
    }
    return acc;
}

std::array<double, 3> jdcev_expansion(const JdcevParams& p, double t, double x,
                                      double T) {
    const double tau = T - t;
    const double be = p.beta, b = p.b, c = p.c;
    const double d2 = p.delta * p.delta;
    const double e2 = std::exp(2.0 * be * x);
    const double d4 = d2 * d2, d6 = d4 * d2, d8 = d6 * d2;
    const double e4 = e2 * e2, e6 = e4 * e2, e8 = e6 * e2;
    const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau;
    const double be2 = be * be;

    const double u0 = std::exp(-(b + d2 * c * e2) * tau);
    const double r1 =
        -d2 * b * c * e2 * t2 * be + 0.5 * d4 * c * e4 * t2 * be - d4 * c * c * e4 * t2 * be;
    const double r2 = -d4 * c * e4 * t2 * be2 - (2.0 / 3.0) * d2 * b * b * c * e2 * t3 * be2 +
                      d4 * b * c * e4 * t3 * be2 - 2.0 * d4 * b * c * c * e4 * t3 * be2 -
                      (1.0 / 3.0) * d6 * c * e6 * t3 * be2 + 2.0 * d6 * c * c * e6 * t3 * be2 -
                      (4.0 / 3.0) * d6 * c * c * c * e6 * t3 * be2 +
                      0.5 * d4 * b * b * c * c * e4 * t4 * be2 -
                      0.5 * d6 * b * c * c * e6 * t4 * be2 + d6 * b * c * c * c * e6 * t4 * be2 +
                      0.125 * d8 * c * c * e8 * t4 * be2 - 0.5 * d8 * c * c * c * e8 * t4 * be2 +
                      0.5 * d8 * c * c * c * c * e8 * t4 * be2;
    return {u0, u0 * r1, u0 * r2};
}

// ---------------------------------------------------------------------------

namespace {

cplx gauss_levy_symbol_piece(double lambda, double m, double eta, cplx xi) {
    // integral (e^{iz xi} - 1 - iz xi) of lambda N(m, eta^2)
    const cplx i(0.0, 1.0);
    const cplx imxi = i * m * xi;
    return lambda * (std::exp(imxi - 0.5 * eta * eta * xi * xi) - 1.0 - imxi);
}

cplx exp_eta_half_symbol(double b, double cc, double lambda, double m, double eta,
                         cplx xi) {
    // (1/2) b^2 (-xi^2 - i xi) + c (i xi - 1) - i xi kappa + chi(xi)
    const cplx i(0.0, 1.0);
    const double kap = lambda * (std::exp(m + 0.5 * eta * eta) - 1.0 - m);
    return 0.5 * b * b * (-xi * xi - i * xi) + cc * (i * xi - 1.0) - i * xi * kap +
           gauss_levy_symbol_piece(lambda, m, eta, xi);
}

} // namespace

double exp_eta_reference(const ExpEtaParams& p, PayoffKind kind, double K, double t,
                         double x, double T, int truncN) {
    if (!(T > t)) throw DomainError("exp_eta_reference: require T > t");
    const double tau = T - t;
    const double omega = kind == PayoffKind::Call ? -1.5 : 0.75;
    PayoffTransform payoff = payoff_transform(kind, K, omega);
    const cplx i(0.0, 1.0);

    auto pi_sym = [&](cplx xi) {
        return exp_eta_half_symbol(p.b0, p.c0, p.lambda, p.m, p.eta, xi);
    };
    auto chi_sym = [&](cplx xi) {
        return exp_eta_half_symbol(p.b1, p.c1, p.eps * p.lambda, p.m, p.eta, xi);
    };

    auto integrand = [&](double v) {
        const cplx xi(v, omega);
        cplx total(0.0, 0.0);
        double en = 1.0; // eps^n e^{n beta x}
        for (int n = 0; n <= truncN; ++n) {
            // sum_k e^{tau pi_{xi - i k beta}} / prod_{j != k} (pi_k - pi_j)
            std::vector<cplx> pis(static_cast<std::size_t>(n) + 1);
            for (int k = 0; k <= n; ++k)
                pis[static_cast<std::size_t>(k)] = pi_sym(xi - i * (k * p.beta));
            cplx sum(0.0, 0.0);
            for (int k = 0; k <= n; ++k) {
                cplx denom(1.0, 0.0);
                for (int j = 0; j <= n; ++j) {
                    if (j == k) continue;
                    cplx d = pis[static_cast<std::size_t>(k)] - pis[static_cast<std::size_t>(j)];
                    if (std::abs(d) < 1e-10)
                        throw DegeneracyError(
                            "exp_eta_reference: eigenvalue denominators nearly degenerate; "
                            "perturb beta");
                    denom *= d;
                }
                sum += std::exp(tau * pis[static_cast<std::size_t>(k)]) / denom;
            }
            cplx prod(1.0, 0.0);
            for (int k = 0; k < n; ++k) prod *= chi_sym(xi - i * (k * p.beta));
            total += en * sum * prod;
            en *= p.eps * std::exp(p.beta * x);
        }
        return total * payoff.hhat_neg(xi) * std::exp(i * xi * x);
    };

    // Adaptive composite Gauss-Legendre on the half-axis (conjugate symmetry).
    const double Cv = p.b0 * p.b0 * tau;
    double xi_max = std::sqrt(80.0 / std::max(Cv, 1e-8));
    int panels = std::max(8, static_cast<int>(std::ceil(xi_max / 2.0)));
    auto run = [&](int np) {
        const QuadRule& base = gauss_legendre(16);
        const double width = xi_max / np;
        double acc = 0.0;
        for (int pa = 0; pa < np; ++pa) {
            const double a = pa * width;
            for (int q = 0; q < base.nodes.size(); ++q) {
                const double v = a + 0.5 * width * (base.nodes(q) + 1.0);
                acc += 0.5 * width * base.weights(q) * integrand(v).real();
            }
        }
        return acc / M_PI;
    };
    double prev = run(panels);
    for (int it = 0; it < 8; ++it) {
        panels *= 2;
        double cur = run(panels);
        if (std::abs(cur - prev) < 1e-10 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

// ---------------------------------------------------------------------------

RateEstimate rate_study(const std::function<double(double)>& error_at_tau,
                        const std::vector<double>& taus) {
    if (taus.size() < 3) throw DomainError("rate_study: need at least 3 maturities");
    RateEstimate out;
    out.taus = taus;
    std::vector<double> lx, ly;
    for (double tau : taus) {
        double err = std::abs(error_at_tau(tau));
        out.errors.push_back(err);
        if (!(err > 0.0) || !std::isfinite(err))
            throw InconclusiveError("rate_study: error vanished or non-finite at tau=" +
                                    std::to_string(tau));
        lx.push_back(std::log(tau));
        ly.push_back(std::log(err));
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k]; sy += ly[k]; sxx += lx[k] * lx[k]; sxy += lx[k] * ly[k];
    }
    const double denom = n * sxx - sx * sx;
    out.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - out.slope * sx) / n;
    double sse = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        double r = ly[k] - (intercept + out.slope * lx[k]);
        sse += r * r;
    }
    if (n > 2) {
        double var = sse / (n - 2.0) * n / denom;
        out.stderr_ = std::sqrt(std::max(0.0, var));
    }
    return out;
}

} // namespace levyx
