#include "levyx/pricer.hpp"

#include <algorithm>
#include <cmath>

#include "levyx/errors.hpp"
#include "levyx/parallel.hpp"
#include "levyx/quadrature.hpp"

namespace levyx {

PayoffTransform payoff_transform(PayoffKind kind, double K, double omega) {
    if (K <= 0.0 && kind != PayoffKind::Constant)
        throw DomainError("payoff_transform: strike must be positive");
    PayoffTransform p;
    p.kind = kind;
    p.omega = omega;
    p.strike = K;
    const double logK = std::log(K);
    switch (kind) {
        case PayoffKind::Put:
            if (!(omega > 0.0))
                throw ContourError("put transform requires Im(xi) > 0");
            p.hhat_neg = [logK](cplx xi) {
                const cplx i(0.0, 1.0);
                return std::exp((1.0 - i * xi) * logK) / (-i * xi - xi * xi);
            };
            break;
        case PayoffKind::Call:
            if (!(omega < -1.0))
                throw ContourError("call transform requires Im(xi) < -1");
            p.hhat_neg = [logK](cplx xi) {
                const cplx i(0.0, 1.0);
                return std::exp((1.0 - i * xi) * logK) / (-i * xi - xi * xi);
            };
            break;
        case PayoffKind::Digital:
            if (!(omega > 0.0))
                throw ContourError("digital transform requires Im(xi) > 0");
            p.hhat_neg = [logK](cplx xi) {
                const cplx i(0.0, 1.0);
                return std::exp(-i * xi * logK) / (-i * xi);
            };
            break;
        case PayoffKind::Density:
        case PayoffKind::Constant:
            throw DomainError("payoff_transform: use density_payoff/constant_payoff");
    }
    return p;
}

PayoffTransform density_payoff(double y) {
    PayoffTransform p;
    p.kind = PayoffKind::Density;
    p.omega = 0.0;
    p.strike = y;
    p.hhat_neg = [y](cplx xi) { return std::exp(cplx(0.0, -y) * xi); };
    return p;
}

PayoffTransform constant_payoff() {
    PayoffTransform p;
    p.kind = PayoffKind::Constant;
    p.omega = 0.0;
    p.hhat_neg = nullptr; // priced as phat(.,0), no quadrature
    return p;
}

namespace {

struct XiGrid {
    std::vector<double> v;  // nodes on the positive half-axis
    std::vector<double> w;
};

XiGrid make_grid(double xi_max, int panels, int nodes_per_panel) {
    XiGrid g;
    const QuadRule& base = gauss_legendre(nodes_per_panel);
    g.v.reserve(static_cast<std::size_t>(panels * nodes_per_panel));
    g.w.reserve(g.v.capacity());
    const double width = xi_max / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = p * width, b = a + width;
        for (int q = 0; q < base.nodes.size(); ++q) {
            g.v.push_back(0.5 * (a + b) + 0.5 * width * base.nodes(q));
            g.w.push_back(0.5 * width * base.weights(q));
        }
    }
    return g;
}

} // namespace

std::vector<PriceResult> invert_many(const CharApprox& ca,
                                     const std::vector<PayoffTransform>& payoffs,
                                     double t, double x, double T,
                                     const InvertOptions& opts) {
    if (payoffs.empty()) return {};
    if (!(T > t)) throw DomainError("invert: require T > t");
    const int N = ca.order();

    // Constant payoffs never need quadrature.
    bool all_constant = true;
    for (const auto& p : payoffs)
        if (p.kind != PayoffKind::Constant) all_constant = false;
    if (all_constant) {
        std::vector<PriceResult> out;
        cplx p0 = ca.phat0(t, x, T, cplx(0.0, 0.0));
        std::vector<cplx> cs = ca.corrections(t, x, T, cplx(0.0, 0.0));
        for (std::size_t k = 0; k < payoffs.size(); ++k) {
            PriceResult r;
            r.omega = 0.0;
            r.per_order.resize(static_cast<std::size_t>(N) + 1);
            for (int n = 0; n <= N; ++n) {
                r.per_order[static_cast<std::size_t>(n)] =
                    (p0 * cs[static_cast<std::size_t>(n)]).real();
                r.total += r.per_order[static_cast<std::size_t>(n)];
            }
            out.push_back(std::move(r));
        }
        return out;
    }

    const double omega = payoffs.front().omega;
    for (const auto& p : payoffs) {
        if (p.kind == PayoffKind::Constant)
            throw DomainError("invert_many: cannot mix constant payoffs with others");
        if (p.omega != omega)
            throw ContourError("invert_many: payoffs must share one contour");
    }
    auto [strip_lo, strip_hi] = ca.series().contour_strip();
    if (omega <= strip_lo || omega >= strip_hi)
        throw ContourError("invert: contour outside the model's admissible strip");

    // Truncation: seed with the diffusion tail bound Cv Xi^2 / 2 > 40, then
    // extend by scanning |phat0| (covers NIG-like linear decay).
    const double Cv = ca.exponent().Cv(t, T);
    double xi_max = Cv > 1e-12 ? std::sqrt(80.0 / Cv) : 16.0;
    auto decay = [&](double v) {
        return std::abs(ca.phat0(t, x, T, cplx(v, omega)));
    };
    const double scale0 = std::max(decay(0.0), 1e-300);
    int guard = 0;
    while (decay(xi_max) > 1e-16 * scale0) {
        xi_max *= 2.0;
        if (++guard > 24)
            throw QuadratureError(
                "invert: integrand does not decay; density smoothing needed "
                "(a0 ~ 0 with flat jump symbol)");
    }

    // Panel density: resolve both the payoff oscillation exp(i v shift) and
    // the Gaussian envelope.
    double max_shift = 1.0;
    for (const auto& p : payoffs) {
        double s = (p.kind == PayoffKind::Density) ? std::abs(p.strike - x)
                                                   : std::abs(std::log(p.strike) - x);
        max_shift = std::max(max_shift, s);
    }
    int panels = std::max(4, static_cast<int>(std::ceil(xi_max * max_shift / 4.0)));

    auto evaluate = [&](const XiGrid& grid) {
        std::vector<PriceResult> out(payoffs.size());
        for (auto& r : out) {
            r.omega = omega;
            r.per_order.assign(static_cast<std::size_t>(N) + 1, 0.0);
        }
        // phat_n at every node first (parallel), then a deterministic serial
        // assembly over payoffs.
        std::vector<cplx> phat_nodes(grid.v.size() * static_cast<std::size_t>(N + 1));
        parallel_for(grid.v.size(), [&](std::size_t k) {
            const cplx xi(grid.v[k], omega);
            const cplx p0 = ca.phat0(t, x, T, xi);
            const std::vector<cplx> cs = ca.corrections(t, x, T, xi);
            for (int n = 0; n <= N; ++n)
                phat_nodes[k * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(n)] =
                    p0 * cs[static_cast<std::size_t>(n)];
        });
        double tail = 0.0;
        for (std::size_t k = 0; k < grid.v.size(); ++k) {
            const cplx xi(grid.v[k], omega);
            const cplx* pk = &phat_nodes[k * static_cast<std::size_t>(N + 1)];
            for (std::size_t j = 0; j < payoffs.size(); ++j) {
                const cplx h = payoffs[j].hhat_neg(xi);
                for (int n = 0; n <= N; ++n) {
                    // f(-v) = conj(f(v)) for real-valued payoffs: fold the
                    // negative half-axis into twice the real part.
                    out[j].per_order[static_cast<std::size_t>(n)] +=
                        grid.w[k] * (pk[n] * h).real() / M_PI;
                }
            }
            if (grid.v[k] > 0.9 * xi_max) tail += grid.w[k] * std::abs(pk[0]);
        }
        for (auto& r : out) {
            r.total = 0.0;
            for (double u : r.per_order) r.total += u;
            r.quad.xi_max = xi_max;
            r.quad.node_count = static_cast<int>(grid.v.size());
            r.quad.tail_estimate = tail / M_PI;
        }
        return out;
    };

    std::vector<PriceResult> prev = evaluate(make_grid(xi_max, panels, opts.nodes_per_panel));
    int refinements = 0;
    for (; refinements < opts.max_refinements; ++refinements) {
        panels *= 2;
        std::vector<PriceResult> cur = evaluate(make_grid(xi_max, panels, opts.nodes_per_panel));
        double rel = 0.0;
        for (std::size_t j = 0; j < cur.size(); ++j) {
            double scale = std::max({1.0e-12, std::abs(cur[j].total), std::abs(prev[j].total)});
            rel = std::max(rel, std::abs(cur[j].total - prev[j].total) / scale);
            for (int n = 0; n <= N; ++n)
                rel = std::max(rel, std::abs(cur[j].per_order[static_cast<std::size_t>(n)] -
                                             prev[j].per_order[static_cast<std::size_t>(n)]) /
                                        std::max(1.0, scale));
        }
        prev = std::move(cur);
        if (rel < opts.tol) break;
        if (refinements + 1 == opts.max_refinements)
            throw QuadratureError("invert: quadrature failed to converge");
    }

    // Symmetry probe: c_n(-conj(xi)) should equal conj(c_n(xi)).
    {
        const cplx probe(0.37 * xi_max, omega);
        std::vector<cplx> cp = ca.corrections(t, x, T, probe);
        std::vector<cplx> cm = ca.corrections(t, x, T, -std::conj(probe));
        double defect = 0.0;
        for (int n = 0; n <= N; ++n)
            defect = std::max(defect, std::abs(cm[static_cast<std::size_t>(n)] -
                                               std::conj(cp[static_cast<std::size_t>(n)])));
        for (auto& r : prev) {
            r.quad.symmetry_defect = defect;
            r.quad.refinements = refinements + 1;
        }
    }
    return prev;
}

PriceResult invert(const CharApprox& ca, const PayoffTransform& payoff, double t, double x,
                   double T, const InvertOptions& opts) {
    return invert_many(ca, {payoff}, t, x, T, opts)[0];
}

// ---------------------------------------------------------------------------

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

double black_scholes(PayoffKind kind, double F, double K, double tau, double sigma) {
    if (sigma <= 0.0 || tau <= 0.0) {
        double call = std::max(F - K, 0.0);
        return kind == PayoffKind::Call ? call : call - F + K;
    }
    const double sq = sigma * std::sqrt(tau);
    const double d1 = std::log(F / K) / sq + 0.5 * sq;
    const double d2 = d1 - sq;
    if (kind == PayoffKind::Call) return F * norm_cdf(d1) - K * norm_cdf(d2);
    if (kind == PayoffKind::Put) return K * norm_cdf(-d2) - F * norm_cdf(-d1);
    throw DomainError("black_scholes: kind must be Call or Put");
}

ImpliedVol implied_vol(double price, double forward, double K, double tau,
                       PayoffKind kind) {
    double lo_bound, hi_bound;
    if (kind == PayoffKind::Call) {
        lo_bound = std::max(forward - K, 0.0);
        hi_bound = forward;
    } else if (kind == PayoffKind::Put) {
        lo_bound = std::max(K - forward, 0.0);
        hi_bound = K;
    } else {
        throw DomainError("implied_vol: kind must be Call or Put");
    }
    if (!(price > lo_bound))
        throw ArbitrageError("implied_vol: price " + std::to_string(price) +
                             " at or below lower bound " + std::to_string(lo_bound));
    if (!(price < hi_bound))
        throw ArbitrageError("implied_vol: price " + std::to_string(price) +
                             " at or above upper bound " + std::to_string(hi_bound));

    double lo = 1e-10, hi = 1.0;
    while (black_scholes(kind, forward, K, tau, hi) < price) {
        hi *= 2.0;
        if (hi > 1e4) throw ArbitrageError("implied_vol: no volatility brackets price");
    }
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (black_scholes(kind, forward, K, tau, mid) < price)
            lo = mid;
        else
            hi = mid;
    }
    double sigma = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        double sq = sigma * std::sqrt(tau);
        double d1 = std::log(forward / K) / sq + 0.5 * sq;
        double vega = forward * norm_pdf(d1) * std::sqrt(tau);
        if (vega < 1e-300) break;
        double diff = black_scholes(kind, forward, K, tau, sigma) - price;
        sigma -= diff / vega;
    }
    ImpliedVol out;
    out.sigma = sigma;
    out.residual = black_scholes(kind, forward, K, tau, sigma) - price;
    return out;
}

std::vector<SmilePoint> smile(const CharApprox& ca, const std::vector<double>& strikes,
                              double t, double x, double T, PayoffKind kind,
                              const InvertOptions& opts) {
    const double omega = kind == PayoffKind::Call ? -1.5 : 0.75;
    std::vector<PayoffTransform> payoffs;
    payoffs.reserve(strikes.size());
    for (double K : strikes) payoffs.push_back(payoff_transform(kind, K, omega));
    std::vector<PriceResult> prices = invert_many(ca, payoffs, t, x, T, opts);

    const double forward = std::exp(x);
    std::vector<SmilePoint> out;
    out.reserve(strikes.size());
    for (std::size_t j = 0; j < strikes.size(); ++j) {
        SmilePoint pt;
        pt.strike = strikes[j];
        pt.log_strike = std::log(strikes[j]);
        double acc = 0.0;
        for (std::size_t n = 0; n < prices[j].per_order.size(); ++n) {
            acc += prices[j].per_order[n];
            pt.iv_per_order.push_back(
                implied_vol(acc, forward, strikes[j], T - t, kind).sigma);
        }
        out.push_back(std::move(pt));
    }
    return out;
}

} // namespace levyx
