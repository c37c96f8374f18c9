#include "levyx/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "levyx/errors.hpp"
#include "levyx/parallel.hpp"
#include "levyx/rng.hpp"

namespace levyx {

namespace {

double payoff_value(PayoffKind kind, double K, bool defaulted, double xT) {
    switch (kind) {
        case PayoffKind::Put:
            return defaulted ? K : std::max(K - std::exp(xT), 0.0);
        case PayoffKind::Call:
            return defaulted ? 0.0 : std::max(std::exp(xT) - K, 0.0);
        case PayoffKind::Digital:
            return defaulted ? 1.0 : (std::exp(xT) < K ? 1.0 : 0.0);
        case PayoffKind::Constant:
            return defaulted ? 0.0 : 1.0; // survival indicator
        case PayoffKind::Density:
            throw DomainError("monte carlo: density payoff not supported");
    }
    return 0.0;
}

struct BatchSums {
    std::vector<double> sum, sum2;
    std::int64_t defaulted = 0;
    std::int64_t candidates = 0, accepted = 0, breaches = 0;
};

// Deterministic reduction: fixed-size batches accumulated in batch order.
template <class PathFn>
std::vector<MCEstimate> run_batches(std::int64_t paths, std::size_t n_out, PathFn path_fn) {
    constexpr std::int64_t kBatch = 8192;
    const std::int64_t n_batches = (paths + kBatch - 1) / kBatch;
    std::vector<BatchSums> batches(static_cast<std::size_t>(n_batches));
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::int64_t b = next.fetch_add(1);
            if (b >= n_batches) return;
            BatchSums& out = batches[static_cast<std::size_t>(b)];
            out.sum.assign(n_out, 0.0);
            out.sum2.assign(n_out, 0.0);
            const std::int64_t lo = b * kBatch, hi = std::min(paths, lo + kBatch);
            std::vector<double> vals(n_out);
            for (std::int64_t p = lo; p < hi; ++p) path_fn(p, vals, out);
        }
    };
    int nw = worker_count_from_env();
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<MCEstimate> est(n_out);
    std::vector<double> sum(n_out, 0.0), sum2(n_out, 0.0);
    std::int64_t defaulted = 0, cand = 0, acc = 0, breaches = 0;
    for (const auto& b : batches) {
        for (std::size_t j = 0; j < n_out; ++j) {
            sum[j] += b.sum[j];
            sum2[j] += b.sum2[j];
        }
        defaulted += b.defaulted;
        cand += b.candidates;
        acc += b.accepted;
        breaches += b.breaches;
    }
    for (std::size_t j = 0; j < n_out; ++j) {
        double n = static_cast<double>(paths);
        double mean = sum[j] / n;
        double var = std::max(0.0, sum2[j] / n - mean * mean);
        double se = std::sqrt(var / n);
        est[j].mean = mean;
        est[j].stderr_ = se;
        est[j].ci_lo = mean - 1.96 * se;
        est[j].ci_hi = mean + 1.96 * se;
        est[j].n_paths = paths;
        est[j].n_defaulted = defaulted;
        est[j].lambda_bound_breaches = breaches;
        est[j].thinning_acceptance =
            cand > 0 ? static_cast<double>(acc) / static_cast<double>(cand) : 0.0;
    }
    return est;
}

} // namespace

std::vector<MCEstimate> simulate_price_multi(const ModelSpec& model, PayoffKind kind,
                                             const std::vector<double>& strikes, double t,
                                             double x, double T, const SimConfig& cfg) {
    const auto* fam = std::get_if<GaussianJumpFamily>(&model.jumps);
    const bool has_jumps = fam != nullptr;
    if (!has_jumps && model.has_jumps())
        throw DomainError("simulate_price: needs a Gaussian jump family (or none)");

    double lambda_max = cfg.lambda_max;
    if (has_jumps && lambda_max <= 0.0) {
        // bound from the domain lattice, with headroom
        for (int i = 0; i <= 200; ++i) {
            double xx = model.domain.x_lo +
                        (model.domain.x_hi - model.domain.x_lo) * i / 200.0;
            lambda_max = std::max(lambda_max, fam->lambda(t, xx));
        }
        lambda_max *= 1.5;
    }

    const int n_steps =
        std::max(1, static_cast<int>(std::lround((T - t) * cfg.steps_per_year)));
    const double dt = (T - t) / n_steps;
    ModelSpec m = model;
    const bool anti = cfg.antithetic;

    auto path_fn = [&, lambda_max](std::int64_t p, std::vector<double>& vals,
                                   BatchSums& out) {
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(anti ? p / 2 : p));
        const double flip = (anti && (p % 2 == 1)) ? -1.0 : 1.0;
        double X = x;
        double H = 0.0; // integrated hazard, trapezoidal
        double lam_bound = lambda_max;
        double g_prev = m.gamma(t, X);
        const double Ebar = rng.exponential();
        for (int k = 0; k < n_steps; ++k) {
            const double tk = t + k * dt;
            const double a = m.a(tk, X);
            double drift;
            double jump_sum = 0.0;
            if (has_jumps) {
                double lam = fam->lambda(tk, X);
                while (lam > lam_bound) {
                    lam_bound *= 2.0;
                    ++out.breaches;
                }
                const double mm = (fam->m)(0.0, X);
                const double dd = (fam->delta)(0.0, X);
                // compensated-jump SDE: per-step drift is mu - lambda m
                drift = m.gamma(tk, X) - a -
                        lam * (std::exp(mm + 0.5 * dd * dd) - 1.0);
                int cand = rng.poisson(lam_bound * dt);
                out.candidates += cand;
                for (int j = 0; j < cand; ++j) {
                    if (rng.uniform() * lam_bound <= lam) {
                        ++out.accepted;
                        jump_sum += mm + dd * (flip * rng.normal());
                    }
                }
            } else {
                drift = m.gamma(tk, X) - a;
            }
            X += drift * dt + std::sqrt(2.0 * a * dt) * (flip * rng.normal()) + jump_sum;
            const double g_new = m.gamma(tk + dt, X);
            H += 0.5 * (g_prev + g_new) * dt;
            g_prev = g_new;
        }
        const bool defaulted = H >= Ebar;
        if (defaulted) ++out.defaulted;
        for (std::size_t j = 0; j < strikes.size(); ++j) {
            double v = payoff_value(kind, strikes[j], defaulted, X);
            vals[j] = v;
            out.sum[j] += v;
            out.sum2[j] += v * v;
        }
    };
    return run_batches(cfg.paths, strikes.size(), path_fn);
}

MCEstimate simulate_price(const ModelSpec& model, PayoffKind kind, double K, double t,
                          double x, double T, const SimConfig& cfg) {
    return simulate_price_multi(model, kind, {K}, t, x, T, cfg)[0];
}

std::vector<MCEstimate> simulate_nig_frozen_multi(const ModelSpec& model, PayoffKind kind,
                                                  const std::vector<double>& strikes,
                                                  double t, double x, double T,
                                                  const SimConfig& cfg) {
    const auto* fam = std::get_if<LevySymbolFamily>(&model.jumps);
    if (!fam || !(fam->nig_alpha > 0.0))
        throw DomainError("simulate_nig_frozen: needs an NIG symbol family");

    const int n_steps =
        std::max(1, static_cast<int>(std::lround((T - t) * cfg.steps_per_year)));
    const double dt = (T - t) / n_steps;
    ModelSpec m = model;

    auto path_fn = [&](std::int64_t p, std::vector<double>& vals, BatchSums& out) {
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(p));
        double X = x;
        double H = 0.0;
        double g_prev = m.gamma(t, X);
        const double Ebar = rng.exponential();
        for (int k = 0; k < n_steps; ++k) {
            const double tk = t + k * dt;
            // freeze chi at (tk, X); exact increment for the frozen symbol
            const double kap = jump_symbol(m, tk, X, cplx(0.0, -1.0)).real();
            const double mu = m.gamma(tk, X) - m.a(tk, X) - kap;
            // recover (alpha, beta, delta_loc) from the frozen symbol family
            const double alpha = fam->nig_alpha;
            const double beta = fam->nig_beta;
            const double del = fam->nig_delta(tk, X);
            const double gtil = std::sqrt(alpha * alpha - beta * beta);
            // NIG drift part of chi: chi(xi) = omega(xi) - i xi m1
            const double m1 = del * beta / gtil;
            double dX = (mu - m1) * dt;
            if (m.a(tk, X) > 0.0)
                dX += std::sqrt(2.0 * m.a(tk, X) * dt) * rng.normal();
            if (del > 0.0) {
                const double ig = rng.inverse_gaussian(del * dt / gtil, del * dt * del * dt);
                dX += beta * ig + std::sqrt(ig) * rng.normal();
            }
            X += dX;
            const double g_new = m.gamma(tk + dt, X);
            H += 0.5 * (g_prev + g_new) * dt;
            g_prev = g_new;
        }
        const bool defaulted = H >= Ebar;
        if (defaulted) ++out.defaulted;
        for (std::size_t j = 0; j < strikes.size(); ++j) {
            double v = payoff_value(kind, strikes[j], defaulted, X);
            vals[j] = v;
            out.sum[j] += v;
            out.sum2[j] += v * v;
        }
    };
    return run_batches(cfg.paths, strikes.size(), path_fn);
}

MCEstimate simulate_nig_frozen(const ModelSpec& model, PayoffKind kind, double K,
                               double t, double x, double T, const SimConfig& cfg) {
    return simulate_nig_frozen_multi(model, kind, {K}, t, x, T, cfg)[0];
}

} // namespace levyx
