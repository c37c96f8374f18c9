#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

#include <CLI11.hpp>
#include <json.hpp>

#include "levyx/analytics.hpp"
#include "levyx/char_engine.hpp"
#include "levyx/csv.hpp"
#include "levyx/expansion.hpp"
#include "levyx/model_json.hpp"
#include "levyx/monte_carlo.hpp"
#include "levyx/pricer.hpp"

namespace {

using namespace levyx;

struct CommonArgs {
    std::string config;
    std::string scheme = "taylor";
    std::string center = "spot";
    double weight_std = 1.0;
    int order = 3;
    double t0 = 0.0;
    double x = 0.0;
    double T = 1.0;
    std::string out;
    bool no_timestamp = false;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_model = true) {
    if (with_model)
        cmd->add_option("--config", a.config, "model JSON file")->required();
    cmd->add_option("--scheme", a.scheme, "taylor | time_taylor | hermite");
    cmd->add_option("--center", a.center, "expansion center: spot | a number");
    cmd->add_option("--weight-std", a.weight_std, "Hermite Gaussian weight std");
    cmd->add_option("--order,-N", a.order, "expansion order N");
    cmd->add_option("--t0", a.t0, "valuation time");
    cmd->add_option("--x", a.x, "log-spot");
    cmd->add_option("--T", a.T, "maturity");
    cmd->add_option("--out", a.out, "output CSV path");
    cmd->add_flag("--no-timestamp", a.no_timestamp, "suppress the timestamp header");
    cmd->add_option("--seed", a.seed, "random seed (Monte Carlo tasks)");
}

CoefficientSeries make_series(const ModelSpec& model, const CommonArgs& a) {
    double xbar = a.x;
    if (a.center != "spot") xbar = std::stod(a.center);
    if (a.scheme == "taylor") return expand_taylor(model, xbar, a.order);
    if (a.scheme == "time_taylor")
        return expand_time_taylor(model, default_time_trajectory(model, a.t0, a.x), a.order);
    if (a.scheme == "hermite") return expand_hermite(model, xbar, a.weight_std, a.order);
    throw ConfigError("unknown scheme \"" + a.scheme + "\"");
}

void provenance(CsvWriter& csv, const LoadedModel& lm, const CommonArgs& a,
                const std::string& task) {
    csv.comment("levyx " + task);
    csv.comment("model=" + lm.kind + " hash=" + std::to_string(lm.hash));
    csv.comment("scheme=" + a.scheme + " order=" + std::to_string(a.order) +
                " center=" + a.center);
    csv.comment("quad: adaptive composite Gauss-Legendre, tol=1e-9, timeQ=8");
    csv.comment("seed=" + std::to_string(a.seed));
    if (!a.no_timestamp) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        csv.comment("generated=" + std::to_string(static_cast<long long>(now)));
    }
}

void emit(const CsvWriter& csv, const std::string& path) {
    if (path.empty())
        std::cout << csv.str();
    else
        csv.write(path);
}

PayoffKind parse_kind(const std::string& s) {
    if (s == "put") return PayoffKind::Put;
    if (s == "call") return PayoffKind::Call;
    if (s == "digital") return PayoffKind::Digital;
    if (s == "survival") return PayoffKind::Constant;
    throw ConfigError("unknown payoff \"" + s + "\"");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

// ---------------------------------------------------------------------------

int run_density(const CommonArgs& a, double y_lo, double y_hi, int y_n) {
    LoadedModel lm = load_model_file(a.config);
    CharApprox ca(make_series(lm.model, a), a.order);
    std::vector<PayoffTransform> payoffs;
    auto ys = linspace(a.x + y_lo, a.x + y_hi, y_n);
    for (double y : ys) payoffs.push_back(density_payoff(y));
    auto res = invert_many(ca, payoffs, a.t0, a.x, a.T);

    CsvWriter csv;
    provenance(csv, lm, a, "density");
    std::vector<std::string> cols{"y"};
    for (int n = 0; n <= a.order; ++n) cols.push_back("p" + std::to_string(n));
    cols.push_back("total");
    csv.header(cols);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        std::vector<double> row{ys[i]};
        for (double v : res[i].per_order) row.push_back(v);
        row.push_back(res[i].total);
        csv.row(row);
    }
    emit(csv, a.out);
    return 0;
}

int run_price(const CommonArgs& a, const std::string& payoff, double K) {
    LoadedModel lm = load_model_file(a.config);
    CharApprox ca(make_series(lm.model, a), a.order);
    PayoffKind kind = parse_kind(payoff);
    PayoffTransform pt = kind == PayoffKind::Constant
                             ? constant_payoff()
                             : payoff_transform(kind, K, kind == PayoffKind::Call ? -1.5 : 0.75);
    PriceResult r = invert(ca, pt, a.t0, a.x, a.T);
    CsvWriter csv;
    provenance(csv, lm, a, "price");
    std::vector<std::string> cols{"K"};
    for (int n = 0; n <= a.order; ++n) cols.push_back("u" + std::to_string(n));
    cols.push_back("total");
    csv.header(cols);
    std::vector<double> row{K};
    for (double v : r.per_order) row.push_back(v);
    row.push_back(r.total);
    csv.row(row);
    emit(csv, a.out);
    return 0;
}

int run_smile(const CommonArgs& a, const std::string& payoff, double k_lo, double k_hi,
              int k_n) {
    LoadedModel lm = load_model_file(a.config);
    CharApprox ca(make_series(lm.model, a), a.order);
    PayoffKind kind = parse_kind(payoff);
    std::vector<double> strikes;
    for (double k : linspace(k_lo, k_hi, k_n)) strikes.push_back(std::exp(k));
    auto pts = smile(ca, strikes, a.t0, a.x, a.T, kind);
    CsvWriter csv;
    provenance(csv, lm, a, "smile");
    std::vector<std::string> cols{"k", "K", "iv_order0"};
    for (int n = 1; n <= a.order; ++n) cols.push_back("iv_order" + std::to_string(n));
    csv.header(cols);
    for (const auto& p : pts) {
        std::vector<double> row{p.log_strike, p.strike};
        for (double v : p.iv_per_order) row.push_back(v);
        csv.row(row);
    }
    emit(csv, a.out);
    return 0;
}

int run_survival(const CommonArgs& a) {
    LoadedModel lm = load_model_file(a.config);
    CharApprox ca(make_series(lm.model, a), a.order);
    PriceResult r = invert(ca, constant_payoff(), a.t0, a.x, a.T);
    CsvWriter csv;
    provenance(csv, lm, a, "survival");
    std::vector<std::string> cols{"T"};
    for (int n = 0; n <= a.order; ++n) cols.push_back("u" + std::to_string(n));
    cols.push_back("total");
    cols.push_back("yield");
    csv.header(cols);
    std::vector<double> row{a.T};
    for (double v : r.per_order) row.push_back(v);
    row.push_back(r.total);
    row.push_back(-std::log(r.total) / (a.T - a.t0));
    csv.row(row);
    emit(csv, a.out);
    return 0;
}

int run_yields(const CommonArgs& a, double T_lo, double T_hi, int T_n) {
    LoadedModel lm = load_model_file(a.config);
    CsvWriter csv;
    provenance(csv, lm, a, "yields");
    csv.header({"tau", "Y", "Y0", "Y1", "Y2", "yield_engine"});
    for (double T : linspace(T_lo, T_hi, T_n)) {
        CommonArgs at = a;
        at.T = T;
        CharApprox ca(make_series(lm.model, at), std::min(a.order, 2));
        PriceResult r = invert(ca, constant_payoff(), a.t0, a.x, T);
        const double tau = T - a.t0;
        JdcevParams jp; // exact column only defined for the jdcev kind
        double Y = std::numeric_limits<double>::quiet_NaN();
        if (lm.kind == "jdcev") {
            auto j = nlohmann::json::parse(lm.canonical);
            jp.b = j.at("b").get<double>();
            jp.c = j.at("c").get<double>();
            jp.delta = j.at("delta").get<double>();
            jp.beta = j.at("beta").get<double>();
            Y = -std::log(jdcev_exact_converged(jp, a.t0, a.x, T)) / tau;
        }
        double acc = 0.0;
        std::vector<double> row{tau, Y};
        for (int n = 0; n <= 2 && n < static_cast<int>(r.per_order.size()); ++n) {
            acc += r.per_order[static_cast<std::size_t>(n)];
            row.push_back(-std::log(acc) / tau);
        }
        row.push_back(-std::log(r.total) / tau);
        csv.row(row);
    }
    emit(csv, a.out.empty() ? "yields.csv" : a.out);
    return 0;
}

int run_table_yields(const CommonArgs& a, int truncN) {
    LoadedModel lm = load_model_file(a.config);
    if (lm.kind != "jdcev") throw ConfigError("table-yields expects a jdcev model");
    auto j = nlohmann::json::parse(lm.canonical);
    JdcevParams jp;
    jp.b = j.at("b").get<double>();
    jp.c = j.at("c").get<double>();
    jp.delta = j.at("delta").get<double>();
    jp.beta = j.at("beta").get<double>();

    CsvWriter csv;
    provenance(csv, lm, a, "table-yields");
    csv.comment("exact series truncN=" + std::to_string(truncN) +
                " (converged when truncN<0)");
    csv.header({"tau", "Y", "Y_minus_Y0", "Y_minus_Y1", "Y_minus_Y2"});
    for (int tau = 1; tau <= 10; ++tau) {
        const double T = a.t0 + tau;
        double u = truncN < 0 ? jdcev_exact_converged(jp, a.t0, a.x, T)
                              : jdcev_exact(jp, a.t0, a.x, T, truncN);
        double Y = -std::log(u) / tau;
        auto uo = jdcev_expansion(jp, a.t0, a.x, T);
        double acc = 0.0;
        std::vector<double> row{static_cast<double>(tau), Y};
        for (int n = 0; n <= 2; ++n) {
            acc += uo[static_cast<std::size_t>(n)];
            row.push_back(Y + std::log(acc) / tau);
        }
        csv.row(row);
    }
    emit(csv, a.out.empty() ? "yields.csv" : a.out);
    return 0;
}

int run_table_density(const CommonArgs& a, int orders) {
    LoadedModel lm = load_model_file(a.config);
    CsvWriter csv;
    provenance(csv, lm, a, "table-density");
    csv.header({"n", "tau1", "tau3", "tau5"});
    const std::vector<double> taus{1.0, 3.0, 5.0};
    std::vector<std::vector<double>> sup(static_cast<std::size_t>(orders),
                                         std::vector<double>(taus.size(), 0.0));
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        CommonArgs at = a;
        at.order = orders;
        at.T = a.t0 + taus[ti];
        CharApprox ca(make_series(lm.model, at), orders);
        auto ys = linspace(a.x - 4.0, a.x + 4.0, 801);
        std::vector<PayoffTransform> payoffs;
        for (double y : ys) payoffs.push_back(density_payoff(y));
        auto res = invert_many(ca, payoffs, a.t0, a.x, at.T);
        for (int n = 1; n <= orders; ++n)
            for (std::size_t i = 0; i < ys.size(); ++i)
                sup[static_cast<std::size_t>(n - 1)][ti] =
                    std::max(sup[static_cast<std::size_t>(n - 1)][ti],
                             std::abs(res[i].per_order[static_cast<std::size_t>(n)]));
    }
    for (int n = 1; n <= orders; ++n)
        csv.row({static_cast<double>(n), sup[static_cast<std::size_t>(n - 1)][0],
                 sup[static_cast<std::size_t>(n - 1)][1],
                 sup[static_cast<std::size_t>(n - 1)][2]});
    emit(csv, a.out.empty() ? "density_convergence.csv" : a.out);
    return 0;
}

int run_rate_study(const CommonArgs& a, const std::string& payoff, double K,
                   int tau_count) {
    LoadedModel lm = load_model_file(a.config);
    CsvWriter csv;
    provenance(csv, lm, a, "rate-study");
    csv.header({"N", "slope", "stderr"});
    std::vector<double> taus;
    for (int k = 0; k < tau_count; ++k) taus.push_back(std::pow(2.0, -4 - k));
    const int refN = 5;
    for (int N = 0; N <= std::min(a.order, refN - 1); ++N) {
        auto err = [&](double tau) {
            CommonArgs at = a;
            at.order = refN;
            at.T = a.t0 + tau;
            CharApprox ca(make_series(lm.model, at), refN);
            if (payoff == "density_at_spot") {
                auto r = invert(ca, density_payoff(a.x), a.t0, a.x, at.T);
                double acc = 0.0, full = 0.0;
                for (int n = 0; n <= refN; ++n) {
                    full += r.per_order[static_cast<std::size_t>(n)];
                    if (n <= N) acc += r.per_order[static_cast<std::size_t>(n)];
                }
                return acc - full;
            }
            PayoffKind kind = parse_kind(payoff);
            auto r = invert(ca, payoff_transform(kind, K, kind == PayoffKind::Call ? -1.5 : 0.75),
                            a.t0, a.x, at.T);
            double acc = 0.0, full = 0.0;
            for (int n = 0; n <= refN; ++n) {
                full += r.per_order[static_cast<std::size_t>(n)];
                if (n <= N) acc += r.per_order[static_cast<std::size_t>(n)];
            }
            return acc - full;
        };
        RateEstimate re = rate_study(err, taus);
        csv.row({static_cast<double>(N), re.slope, re.stderr_});
    }
    emit(csv, a.out);
    return 0;
}

int run_mc_check(const CommonArgs& a, const std::string& payoff, double k_lo, double k_hi,
                 int k_n, std::int64_t paths, int steps) {
    LoadedModel lm = load_model_file(a.config);
    CharApprox ca(make_series(lm.model, a), a.order);
    PayoffKind kind = parse_kind(payoff);
    std::vector<double> strikes;
    for (double k : linspace(k_lo, k_hi, k_n)) strikes.push_back(std::exp(k));

    SimConfig cfg;
    cfg.paths = paths;
    cfg.steps_per_year = steps;
    cfg.seed = a.seed;
    std::vector<MCEstimate> mc =
        lm.kind == "nig_cev"
            ? simulate_nig_frozen_multi(lm.model, kind, strikes, a.t0, a.x, a.T, cfg)
            : simulate_price_multi(lm.model, kind, strikes, a.t0, a.x, a.T, cfg);

    std::vector<PayoffTransform> payoffs;
    for (double K : strikes)
        payoffs.push_back(payoff_transform(kind, K, kind == PayoffKind::Call ? -1.5 : 0.75));
    auto res = invert_many(ca, payoffs, a.t0, a.x, a.T);

    CsvWriter csv;
    provenance(csv, lm, a, "mc-check");
    csv.comment("paths=" + std::to_string(paths) + " steps_per_year=" + std::to_string(steps));
    csv.header({"K", "mc_mean", "mc_lo", "mc_hi",
                "expansion_order" + std::to_string(a.order)});
    for (std::size_t i = 0; i < strikes.size(); ++i)
        csv.row({strikes[i], mc[i].mean, mc[i].ci_lo, mc[i].ci_hi, res[i].total});
    emit(csv, a.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"levyx: asymptotic expansions for defaultable local Levy-type models"};
    app.require_subcommand(1);

    CommonArgs a;
    double y_lo = -3.0, y_hi = 3.0;
    int y_n = 201;
    std::string payoff = "put";
    double K = 1.0;
    double k_lo = -0.3, k_hi = 0.3;
    int k_n = 13;
    int orders = 4;
    int truncN = -1;
    int tau_count = 5;
    std::int64_t paths = 200000;
    int steps = 250;

    auto* density = app.add_subcommand("density", "transition density slices");
    add_common(density, a);
    density->add_option("--y-lo", y_lo);
    density->add_option("--y-hi", y_hi);
    density->add_option("--y-n", y_n);

    auto* price = app.add_subcommand("price", "single option price");
    add_common(price, a);
    price->add_option("--payoff", payoff, "put | call | digital | survival");
    price->add_option("--K", K, "strike");

    auto* smile_cmd = app.add_subcommand("smile", "implied volatility smile");
    add_common(smile_cmd, a);
    smile_cmd->add_option("--payoff", payoff);
    smile_cmd->add_option("--k-lo", k_lo, "lowest log-strike");
    smile_cmd->add_option("--k-hi", k_hi, "highest log-strike");
    smile_cmd->add_option("--k-n", k_n, "number of strikes");

    auto* survival = app.add_subcommand("survival", "survival probability");
    add_common(survival, a);

    double T_lo = 1.0, T_hi = 10.0;
    int T_n = 10;
    auto* yields = app.add_subcommand("yields", "yield curve from the engine");
    add_common(yields, a);
    yields->add_option("--T-lo", T_lo);
    yields->add_option("--T-hi", T_hi);
    yields->add_option("--T-n", T_n);

    auto* ty = app.add_subcommand("table-yields", "JDCEV yields table");
    add_common(ty, a);
    ty->add_option("--truncN", truncN, "series truncation (<0 = converged)");

    auto* td = app.add_subcommand("table-density", "density convergence table");
    add_common(td, a);
    td->add_option("--orders", orders, "highest order");

    auto* rs = app.add_subcommand("rate-study", "empirical convergence rates");
    add_common(rs, a);
    rs->add_option("--payoff", payoff, "put | call | density_at_spot");
    rs->add_option("--K", K);
    rs->add_option("--tau-count", tau_count);

    auto* mc = app.add_subcommand("mc-check", "Monte Carlo containment check");
    add_common(mc, a);
    mc->add_option("--payoff", payoff);
    mc->add_option("--k-lo", k_lo);
    mc->add_option("--k-hi", k_hi);
    mc->add_option("--k-n", k_n);
    mc->add_option("--paths", paths);
    mc->add_option("--steps-per-year", steps);

    try {
        app.parse(argc, argv);
        if (density->parsed()) return run_density(a, y_lo, y_hi, y_n);
        if (price->parsed()) return run_price(a, payoff, K);
        if (smile_cmd->parsed()) return run_smile(a, payoff, k_lo, k_hi, k_n);
        if (survival->parsed()) return run_survival(a);
        if (yields->parsed()) return run_yields(a, T_lo, T_hi, T_n);
        if (ty->parsed()) return run_table_yields(a, truncN);
        if (td->parsed()) return run_table_density(a, orders);
        if (rs->parsed()) return run_rate_study(a, payoff, K, tau_count);
        if (mc->parsed()) return run_mc_check(a, payoff, k_lo, k_hi, k_n, paths, steps);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
