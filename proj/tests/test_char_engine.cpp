#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "levyx/analytics.hpp"
#include "levyx/char_engine.hpp"
#include "levyx/expansion.hpp"
#include "levyx/quadrature.hpp"

using namespace levyx;

namespace {

ModelSpec jdcev_model(const JdcevParams& p) {
    ModelSpec m;
    m.a = CoefficientFn::exp_affine(0.0, 0.5 * p.delta * p.delta, 2.0 * p.beta);
    m.gamma = CoefficientFn::exp_affine(p.b, p.c * p.delta * p.delta, 2.0 * p.beta);
    return m;
}

ModelSpec cev_gauss_model(double delta, double beta, double lam, double m_, double eta) {
    ModelSpec m;
    const double w = 2.0 * (beta - 1.0);
    m.a = CoefficientFn::exp_affine(0.0, 0.5 * delta * delta, w);
    m.gamma = CoefficientFn::constant(0.0);
    GaussianJumpFamily fam;
    fam.lambda = CoefficientFn::exp_affine(0.0, lam, w);
    fam.m = CoefficientFn::constant(m_);
    fam.delta = CoefficientFn::constant(eta);
    m.jumps = fam;
    return m;
}

} // namespace

TEST_CASE("index sets enumerate compositions") {
    IndexSets s3 = index_sets(3);
    REQUIRE(s3.by_length.size() == 3);
    CHECK(s3.by_length[0] == std::vector<std::vector<int>>{{3}});
    CHECK(s3.by_length[1] == std::vector<std::vector<int>>{{1, 2}, {2, 1}});
    CHECK(s3.by_length[2] == std::vector<std::vector<int>>{{1, 1, 1}});

    IndexSets s1 = index_sets(1);
    CHECK(s1.by_length[0] == std::vector<std::vector<int>>{{1}});

    // |I_{n,h}| = C(n-1, h-1); union = 2^{n-1}
    for (int n = 1; n <= 8; ++n) {
        IndexSets s = index_sets(n);
        std::size_t total = 0;
        for (const auto& level : s.by_length) total += level.size();
        CHECK(total == (1ULL << (n - 1)));
    }
    CHECK_THROWS_AS(index_sets(0), DomainError);
    CHECK_THROWS_AS(index_sets(13), DomainError);
}

TEST_CASE("order-0 exponent: pure diffusion pieces") {
    ModelSpec m;
    m.a = CoefficientFn::constant(0.02);
    m.gamma = CoefficientFn::constant(0.0);
    auto series = expand_taylor(m, 0.0, 2);
    Order0Exponent ex = build_order0(series, 0.0, 1.0);
    CHECK(ex.mv(0.0, 1.0) == doctest::Approx(-0.02).epsilon(1e-14));
    CHECK(ex.Cv(0.0, 1.0) == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(ex.kill(0.0, 1.0) == doctest::Approx(0.0));
    CHECK(std::abs(ex.Psi(0.0, 1.0, cplx(1.0, 0.0), 0).value()) < 1e-15);
    CHECK_THROWS_AS(build_order0(series, 1.0, 1.0), DomainError);

    // Phi0 = i xi (x - a0 tau) - a0 tau xi^2 at order 0 (note Cv = 2 a0 tau)
    CharApprox ca(series, 0);
    const double x = 0.3;
    cplx xi(1.3, 0.0);
    cplx expo = std::log(ca.phat0(0.0, x, 1.0, xi));
    cplx expect = cplx(0.0, 1.0) * xi * (x - 0.02) - 0.02 * xi * xi;
    CHECK(std::abs(expo - expect) < 1e-12);
}

TEST_CASE("order-0 exponent: gaussian jumps Psi value") {
    ModelSpec m = cev_gauss_model(0.2, 1.0, 0.3, -0.1, 0.4); // beta=1: constant coeffs
    auto series = expand_taylor(m, 0.0, 0);
    Order0Exponent ex(series);
    cplx xi(1.0, 0.0);
    cplx psi = ex.Psi(0.0, 1.0, xi, 0).value();
    const cplx i(0.0, 1.0);
    cplx expect = 0.3 * (std::exp(i * (-0.1) - 0.5 * 0.16) - 1.0 - i * (-0.1));
    CHECK(std::abs(psi - expect) < 1e-14);
    // martingale identity of the order-0 characteristic function
    CharApprox ca(series, 0);
    CHECK(std::abs(ca.phat0(0.0, 0.7, 1.0, cplx(0.0, -1.0)) - std::exp(0.7)) < 1e-12);
}

TEST_CASE("F jet equals -i dPsi/dxi + mv + i xi Cv") {
    ModelSpec m = cev_gauss_model(0.2, 0.5, 0.3, -0.1, 0.4);
    auto series = expand_taylor(m, 0.1, 2);
    Order0Exponent ex(series);
    const cplx xi0(0.8, 0.3);
    Jet F = ex.F(0.0, 0.7, xi0, 4);
    Jet psi = ex.Psi(0.0, 0.7, xi0, 5);
    Jet expect = psi.derivative() * cplx(0.0, -1.0);
    expect += cplx(ex.mv(0.0, 0.7), 0.0);
    expect += Jet::variable(xi0, 4) * cplx(0.0, ex.Cv(0.0, 0.7));
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(F[k] - expect[k]) < 1e-11);
}

TEST_CASE("apply_Ghat on the plain exponential jet: one-factor value") {
    // pure diffusion, i = 1, Taylor: value = psi_1(s,xi) (x - xbar + mv + i xi Cv)
    ModelSpec m = jdcev_model({0.01, 2.0, 0.3, -1.0 / 3.0});
    const double x = 0.25, xbar = 0.1;
    auto series = expand_taylor(m, xbar, 2);
    CharApprox ca(series, 2);
    Order0Exponent ex(series);
    const cplx xi0(0.9, -0.2);
    const int D = 3;
    Jet E(xi0, D);
    E[0] = 1.0;
    const cplx i(0.0, 1.0);
    for (int k = 1; k <= D; ++k) E[k] = E[k - 1] * i * x * (1.0 / k);

    Jet out = ca.apply_Ghat(1, 0.0, 0.6, E);
    cplx psi1 = series.psi(1, 0.6, xi0, D).value();
    cplx expect = psi1 * (x - xbar + ex.mv(0.0, 0.6) + i * xi0 * ex.Cv(0.0, 0.6));
    CHECK(std::abs(out.value() - expect) < 1e-13);
}

TEST_CASE("apply_Ghat at xi=0 with gamma=0 kills the value coordinate") {
    ModelSpec m = cev_gauss_model(0.2, 0.5, 0.3, -0.1, 0.4);
    auto series = expand_taylor(m, 0.0, 2);
    CharApprox ca(series, 2);
    const int D = 3;
    Jet E(cplx(0.0, 0.0), D);
    E[0] = 1.0; // x = 0 so the exponential jet is 1
    Jet out = ca.apply_Ghat(1, 0.0, 0.5, E);
    CHECK(std::abs(out.value()) < 1e-15);
}

TEST_CASE("constant-coefficient model has vanishing corrections") {
    ModelSpec m = cev_gauss_model(0.2, 1.0, 0.3, -0.1, 0.4);
    auto series = expand_taylor(m, 0.0, 4);
    CharApprox ca(series, 4);
    auto cs = ca.corrections(0.0, 0.0, 1.0, cplx(0.7, 0.1));
    CHECK(std::abs(cs[0] - 1.0) < 1e-15);
    for (int n = 1; n <= 4; ++n) CHECK(std::abs(cs[static_cast<std::size_t>(n)]) < 1e-14);
}

// The decisive ordering test: engine survival corrections against the printed
// closed forms, randomized over parameters.
TEST_CASE("jdcev survival: engine matches closed forms to 1e-10") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ub(0.005, 0.03), uc(0.5, 3.0), ud(0.15, 0.45),
        ube(-0.6, -0.15), ux(-0.4, 0.4), ut(0.25, 2.5);
    for (int trial = 0; trial < 20; ++trial) {
        JdcevParams p{ub(rng), uc(rng), ud(rng), ube(rng)};
        const double x = ux(rng), tau = ut(rng);
        ModelSpec m = jdcev_model(p);
        auto series = expand_taylor(m, x, 2);
        CharApprox ca(series, 2);
        auto cs = ca.corrections(0.0, x, tau, cplx(0.0, 0.0));
        cplx p0 = ca.phat0(0.0, x, tau, cplx(0.0, 0.0));
        auto uo = jdcev_expansion(p, 0.0, x, tau);
        CHECK(std::abs(p0.real() - uo[0]) < 1e-12 * std::max(1.0, std::abs(uo[0])));
        CHECK(std::abs((p0 * cs[1]).real() - uo[1]) < 1e-10);
        CHECK(std::abs((p0 * cs[2]).real() - uo[2]) < 1e-10);
    }
}

TEST_CASE("jdcev survival: worked numbers from the credit-spread setup") {
    JdcevParams p{0.01, 2.0, 0.3, -1.0 / 3.0};
    ModelSpec m = jdcev_model(p);
    auto series = expand_taylor(m, 0.0, 2);
    CharApprox ca(series, 2);
    cplx p0 = ca.phat0(0.0, 0.0, 1.0, cplx(0.0, 0.0));
    auto cs = ca.corrections(0.0, 0.0, 1.0, cplx(0.0, 0.0));
    CHECK(p0.real() == doctest::Approx(std::exp(-0.19)).epsilon(1e-12));
    CHECK(cs[1].real() == doctest::Approx(0.0087).epsilon(1e-10));
    CHECK((p0 * cs[1]).real() == doctest::Approx(0.00719474).epsilon(1e-5));
    // u^(2) at xi=0 reproduces Y - Y2 = 0.0001 at 4dp resolution
    double u2 = (p0 * (cs[0] + cs[1] + cs[2])).real();
    CHECK(u2 == doctest::Approx(0.832427).epsilon(1e-4));
}

TEST_CASE("killed-free normalization: corrections vanish at xi=0 when gamma=0") {
    ModelSpec m = cev_gauss_model(0.2, 0.5, 0.3, -0.1, 0.4);
    auto series = expand_taylor(m, 0.0, 3);
    CharApprox ca(series, 3);
    auto cs = ca.corrections(0.0, 0.0, 1.0, cplx(0.0, 0.0));
    for (int n = 1; n <= 3; ++n) CHECK(std::abs(cs[static_cast<std::size_t>(n)]) < 1e-13);
}

TEST_CASE("time-quadrature exactness: doubling Q leaves c_n unchanged") {
    ModelSpec m = cev_gauss_model(0.2, 0.5, 0.3, -0.1, 0.4);
    auto series = expand_taylor(m, 0.0, 3);
    CharApprox c8(series, 3, 8), c16(series, 3, 16);
    const cplx xi(0.8, 0.4);
    auto a = c8.corrections(0.0, 0.0, 1.5, xi);
    auto b = c16.corrections(0.0, 0.0, 1.5, xi);
    for (int n = 1; n <= 3; ++n)
        CHECK(std::abs(a[static_cast<std::size_t>(n)] - b[static_cast<std::size_t>(n)]) <
              1e-12);
}

TEST_CASE("conjugation symmetry of corrections") {
    ModelSpec m = cev_gauss_model(0.2, 0.5, 0.3, -0.1, 0.4);
    auto series = expand_taylor(m, 0.1, 3);
    CharApprox ca(series, 3);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int k = 0; k < 8; ++k) {
        cplx xi(u(rng), 0.5);
        auto cp = ca.corrections(0.0, 0.1, 0.8, xi);
        auto cm = ca.corrections(0.0, 0.1, 0.8, -std::conj(xi));
        for (int n = 0; n <= 3; ++n)
            CHECK(std::abs(cm[static_cast<std::size_t>(n)] -
                           std::conj(cp[static_cast<std::size_t>(n)])) < 1e-12);
    }
}

// Independent direct implementation for the diffusion case: explicit
// composition chains over the index sets with the diffusion-only Mhat.
namespace {

cplx corrections_direct_diffusion(const CoefficientSeries& series, int n, double t,
                                  double x, double T, cplx xi0, int timeQ = 8) {
    Order0Exponent ex(series);
    const int D = n + 1;
    Jet E(xi0, D);
    E[0] = 1.0;
    const cplx i(0.0, 1.0);
    for (int k = 1; k <= D; ++k) E[k] = E[k - 1] * i * x * (1.0 / k);

    auto apply_G = [&](int idx, double s, const Jet& g) {
        // diffusion-only Mhat: F = mv + i xi Cv (Remark-style simplification)
        Jet F = Jet::variable(xi0, g.order()) * cplx(0.0, ex.Cv(t, s));
        F += cplx(ex.mv(t, s), 0.0);
        Jet power = g;
        const Polynomial& p = series.basis(idx);
        Jet acc = g * cplx(p[0], 0.0);
        for (int k = 1; k <= p.degree(); ++k) {
            Jet fg = F * power;
            fg += power * cplx(-series.center(s), 0.0);
            fg += power.derivative() * cplx(0.0, -1.0);
            power = fg;
            if (p[k] != 0.0) acc += power * cplx(p[k], 0.0);
        }
        return series.psi(idx, s, xi0, g.order()) * acc;
    };

    // iterated Gauss-Legendre over the ordered simplex per composition:
    // s_1 <= ... <= s_h with G_{i_1}(s_1) innermost
    IndexSets sets = index_sets(n);
    cplx total(0.0, 0.0);
    for (const auto& level : sets.by_length) {
        for (const auto& comp : level) {
            std::function<Jet(std::size_t, double, double)> outer =
                [&](std::size_t pos, double lo, double hi) -> Jet {
                QuadRule rule = gauss_legendre(timeQ, lo, hi);
                Jet acc(xi0, D);
                for (int q = 0; q < rule.nodes.size(); ++q) {
                    double s = rule.nodes(q);
                    Jet inner = pos == 0 ? E : outer(pos - 1, lo, s);
                    acc += apply_G(comp[pos], s, inner) * rule.weights(q);
                }
                return acc;
            };
            total += outer(comp.size() - 1, t, T).value();
        }
    }
    return total;
}

} // namespace

TEST_CASE("diffusion reduction: engine equals the direct index-set implementation") {
    JdcevParams p{0.015, 1.2, 0.35, -0.4};
    ModelSpec m = jdcev_model(p);
    auto series = expand_taylor(m, 0.05, 3);
    CharApprox ca(series, 3);
    const double x = 0.2, T = 0.9;
    for (cplx xi : {cplx(0.0, 0.0), cplx(1.1, 0.0), cplx(0.4, -0.6)}) {
        auto cs = ca.corrections(0.0, x, T, xi);
        for (int n = 1; n <= 3; ++n) {
            cplx direct = corrections_direct_diffusion(series, n, 0.0, x, T, xi);
            CHECK(std::abs(cs[static_cast<std::size_t>(n)] - direct) <
                  1e-12 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("pide residual pins the operator ordering") {
    // quadratic pure-diffusion model: residual of (d_t + A) u^(2) at (0, xbar)
    // must decay at cubic order as x - xbar shrinks
    ModelSpec m;
    m.a = CoefficientFn::with_jet(
        [](double, double x) { return 0.02 + 0.008 * x + 0.01 * x * x; },
        [](double, double x, int order) {
            std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
            c[0] = 0.02 + 0.008 * x + 0.01 * x * x;
            if (order >= 1) c[1] = 0.008 + 0.02 * x;
            if (order >= 2) c[2] = 0.01;
            return c;
        },
        true);
    m.gamma = CoefficientFn::constant(0.03);
    const double xbar = 0.0;
    auto series = expand_taylor(m, xbar, 2);
    CharApprox ca(series, 2);

    auto u2 = [&](double t, double x) {
        // survival-type functional: xi = 0 needs no inversion
        auto cs = ca.corrections(t, x, 1.0, cplx(0.0, 0.0));
        return (ca.phat0(t, x, 1.0, cplx(0.0, 0.0)) * (cs[0] + cs[1] + cs[2])).real();
    };
    // residual with the generator written as a uxx + mu ux - gamma u
    auto resid = [&](double dx) {
        const double x = xbar + dx, t = 0.5, h = 3e-4;
        double ut = (u2(t + h, x) - u2(t - h, x)) / (2.0 * h);
        double uxx = (u2(t, x + h) - 2.0 * u2(t, x) + u2(t, x - h)) / (h * h);
        double ux = (u2(t, x + h) - u2(t, x - h)) / (2.0 * h);
        double mu = m.gamma(t, x) - m.a(t, x);
        return std::abs(ut + m.a(t, x) * uxx + mu * ux - m.gamma(t, x) * u2(t, x));
    };
    double r1 = resid(0.4);
    double r2 = resid(0.2);
    CHECK(r1 / r2 > 6.0); // >= 2^3 up to finite-difference noise
}
