#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "levyx/jet.hpp"

using namespace levyx;

namespace {
double dist(cplx a, cplx b) { return std::abs(a - b); }
} // namespace

TEST_CASE("exp jet of 2*xi at 0 has the e^{2xi} coefficients") {
    Jet f(0.0, 3);
    f[1] = 2.0;
    Jet g = exp(f);
    CHECK(dist(g[0], 1.0) < 1e-15);
    CHECK(dist(g[1], 2.0) < 1e-15);
    CHECK(dist(g[2], 2.0) < 1e-15);
    CHECK(dist(g[3], cplx(4.0 / 3.0)) < 1e-15);
}

TEST_CASE("square of the identity about 1") {
    Jet xi = Jet::variable(1.0, 2);
    Jet sq = xi * xi;
    CHECK(dist(sq[0], 1.0) < 1e-15);
    CHECK(dist(sq[1], 2.0) < 1e-15);
    CHECK(dist(sq[2], 1.0) < 1e-15);
}

TEST_CASE("derivative of e^{i x xi} is i x times itself") {
    const cplx i(0.0, 1.0);
    const double x = 0.7;
    Jet e(cplx(0.3, 0.0), 5);
    e[0] = 1.0;
    for (int k = 1; k <= 5; ++k) e[k] = e[k - 1] * i * x * (1.0 / k);
    Jet d = e.derivative();
    Jet ref = (e * (i * x)).truncated(4);
    for (int k = 0; k <= 4; ++k) CHECK(dist(d[k], ref[k]) < 1e-14);
}

TEST_CASE("jets of random polynomials reproduce shifted coefficients") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = 1 + trial % 6;
        std::vector<cplx> p(static_cast<std::size_t>(deg) + 1);
        for (auto& c : p) c = cplx(u(rng), u(rng));
        const cplx xi0(u(rng), u(rng));
        // build the jet of p at xi0 through arithmetic
        Jet xi = Jet::variable(xi0, deg);
        Jet acc = Jet::constant(p.back(), xi0, deg);
        for (int k = deg - 1; k >= 0; --k) {
            acc = acc * xi;
            acc += p[static_cast<std::size_t>(k)];
        }
        // check against direct evaluation of derivatives via Horner shifts
        // (synthetic division: p(xi0 + u) coefficients)
        std::vector<cplx> shifted = p;
        for (int k = 0; k <= deg; ++k)
            for (int j = deg - 1; j >= k; --j)
                shifted[static_cast<std::size_t>(j)] +=
                    xi0 * shifted[static_cast<std::size_t>(j) + 1];
        for (int k = 0; k <= deg; ++k)
            CHECK(dist(acc[k], shifted[static_cast<std::size_t>(k)]) < 1e-13);
    }
}

TEST_CASE("product rule holds coefficientwise") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const cplx xi0(0.2, -0.1);
    const int D = 6;
    Jet f(xi0, D), g(xi0, D);
    for (int k = 0; k <= D; ++k) {
        f[k] = cplx(u(rng), u(rng));
        g[k] = cplx(u(rng), u(rng));
    }
    Jet lhs = (f * g).derivative();
    Jet rhs = f.derivative() * g.truncated(D - 1) + f.truncated(D - 1) * g.derivative();
    for (int k = 0; k <= D - 1; ++k) CHECK(dist(lhs[k], rhs[k]) < 1e-13);
}

TEST_CASE("exp/log round trip") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const cplx xi0(-0.4, 0.25);
    const int D = 7;
    Jet f(xi0, D);
    f[0] = cplx(1.5 + u(rng), u(rng)); // bounded away from 0
    for (int k = 1; k <= D; ++k) f[k] = cplx(u(rng), u(rng));
    Jet back = exp(log(f));
    for (int k = 0; k <= D; ++k) CHECK(dist(back[k], f[k]) < 1e-12);
}

TEST_CASE("sqrt jet squares back") {
    const cplx xi0(0.1, 0.0);
    Jet f(xi0, 5);
    f[0] = cplx(2.0, 0.3);
    f[1] = cplx(-0.4, 0.1);
    f[2] = cplx(0.2, -0.2);
    Jet s = sqrt(f);
    Jet sq = s * s;
    for (int k = 0; k <= 5; ++k) CHECK(dist(sq[k], f[k]) < 1e-13);
}

TEST_CASE("center mismatch raises") {
    Jet f(0.0, 2), g(1.0, 2);
    CHECK_THROWS_AS(f + g, JetError);
    CHECK_THROWS_AS(f * g, JetError);
}

TEST_CASE("gaussian cf jet values") {
    // e^{i m xi - d^2 xi^2/2} with m=0, d=1 at 0: coeffs (1, 0, -1/2)
    Jet xi = Jet::variable(0.0, 2);
    const cplx i(0.0, 1.0);
    Jet h = xi * xi * cplx(-0.5, 0.0);
    Jet g = exp(h);
    CHECK(dist(g[0], 1.0) < 1e-15);
    CHECK(dist(g[1], 0.0) < 1e-15);
    CHECK(dist(g[2], -0.5) < 1e-15);

    // m=-0.1, d=0.4 at xi0=2: value e^{-0.2i-0.32}
    Jet xi2 = Jet::variable(2.0, 3);
    Jet h2 = xi2 * (i * -0.1) + xi2 * xi2 * cplx(-0.08, 0.0);
    Jet g2 = exp(h2);
    CHECK(dist(g2[0], std::exp(cplx(-0.32, -0.2))) < 1e-14);
}
