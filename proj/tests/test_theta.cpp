#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "arakelov/numerics/rng.hpp"
#include "arakelov/theta/characteristics.hpp"
#include "arakelov/theta/siegel.hpp"
#include "arakelov/theta/theta.hpp"
#include "oracles.hpp"

using namespace arakelov;

namespace {

const double pi = 3.14159265358979323846264338328;

SiegelPoint tau_i() {
    CMat t(1, 1);
    t.at(0, 0) = cdouble(0.0, 1.0);
    return SiegelPoint(std::move(t));
}

SiegelPoint tau_g2() {
    CMat t(2, 2);
    t.at(0, 0) = cdouble(0.3, 1.1);
    t.at(0, 1) = t.at(1, 0) = cdouble(0.1, 0.2);
    t.at(1, 1) = cdouble(-0.2, 0.9);
    return SiegelPoint(std::move(t));
}

} // namespace

TEST_CASE("siegel point validation") {
    CMat asym(2, 2);
    asym.at(0, 0) = cdouble(0.0, 1.0);
    asym.at(0, 1) = 0.5;
    asym.at(1, 0) = 0.1;
    asym.at(1, 1) = cdouble(0.0, 1.0);
    CHECK_THROWS_AS(SiegelPoint(std::move(asym)), invalid_input);

    CMat neg(1, 1);
    neg.at(0, 0) = cdouble(0.0, -1.0);
    CHECK_THROWS_AS(SiegelPoint(std::move(neg)), numeric_degeneracy);
}

TEST_CASE("theta value at the square lattice") {
    ThetaEvaluator th(tau_i());
    // direct sum: 1 + 2 sum exp(-pi n^2)
    double want = 1.0;
    for (int n = 1; n < 12; ++n) want += 2.0 * std::exp(-pi * n * n);
    CHECK(std::abs(th.value({cdouble(0.0)}) - want) < 1e-13);

    // ||theta||(1/2; i) = sum (-1)^n exp(-pi n^2)
    double alt = 1.0;
    for (int n = 1; n < 12; ++n)
        alt += 2.0 * ((n % 2) ? -1.0 : 1.0) * std::exp(-pi * n * n);
    CHECK(std::abs(th.norm_log({cdouble(0.5)}) - std::log(alt)) < 1e-12);
}

TEST_CASE("theta matches brute force in genus 2") {
    SiegelPoint sp = tau_g2();
    ThetaEvaluator th(sp);
    CMat tau = sp.tau;
    Rng rng(5);
    for (int t = 0; t < 6; ++t) {
        std::vector<cdouble> z = {
            cdouble(rng.uniform(-0.6, 0.6), rng.uniform(-0.4, 0.4)),
            cdouble(rng.uniform(-0.6, 0.6), rng.uniform(-0.4, 0.4))};
        cdouble want = oracles::theta_brute(z, tau, 24);
        cdouble got = th.value(z);
        CHECK(std::abs(got - want) < 1e-11 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("quasi periodicity and norm invariance") {
    SiegelPoint sp = tau_g2();
    ThetaEvaluator th(sp);
    std::vector<cdouble> z = {cdouble(0.37, 0.11), cdouble(-0.21, 0.05)};
    std::vector<double> n = {2.0, -1.0}, m = {-1.0, 3.0};

    std::vector<cdouble> zs(2);
    for (int i = 0; i < 2; ++i) {
        zs[i] = z[i] + m[i];
        for (int j = 0; j < 2; ++j) zs[i] += sp.tau.at(i, j) * n[j];
    }
    cdouble q = 0.0, lin = 0.0;
    for (int i = 0; i < 2; ++i) {
        lin += n[i] * z[i];
        for (int j = 0; j < 2; ++j) q += sp.tau.at(i, j) * n[i] * n[j];
    }
    cdouble factor = std::exp(-cdouble(0.0, pi) * q - cdouble(0.0, 2.0 * pi) * lin);
    cdouble lhs = th.value(zs), rhs = factor * th.value(z);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));

    CHECK(std::abs(th.norm_log(zs) - th.norm_log(z)) < 1e-11);
}

TEST_CASE("gradient against finite differences") {
    SiegelPoint sp = tau_g2();
    ThetaEvaluator th(sp);
    std::vector<cdouble> z = {cdouble(0.23, 0.14), cdouble(-0.31, -0.09)};
    auto grad = th.gradient(z);
    double h = 1e-5;
    for (int k = 0; k < 2; ++k) {
        auto zp = z, zm = z;
        zp[k] += h;
        zm[k] -= h;
        cdouble fd = (th.value(zp) - th.value(zm)) / (2.0 * h);
        CHECK(std::abs(grad[k] - fd) < 1e-7 * (1.0 + std::abs(fd)));
    }
}

TEST_CASE("truncation target is honest") {
    SiegelPoint sp = tau_g2();
    ThetaEvaluator coarse(sp, 1e-6), fine(sp, 1e-14);
    Rng rng(9);
    for (int t = 0; t < 4; ++t) {
        std::vector<cdouble> z = {
            cdouble(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)),
            cdouble(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))};
        double a = coarse.norm_log(z), b = fine.norm_log(z);
        // both are log of a quantity agreeing to 1e-6 absolutely
        CHECK(std::abs(std::exp(a) - std::exp(b)) <
              1e-6 * std::pow(sp.det_Y, 0.25) + 1e-300);
    }
}

TEST_CASE("characteristic table basics") {
    for (int g : {1, 2, 3}) {
        // all 2g+2 branch characteristics are distinct, last one is zero
        std::vector<Characteristic> cs;
        for (int k = 1; k <= 2 * g + 2; ++k) cs.push_back(branch_characteristic(k, g));
        for (size_t i = 0; i < cs.size(); ++i)
            for (size_t j = i + 1; j < cs.size(); ++j) {
                bool same = cs[i].a2 == cs[j].a2 && cs[i].b2 == cs[j].b2;
                CHECK(!same);
            }
        for (int v : cs.back().a2) CHECK(v == 0);
        for (int v : cs.back().b2) CHECK(v == 0);

        auto evens = balanced_even_characteristics(g);
        // one per balanced split avoiding infinity
        size_t want = 1;
        for (int i = 0; i < g + 1; ++i) want = want * (2 * g + 1 - i) / (i + 1);
        CHECK(evens.size() == want);
    }

    // the g=1 vector of constants is the odd characteristic
    CHECK(riemann_kappa_char(1).odd());
    CHECK(riemann_kappa_char(2).odd());
    CHECK(!riemann_kappa_char(3).odd());
}

TEST_CASE("balanced characteristics reproduce the eta product at genus 1") {
    SiegelPoint sp = tau_i();
    ThetaEvaluator th(sp);
    auto evens = balanced_even_characteristics(1);
    REQUIRE(evens.size() == 3);
    double log_prod = 0.0;
    for (const auto& ch : evens) {
        auto z = ch.point(sp);
        double a = 0.5 * ch.a2[0];
        log_prod += -pi * a * a * sp.Y[0] + std::log(std::abs(th.value(z)));
    }
    cdouble eta = oracles::dedekind_eta(cdouble(0.0, 1.0));
    CHECK(std::abs(log_prod - std::log(2.0 * std::pow(std::abs(eta), 3.0))) < 1e-11);
}

TEST_CASE("gradient determinant norm matches the direct formula") {
    // the reduced assembly must equal
    // (g+2)/4 log det Y - pi sum y_l.Yinv.y_l + log|det d theta(w_l)|
    // evaluated with no reduction at all
    SiegelPoint sp = tau_g2();
    ThetaEvaluator th(sp);
    std::vector<std::vector<cdouble>> w = {
        {cdouble(0.21, 0.33), cdouble(-0.11, 0.41)},
        {cdouble(-0.35, 0.12), cdouble(0.27, -0.22)}};

    CMat M(2, 2);
    double expo = 0.0;
    for (int l = 0; l < 2; ++l) {
        auto grad = th.gradient(w[l]);
        for (int k = 0; k < 2; ++k) M.at(k, l) = grad[k];
        std::vector<double> y = {w[l][0].imag(), w[l][1].imag()};
        expo -= pi * sp.quad_yinv(y);
    }
    double direct = 0.25 * 4.0 * sp.log_det_Y + expo + mat_log_abs_det(M);
    CHECK(std::abs(th.j_norm_log(w) - direct) < 1e-10);

    // integer shifts never change it
    auto w2 = w;
    w2[0][0] += 3.0;
    w2[0][1] -= 2.0;
    w2[1][1] += 5.0;
    CHECK(std::abs(th.j_norm_log(w2) - direct) < 1e-10);
}
