#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "arakelov/surface/abel_jacobi.hpp"
#include "arakelov/surface/contour.hpp"
#include "arakelov/surface/curve.hpp"
#include "arakelov/surface/homology.hpp"
#include "arakelov/surface/periods.hpp"
#include "arakelov/surface/sheet.hpp"

using namespace arakelov;

namespace {

Poly lemniscatic() {
    // y^2 = x^3 - x, the square lattice curve
    return Poly::from_leading_first({1.0, 0.0, -1.0, 0.0});
}

Poly paper_curve() {
    // x(x-1)(4x^5+24x^4+16x^3-23x^2-21x-4), genus 3 with seven real branch points
    return Poly::from_leading_first({4.0, 20.0, -8.0, -39.0, 2.0, 17.0, 4.0, 0.0});
}

QuadratureConfig tight_cfg() {
    QuadratureConfig cfg;
    cfg.quad_rel_tol = 1e-10;
    return cfg;
}

// carries an Abel value around the diamond centred at c through hop
// transport and reports the arrival sheet; every leg must be accepted
int diamond_transport(const AbelJacobi& aj, cdouble c, double r, JacVec& a) {
    cdouble i(0.0, 1.0);
    std::vector<cdouble> way{c + r, c + i * r, c - r, c - i * r, c + r};
    int sheet = +1;
    for (size_t k = 0; k + 1 < way.size(); ++k) {
        auto hop = aj.continue_along(0, way[k], sheet, way[k + 1], a);
        REQUIRE(hop.ok);
        sheet = hop.sheet;
    }
    return sheet;
}

} // namespace

TEST_CASE("curve construction basics") {
    Curve c = build_curve(lemniscatic());
    REQUIRE(c.genus == 1);
    REQUIRE(c.infinity_is_branch);
    REQUIRE(c.branch.size() == 3);
    CHECK(std::abs(c.branch[0] - cdouble(-1.0)) < 1e-12);
    CHECK(std::abs(c.branch[1]) < 1e-12);
    CHECK(std::abs(c.branch[2] - cdouble(1.0)) < 1e-12);
    REQUIRE(c.t_roots.size() == 3);
    CHECK(std::abs(c.lc_G - cdouble(-1.0)) < 1e-12);

    // G(t) must agree with the factored form used by the t chart sheet
    for (cdouble t : {cdouble(0.3, 0.2), cdouble(-0.7, 0.05)}) {
        cdouble prod = c.lc_G;
        for (cdouble r : c.t_roots) prod *= t - r;
        CHECK(std::abs(prod - c.G.eval(t)) < 1e-12);
    }

    CHECK_THROWS_AS(build_curve(Poly::from_leading_first({1.0, 0.0})), invalid_input);
    CHECK_THROWS_AS(build_curve(Poly::from_leading_first({1.0, -2.0, 1.0, 0.0})),
                    singular_curve_error);
}

TEST_CASE("rotated square root squares back and sits on the +i side") {
    double alpha = 0.46364760900080611621;
    for (cdouble w : {cdouble(2.0, 1.0), cdouble(-3.0, 0.4), cdouble(0.1, -2.0),
                      cdouble(-4.0, 0.0)}) {
        cdouble r = rotated_sqrt(w, alpha);
        CHECK(std::abs(r * r - w) < 1e-13 * std::abs(w));
    }
    CHECK(std::abs(rotated_sqrt(cdouble(-4.0, 0.0), alpha) - cdouble(0.0, 2.0)) < 1e-13);
}

TEST_CASE("reference sheet squares to f") {
    Curve c = build_curve(paper_curve());
    ReferenceSheet sx = ReferenceSheet::x_chart(c);
    ReferenceSheet st = ReferenceSheet::t_chart(c);
    for (cdouble x : {cdouble(0.4, 0.9), cdouble(-2.0, -0.3), cdouble(3.1, 0.01)}) {
        cdouble y = sx.eval(x);
        CHECK(std::abs(y * y - c.f.eval(x)) < 1e-10 * std::abs(c.f.eval(x)));
    }
    for (cdouble t : {cdouble(0.05, 0.1), cdouble(-0.2, 0.02)}) {
        cdouble s = st.eval(t);
        CHECK(std::abs(s * s - c.G.eval(t)) < 1e-10 * std::abs(c.G.eval(t)));
    }
}

TEST_CASE("closed rectangle contour reproduces the collapsed loop") {
    Curve c = build_curve(lemniscatic());
    ReferenceSheet sheet = ReferenceSheet::x_chart(c);
    QuadratureConfig cfg = tight_cfg();

    Numerators one = [](cdouble, cdouble* out) { out[0] = 1.0; };

    // dog bone around (-1, 0) collapsed onto the segment
    auto seg = segment_integral_sqrt_both(sheet, one, 1, 0, 1, +1, cfg);
    cdouble collapsed = 2.0 * seg.integral[0];

    // rectangle enclosing the same two branch points, traversed with sheet
    // tracking; it crosses several cut rays on the way round
    std::vector<cdouble> corners{cdouble(-1.4, -0.5), cdouble(0.4, -0.5), cdouble(0.4, 0.5),
                                 cdouble(-1.4, 0.5), cdouble(-1.4, -0.5)};
    cdouble total = 0.0;
    int sigma = +1;
    for (size_t i = 0; i + 1 < corners.size(); ++i) {
        auto r = segment_integral_plain(sheet, one, 1, corners[i], corners[i + 1], sigma, cfg);
        total += r.integral[0];
        sigma = r.sigma_end;
    }
    CHECK(sigma == +1); // even number of ray crossings around a closed loop

    double match = std::min(std::abs(total - collapsed), std::abs(total + collapsed));
    CHECK(match < 1e-8);

    // the collapsed value itself is the classical lemniscatic period
    CHECK(std::abs(collapsed - cdouble(-5.24411510858424)) < 1e-8);
}

TEST_CASE("square lattice periods") {
    Curve c = build_curve(lemniscatic());
    PeriodData pd = build_periods_raw(c, tight_cfg());

    REQUIRE(pd.tau.g == 1);
    CHECK(std::abs(pd.tau.tau.at(0, 0) - cdouble(0.0, 1.0)) < 1e-8);
    CHECK(std::abs(pd.homology.omega_A.at(0, 0) - cdouble(-5.24411510858424)) < 1e-8);

    // gram matrix of dx/y: |omega_A|^2 Im tau for genus one
    double expect = std::norm(pd.homology.omega_A.at(0, 0));
    CHECK(std::abs(pd.gram.at(0, 0).real() - expect) < 1e-6 * expect);
    CHECK(std::abs(pd.log_det_gram - std::log(expect)) < 1e-8);

    // orthonormal frame certificate: ortho * gram * ortho^dagger = 1
    CMat t1 = mat_mul(pd.ortho, mat_mul(pd.gram, mat_adjoint(pd.ortho)));
    CHECK(std::abs(t1.at(0, 0) - cdouble(1.0)) < 1e-8);
}

TEST_CASE("abel map lands branch points on their half periods") {
    // build_period_data throws if any branch point misses its characteristic
    PeriodData pd = build_period_data(lemniscatic(), tight_cfg());
    AbelJacobi aj(pd, tight_cfg());

    // monodromy around one ramification point swaps the lift and negates the
    // abel image modulo periods; the transported value is path independent
    JacVec ap = aj.abel(SurfacePoint::finite(cdouble(0.5), +1));
    JacVec a = ap;
    int sheet = diamond_transport(aj, cdouble(0.0), 0.5, a);
    CHECK(sheet == -1);
    JacVec sum{a[0] + ap[0]};
    CHECK(lattice_distance(pd.tau, sum) < 1e-8);

    // base point maps to zero
    JacVec base = aj.abel(SurfacePoint::infinity());
    CHECK(std::abs(base[0]) == 0.0);
}

TEST_CASE("hop transport matches an independent abel evaluation") {
    PeriodData pd = build_period_data(lemniscatic(), tight_cfg());
    AbelJacobi aj(pd, tight_cfg());

    cdouble z0(0.4, 0.6), z1(-0.7, 0.45);
    JacVec a = aj.abel(SurfacePoint::finite(z0, +1));
    auto hop = aj.continue_along(0, z0, +1, z1, a);
    REQUIRE(hop.ok);
    JacVec direct = aj.abel(SurfacePoint::finite(z1, hop.sheet));
    JacVec diff{a[0] - direct[0]};
    CHECK(lattice_distance(pd.tau, diff) < 1e-8);

    // far chart anchor agrees with the junction construction
    cdouble t(0.08, -0.05);
    auto [at, st] = aj.abel_t(t);
    cdouble x = 1.0 / t;
    cdouble y = static_cast<double>(st) * ReferenceSheet::t_chart(pd.curve).eval(t) /
                std::pow(t, pd.curve.genus + 1);
    int sx = (y / ReferenceSheet::x_chart(pd.curve).eval(x)).real() > 0 ? +1 : -1;
    JacVec direct2 = aj.abel(SurfacePoint::finite(x, sx));
    JacVec diff2{at[0] - direct2[0]};
    CHECK(lattice_distance(pd.tau, diff2) < 1e-7);
}

TEST_CASE("genus two periods pass all certificates") {
    // x^5 - 1 has extra automorphisms, a good stress test for the basis checks
    Poly f = Poly::from_leading_first({1.0, 0.0, 0.0, 0.0, 0.0, -1.0});
    PeriodData pd = build_period_data(f, tight_cfg());
    REQUIRE(pd.tau.g == 2);
    CHECK(pd.tau.lambda_min > 0.0);

    AbelJacobi aj(pd, tight_cfg());
    JacVec ap = aj.abel(SurfacePoint::finite(cdouble(1.4), +1));
    JacVec a = ap;
    int sheet = diamond_transport(aj, cdouble(1.0), 0.4, a);
    CHECK(sheet == -1);
    JacVec sum{a[0] + ap[0], a[1] + ap[1]};
    CHECK(lattice_distance(pd.tau, sum) < 1e-7);
}

TEST_CASE("genus three periods for the seven real branch points") {
    PeriodData pd = build_period_data(paper_curve(), tight_cfg());
    REQUIRE(pd.tau.g == 3);
    CHECK(pd.tau.lambda_min > 0.0);
    CHECK(pd.curve.infinity_is_branch);

    AbelJacobi aj(pd, tight_cfg());
    cdouble c = pd.curve.branch[0]; // the well separated leftmost point
    JacVec ap = aj.abel(SurfacePoint::finite(c + 1.0, +1));
    JacVec a = ap;
    int sheet = diamond_transport(aj, c, 1.0, a);
    CHECK(sheet == -1);
    JacVec sum{a[0] + ap[0], a[1] + ap[1], a[2] + ap[2]};
    CHECK(lattice_distance(pd.tau, sum) < 1e-7);
}
