#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fraclind/errors.hpp"
#include "fraclind/lindstedt.hpp"

using namespace fraclind;

namespace {

const std::string kModelDir = FRACLIND_MODEL_DIR;

Model custom2d() { return load_model(kModelDir + "/two_dof_example.json"); }
Model azero() { return load_model(kModelDir + "/a_zero_example.json"); }
Model custom3d() { return load_model(kModelDir + "/three_dof_example.json"); }

EtaSeries expand_custom(int K, int branchSign = +1, int sigma = +1) {
    Model m = custom2d();
    auto rd = analyze_resonance(m, 0.0, sigma);
    REQUIRE(rd.existsFlag);
    Real b1 = branchSign > 0 ? rd.beta1Branches[0] : rd.beta1Branches[1];
    return expand(m, rd, b1, K);
}

}  // namespace

TEST_CASE("first orders of the custom example match hand values") {
    Model m = custom2d();
    Real w = m.freq.omega()[0];
    auto s = expand_custom(4);

    // series starts at order k0: orders below are identically zero
    for (int k = 1; k < 2; ++k)
        for (int g = 0; g < 4; ++g) CHECK(s.orders[k][g].empty());

    // A^{(2)}_{+-1} = -sigma/(2w)
    CHECK(std::abs(s.orders[2][0].coeff({1}) - Complex(-0.5 / w, 0.0)) < 1e-14);
    CHECK(std::abs(s.orders[2][0].coeff({-1}) - Complex(-0.5 / w, 0.0)) < 1e-14);
    // B^{(2)}_{+-1} = +-i sigma/(2w)
    CHECK(std::abs(s.orders[2][1].coeff({1}) - Complex(0.0, 0.5 / w)) < 1e-14);
    CHECK(std::abs(s.orders[2][1].coeff({-1}) - Complex(0.0, -0.5 / w)) < 1e-14);
}

TEST_CASE("per-order equations hold to machine precision") {
    Model m = custom2d();
    const int K = 6;
    auto s = expand_custom(K);
    auto norms = residual_order_norms(m, s, K);
    for (int k = 0; k <= K; ++k) CHECK(norms[k] < 1e-12);
}

TEST_CASE("mode-by-mode identities at the branch order") {
    // direct substitution: (i w nu) X_nu = RHS for a couple of modes at k0
    Model m = custom2d();
    Real w = m.freq.omega()[0];
    auto s = expand_custom(4);
    Labels lab(2);
    // b^{(2)}_nu from (i w nu) b = [d_B H0]^{(2)} + sigma [d_B f]^{(0)};
    // d_B H0 = B, so RHS_nu = B^{(2)}_nu + sigma [d_B f]^{(0)}_nu
    auto dfB = tensor_derivative(m.f, {lab.B()}, {0.0, 0.0}, 0.0);  // no action dep: zero
    for (int nu : {1, -1}) {
        Complex rhs = s.orders[2][1].coeff({nu});
        if (dfB.count({nu})) rhs += dfB.at({nu});
        Complex lhs = Complex(0.0, w * nu) * s.orders[2][3].coeff({nu});
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }
}

TEST_CASE("compatibility residuals vanish at every order (K = 6)") {
    Model m = custom2d();
    auto s = expand_custom(6);
    for (int k = 1; k <= 6; ++k) {
        auto r = check_compatibility(m, s, k);
        for (Real v : r) CHECK(v < 1e-9);
    }
}

TEST_CASE("second compatibility at order 2 k0 equals the branch relation") {
    Model m = custom2d();
    auto rd = analyze_resonance(m, 0.0, 1);
    // with a corrupted beta1 the order-2k0 slow average equals sigma a + c beta1^2
    Real bad = rd.beta1Branches[0] * 1.1;
    ExpandOptions opts;
    opts.allowInconsistentBranch = true;
    opts.checkCompatibility = false;
    auto s = expand(m, rd, bad, 4, opts);
    auto r = check_compatibility(m, s, 4);
    Real expect = std::abs(rd.sigma * rd.a + rd.c * bad * bad);
    CHECK(r[1] == doctest::Approx(expect).epsilon(1e-9));
    // orders below 2 k0 carry no slow-average requirement
    auto r3 = check_compatibility(m, s, 3);
    CHECK(r3[1] < 1e-12);
}

TEST_CASE("counterexample model refuses expansion") {
    Model m = azero();
    auto rd = analyze_resonance(m, 0.0, 1);
    CHECK_FALSE(rd.existsFlag);
    CHECK_THROWS_AS(expand(m, rd, 0.1, 4), Error);
}

TEST_CASE("evaluate_torus") {
    auto s = expand_custom(4);
    std::vector<Real> psi = {0.7};
    auto x0 = evaluate_torus(s, 0.0, psi);
    CHECK(x0[0] == 0.0);
    CHECK(x0[1] == 0.0);
    CHECK(x0[2] == doctest::Approx(0.7));
    CHECK(x0[3] == doctest::Approx(0.0));

    // deviation from beta0 + eta beta1 is second order in eta
    Real eta = 1e-4;
    auto x = evaluate_torus(s, eta, {0.0});
    CHECK(std::abs(x[3] - (s.beta0 + eta * s.beta1)) < 100.0 * eta * eta);
    Real etaHalf = eta / 2.0;
    auto xh = evaluate_torus(s, etaHalf, {0.0});
    Real dev = std::abs(x[3] - (s.beta0 + eta * s.beta1));
    Real devHalf = std::abs(xh[3] - (s.beta0 + etaHalf * s.beta1));
    CHECK(dev / devHalf == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("residual: zero perturbation gives a zero defect") {
    Model m = custom2d();
    m.f = AngleActionFunction(2);
    EtaSeries s;
    s.N = 2;
    s.K = 4;
    s.k0 = 2;
    s.beta0 = 0.0;
    s.beta1 = 1.0;
    s.sigma = 1;
    s.orders.assign(5, std::vector<FourierSeries>(4, FourierSeries(1)));
    s.betaAvg.assign(5, 0.0);
    CHECK(residual(m, s, 1e-3) == 0.0);
    CHECK_THROWS_AS(residual_scaling(m, s, {1e-3, 2e-3, 5e-3, 1e-2}), Error);
}

TEST_CASE("residual scaling: exponent at least K + 1/2 and grows with K") {
    Model m = custom2d();
    std::vector<Real> grid = {1e-3, 2e-3, 5e-3, 1e-2};
    auto s6 = expand_custom(6);
    auto rep6 = residual_scaling(m, s6, grid);
    CHECK(rep6.fittedExponent >= 6.5);
    auto s7 = expand_custom(7);
    auto rep7 = residual_scaling(m, s7, grid);
    CHECK(rep7.fittedExponent >= 7.5);
    CHECK(rep7.fittedExponent - rep6.fittedExponent == doctest::Approx(1.0).epsilon(0.25));
    // raw residual decays like eta^{K+1} up to the fitted constant
    Real eta = 1e-3;
    Real r = residual(m, s6, eta);
    CHECK(r < 1e4 * std::pow(eta, 7));
    CHECK(r > 0.0);
}

TEST_CASE("corrupting beta1 degrades the residual to the branch order") {
    Model m = custom2d();
    auto rd = analyze_resonance(m, 0.0, 1);
    ExpandOptions opts;
    opts.allowInconsistentBranch = true;
    opts.checkCompatibility = false;
    auto bad = expand(m, rd, rd.beta1Branches[0] * 1.1, 6, opts);
    auto good = expand_custom(6);
    Real eta = 1e-3;
    Real rb = residual(m, bad, eta);
    Real rg = residual(m, good, eta);
    // bad series misses the slow-average condition at order 2 k0 = 4
    CHECK(rb > 1e-2 * std::pow(eta, 4));
    CHECK(rb / rg > 1e6);
}

TEST_CASE("branch symmetry for even k0") {
    Model m = custom2d();
    auto sPlus = expand_custom(6, +1);
    auto sMinus = expand_custom(6, -1);
    CHECK(sPlus.beta1 == doctest::Approx(-sMinus.beta1));
    bool differ = false;
    for (int k = 2; k <= 6; ++k)
        if (std::abs(sPlus.betaAvg[k] - sMinus.betaAvg[k]) > 1e-12) differ = true;
    CHECK(differ);
    for (int k = 1; k <= 6; ++k) {
        auto rp = check_compatibility(m, sPlus, k);
        auto rm = check_compatibility(m, sMinus, k);
        for (Real v : rp) CHECK(v < 1e-9);
        for (Real v : rm) CHECK(v < 1e-9);
    }
}

TEST_CASE("series invariants: reality, zero fast-angle averages, mode support") {
    Model m = custom2d();
    auto s = expand_custom(6);
    int maxNu = m.f.max_nu_l1();
    for (int k = 1; k <= 6; ++k) {
        for (int g = 0; g < 4; ++g) {
            CHECK(s.orders[k][g].reality_defect() < 1e-12);
            CHECK(s.orders[k][g].max_nu_l1() <= k * maxNu);
        }
        // fast angles have zero average by construction
        CHECK(std::abs(s.orders[k][2].zero_mode()) == 0.0);
        CHECK(std::abs(s.orders[k][3].zero_mode()) == 0.0);
    }
}

TEST_CASE("three degrees of freedom: expansion and residual scaling") {
    Model m = custom3d();
    auto rd = analyze_resonance(m, 0.0, 1);
    REQUIRE(rd.existsFlag);
    auto s = expand(m, rd, rd.beta1Branches[0], 4);
    for (int k = 1; k <= 4; ++k) {
        auto r = check_compatibility(m, s, k);
        for (Real v : r) CHECK(v < 1e-9);
    }
    auto rep = residual_scaling(m, s, {1e-3, 2e-3, 5e-3, 1e-2});
    CHECK(rep.fittedExponent >= 4.5);
}
