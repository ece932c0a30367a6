#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fraclind/errors.hpp"
#include "fraclind/resonance.hpp"

using namespace fraclind;

namespace {

const std::string kModelDir = FRACLIND_MODEL_DIR;
constexpr Real kPi = std::numbers::pi_v<Real>;

Model custom2d() { return load_model(kModelDir + "/two_dof_example.json"); }
Model azero() { return load_model(kModelDir + "/a_zero_example.json"); }
Model custom3d() { return load_model(kModelDir + "/three_dof_example.json"); }

bool contains(const std::vector<Real>& v, Real x, Real tol) {
    for (Real y : v)
        if (std::abs(x - y) < tol) return true;
    return false;
}

}  // namespace

TEST_CASE("stationary points of sin^3(beta)/3") {
    Model m = azero();
    auto pts = find_stationary_points(m.f.fast_angle_average());
    // roots of sin^2(beta) cos(beta): 0, pi/2, pi, 3pi/2
    CHECK(contains(pts, 0.0, 1e-7));
    CHECK(contains(pts, kPi / 2, 1e-9));
    CHECK(contains(pts, kPi, 1e-7));
    CHECK(contains(pts, 3 * kPi / 2, 1e-9));
}

TEST_CASE("stationary points of cos(beta)") {
    auto f = build_function(2, {{{0}, 1, {0, 0}, Complex(0.5, 0.0)}});
    auto pts = find_stationary_points(f);
    CHECK(pts.size() == 2);
    CHECK(contains(pts, 0.0, 1e-9));
    CHECK(contains(pts, kPi, 1e-9));
}

TEST_CASE("constant average raises DegenerateAverage") {
    auto f = build_function(2, {{{0}, 0, {0, 0}, Complex(1.0, 0.0)}});
    CHECK_THROWS_AS(find_stationary_points(f), Error);
}

TEST_CASE("degeneracy order") {
    Model m = azero();
    auto d = degeneracy_order(m.f, 0.0);
    CHECK(d.k0 == 2);
    CHECK(d.c == doctest::Approx(1.0).epsilon(1e-12));

    auto fc = build_function(2, {{{0}, 1, {0, 0}, Complex(0.5, 0.0)}});  // cos(beta)
    auto dc = degeneracy_order(fc, 0.0);
    CHECK(dc.k0 == 1);
    CHECK(dc.c == doctest::Approx(-1.0));

    // beta-independent average: order exceeded
    auto g = build_function(2, {{{1}, 0, {0, 0}, Complex(0.5, 0.0)},
                                {{0}, 0, {0, 0}, Complex(2.0, 0.0)}});
    CHECK_THROWS_AS(degeneracy_order(g, 0.0), Error);
}

TEST_CASE("first-order correction solves its defining equations") {
    Model m = custom2d();
    Labels lab(2);
    auto fo = first_order_correction(m, 0.0);
    const auto& omega = m.freq.omega();

    // mode-by-mode: (omega.d)(A',B') = -d_phi f(X0)
    for (int i = 0; i < 2; ++i) {
        auto rhs = tensor_derivative(m.f, {lab.partner(i)}, {0.0, 0.0}, 0.0);
        FourierSeries lhs = fo.comp[i].omega_derivative(omega);
        for (const auto& [nu, v] : rhs) {
            if (nu_is_zero(nu)) continue;
            CHECK(std::abs(lhs.coeff(nu) + v) < 1e-12);
        }
    }
    // average condition: d_I f0 + Hessian (A'0, B'0) = 0
    auto h = m.hessian();
    for (int i = 0; i < 2; ++i) {
        auto d = tensor_derivative(m.f, {i}, {0.0, 0.0}, 0.0);
        Complex g0 = d.count({0}) ? d.at({0}) : Complex(0, 0);
        Complex s = g0;
        for (int j = 0; j < 2; ++j) s += h[i][j] * fo.comp[j].zero_mode();
        CHECK(std::abs(s) < 1e-12);
    }
    // B' mode +-1 from direct substitution: B'_nu = -[d_beta f]_nu / (i omega nu)
    auto db = tensor_derivative(m.f, {lab.beta()}, {0.0, 0.0}, 0.0);
    for (int nu : {1, -1}) {
        Complex expect = -db.at({nu}) / Complex(0.0, omega[0] * nu);
        CHECK(std::abs(fo.comp[1].coeff({nu}) - expect) < 1e-13);
    }
}

TEST_CASE("first-order correction invariants on random trig perturbations") {
    std::mt19937_64 rng(20240809);
    std::uniform_real_distribution<Real> unif(-1.0, 1.0);
    Labels lab(2);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<Term> terms;
        for (int nu = 0; nu <= 2; ++nu)
            for (int mm = -2; mm <= 2; ++mm) {
                if (nu == 0 && mm <= 0) continue;
                terms.push_back({{nu}, mm, {0, 0}, Complex(unif(rng), unif(rng)) * 0.5});
            }
        Model m = custom2d();
        m.f = build_function(2, terms);
        auto fo = first_order_correction(m, 0.3);
        const auto& omega = m.freq.omega();
        for (int i = 0; i < 2; ++i) {
            auto rhs = tensor_derivative(m.f, {lab.partner(i)}, {0.0, 0.0}, 0.3);
            FourierSeries lhs = fo.comp[i].omega_derivative(omega);
            for (const auto& [nu, v] : rhs) {
                if (nu_is_zero(nu)) continue;
                CHECK(std::abs(lhs.coeff(nu) + v) < 1e-10);
            }
        }
    }
}

TEST_CASE("constant a: counterexample model gives zero") {
    Model m = azero();
    CHECK(std::abs(constant_a(m, 0.0)) < 1e-10);
    CHECK(std::abs(constant_a_special(m, 0.0)) < 1e-10);
}

TEST_CASE("constant a: frozen value -3/(2 omega^2) on the custom model") {
    Model m = custom2d();
    Real w = m.freq.omega()[0];
    Real expect = -1.5 / (w * w);
    CHECK(std::abs(constant_a(m, 0.0) - expect) < 1e-10);
    CHECK(std::abs(constant_a_special(m, 0.0) - expect) < 1e-10);
}

TEST_CASE("constant a: the two routes agree on angle-only models") {
    Model m = custom3d();
    Real a1 = constant_a(m, 0.0);
    Real a2 = constant_a_special(m, 0.0);
    CHECK(std::abs(a1 - a2) < 1e-10);
    // frozen independent sum over the two fast modes
    Real phi = m.freq.omega()[1];
    Real expect = -1.5 * (1.0 + 1.0 / (phi * phi));
    CHECK(std::abs(a1 - expect) < 1e-10);
}

TEST_CASE("constant a special route: domain checks and phase modes") {
    Model m = custom2d();
    // action-dependent f is rejected
    Model ma = m;
    auto extra = build_function(2, {{{1}, 0, {1, 0}, Complex(0.25, 0.0)}});
    ma.f = m.f + extra;
    CHECK_THROWS_AS(constant_a_special(ma, 0.0), Error);
    // single fast mode with |f_nu| and |f_nu'| constant in beta: a = 0
    Model mp = m;
    mp.f = build_function(2, {{{1}, 1, {0, 0}, Complex(0.5, 0.0)}});
    CHECK(std::abs(constant_a(mp, 0.7)) < 1e-12);
    CHECK(std::abs(constant_a_special(mp, 0.7)) < 1e-12);
}

TEST_CASE("beta1 branches") {
    // odd k0: single branch
    auto b = beta1_branches(-1.0, 1.0, 1, 3);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == doctest::Approx(1.0));
    // even k0 with the favourable sign: symmetric pair
    Model m = custom2d();
    Real w = m.freq.omega()[0];
    Real a = -1.5 / (w * w);
    auto b2 = beta1_branches(a, 1.0, 1, 2);
    REQUIRE(b2.size() == 2);
    Real expect = std::sqrt(1.5 / (w * w));
    CHECK(std::abs(b2[0] - expect) < 1e-12);
    CHECK(std::abs(b2[1] + expect) < 1e-12);
    for (Real b1 : b2) CHECK(std::abs(1 * a + 1.0 * std::pow(b1, 2)) < 1e-12);
    // even k0, unfavourable sign: empty
    CHECK(beta1_branches(a, 1.0, -1, 2).empty());
    // a = 0: assumption violated
    CHECK_THROWS_AS(beta1_branches(0.0, 1.0, 1, 2), Error);
}

TEST_CASE("torus classification") {
    CHECK(classify_torus(3, 1.0, -1.0, -1, 1.0) == TorusType::Hyperbolic);
    CHECK(classify_torus(3, 1.0, -1.0, 1, 1.0) == TorusType::Elliptic);
    Model m = custom2d();
    Real w = m.freq.omega()[0];
    Real b1 = std::sqrt(1.5 / (w * w));
    CHECK(classify_torus(2, 1.0, -1.5 / (w * w), 1, b1) == TorusType::Elliptic);
    CHECK(classify_torus(2, 1.0, -1.5 / (w * w), 1, -b1) == TorusType::Hyperbolic);
    CHECK(classify_torus(1, -1.0, 0.5, 1, 0.1) == TorusType::OutOfScope);
}

TEST_CASE("classification is invariant under positive rescaling of f") {
    Model m = custom2d();
    Real a0 = constant_a(m, 0.0);
    auto base = beta1_branches(a0, 1.0, 1, 2);
    for (Real lambda : {0.5, 2.0, 10.0}) {
        Model ms = m;
        ms.f = m.f.scaled(Complex(lambda, 0.0));
        auto d = degeneracy_order(ms.f, 0.0);
        Real a = constant_a(ms, 0.0);
        CHECK(a == doctest::Approx(lambda * lambda * a0).epsilon(1e-10));
        CHECK(d.c == doctest::Approx(lambda).epsilon(1e-10));
        auto branches = beta1_branches(a, d.c, 1, d.k0);
        REQUIRE(branches.size() == 2);
        for (size_t i = 0; i < branches.size(); ++i)
            CHECK(classify_torus(d.k0, d.c, a, 1, branches[i]) ==
                  classify_torus(2, 1.0, a0, 1, base[i]));
    }
}

TEST_CASE("analyze_resonance on the counterexample: no continuation") {
    Model m = azero();
    auto rd = analyze_resonance(m, 0.0, 1);
    CHECK(rd.k0 == 2);
    CHECK(std::abs(rd.a) < 1e-10);
    CHECK_FALSE(rd.existsFlag);
    CHECK(rd.beta1Branches.empty());
}

TEST_CASE("heuristic normal form cross-checks") {
    Model m = custom2d();
    Real w = m.freq.omega()[0];
    Real eps = 1e-3;
    auto rep = heuristic_normal_form(m, 0.0, eps);
    Real a = constant_a(m, 0.0);
    CHECK(std::abs(rep.aFromPhi - a) < 1e-10);
    // slow-well coefficient c/(k0+1)
    CHECK(rep.slowWellCoeff == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // equilibrium shifts +- sqrt(3 eps / (2 w^2))
    REQUIRE(rep.deltaBeta0.size() == 2);
    Real expect = std::sqrt(3.0 * eps / (2.0 * w * w));
    CHECK(std::abs(rep.deltaBeta0[0] - expect) < 1e-12);
    CHECK(std::abs(rep.deltaBeta0[1] + expect) < 1e-12);
}

TEST_CASE("heuristic normal form: counterexample and trivial cases") {
    Model m = azero();
    auto rep = heuristic_normal_form(m, 0.0, 1e-3);
    CHECK(std::abs(rep.aFromPhi) < 1e-12);
    CHECK(rep.deltaBeta0.empty());

    Model mz = m;
    mz.f = AngleActionFunction(2);
    auto rz = heuristic_normal_form(mz, 0.0, 1e-3);
    CHECK(rz.Psi1.empty());
    CHECK(rz.Phi0.empty());
}
