#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclind/errors.hpp"
#include "fraclind/lindstedt.hpp"
#include "fraclind/selfenergy.hpp"

using namespace fraclind;

namespace {

const std::string kModelDir = FRACLIND_MODEL_DIR;

Model custom2d() { return load_model(kModelDir + "/two_dof_example.json"); }
Model custom3d() { return load_model(kModelDir + "/three_dof_example.json"); }

/// Custom model plus an even slow-harmonic part of the average; keeps the
/// stationary point, the degeneracy order, c and a, but makes the slow-well
/// quartic derivative nonzero so the subleading self-energy order appears.
Model custom2dEven(Real d = 0.05) {
    Model m = custom2d();
    auto extra = build_function(
        2, {{{0}, 2, {0, 0}, Complex(0.5 * d, 0.0)}, {{0}, 1, {0, 0}, Complex(-2.0 * d, 0.0)}});
    m.f = m.f + extra;
    m.validate();
    return m;
}

}  // namespace

TEST_CASE("lowest-degree blocks of the dressed matrix") {
    Model m = custom2d();
    auto rd = analyze_resonance(m, 0.0, 1);
    Real b1 = rd.beta1Branches[0];
    auto M = self_energy_scale_minus1(m, rd, b1, 4);
    Labels lab(2);

    // degree 0: the kinetic Hessian in the angle-row action-column block
    Eigen::MatrixXd d0 = M.degree_slice(0);
    CHECK(d0.bottomLeftCorner(2, 2).isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-14));
    CHECK(d0.topRows(2).isZero(1e-14));
    CHECK(d0.bottomRightCorner(2, 2).isZero(1e-14));

    // angle-only f: no action derivatives, so the branch-order slices vanish
    CHECK(M.degree_slice(1).isZero(0.0));
    CHECK(M.degree_slice(2).isZero(0.0));

    // the slow corner at degree 2 k0 - 1: -d^3 f0 beta1 / (k0-1)!
    Eigen::MatrixXd d3 = M.degree_slice(3);
    CHECK(d3(lab.B(), lab.beta()) == doctest::Approx(-2.0 * b1).epsilon(1e-12));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (!(r == lab.B() && c == lab.beta()))
                CHECK(std::abs(d3(r, c)) < 1e-14);
}

TEST_CASE("lowest-degree blocks with action-dependent perturbation") {
    Model m = custom2d();
    auto extra = build_function(2, {{{0}, 1, {2, 0}, Complex(0.0, -0.1)},
                                    {{0}, 1, {1, 1}, Complex(0.0, -0.05)}});
    m.f = m.f + extra;
    m.validate();
    auto rd = analyze_resonance(m, 0.0, 1);
    REQUIRE(rd.existsFlag);
    Real b1 = rd.beta1Branches[0];
    auto M = self_energy_scale_minus1(m, rd, b1, 4);
    Labels lab(2);
    std::vector<Real> zero(2, 0.0);

    // degree k0 slices match the second derivatives of the slow average
    Eigen::MatrixXd dk = M.degree_slice(2);
    auto f0 = m.f.fast_angle_average();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto t = tensor_derivative(f0, {i, j}, zero, 0.0);
            Real expect = t.count({0}) ? t.at({0}).real() : 0.0;
            CHECK(dk(lab.alpha(0) + i, j) == doctest::Approx(expect).epsilon(1e-12));
        }
    {
        Labels l(2);
        auto t = tensor_derivative(f0, {l.beta(), 0}, zero, 0.0);
        Real expect = -(t.count({0}) ? t.at({0}).real() : 0.0);
        CHECK(dk(l.B(), 0) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(check_symmetry(M));
    CHECK(check_zero_pattern(M));
}

TEST_CASE("symmetry holds and a corrupted entry breaks it") {
    Model m = custom2d();
    auto rd = analyze_resonance(m, 0.0, 1);
    auto M = self_energy_scale_minus1(m, rd, rd.beta1Branches[0], 4);
    CHECK(check_symmetry(M));
    CHECK(check_zero_pattern(M));
    auto bad = M;
    bad.entry(0, 0).c[3] += 0.1;
    CHECK_FALSE(check_symmetry(bad));
    SelfEnergyMatrix zero(2, 3);
    CHECK(check_symmetry(zero));
    CHECK(check_zero_pattern(zero));
}

TEST_CASE("determinant identity for the resummed denominator") {
    for (int which = 0; which < 2; ++which) {
        Model m = which ? custom3d() : custom2d();
        auto rd = analyze_resonance(m, 0.0, 1);
        auto M = self_energy_scale_minus1(m, rd, rd.beta1Branches[0], 2 * rd.k0);
        std::mt19937_64 rng(11 + which);
        std::uniform_real_distribution<Real> ux(-2.0, 2.0), ue(1e-4, 5e-2);
        for (int rep = 0; rep < 20; ++rep) {
            Real x = ux(rng);
            if (std::abs(x) < 0.05) x += 0.2;
            Real eta = ue(rng);
            int n = 2 * m.N;
            Eigen::MatrixXcd A = Complex(0.0, x) * Eigen::MatrixXcd::Identity(n, n) -
                                 M.evaluate(eta).cast<Complex>();
            Complex det = A.determinant();
            Complex ix(0.0, x);
            Complex expect = -std::pow(ix, 2 * (m.N - 1)) * invertibility_value(x, eta, M);
            CHECK(std::abs(det - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST_CASE("resummed propagator inverts its denominator") {
    Model m = custom2d();
    auto rd = analyze_resonance(m, 0.0, 1);
    auto M = self_energy_scale_minus1(m, rd, rd.beta1Branches[0], 4);
    Real x = 1.2, eta = 1e-2;
    auto g = resummed_propagator(x, eta, M);
    Eigen::MatrixXcd A = Complex(0.0, x) * Eigen::MatrixXcd::Identity(4, 4) -
                         M.evaluate(eta).cast<Complex>();
    CHECK((A * g - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    // the elliptic branch root of the scalar condition is a genuine pole
    Real lam = -M.blockR(eta)(1, 1) * M.blockP(eta)(1, 1) -
               M.blockQ(eta)(1, 1) * M.blockQ(eta)(1, 1);
    REQUIRE(lam > 0.0);
    Real xs = std::sqrt(lam);
    CHECK_FALSE(invertibility_condition(xs, eta, M));
    CHECK_THROWS_AS(resummed_propagator(xs, eta, M), Error);
    // eta = 0: reduces to x^2 != 0
    CHECK(invertibility_value(1.0, 0.0, M) == doctest::Approx(1.0));
}

TEST_CASE("propagator bound scan on the divisor grid") {
    for (int which = 0; which < 2; ++which) {
        Model m = which ? custom3d() : custom2d();
        auto rd = analyze_resonance(m, 0.0, 1);
        auto M = self_energy_scale_minus1(m, rd, rd.beta1Branches[0], 2 * rd.k0);
        std::vector<Real> grid;
        int dim = m.N - 1;
        NuVec nu(dim, 0);
        std::function<void(int, int)> scan = [&](int idx, int rem) {
            if (idx == dim) {
                if (!nu_is_zero(nu)) grid.push_back(m.freq.dot(nu));
                return;
            }
            for (int v = -rem; v <= rem; ++v) {
                nu[idx] = v;
                scan(idx + 1, rem - std::abs(v));
            }
            nu[idx] = 0;
        };
        scan(0, which ? 50 : 50);
        auto rep = propagator_bound_scan(M, 1e-2, 10.0, rd.k0, grid);
        CHECK(rep.pass);
        CHECK(rep.scanned > 0);
        CHECK(rep.minimalRho == 0.0);
    }
}

TEST_CASE("scale partition of unity and plateaus") {
    ScaleBand band{1.0, 0};
    for (int n : {0, 1, 3}) {
        ScaleBand bn{1.0, n};
        for (int i = 0; i <= 1000; ++i) {
            Real D = 2.0 * i / 1000.0;
            Real psi = bn.psi(D);
            CHECK(psi + bn.chi(D) == 1.0);  // exact by construction
            CHECK(psi >= 0.0);
            CHECK(psi <= 1.0);
        }
        CHECK(bn.psi(std::ldexp(1.0, -2 * n)) == 1.0);
        CHECK(bn.psi(std::ldexp(0.25, -2 * n)) == 0.0);
    }
    // monotone on the ramp
    Real prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
        Real D = 0.25 + 0.75 * i / 200.0;
        Real v = band.psi(D);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("band index from the threshold inequality") {
    // rho etaBar^{2k0-1} = 1/20 lands strictly between 2^{-6} and 2^{-4}
    CHECK(n0_from_epsilon(1.0, 0.05, 1.0, 2) == 2);
    // exact upper boundary belongs to the band
    CHECK(n0_from_epsilon(1.0, 0.25, 1.0, 2) == 1);
    CHECK(n0_from_epsilon(1.0, 10.0, 1e-1, 2) == 3);
    CHECK_THROWS_AS(n0_from_epsilon(1.0, 2.0, 1.0, 2), Error);
}

TEST_CASE("family cancellations at the lowest cluster degree") {
    for (int which = 0; which < 2; ++which) {
        Model m = which ? custom3d() : custom2d();
        auto rd = analyze_resonance(m, 0.0, 1);
        auto M = self_energy_scale_minus1(m, rd, rd.beta1Branches[0], 2 * rd.k0);
        auto rep = cancellation_family_check(m, rd, rd.beta1Branches[0], 1e-2, M);
        CHECK(rep.pass);
        CHECK(rep.families == (which ? 2 : 1));
        CHECK(rep.maxRowColAtZero < 1e-10);
        CHECK(rep.maxCrossDerivative < 1e-7);
        CHECK(rep.controlSingleCluster > 1e-6);
    }
}

TEST_CASE("isolated eigenvalue of the slow block and its limit") {
    Model m = custom2d();
    auto rd = analyze_resonance(m, 0.0, 1);
    Real b1 = rd.beta1Branches[0];
    auto M = self_energy_scale_minus1(m, rd, b1, 4);
    Real ellLimit = rd.c * rd.k0 * 1.0 * std::pow(b1, rd.k0 - 1);  // c k0 d2BB H0 beta1^{k0-1}
    // the even-free custom model carries no subleading correction: exact
    for (Real eta : {1e-2, 1e-3, 1e-4}) {
        auto est = lowest_eigenvalue_estimate(m, M, 0.0, eta, rd.k0, rd.sigma);
        CHECK(std::abs(est.ell - ellLimit) < 1e-9 * std::abs(ellLimit));
        CHECK(est.lambda > 0.0);
    }
    // hyperbolic branch: negative self-energy eigenvalue
    Real bMinus = rd.beta1Branches[1];
    auto Mh = self_energy_scale_minus1(m, rd, bMinus, 4);
    auto esth = lowest_eigenvalue_estimate(m, Mh, 0.0, 1e-2, rd.k0, rd.sigma);
    CHECK(esth.lambda < 0.0);
}

TEST_CASE("eigenvalue limit with a first-order error on the generic variant") {
    Model m = custom2dEven();
    auto rd = analyze_resonance(m, 0.0, 1);
    REQUIRE(rd.k0 == 2);
    Real b1 = rd.beta1Branches[0];
    auto M = self_energy_scale_minus1(m, rd, b1, 5);
    Real ellLimit = rd.c * rd.k0 * 1.0 * std::pow(b1, rd.k0 - 1);
    std::vector<Real> etas = {1e-2, 1e-3, 1e-4};
    std::vector<Real> errs;
    for (Real eta : etas) {
        auto est = lowest_eigenvalue_estimate(m, M, 0.0, eta, rd.k0, rd.sigma);
        errs.push_back(std::abs(est.ell - ellLimit));
    }
    Real slope = std::log(errs[0] / errs[2]) / std::log(etas[0] / etas[2]);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("divisor inequality inside the small-divisor band") {
    Model m = custom3d();
    auto rd = analyze_resonance(m, 0.0, 1);
    auto M = self_energy_scale_minus1(m, rd, rd.beta1Branches[0], 4);
    Real eta = 0.05, rho = 25.0;
    Real lim = std::sqrt(rho * std::pow(eta, 2 * rd.k0 - 1));
    int checked = 0;
    // divisor-grid points inside the band
    for (int n1 = -50; n1 <= 50; ++n1)
        for (int n2 = -50 + std::abs(n1); n2 <= 50 - std::abs(n1); ++n2) {
            if (!n1 && !n2) continue;
            Real x = m.freq.dot({n1, n2});
            if (x * x > rho * std::pow(eta, 2 * rd.k0 - 1)) continue;
            CHECK(propagator_divisor_inequality(m, M, x, eta, rd.k0, rd.sigma));
            ++checked;
        }
    CHECK(checked > 0);
    // plus a dense in-band sample
    for (int i = 1; i <= 60; ++i) {
        Real x = lim * i / 60.0;
        CHECK(propagator_divisor_inequality(m, M, x, eta, rd.k0, rd.sigma));
        CHECK(propagator_divisor_inequality(m, M, -x, eta, rd.k0, rd.sigma));
    }
}

TEST_CASE("excluded measure: two-degree-of-freedom divisors never resonate") {
    Model m = custom2d();
    auto rd = analyze_resonance(m, 0.0, 1);
    auto out = excluded_measure_single_scale(m, rd, rd.beta1Branches[0], 3e-3, 4, 2, 50, 0.25);
    CHECK(out.totalMeasure == 0.0);
    CHECK(out.intervals.empty());
}

TEST_CASE("excluded measure: hyperbolic branch excludes nothing") {
    Model m = custom3d();
    auto rd = analyze_resonance(m, 0.0, 1);
    auto out = excluded_measure_single_scale(m, rd, rd.beta1Branches[1], 3e-3, 4, 2, 100, 0.25);
    CHECK(out.totalMeasure == 0.0);
}

TEST_CASE("excluded measure: elliptic sweep, bound and scale decay") {
    Model m = custom3d();
    auto rd = analyze_resonance(m, 0.0, 1);
    Real b1 = rd.beta1Branches[0];
    Real epsBar = 3e-3;
    int m0 = 2;
    auto base = excluded_measure_single_scale(m, rd, b1, epsBar, 4, m0, 100, 0.25);
    CHECK(base.totalMeasure > 0.0);
    CHECK(base.contributingModes > 0);
    CHECK(base.totalMeasure <= base.bound * (1 + 1e-12));  // fitted at this scale
    // deeper scales shrink by 2^{-1/2} per step and stay within the bound
    auto next = excluded_measure_single_scale(m, rd, b1, epsBar, 4, m0 + 1, 100, 0.25,
                                              base.fittedK);
    CHECK(next.totalMeasure > 0.0);
    CHECK(next.totalMeasure <= next.bound * (1 + 1e-12));
    Real ratio = next.totalMeasure / base.totalMeasure;
    CHECK(ratio == doctest::Approx(std::pow(2.0, -0.5)).epsilon(0.1));
}
