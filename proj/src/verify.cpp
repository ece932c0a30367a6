#include "fraclind/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "fraclind/errors.hpp"
#include "fraclind/lindstedt.hpp"
#include "fraclind/resonance.hpp"
#include "fraclind/selfenergy.hpp"
#include "fraclind/trees.hpp"

namespace fraclind {

namespace {

struct Runner {
    std::vector<CriterionResult>& out;
    std::ostream* log;

    void run(int id, const std::string& name, const std::function<std::string()>& body) {
        CriterionResult r;
        r.id = id;
        r.name = name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            r.detail = body();
            r.pass = true;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (log)
            (*log) << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << name
                   << " -- " << r.detail << " (" << r.seconds << " s)\n";
        out.push_back(r);
    }
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(ErrorCode::ValidationError, msg);
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

/// Custom two-degree model plus an even slow-harmonic addition: keeps the
/// stationary point, k0, c and the coupling constant, but gives the slow
/// well a nonzero fourth derivative so the subleading self-energy order is
/// populated.
Model even_variant(const Model& base, Real d) {
    Model m = base;
    auto extra = build_function(
        2, {{{0}, 2, {0, 0}, Complex(0.5 * d, 0.0)}, {{0}, 1, {0, 0}, Complex(-2.0 * d, 0.0)}});
    m.f = m.f + extra;
    m.validate();
    return m;
}

Real select_beta0(const Model& m) {
    auto pts = find_stationary_points(m.f.fast_angle_average());
    for (Real b : pts) {
        try {
            auto d = degeneracy_order(m.f, b);
            if (d.k0 >= 2) return b;
        } catch (const Error&) {
        }
    }
    throw Error(ErrorCode::NoStationaryPoint, "no degenerate stationary point");
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::vector<CriterionResult> run_acceptance(const std::string& modelDir, std::ostream* log) {
    std::vector<CriterionResult> results;
    Runner R{results, log};

    Model m2 = load_model(modelDir + "/two_dof_example.json");
    Model mz = load_model(modelDir + "/a_zero_example.json");
    Model m3 = load_model(modelDir + "/three_dof_example.json");
    Labels lab2(2);

    R.run(1, "coupling-constant counterexample is detected and refused", [&] {
        Real beta0 = select_beta0(mz);
        require(std::abs(beta0) < 1e-7, "unexpected stationary point");
        auto d = degeneracy_order(mz.f, beta0);
        require(d.k0 == 2, "degeneracy order is not 2");
        std::vector<Real> zero(2, 0.0);
        auto t3 = tensor_derivative(mz.f.fast_angle_average(),
                                    {lab2.beta(), lab2.beta(), lab2.beta()}, zero, beta0);
        Real third = t3.count({0}) ? t3.at({0}).real() : 0.0;
        require(std::abs(third - 2.0) < 1e-12, "third slow derivative is not 2");
        Real a = constant_a(mz, beta0);
        require(std::abs(a) < 1e-10, "coupling constant does not vanish");
        auto rd = analyze_resonance(mz, beta0, 1);
        require(!rd.existsFlag, "expansion not refused");
        bool threw = false;
        try {
            expand(mz, rd, 0.1, 4);
        } catch (const Error& e) {
            threw = e.code() == ErrorCode::AssumptionAViolated;
        }
        require(threw, "expansion did not raise the branch-assumption error");
        return "k0=2, third derivative 2, a=" + fmt(a) + ", expansion refused";
    });

    Real beta0 = 0.0;
    auto rd2 = analyze_resonance(m2, beta0, 1);
    Real w = m2.freq.omega()[0];

    R.run(2, "coupling constant agrees across the three routes", [&] {
        Real a1 = constant_a(m2, beta0);
        Real a2 = constant_a_special(m2, beta0);
        auto nf = heuristic_normal_form(m2, beta0, 1e-3);
        Real expect = -1.5 / (w * w);
        require(std::abs(a1 - a2) < 1e-10, "general and closed-form routes disagree");
        require(std::abs(a1 - nf.aFromPhi) < 1e-10, "normal-form route disagrees");
        require(std::abs(a1 - expect) < 1e-10, "value differs from -3/(2 w^2)");
        return "a = " + fmt(a1) + " on all three routes";
    });

    R.run(3, "branches solve the balance relation and split by stability", [&] {
        require(rd2.existsFlag, "no branches");
        require(rd2.beta1Branches.size() == 2, "expected two branches");
        for (Real b1 : rd2.beta1Branches)
            require(std::abs(rd2.sigma * rd2.a + rd2.c * std::pow(b1, rd2.k0)) < 1e-12,
                    "branch fails the balance relation");
        int ell = 0, hyp = 0;
        for (auto t : rd2.classificationPerBranch) {
            if (t == TorusType::Elliptic) ++ell;
            if (t == TorusType::Hyperbolic) ++hyp;
        }
        require(ell == 1 && hyp == 1, "expected one elliptic and one hyperbolic branch");
        return "beta1 = +-" + fmt(rd2.beta1Branches[0]) + ", elliptic/hyperbolic split";
    });

    EtaSeries series6;
    R.run(4, "order-by-order identities and residual scaling (K=6)", [&] {
        series6 = expand(m2, rd2, rd2.beta1Branches[0], 6);
        Real worst = 0.0;
        for (int k = 1; k <= 6; ++k) {
            auto r = check_compatibility(m2, series6, k);
            for (Real v : r) worst = std::max(worst, v);
        }
        require(worst < 1e-9, "compatibility residual " + fmt(worst));
        auto rep = residual_scaling(m2, series6, {1e-3, 2e-3, 5e-3, 1e-2});
        require(rep.fittedExponent >= 6.5,
                "fitted exponent " + fmt(rep.fittedExponent) + " below 6.5");
        return "max residual " + fmt(worst) + ", fitted exponent " +
               fmt(rep.fittedExponent);
    });

    R.run(5, "tree sums equal the recursion and line counts stay bounded", [&] {
        EtaSeries ref = expand(m2, rd2, rd2.beta1Branches[0], 8);
        TreeOracle oracle(m2, rd2, rd2.beta1Branches[0]);
        int cap = oracle.cap();
        int maxNu = m2.f.max_nu_l1();
        Real worst = 0.0;
        long trees = 0;
        for (int k = 1; k <= cap; ++k)
            for (int g = 0; g < 4; ++g)
                for (int nu = -k * maxNu; nu <= k * maxNu; ++nu) {
                    Complex sum = oracle.sum_tree_values(k, {nu}, g);
                    Complex rec;
                    if (nu == 0 && g == lab2.beta())
                        rec = Complex(ref.betaAvg[k], 0.0);
                    else if (nu == 0 && lab2.is_angle(g))
                        rec = Complex(0.0, 0.0);
                    else
                        rec = ref.orders[k][g].coeff({nu});
                    Real scale = std::max({1e-8, std::abs(rec), std::abs(sum)});
                    worst = std::max(worst, std::abs(sum - rec) / scale);
                    auto rep = oracle.line_count_check(k, {nu}, g);
                    trees += rep.trees;
                    require(rep.pass, "line-count bound violated");
                }
        require(worst < 1e-10, "tree/recursion mismatch " + fmt(worst));
        return std::to_string(trees) + " trees, worst relative gap " + fmt(worst);
    });

    SelfEnergyMatrix M2;
    R.run(6, "dressed-matrix structure, symmetry and determinant identity", [&] {
        M2 = self_energy_scale_minus1(m2, rd2, rd2.beta1Branches[0], 2 * rd2.k0);
        // lowest-degree blocks against the derivative data
        Eigen::MatrixXd d0 = M2.degree_slice(0);
        auto h = m2.hessian();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                require(d0(lab2.alpha(0) + i, j) == h[i][j], "kinetic block mismatch");
        std::vector<Real> zero(2, 0.0);
        auto f0 = m2.f.fast_angle_average();
        Eigen::MatrixXd dk = M2.degree_slice(rd2.k0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                auto t = tensor_derivative(f0, {i, j}, zero, beta0);
                Real expect = rd2.sigma * (t.count({0}) ? t.at({0}).real() : 0.0);
                require(dk(2 + i, j) == expect, "second-derivative block mismatch");
            }
        auto t3 = tensor_derivative(f0, {lab2.beta(), lab2.beta(), lab2.beta()}, zero, beta0);
        Real corner = -rd2.sigma * t3.at({0}).real() * rd2.beta1Branches[0];
        Eigen::MatrixXd dc = M2.degree_slice(2 * rd2.k0 - 1);
        require(std::abs(dc(lab2.B(), lab2.beta()) - corner) < 1e-13 * std::abs(corner),
                "slow corner mismatch");
        require(check_symmetry(M2), "symplectic symmetry fails");
        require(check_zero_pattern(M2), "zero pattern fails");
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<Real> ux(-2.0, 2.0), ue(1e-4, 5e-2);
        for (int rep = 0; rep < 20; ++rep) {
            Real x = ux(rng);
            if (std::abs(x) < 0.05) x += 0.2;
            Real eta = ue(rng);
            Eigen::MatrixXcd A = Complex(0.0, x) * Eigen::MatrixXcd::Identity(4, 4) -
                                 M2.evaluate(eta).cast<Complex>();
            Complex det = A.determinant();
            Complex expect =
                -std::pow(Complex(0.0, x), 2) * invertibility_value(x, eta, M2);
            require(std::abs(det - expect) < 1e-10 * std::max(1.0, std::abs(expect)),
                    "determinant identity fails");
        }
        return "lowest-degree blocks exact, symmetry and determinant verified";
    });

    R.run(7, "resummed propagator bound on the divisor grid", [&] {
        std::vector<Real> grid;
        for (int nu = -50; nu <= 50; ++nu)
            if (nu != 0) grid.push_back(m2.freq.dot({nu}));
        auto scan = propagator_bound_scan(M2, 1e-2, 0.0, rd2.k0, grid);
        require(scan.minimalRho == 0.0 && scan.pass,
                "bound fails; minimal rho " + fmt(scan.minimalRho));
        // the three-degree model has genuine small divisors: scan it too
        auto rd3 = analyze_resonance(m3, 0.0, 1);
        auto M3 = self_energy_scale_minus1(m3, rd3, rd3.beta1Branches[0], 2 * rd3.k0);
        std::vector<Real> grid3;
        for (int n1 = -50; n1 <= 50; ++n1)
            for (int n2 = -50 + std::abs(n1); n2 <= 50 - std::abs(n1); ++n2)
                if (n1 || n2) grid3.push_back(m3.freq.dot({n1, n2}));
        auto scan3 = propagator_bound_scan(M3, 1e-2, 10.0, rd3.k0, grid3);
        require(scan3.pass, "three-degree bound fails");
        return "all " + std::to_string(scan.scanned + scan3.scanned) +
               " grid points pass; minimal rho " + fmt(scan.minimalRho);
    });

    R.run(8, "lowest-degree family cancellations", [&] {
        auto rep = cancellation_family_check(m2, rd2, rd2.beta1Branches[0], 1e-2, M2);
        require(rep.maxRowColAtZero < 1e-10, "family sum " + fmt(rep.maxRowColAtZero));
        require(rep.maxCrossDerivative < 1e-7,
                "cross derivative " + fmt(rep.maxCrossDerivative));
        require(rep.controlSingleCluster > 1e-6,
                "single-cluster control too small: " + fmt(rep.controlSingleCluster));
        return "sums " + fmt(rep.maxRowColAtZero) + ", derivative " +
               fmt(rep.maxCrossDerivative) + ", control " + fmt(rep.controlSingleCluster);
    });

    R.run(9, "slow-block eigenvalue asymptotics and divisor inequality", [&] {
        Real b1 = rd2.beta1Branches[0];
        Real ellLimit = rd2.c * rd2.k0 * std::pow(b1, rd2.k0 - 1);  // d2_BB H0 = 1
        std::vector<Real> etas = {1e-2, 1e-3, 1e-4};
        std::vector<Real> errs;
        for (Real eta : etas) {
            auto est = lowest_eigenvalue_estimate(m2, M2, 0.0, eta, rd2.k0, rd2.sigma);
            errs.push_back(std::abs(est.ell - ellLimit));
        }
        std::string note;
        if (errs[0] < 1e-9 * std::abs(ellLimit)) {
            // the shipped model is odd about its stationary point, so the
            // first-order error coefficient vanishes identically; fit the
            // slope on an even-perturbed variant instead
            Model mg = even_variant(m2, 0.05);
            auto rdg = analyze_resonance(mg, beta0, 1);
            auto Mg = self_energy_scale_minus1(mg, rdg, rdg.beta1Branches[0], 2 * rdg.k0 + 1);
            Real lim = rdg.c * rdg.k0 * std::pow(rdg.beta1Branches[0], rdg.k0 - 1);
            errs.clear();
            for (Real eta : etas) {
                auto est = lowest_eigenvalue_estimate(mg, Mg, 0.0, eta, rdg.k0, rdg.sigma);
                errs.push_back(std::abs(est.ell - lim));
            }
            note = "limit exact on the shipped model; slope fitted on the even variant: ";
        }
        Real slope = std::log(errs[0] / errs[2]) / std::log(etas[0] / etas[2]);
        require(std::abs(slope - 1.0) <= 0.3, "error slope " + fmt(slope));

        // divisor inequality inside the small-divisor band, where genuine
        // small divisors exist (three-degree model)
        auto rd3 = analyze_resonance(m3, 0.0, 1);
        auto M3 = self_energy_scale_minus1(m3, rd3, rd3.beta1Branches[0], 2 * rd3.k0);
        Real eta = 0.05, rho = 25.0;
        Real band = rho * std::pow(eta, 2 * rd3.k0 - 1);
        int checked = 0;
        for (int n1 = -50; n1 <= 50; ++n1)
            for (int n2 = -50 + std::abs(n1); n2 <= 50 - std::abs(n1); ++n2) {
                if (!n1 && !n2) continue;
                Real x = m3.freq.dot({n1, n2});
                if (x * x > band) continue;
                require(propagator_divisor_inequality(m3, M3, x, eta, rd3.k0, rd3.sigma),
                        "divisor inequality fails at x=" + fmt(x));
                ++checked;
            }
        for (int i = 1; i <= 60; ++i) {
            Real x = std::sqrt(band) * i / 60.0;
            require(propagator_divisor_inequality(m3, M3, x, eta, rd3.k0, rd3.sigma),
                    "divisor inequality fails at x=" + fmt(x));
            require(propagator_divisor_inequality(m3, M3, -x, eta, rd3.k0, rd3.sigma),
                    "divisor inequality fails at x=" + fmt(-x));
            ++checked;
        }
        return note + "slope " + fmt(slope) + ", inequality checked at " +
               std::to_string(checked) + " in-band points";
    });

    R.run(10, "excluded-measure bound and scale decay", [&] {
        auto rd3 = analyze_resonance(m3, 0.0, 1);
        Real b1 = rd3.beta1Branches[0];  // elliptic branch
        require(rd3.classificationPerBranch[0] == TorusType::Elliptic, "branch order");
        Real epsBar = 3e-3;
        Real etaBar = std::pow(epsBar, 1.0 / rd3.k0);
        int n0 = n0_from_epsilon(m3.freq.C0(), 25.0, etaBar, rd3.k0);
        auto base = excluded_measure_single_scale(m3, rd3, b1, epsBar, 4, n0, 100, 0.25);
        require(base.totalMeasure > 0.0, "no excluded intervals at the base scale");
        require(base.totalMeasure <= base.bound * (1 + 1e-12), "measure above the bound");
        auto next =
            excluded_measure_single_scale(m3, rd3, b1, epsBar, 4, n0 + 1, 100, 0.25,
                                          base.fittedK);
        require(next.totalMeasure <= next.bound * (1 + 1e-12),
                "deeper scale exceeds the fitted bound");
        Real ratio = next.totalMeasure / base.totalMeasure;
        require(std::abs(ratio - std::pow(2.0, -0.5)) <= 0.1 * std::pow(2.0, -0.5),
                "scale decay ratio " + fmt(ratio));
        return "scale " + std::to_string(n0) + ": measure " + fmt(base.totalMeasure) +
               " <= bound " + fmt(base.bound) + ", decay ratio " + fmt(ratio);
    });

    return results;
}

}  // namespace fraclind
