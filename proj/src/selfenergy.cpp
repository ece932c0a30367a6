#include "fraclind/selfenergy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "fraclind/errors.hpp"
#include "fraclind/trees.hpp"

namespace fraclind {

Real EtaPolynomial::eval(Real eta) const {
    Real s = 0.0;
    for (int k = degree(); k >= 0; --k) s = s * eta + c[k];
    return s;
}

SelfEnergyMatrix::SelfEnergyMatrix(int N, int degree)
    : n_(N), deg_(degree),
      e_(2 * N, std::vector<EtaPolynomial>(2 * N, EtaPolynomial(degree))) {}

Eigen::MatrixXd SelfEnergyMatrix::evaluate(Real eta) const {
    Eigen::MatrixXd M(2 * n_, 2 * n_);
    for (int r = 0; r < 2 * n_; ++r)
        for (int c = 0; c < 2 * n_; ++c) M(r, c) = e_[r][c].eval(eta);
    return M;
}

Eigen::MatrixXd SelfEnergyMatrix::degree_slice(int k) const {
    Eigen::MatrixXd M(2 * n_, 2 * n_);
    for (int r = 0; r < 2 * n_; ++r)
        for (int c = 0; c < 2 * n_; ++c) M(r, c) = e_[r][c].c[k];
    return M;
}

Eigen::MatrixXd SelfEnergyMatrix::blockQ(Real eta) const {
    return evaluate(eta).topLeftCorner(n_, n_);
}
Eigen::MatrixXd SelfEnergyMatrix::blockR(Real eta) const {
    return evaluate(eta).topRightCorner(n_, n_);
}
Eigen::MatrixXd SelfEnergyMatrix::blockP(Real eta) const {
    return evaluate(eta).bottomLeftCorner(n_, n_);
}

namespace {

/// Cached node-derivative tensors of f and H0 at the working point.
class NodeTensors {
  public:
    NodeTensors(const Model& m, Real beta0) : m_(m), lab_(m.N), beta0_(beta0) {}

    /// Node-side pairing label gammaRight with derivative slots applied to f
    /// (useF) or H0, evaluated at the fast mode nuv.
    Complex factor(bool useF, const NuVec& nuv, int gammaRight, std::vector<int> slots) {
        int outer;
        Real sign;
        if (lab_.is_action(gammaRight)) {
            outer = gammaRight + m_.N;
            sign = -1.0;
        } else {
            outer = gammaRight - m_.N;
            sign = 1.0;
        }
        slots.push_back(outer);
        std::sort(slots.begin(), slots.end());
        auto& cache = useF ? cacheF_ : cacheH_;
        auto it = cache.find(slots);
        if (it == cache.end()) {
            std::vector<Real> zero(m_.N, 0.0);
            it = cache
                     .emplace(slots,
                              tensor_derivative(useF ? m_.f : m_.H0, slots, zero, beta0_))
                     .first;
        }
        auto jt = it->second.find(nuv);
        if (jt == it->second.end()) return Complex(0.0, 0.0);
        return sign * jt->second;
    }

  private:
    const Model& m_;
    Labels lab_;
    Real beta0_;
    std::map<std::vector<int>, std::map<NuVec, Complex>> cacheF_, cacheH_;
};

Eigen::MatrixXd symplectic_matrix(int N) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    E.topRightCorner(N, N) = -Eigen::MatrixXd::Identity(N, N);
    E.bottomLeftCorner(N, N) = Eigen::MatrixXd::Identity(N, N);
    return E;
}

/// Smallest |eigenvalue| of the Hermitian matrix (ix - M(eta)) E; its
/// reciprocal is the spectral norm of the resummed propagator.
Real smallest_denominator(Real x, Real eta, const SelfEnergyMatrix& M) {
    const int N = M.N();
    Eigen::MatrixXcd A = Complex(0.0, x) * Eigen::MatrixXcd::Identity(2 * N, 2 * N) -
                         M.evaluate(eta).cast<Complex>();
    Eigen::MatrixXcd H = A * symplectic_matrix(N).cast<Complex>();
    if (!H.isApprox(H.adjoint(), 1e-8))
        throw Error(ErrorCode::ValidationError, "denominator times pairing is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    return es.eigenvalues().cwiseAbs().minCoeff();
}

}  // namespace

SelfEnergyMatrix self_energy_scale_minus1(const Model& m, const ResonanceData& rd, Real beta1,
                                          int D) {
    if (D < rd.k0)
        throw Error(ErrorCode::OutOfRange, "truncation degree below the branch order");
    const int N = m.N;
    Labels lab(N);
    TreeOracleOptions opts;
    opts.cap = D;
    opts.zeroSectorOnly = true;
    TreeOracle oracle(m, rd, beta1, opts);
    NodeTensors tensors(m, rd.beta0);
    NuVec zeroNu = nu_zero(N - 1);

    // flattened zero-momentum child candidates: (degree, label) keys
    struct Cand {
        int deg;
        int gamma;
    };
    std::vector<Cand> candidates;
    for (int d = 1; d <= D; ++d)
        for (int g = 0; g < 2 * N; ++g) candidates.push_back({d, g});

    std::vector<std::vector<std::vector<Complex>>> accDeg(
        D + 1, std::vector<std::vector<Complex>>(2 * N, std::vector<Complex>(2 * N)));

    // assemble the central node: external entering slot 'col', exiting label
    // 'row', plus any multiset of zero-momentum children
    std::vector<int> stackIds;
    std::function<void(int, int, int, int, int, size_t, size_t)> choose =
        [&](int row, int col, int delta, int budget, int usedDeg, size_t pos, size_t idx) {
            {
                std::vector<int> slots;
                slots.push_back(col);
                Real aut = 1.0;
                int run = 1;
                for (size_t i = 0; i < stackIds.size(); ++i) {
                    slots.push_back(oracle.tree(stackIds[i]).gammaLeft);
                    if (i > 0 && stackIds[i] == stackIds[i - 1]) {
                        ++run;
                        aut *= run;
                    } else {
                        run = 1;
                    }
                }
                Complex factor = tensors.factor(delta == 1, zeroNu, row, slots);
                if (factor != Complex(0.0, 0.0)) {
                    Complex v = factor / aut;
                    if (delta == 1) v *= static_cast<Real>(rd.sigma);
                    for (int id : stackIds) v *= oracle.tree_value(id);
                    int deg = delta * rd.k0 + usedDeg;
                    accDeg[deg][row][col] += v;
                }
            }
            if (budget == 0) return;
            for (size_t p = pos; p < candidates.size(); ++p) {
                const Cand& cd = candidates[p];
                if (cd.deg > budget) continue;
                if (delta == 0 && !lab.is_action(cd.gamma)) continue;
                const auto& entries = oracle.enumerate_trees(cd.deg, zeroNu, cd.gamma);
                if (entries.empty()) continue;
                size_t start = (p == pos) ? idx : 0;
                for (size_t e = start; e < entries.size(); ++e) {
                    stackIds.push_back(entries[e]);
                    choose(row, col, delta, budget - cd.deg, usedDeg + cd.deg, p, e);
                    stackIds.pop_back();
                }
            }
        };

    for (int row = 0; row < 2 * N; ++row)
        for (int col = 0; col < 2 * N; ++col) {
            choose(row, col, 1, D - rd.k0, 0, 0, 0);
            // kinetic node: nonzero only for action slots and an angle-side row
            if (lab.is_angle(row) && lab.is_action(col)) choose(row, col, 0, D, 0, 0, 0);
        }

    SelfEnergyMatrix M(N, D);
    for (int deg = 0; deg <= D; ++deg)
        for (int r = 0; r < 2 * N; ++r)
            for (int c = 0; c < 2 * N; ++c) {
                Complex v = accDeg[deg][r][c];
                if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
                    throw Error(ErrorCode::ValidationError,
                                "self-energy entry has a nonreal value");
                M.entry(r, c).c[deg] = v.real();
            }
    return M;
}

bool check_symmetry(const SelfEnergyMatrix& M) {
    const int N = M.N();
    Eigen::MatrixXd E = symplectic_matrix(N);
    for (int k = 0; k <= M.degree(); ++k) {
        Eigen::MatrixXd S = M.degree_slice(k);
        Eigen::MatrixXd lhs = E * S * E;
        Real scale = std::max(1.0, S.cwiseAbs().maxCoeff());
        if ((lhs - S.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) return false;
    }
    return true;
}

bool check_zero_pattern(const SelfEnergyMatrix& M) {
    const int N = M.N();
    Labels lab(N);
    for (int k = 0; k <= M.degree(); ++k) {
        Eigen::MatrixXd S = M.degree_slice(k);
        for (int r = 0; r < 2 * N; ++r)
            for (int c = 0; c < 2 * N; ++c) {
                bool allowed;
                if (lab.is_action(r)) {
                    // only the slow-action row may be populated
                    allowed = (r == lab.B());
                } else {
                    // angle rows: full action block, slow-angle column only
                    allowed = lab.is_action(c) || c == lab.beta();
                }
                if (!allowed && S(r, c) != 0.0) return false;
            }
    }
    return true;
}

Real invertibility_value(Real x, Real eta, const SelfEnergyMatrix& M) {
    // det(ix - M) = -(ix)^{2(N-1)} [x^2 + Q_BB^2 + R_{B,beta} P_{beta,B}]
    // by Schur reduction using the zero pattern of the dressed matrix
    int B = Labels(M.N()).B();
    Eigen::MatrixXd Q = M.blockQ(eta);
    Eigen::MatrixXd R = M.blockR(eta);
    Eigen::MatrixXd P = M.blockP(eta);
    return x * x + R(B, B) * P(B, B) + Q(B, B) * Q(B, B);
}

bool invertibility_condition(Real x, Real eta, const SelfEnergyMatrix& M, Real tol) {
    Real v = invertibility_value(x, eta, M);
    Real scale = std::max(1.0, x * x);
    return std::abs(v) > tol * scale;
}

Eigen::MatrixXcd resummed_propagator(Real x, Real eta, const SelfEnergyMatrix& M) {
    if (!invertibility_condition(x, eta, M))
        throw Error(ErrorCode::SingularDenominator,
                    "resummed denominator vanishes at x = " + std::to_string(x));
    const int n = 2 * M.N();
    Eigen::MatrixXcd A = Complex(0.0, x) * Eigen::MatrixXcd::Identity(n, n) -
                         M.evaluate(eta).cast<Complex>();
    return A.inverse();
}

PropagatorBoundReport propagator_bound_scan(const SelfEnergyMatrix& M, Real eta, Real rho,
                                            int k0, const std::vector<Real>& xGrid) {
    PropagatorBoundReport rep;
    Eigen::MatrixXd P = M.blockP(eta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    Real mu1 = es.eigenvalues().minCoeff();
    Real muN = es.eigenvalues().maxCoeff();
    if (mu1 <= 0.0)
        throw Error(ErrorCode::ValidationError, "dressed kinetic block is not positive");

    Real threshold = rho * std::pow(eta, 2 * k0 - 1);
    rep.pass = true;
    Real worst = 0.0;
    for (Real x : xGrid) {
        if (x * x <= threshold) {
            ++rep.skippedBelowThreshold;
            continue;
        }
        Real denom = smallest_denominator(x, eta, M);
        Real norm = 1.0 / denom;
        Real bound = std::max(2.0 * muN / (x * x), 2.0 / mu1);
        rep.xValues.push_back(x);
        rep.norms.push_back(norm);
        rep.bounds.push_back(bound);
        ++rep.scanned;
        if (norm > bound) {
            rep.pass = false;
            worst = std::max(worst, x * x / std::pow(eta, 2 * k0 - 1));
        }
    }
    rep.minimalRho = worst;  // all grid points with x^2 above this rho scale pass
    return rep;
}

Real ScaleBand::psi(Real D) const {
    Real lo = C0 * C0 / 4.0, hi = C0 * C0;
    Real Dn = std::ldexp(D, 2 * n);  // psi_n(D) = psi(2^{2n} D)
    if (Dn <= lo) return 0.0;
    if (Dn >= hi) return 1.0;
    auto bump = [](Real t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    Real t = (Dn - lo) / (hi - lo);
    Real a = bump(t), b = bump(1.0 - t);
    return a / (a + b);
}

int n0_from_epsilon(Real C0, Real rho, Real etaBar, int k0) {
    Real r = rho * std::pow(etaBar, 2 * k0 - 1) / (C0 * C0);
    if (!(r > 0.0) || r >= 1.0)
        throw Error(ErrorCode::OutOfRange,
                    "scale threshold outside the admissible range: r = " + std::to_string(r));
    int n = 0;
    while (r <= std::ldexp(1.0, -2 * (n + 1))) ++n;
    // now 2^{-2(n+1)} < r <= 2^{-2n}
    return n;
}

CancellationReport cancellation_family_check(const Model& m, const ResonanceData& rd,
                                             Real beta1, Real eta, const SelfEnergyMatrix& M,
                                             Real fdStep) {
    const int N = m.N;
    Labels lab(N);
    NodeTensors tensors(m, rd.beta0);
    const Real C0 = m.freq.C0();
    if (fdStep <= 0.0) fdStep = 1e-5 * C0;
    ScaleBand band{C0, 0};

    auto g0 = [&](Real x) -> Eigen::MatrixXcd {
        Real cutoff = band.psi(x * x);
        if (cutoff == 0.0) return Eigen::MatrixXcd::Zero(2 * N, 2 * N);
        return cutoff * resummed_propagator(x, eta, M);
    };

    // first-derivative node tensors per fast mode, normalized per unit eps
    auto nodeMatrix = [&](const NuVec& mode) {
        Eigen::MatrixXcd F(2 * N, 2 * N);
        for (int gp = 0; gp < 2 * N; ++gp)
            for (int gs = 0; gs < 2 * N; ++gs) F(gp, gs) = tensors.factor(true, mode, gp, {gs});
        return F;
    };
    auto nodeMatrix2 = [&](const NuVec& mode, int extSlot) {
        Eigen::MatrixXcd F(2 * N, 2 * N);
        for (int gp = 0; gp < 2 * N; ++gp)
            for (int gs = 0; gs < 2 * N; ++gs)
                F(gp, gs) = tensors.factor(true, mode, gp, {extSlot, gs});
        return F;
    };
    auto endnodeVector = [&](const NuVec& mode) {
        Eigen::VectorXcd F(2 * N);
        for (int gp = 0; gp < 2 * N; ++gp)
            F(gp) = tensors.factor(true, mode, gp, std::vector<int>{});
        return F;
    };

    CancellationReport rep;
    std::vector<NuVec> modes;
    for (const auto& nu : m.f.support_nu())
        if (!nu_is_zero(nu) && nu_neg(nu) < nu) modes.push_back(nu);

    auto familySum = [&](const NuVec& mu, Real x) -> Eigen::MatrixXcd {
        NuVec mmu = nu_neg(mu);
        Real x1 = m.freq.dot(mu), x2 = m.freq.dot(mmu);
        Eigen::MatrixXcd F1 = nodeMatrix(mu), F2 = nodeMatrix(mmu);
        Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
        // enter at one node, exit at the other: the path carries x
        S += F2 * g0(x1 + x) * F1;
        S += F1 * g0(x2 + x) * F2;
        // both external lines at the same node; the hanging node is x-free
        for (int gp = 0; gp < 2 * N; ++gp)
            for (int gs = 0; gs < 2 * N; ++gs) {
                S(gp, gs) += (nodeMatrix2(mu, gs).row(gp) * g0(x2) * endnodeVector(mmu))(0);
                S(gp, gs) += (nodeMatrix2(mmu, gs).row(gp) * g0(x1) * endnodeVector(mu))(0);
            }
        return S;
    };

    rep.pass = true;
    for (const auto& mu : modes) {
        ++rep.families;
        Eigen::MatrixXcd S0 = familySum(mu, 0.0);
        Eigen::MatrixXcd Sd = (familySum(mu, fdStep) - familySum(mu, -fdStep)) / (2.0 * fdStep);
        for (int i = 0; i < N - 1; ++i)
            for (int g = 0; g < 2 * N; ++g) {
                rep.maxRowColAtZero = std::max(rep.maxRowColAtZero, std::abs(S0(lab.A(i), g)));
                rep.maxRowColAtZero =
                    std::max(rep.maxRowColAtZero, std::abs(S0(g, lab.alpha(i))));
            }
        for (int i = 0; i < N - 1; ++i)
            for (int j = 0; j < N - 1; ++j)
                rep.maxCrossDerivative =
                    std::max(rep.maxCrossDerivative, std::abs(Sd(lab.A(i), lab.alpha(j))));
        // negative control: a single attachment alone does not cancel
        NuVec mmu = nu_neg(mu);
        Eigen::MatrixXcd single = nodeMatrix(mmu) * g0(m.freq.dot(mu)) * nodeMatrix(mu);
        for (int i = 0; i < N - 1; ++i)
            for (int j = 0; j < N - 1; ++j)
                rep.controlSingleCluster = std::max(rep.controlSingleCluster,
                                                    std::abs(single(lab.A(i), lab.alpha(j))));
    }
    if (rep.maxRowColAtZero > 1e-10 || rep.maxCrossDerivative > 1e-7) rep.pass = false;
    if (!rep.pass)
        throw Error(ErrorCode::CancellationViolated,
                    "family sums fail to cancel: max " + std::to_string(rep.maxRowColAtZero));
    return rep;
}

EigenEstimate lowest_eigenvalue_estimate(const Model& m, const SelfEnergyMatrix& M, Real x,
                                         Real eta, int k0, int sigma) {
    const int N = m.N;
    Eigen::MatrixXcd Q = M.blockQ(eta).cast<Complex>();
    Eigen::MatrixXcd R = M.blockR(eta).cast<Complex>();
    Eigen::MatrixXcd P = M.blockP(eta).cast<Complex>();
    Eigen::MatrixXcd ix = Complex(0.0, x) * Eigen::MatrixXcd::Identity(N, N);
    Eigen::MatrixXcd Nmat = -R - (-ix + Q) * P.inverse() * (ix + Q.adjoint());

    auto h = m.hessian();
    Eigen::MatrixXd H(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) H(i, j) = h[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(H);
    Eigen::MatrixXd Hsqrt = hs.operatorSqrt();

    Eigen::MatrixXcd W = Hsqrt.cast<Complex>() * Nmat * Hsqrt.cast<Complex>();
    if (!W.isApprox(W.adjoint(), 1e-8))
        throw Error(ErrorCode::ValidationError, "conjugated slow block is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W);

    // background eigenvalues sit near -x^2; the isolated one carries the
    // self-energy shift
    int iso = 0;
    Real best = -1.0;
    for (int i = 0; i < N; ++i) {
        Real dev = std::abs(es.eigenvalues()(i) + x * x);
        if (dev > best) {
            best = dev;
            iso = i;
        }
    }
    Real second = 0.0;
    for (int i = 0; i < N; ++i) {
        if (i == iso) continue;
        second = std::max(second, std::abs(es.eigenvalues()(i) + x * x));
    }
    EigenEstimate out;
    out.x = x;
    out.eta = eta;
    out.lambda = es.eigenvalues()(iso) + x * x;
    out.gap = best - second;
    Real eps = sigma * std::pow(eta, k0);
    out.ell = out.lambda / (eps * std::pow(eta, k0 - 1));
    if (N > 1 && second > 0.5 * std::abs(out.lambda))
        throw Error(ErrorCode::NotIsolated,
                    "self-energy eigenvalue is not separated from the background");
    return out;
}

bool propagator_divisor_inequality(const Model& m, const SelfEnergyMatrix& M, Real x,
                                   Real eta, int k0, int sigma) {
    EigenEstimate est = lowest_eigenvalue_estimate(m, M, x, eta, k0, sigma);
    Eigen::MatrixXd P = M.blockP(eta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    Real mu = es.eigenvalues().maxCoeff();
    Real divisor = std::min(x * x, std::abs(x * x - est.lambda));
    return smallest_denominator(x, eta, M) >= divisor / (4.0 * mu);
}

ExcludedMeasure excluded_measure_single_scale(const Model& m, const ResonanceData& rd,
                                              Real beta1, Real epsBar, int selfEnergyDegree,
                                              int scaleM, int nuCutoff, Real delta1,
                                              Real fittedK) {
    const int N = m.N;
    const int k0 = rd.k0;
    if (rd.sigma != 1 || epsBar <= 0.0)
        throw Error(ErrorCode::OutOfRange, "the sweep assumes a positive eps range");
    SelfEnergyMatrix M = self_energy_scale_minus1(m, rd, beta1, selfEnergyDegree);

    auto sqrtLambda = [&](Real eps) -> Real {
        Real eta = std::pow(eps, 1.0 / k0);
        EigenEstimate est = lowest_eigenvalue_estimate(m, M, 0.0, eta, k0, rd.sigma);
        if (est.lambda <= 0.0) return -1.0;  // hyperbolic: nothing to exclude
        return std::sqrt(est.lambda);
    };

    const Real lo = epsBar / 4.0, hi = epsBar;
    const int grid = 64;
    Real prev = sqrtLambda(lo);
    bool elliptic = prev >= 0.0;
    for (int i = 1; i <= grid; ++i) {
        Real eps = lo + (hi - lo) * i / grid;
        Real cur = sqrtLambda(eps);
        if (cur < 0.0) elliptic = false;
        if (elliptic && cur < prev - 1e-15)
            throw Error(ErrorCode::NonMonotone, "self-energy root is not monotone in eps");
        prev = cur;
    }

    ExcludedMeasure out;
    out.scale = scaleM;
    const Real etaBar = std::pow(epsBar, 1.0 / k0);
    Real reference = m.freq.C0() * std::pow(2.0, -0.5 * scaleM) * epsBar *
                     std::pow(etaBar, delta1 * (k0 - 0.5));
    if (!elliptic) {
        out.fittedK = fittedK;
        out.bound = fittedK * reference;
        return out;
    }

    const Real tau1 = m.freq.tau0() * (1.0 + delta1) + N;
    Real sLo = sqrtLambda(lo), sHi = sqrtLambda(hi);

    auto invert = [&](Real target) -> Real {
        Real a = lo, b = hi;
        for (int it = 0; it < 80; ++it) {
            Real mid = 0.5 * (a + b);
            if (sqrtLambda(mid) < target)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    };

    std::vector<std::pair<Real, Real>> raw;
    NuVec nu(N - 1, 0);
    std::function<void(int, int)> scan = [&](int idx, int rem) {
        if (idx == N - 1) {
            if (nu_is_zero(nu)) return;
            Real x = std::abs(m.freq.dot(nu));
            Real t = std::pow(2.0, -0.5 * scaleM) * m.freq.C0() /
                     std::pow(static_cast<Real>(nu_l1(nu)), tau1);
            Real a = x - t, b = x + t;
            if (b <= sLo || a >= sHi) return;
            Real e1 = (a <= sLo) ? lo : invert(a);
            Real e2 = (b >= sHi) ? hi : invert(b);
            if (e2 > e1) raw.emplace_back(e1, e2);
            return;
        }
        for (int v = -rem; v <= rem; ++v) {
            nu[idx] = v;
            scan(idx + 1, rem - std::abs(v));
        }
        nu[idx] = 0;
    };
    scan(0, nuCutoff);

    std::sort(raw.begin(), raw.end());
    out.contributingModes = static_cast<int>(raw.size());
    for (const auto& iv : raw) {
        if (!out.intervals.empty() && iv.first <= out.intervals.back().second) {
            out.intervals.back().second = std::max(out.intervals.back().second, iv.second);
        } else {
            out.intervals.push_back(iv);
        }
    }
    for (const auto& iv : out.intervals) out.totalMeasure += iv.second - iv.first;

    if (fittedK <= 0.0)
        out.fittedK = (reference > 0.0) ? out.totalMeasure / reference : 0.0;
    else
        out.fittedK = fittedK;
    out.bound = out.fittedK * reference;
    return out;
}

}  // namespace fraclind
