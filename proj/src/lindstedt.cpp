#include "fraclind/lindstedt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fraclind/errors.hpp"

namespace fraclind {

namespace {

/// Evaluates compositions g(X(psi)) as truncated eta-series, for g one of the
/// model functions or their derivatives, along the current state of a series.
/// Exponential and power factors are cached per fast mode / slow harmonic.
class Composer {
  public:
    Composer(const Model& m, const EtaSeries& s, int kmax)
        : m_(m), N_(m.N), dim_(m.N - 1), kmax_(kmax), beta0_(s.beta0) {
        int ktop = std::min(s.K, kmax_);
        acts_.assign(N_, EtaPoly(dim_, kmax_));
        da_.assign(N_ - 1, EtaPoly(dim_, kmax_));
        db_ = EtaPoly(dim_, kmax_);
        for (int k = 1; k <= ktop; ++k) {
            for (int g = 0; g < N_; ++g) acts_[g].order(k) = s.orders[k][g];
            for (int i = 0; i < N_ - 1; ++i) da_[i].order(k) = s.orders[k][N_ + i];
            db_.order(k) = s.orders[k][2 * N_ - 1];
            if (k < static_cast<int>(s.betaAvg.size()) && s.betaAvg[k] != 0.0)
                db_.order(k).add(nu_zero(dim_), Complex(s.betaAvg[k], 0.0));
        }
    }

    /// g(X(psi)) truncated at kmax.
    EtaPoly compose(const AngleActionFunction& g) {
        EtaPoly out(dim_, kmax_);
        for (const auto& [key, c] : g.terms()) {
            EtaPoly t = exp_fast(key.mode.nu) * exp_slow(key.mode.m);
            for (int comp = 0; comp < N_; ++comp)
                for (int e = 0; e < key.actionExp[comp]; ++e) t = t * acts_[comp];
            Complex scalar = c * std::polar(1.0, key.mode.m * beta0_);
            out = out + t.scaled(scalar).mode_shifted(key.mode.nu);
        }
        return out;
    }

    const EtaPoly& action_series(int comp) const { return acts_[comp]; }
    const EtaPoly& fast_angle_series(int i) const { return da_[i]; }
    const EtaPoly& slow_angle_series() const { return db_; }

  private:
    const EtaPoly& exp_fast(const NuVec& nu0) {
        auto it = expFast_.find(nu0);
        if (it != expFast_.end()) return it->second;
        EtaPoly arg(dim_, kmax_);
        for (int i = 0; i < N_ - 1; ++i)
            if (nu0[i] != 0) arg = arg + da_[i].scaled(Complex(0.0, static_cast<Real>(nu0[i])));
        return expFast_.emplace(nu0, arg.exp_of()).first->second;
    }

    const EtaPoly& exp_slow(int m0) {
        auto it = expSlow_.find(m0);
        if (it != expSlow_.end()) return it->second;
        EtaPoly arg = db_.scaled(Complex(0.0, static_cast<Real>(m0)));
        return expSlow_.emplace(m0, arg.exp_of()).first->second;
    }

    const Model& m_;
    int N_, dim_, kmax_;
    Real beta0_;
    std::vector<EtaPoly> acts_, da_;
    EtaPoly db_;
    std::map<NuVec, EtaPoly> expFast_;
    std::map<int, EtaPoly> expSlow_;
};

Eigen::MatrixXd hessian_matrix(const Model& m) {
    auto h = m.hessian();
    Eigen::MatrixXd H(m.N, m.N);
    for (int i = 0; i < m.N; ++i)
        for (int j = 0; j < m.N; ++j) H(i, j) = h[i][j];
    return H;
}

}  // namespace

void solve_order(const Model& m, EtaSeries& s, int k) {
    const int N = m.N;
    Labels lab(N);
    const auto& omega = m.freq.omega();
    const int kf = k - s.k0;

    Composer comp(m, s, k);

    std::vector<FourierSeries> df(2 * N, FourierSeries(N - 1));
    if (kf >= 0)
        for (int g = 0; g < 2 * N; ++g) df[g] = comp.compose(m.f.derivative(g)).order(kf);
    std::vector<FourierSeries> dH(N, FourierSeries(N - 1));
    for (int i = 0; i < N; ++i) dH[i] = comp.compose(m.H0.derivative(i)).order(k);

    const Real sig = static_cast<Real>(s.sigma);

    // fast actions and slow action, nonzero modes
    for (int i = 0; i < N; ++i) {
        FourierSeries rhs = df[lab.partner(i)].scaled(Complex(-sig, 0.0));
        s.orders[k][i] = rhs.omega_solve(omega);
    }
    // action averages from the angle-equation zero modes
    Eigen::MatrixXd H = hessian_matrix(m);
    Eigen::VectorXd Z(N);
    for (int i = 0; i < N; ++i)
        Z(i) = (dH[i].zero_mode() + sig * df[i].zero_mode()).real();
    Eigen::VectorXd I0 = Eigen::FullPivLU<Eigen::MatrixXd>(H).solve(-Z);
    for (int i = 0; i < N; ++i)
        if (I0(i) != 0.0) s.orders[k][i].add(nu_zero(N - 1), Complex(I0(i), 0.0));

    // angle components; the order-k action coefficients enter linearly
    // through the Hessian, everything else was composed above
    for (int i = 0; i < N; ++i) {
        FourierSeries rhs = dH[i] + df[i].scaled(Complex(sig, 0.0));
        for (int j = 0; j < N; ++j)
            if (H(i, j) != 0.0) rhs = rhs + s.orders[k][j].scaled(Complex(H(i, j), 0.0));
        s.orders[k][N + i] = rhs.omega_solve(omega);
    }
}

EtaSeries expand(const Model& m, const ResonanceData& rd, Real beta1, int K,
                 const ExpandOptions& opts) {
    if (rd.k0 < 2)
        throw Error(ErrorCode::DomainViolation,
                    "degeneracy order k0 = " + std::to_string(rd.k0) + " is out of scope");
    if (!opts.allowInconsistentBranch) {
        if (!rd.existsFlag)
            throw Error(ErrorCode::AssumptionAViolated,
                        "no continuation branch exists for this sign of eps");
        bool known = false;
        for (Real b : rd.beta1Branches)
            if (std::abs(b - beta1) < 1e-9 * std::max(1.0, std::abs(b))) known = true;
        if (!known)
            throw Error(ErrorCode::ValidationError, "beta1 is not one of the computed branches");
    }
    if (beta1 == 0.0) throw Error(ErrorCode::ZeroBranch, "beta1 must be nonzero");

    EtaSeries s;
    s.N = m.N;
    s.K = K;
    s.k0 = rd.k0;
    s.beta0 = rd.beta0;
    s.beta1 = beta1;
    s.sigma = rd.sigma;
    s.resonance = rd;
    s.orders.assign(K + 1, std::vector<FourierSeries>(2 * m.N, FourierSeries(m.N - 1)));
    s.betaAvg.assign(K + 1, 0.0);
    if (K >= 1) {
        s.betaAvg[1] = beta1;
        s.betaDeterminedUpTo = 1;
    }

    const int k0 = rd.k0;
    const Real compatScale = std::max(1.0, m.f.coeff_scale());
    const Real lambda = k0 * rd.c * std::pow(beta1, k0 - 1);
    Labels lab(m.N);

    for (int stage = 1; stage <= K + k0 - 1; ++stage) {
        if (stage >= 2 * k0) {
            int j = stage - 2 * k0 + 1;  // slow-angle average to fix
            if (j <= K) {
                int kf = stage - k0;
                Composer comp(m, s, kf);
                Complex Z = comp.compose(m.f.derivative(lab.beta())).order(kf).zero_mode();
                if (stage == 2 * k0) {
                    // must vanish with the chosen branch: sigma a + c beta1^k0 = 0
                    if (std::abs(Z) > opts.compatTol * compatScale &&
                        !opts.allowInconsistentBranch)
                        throw Error(ErrorCode::CompatibilityViolation,
                                    "slow-force average at the branch order is " +
                                        std::to_string(std::abs(Z)));
                } else {
                    if (std::abs(lambda) < 1e-300)
                        throw Error(ErrorCode::ZeroBranch, "vanishing branch coefficient");
                    s.betaAvg[j] = -Z.real() / lambda;
                    s.betaDeterminedUpTo = j;
                    if (std::abs(Z.imag()) > 1e-9 * compatScale)
                        throw Error(ErrorCode::ValidationError,
                                    "slow-force average has a nonreal value");
                }
            }
        }
        int kX = stage - k0 + 1;
        if (kX >= 1 && kX <= K) solve_order(m, s, kX);
    }

    if (opts.checkCompatibility) {
        for (int k = 1; k <= K; ++k) {
            auto r = check_compatibility(m, s, k);
            for (Real v : r)
                if (v > opts.compatTol * compatScale)
                    throw Error(ErrorCode::CompatibilityViolation,
                                "order " + std::to_string(k) + " residual " + std::to_string(v));
        }
    }
    return s;
}

std::array<Real, 4> check_compatibility(const Model& m, const EtaSeries& s, int k) {
    const int N = m.N;
    Labels lab(N);
    const int kf = k - s.k0;
    const Real sig = static_cast<Real>(s.sigma);

    Composer comp(m, s, std::max(k, 0));
    std::array<Real, 4> out{0.0, 0.0, 0.0, 0.0};

    // fast-angle and slow-angle force averages
    if (kf >= 0) {
        for (int i = 0; i < N - 1; ++i) {
            Complex z = comp.compose(m.f.derivative(lab.alpha(i))).order(kf).zero_mode();
            out[0] = std::max(out[0], std::abs(z));
        }
        out[1] = std::abs(comp.compose(m.f.derivative(lab.beta())).order(kf).zero_mode());
    }
    // action-average conditions
    for (int i = 0; i < N; ++i) {
        Complex z = comp.compose(m.H0.derivative(i)).order(k).zero_mode();
        if (kf >= 0) z += sig * comp.compose(m.f.derivative(i)).order(kf).zero_mode();
        if (i < N - 1)
            out[2] = std::max(out[2], std::abs(z));
        else
            out[3] = std::abs(z);
    }
    return out;
}

std::vector<Real> evaluate_torus(const EtaSeries& s, Real eta, const std::vector<Real>& psi) {
    const int N = s.N;
    if (eta < 0) throw Error(ErrorCode::OutOfRange, "eta must be nonnegative");
    std::vector<Complex> acc(2 * N, Complex(0.0, 0.0));
    Real ek = 1.0;
    for (int k = 1; k <= s.K; ++k) {
        ek *= eta;
        for (int g = 0; g < 2 * N; ++g) acc[g] += ek * s.orders[k][g].eval(psi);
        acc[2 * N - 1] += ek * s.betaAvg[k];
    }
    std::vector<Real> out(2 * N, 0.0);
    Real scale = 1.0;
    for (int g = 0; g < 2 * N; ++g) scale = std::max(scale, std::abs(acc[g]));
    for (int g = 0; g < 2 * N; ++g) {
        if (std::abs(acc[g].imag()) > 1e-12 * scale)
            throw Error(ErrorCode::ValidationError, "nonreal torus point");
        out[g] = acc[g].real();
    }
    for (int i = 0; i < N - 1; ++i) out[N + i] += psi[i];
    out[2 * N - 1] += s.beta0;
    return out;
}

std::vector<Real> residual_order_norms(const Model& m, const EtaSeries& s, int kmax) {
    const int N = m.N;
    Labels lab(N);
    const auto& omega = m.freq.omega();
    const Real sig = static_cast<Real>(s.sigma);

    Composer comp(m, s, kmax);
    std::vector<Real> norms(kmax + 1, 0.0);

    auto accumulate = [&](const EtaPoly& R) {
        for (int k = 0; k <= kmax; ++k) norms[k] += R.order(k).l1_norm();
    };

    for (int i = 0; i < N; ++i) {
        // action equations: (omega.d) I_i + sigma eta^{k0} d_{phi_i} f = 0
        EtaPoly R = comp.action_series(i).omega_derivative(omega);
        EtaPoly dfphi = comp.compose(m.f.derivative(lab.partner(i)));
        for (int k = s.k0; k <= kmax; ++k)
            R.order(k) = R.order(k) + dfphi.order(k - s.k0).scaled(Complex(sig, 0.0));
        accumulate(R);
    }
    for (int i = 0; i < N; ++i) {
        // angle equations: (omega.d) phi_i - d_{I_i} H0 - sigma eta^{k0} d_{I_i} f = 0
        EtaPoly ang = (i < N - 1) ? comp.fast_angle_series(i) : comp.slow_angle_series();
        EtaPoly R = ang.omega_derivative(omega) - comp.compose(m.H0.derivative(i));
        EtaPoly dfI = comp.compose(m.f.derivative(i));
        for (int k = s.k0; k <= kmax; ++k)
            R.order(k) = R.order(k) - dfI.order(k - s.k0).scaled(Complex(sig, 0.0));
        accumulate(R);
    }
    return norms;
}

Real residual(const Model& m, const EtaSeries& s, Real eta, int extraOrders) {
    auto norms = residual_order_norms(m, s, s.K + extraOrders);
    Real sum = 0.0;
    Real ek = 1.0;
    for (int k = 1; k < static_cast<int>(norms.size()); ++k) {
        ek *= eta;
        sum += ek * norms[k];
    }
    return sum;
}

ResidualReport residual_scaling(const Model& m, const EtaSeries& s,
                                const std::vector<Real>& etaGrid) {
    if (etaGrid.size() < 4)
        throw Error(ErrorCode::DegenerateGrid, "need at least 4 eta values");
    for (Real e : etaGrid)
        if (!(e > 0.0 && e <= 0.05))
            throw Error(ErrorCode::DegenerateGrid, "eta values must lie in (0, 0.05]");

    ResidualReport rep;
    auto norms = residual_order_norms(m, s, s.K + 3);
    for (Real e : etaGrid) {
        Real sum = 0.0, ek = 1.0;
        for (int k = 1; k < static_cast<int>(norms.size()); ++k) {
            ek *= e;
            sum += ek * norms[k];
        }
        rep.etaValues.push_back(e);
        rep.residualNorms.push_back(sum);
    }
    for (Real r : rep.residualNorms)
        if (r < 1e-250) throw Error(ErrorCode::DegenerateGrid, "vanishing residual on the grid");

    // least-squares slope of log r vs log eta
    const int n = static_cast<int>(etaGrid.size());
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        Real x = std::log(rep.etaValues[i]);
        Real y = std::log(rep.residualNorms[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.fittedExponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

}  // namespace fraclind
