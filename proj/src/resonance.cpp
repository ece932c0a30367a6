#include "fraclind/resonance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclind/errors.hpp"

namespace fraclind {

namespace {

constexpr Real kTwoPi = 2.0 * std::numbers::pi_v<Real>;

/// Slow-angle harmonics of an alpha-independent function at actions = 0:
/// map m -> coefficient.
std::map<int, Complex> slow_harmonics(const AngleActionFunction& f0) {
    std::map<int, Complex> h;
    for (const auto& [k, c] : f0.terms()) {
        if (!nu_is_zero(k.mode.nu))
            throw Error(ErrorCode::DomainViolation, "function must be alpha-independent");
        bool zeroActions = std::all_of(k.actionExp.begin(), k.actionExp.end(),
                                       [](int e) { return e == 0; });
        if (!zeroActions) continue;
        h[k.mode.m] += c;
    }
    return h;
}

Complex slow_derivative_at(const std::map<int, Complex>& h, int j, Real beta) {
    Complex s(0.0, 0.0);
    for (const auto& [m, c] : h) {
        Complex im(0.0, static_cast<Real>(m));
        Complex fac(1.0, 0.0);
        for (int p = 0; p < j; ++p) fac *= im;
        s += c * fac * std::polar(1.0, m * beta);
    }
    return s;
}

Real slow_derivative_scale(const std::map<int, Complex>& h, int j) {
    Real s = 0.0;
    for (const auto& [m, c] : h) s += std::pow(std::abs((Real)m), (Real)j) * std::abs(c);
    return s;
}

Eigen::MatrixXd hessian_matrix(const Model& m) {
    auto h = m.hessian();
    Eigen::MatrixXd H(m.N, m.N);
    for (int i = 0; i < m.N; ++i)
        for (int j = 0; j < m.N; ++j) H(i, j) = h[i][j];
    return H;
}

}  // namespace

const char* torus_type_name(TorusType t) {
    switch (t) {
        case TorusType::Elliptic: return "elliptic";
        case TorusType::Hyperbolic: return "hyperbolic";
        case TorusType::OutOfScope: return "out-of-scope";
    }
    return "?";
}

std::vector<Real> find_stationary_points(const AngleActionFunction& f0, Real tol) {
    auto h = slow_harmonics(f0.fast_angle_average());
    // derivative harmonics d_m = i m c_m
    std::map<int, Complex> d;
    int M = 0;
    for (const auto& [m, c] : h) {
        if (m == 0) continue;
        d[m] = c * Complex(0.0, static_cast<Real>(m));
        M = std::max(M, std::abs(m));
    }
    Real scale = slow_derivative_scale(h, 1);
    if (M == 0 || scale < 1e-300)
        throw Error(ErrorCode::DegenerateAverage, "average is constant in the slow angle");

    // Roots of the trig polynomial via z = e^{i beta}:  sum d_m z^{m+M} = 0.
    int deg = 2 * M;
    while (deg > 0) {
        auto it = d.find(deg - M);
        if (it != d.end() && std::abs(it->second) > 1e-15 * scale) break;
        --deg;
    }
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    Complex lead = d.count(deg - M) ? d[deg - M] : Complex(0, 0);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) {
        Complex ci = d.count(i - M) ? d[i - M] : Complex(0, 0);
        companion(0, deg - 1 - i) = -ci / lead;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);

    // Collect unit-circle roots; cluster multiple roots and average them so a
    // double root is recovered to full precision rather than sqrt(eps).
    std::vector<Complex> roots;
    for (int i = 0; i < deg; ++i) {
        Complex z = es.eigenvalues()(i);
        if (std::abs(std::abs(z) - 1.0) < 1e-5) roots.push_back(z);
    }
    std::vector<Complex> centers;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Complex sum = roots[i];
        int cnt = 1;
        used[i] = true;
        for (size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - roots[i]) < 1e-5) {
                sum += roots[j];
                cnt += 1;
                used[j] = true;
            }
        }
        centers.push_back(sum / static_cast<Real>(cnt));
    }

    std::vector<Real> out;
    for (Complex z : centers) {
        Real beta = std::atan2(z.imag(), z.real());
        if (beta < 0) beta += kTwoPi;
        // Newton polish on the derivative when the second derivative allows it
        for (int it = 0; it < 60; ++it) {
            Real g1 = slow_derivative_at(h, 1, beta).real();
            Real g2 = slow_derivative_at(h, 2, beta).real();
            if (std::abs(g2) < 1e-8 * std::max(1.0, slow_derivative_scale(h, 2))) break;
            Real step = g1 / g2;
            beta -= step;
            if (std::abs(step) < 1e-16) break;
        }
        if (beta < 0) beta += kTwoPi;
        if (beta >= kTwoPi) beta -= kTwoPi;
        if (std::abs(slow_derivative_at(h, 1, beta).real()) < std::max(tol * scale, tol))
            out.push_back(beta);
    }
    std::sort(out.begin(), out.end());
    // dedupe modulo 2 pi
    std::vector<Real> uniq;
    for (Real b : out) {
        bool dup = false;
        for (Real u : uniq)
            if (std::abs(b - u) < 1e-7 || std::abs(std::abs(b - u) - kTwoPi) < 1e-7) dup = true;
        if (!dup) uniq.push_back(b);
    }
    if (uniq.empty())
        throw Error(ErrorCode::NoStationaryPoint, "no stationary point located");
    return uniq;
}

DegeneracyOrder degeneracy_order(const AngleActionFunction& f0, Real beta0, int jmax) {
    auto h = slow_harmonics(f0.fast_angle_average());
    Real scale1 = slow_derivative_scale(h, 1);
    if (std::abs(slow_derivative_at(h, 1, beta0).real()) > 1e-8 * std::max(1.0, scale1))
        throw Error(ErrorCode::ValidationError, "beta0 is not a stationary point");
    for (int j = 2; j <= jmax + 1; ++j) {
        Real dj = slow_derivative_at(h, j, beta0).real();
        Real scale = std::max(slow_derivative_scale(h, j), 1.0);
        if (std::abs(dj) > 1e-9 * scale) {
            int k0 = j - 1;
            Real fact = 1.0;
            for (int p = 2; p <= k0; ++p) fact *= p;
            return DegeneracyOrder{k0, dj / fact};
        }
    }
    throw Error(ErrorCode::OrderExceeded,
                "all slow-angle derivatives up to jmax vanish at the stationary point");
}

FirstOrderCorrection first_order_correction(const Model& m, Real beta0) {
    const int N = m.N;
    Labels lab(N);
    const auto& omega = m.freq.omega();
    std::vector<Real> zeroActs(N, 0.0);

    Eigen::MatrixXd H = hessian_matrix(m);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(H);
    if (!lu.isInvertible())
        throw Error(ErrorCode::SingularHessian, "H0 Hessian is singular at the origin");

    FirstOrderCorrection fo;
    fo.N = N;
    fo.comp.assign(2 * N, FourierSeries(N - 1));

    // action parts: (omega.d)(A',B') = -d_phi f(X0)
    for (int i = 0; i < N; ++i) {
        int phiLabel = lab.partner(i);
        auto rhs = tensor_derivative(m.f, {phiLabel}, zeroActs, beta0);
        FourierSeries r(N - 1);
        for (const auto& [nu, v] : rhs) r.add(nu, -v);
        fo.comp[i] = r.omega_solve(omega);
    }
    // action averages from d_I f0 + H (A'0,B'0) = 0
    Eigen::VectorXd gradf0(N);
    for (int i = 0; i < N; ++i) {
        auto d = tensor_derivative(m.f, {i}, zeroActs, beta0);
        auto it = d.find(nu_zero(N - 1));
        gradf0(i) = it == d.end() ? 0.0 : it->second.real();
    }
    Eigen::VectorXd avg = lu.solve(-gradf0);
    for (int i = 0; i < N; ++i) fo.comp[i].add(nu_zero(N - 1), Complex(avg(i), 0.0));

    // angle parts: (omega.d)(a',b') = d_I f(X0) + H (A'(psi), B'(psi))
    for (int i = 0; i < N; ++i) {
        auto rhs = tensor_derivative(m.f, {i}, zeroActs, beta0);
        FourierSeries r(N - 1);
        for (const auto& [nu, v] : rhs) r.add(nu, v);
        for (int j = 0; j < N; ++j) r = r + fo.comp[j].scaled(Complex(H(i, j), 0.0));
        fo.comp[N + i] = r.omega_solve(omega);
    }
    fo.b0 = 0.0;
    return fo;
}

Real constant_a(const Model& m, Real beta0) {
    const int N = m.N;
    Labels lab(N);
    std::vector<Real> zeroActs(N, 0.0);
    FirstOrderCorrection fo = first_order_correction(m, beta0);

    Complex acc(0.0, 0.0);
    for (int g = 0; g < 2 * N; ++g) {
        auto d2 = tensor_derivative(m.f, {lab.beta(), g}, zeroActs, beta0);
        FourierSeries d2s(N - 1);
        for (const auto& [nu, v] : d2) d2s.add(nu, v);
        FourierSeries prod = d2s * fo.comp[g];
        acc += prod.zero_mode();
    }
    if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, std::abs(acc.real())))
        throw Error(ErrorCode::ValidationError,
                    "constant a has a nonreal value: imag = " + std::to_string(acc.imag()));
    return acc.real();
}

Real constant_a_special(const Model& m, Real beta0) {
    const int N = m.N;
    if (m.f.depends_on_actions())
        throw Error(ErrorCode::DomainViolation, "f depends on the actions");
    Eigen::MatrixXd H = hessian_matrix(m);
    if (!H.isApprox(Eigen::MatrixXd::Identity(N, N), 1e-12))
        throw Error(ErrorCode::DomainViolation, "H0 Hessian is not the identity");

    const auto& omega = m.freq.omega();
    // (1/2) d/dbeta sum_nu (|nu|^2 f_nu f_-nu + f_nu' f_-nu') / (omega.nu)^2
    Complex acc(0.0, 0.0);
    for (const auto& nu : m.f.support_nu()) {
        if (nu_is_zero(nu)) continue;
        Real x = 0.0;
        Real nu2 = 0.0;
        for (int i = 0; i < N - 1; ++i) {
            x += omega[i] * nu[i];
            nu2 += static_cast<Real>(nu[i]) * nu[i];
        }
        NuVec mnu = nu_neg(nu);
        // derivative of the product, term by term
        Complex t = nu2 * (m.f.mode_beta_derivative(nu, 1, beta0) * m.f.mode_eval(mnu, beta0) +
                           m.f.mode_eval(nu, beta0) * m.f.mode_beta_derivative(mnu, 1, beta0));
        t += m.f.mode_beta_derivative(nu, 2, beta0) * m.f.mode_beta_derivative(mnu, 1, beta0) +
             m.f.mode_beta_derivative(nu, 1, beta0) * m.f.mode_beta_derivative(mnu, 2, beta0);
        acc += t / (x * x);
    }
    acc *= 0.5;
    if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, std::abs(acc.real())))
        throw Error(ErrorCode::ValidationError, "nonreal special-route value");
    return acc.real();
}

std::vector<Real> beta1_branches(Real a, Real c, int sigma, int k0) {
    if (c == 0.0) throw Error(ErrorCode::ValidationError, "c must be nonzero");
    if (std::abs(a) < 1e-10)
        throw Error(ErrorCode::AssumptionAViolated,
                    "the coupling constant a vanishes; no continuation branch exists");
    Real r = -a * sigma / c;
    std::vector<Real> out;
    if (k0 % 2 == 1) {
        Real b = std::copysign(std::pow(std::abs(r), 1.0 / k0), r);
        out.push_back(b);
    } else if (r > 0.0) {
        Real b = std::pow(r, 1.0 / k0);
        out.push_back(b);
        out.push_back(-b);
    }
    return out;
}

TorusType classify_torus(int k0, Real c, Real a, int sigma, Real beta1) {
    (void)a;
    if (k0 <= 1) return TorusType::OutOfScope;
    Real s = (k0 % 2 == 1) ? c * sigma : c * sigma * beta1;
    return s > 0 ? TorusType::Elliptic : TorusType::Hyperbolic;
}

ResonanceData analyze_resonance(const Model& m, Real beta0, int sigma) {
    ResonanceData rd;
    rd.beta0 = beta0;
    rd.sigma = sigma;
    auto d = degeneracy_order(m.f, beta0);
    rd.k0 = d.k0;
    rd.c = d.c;
    rd.a = constant_a(m, beta0);
    rd.existsFlag = false;
    if (rd.k0 >= 2 && std::abs(rd.a) >= 1e-10) {
        try {
            rd.beta1Branches = beta1_branches(rd.a, rd.c, sigma, rd.k0);
        } catch (const Error&) {
            rd.beta1Branches.clear();
        }
        for (Real b1 : rd.beta1Branches)
            rd.classificationPerBranch.push_back(classify_torus(rd.k0, rd.c, rd.a, sigma, b1));
        rd.existsFlag = !rd.beta1Branches.empty() && rd.c != 0.0;
    }
    return rd;
}

NormalFormReport heuristic_normal_form(const Model& m, Real beta0, Real eps) {
    const int N = m.N;
    Labels lab(N);
    if (m.f.depends_on_actions())
        throw Error(ErrorCode::DomainViolation, "f must be angle-only");
    Eigen::MatrixXd H = hessian_matrix(m);
    if (!H.isApprox(Eigen::MatrixXd::Identity(N, N), 1e-12))
        throw Error(ErrorCode::DomainViolation, "H0 must be (A^2+B^2)/2");

    const auto& omega = m.freq.omega();
    NormalFormReport rep;

    AngleActionFunction fNz = m.f.nonzero_fast_part();
    AngleActionFunction g = fNz.omega_solved(omega);  // Delta^{-1} f_{!=0}
    // (A'.d_alpha + B' d_beta) Delta^{-1} applied once more
    AngleActionFunction corr(N);
    for (int i = 0; i < N - 1; ++i)
        corr = corr + g.omega_solved(omega).derivative(lab.alpha(i)).action_multiplied(i);
    corr = corr + g.omega_solved(omega).derivative(lab.beta()).action_multiplied(lab.B());
    rep.Psi1 = g.scaled(Complex(-1.0, 0.0)) + corr;

    // Phi = (1/2) [ (d_alpha Psi1)^2 + (d_beta Psi1)^2 ]
    AngleActionFunction Phi(N);
    for (int i = 0; i < N - 1; ++i) {
        AngleActionFunction d = rep.Psi1.derivative(lab.alpha(i));
        Phi = Phi + (d * d);
    }
    {
        AngleActionFunction d = rep.Psi1.derivative(lab.beta());
        Phi = Phi + (d * d);
    }
    Phi = Phi.scaled(Complex(0.5, 0.0));
    rep.Phi0 = Phi.fast_angle_average();

    std::vector<Real> zeroActs(N, 0.0), zeroAng(N - 1, 0.0);
    rep.aFromPhi = rep.Phi0.derivative(lab.beta()).eval(zeroActs, zeroAng, beta0).real();
    rep.zeta.assign(N - 1, 0.0);
    for (int i = 0; i < N - 1; ++i)
        rep.zeta[i] = -rep.Phi0.derivative(i).eval(zeroActs, zeroAng, beta0).real();
    rep.rho = -rep.Phi0.derivative(lab.B()).eval(zeroActs, zeroAng, beta0).real();

    bool slowDependent = false;
    AngleActionFunction favg = m.f.fast_angle_average();
    for (const auto& [key, c] : favg.terms())
        if (key.mode.m != 0) slowDependent = true;
    if (slowDependent) {
        auto d = degeneracy_order(m.f, beta0);
        rep.slowWellCoeff = d.c / (d.k0 + 1);
        if (std::abs(rep.aFromPhi) >= 1e-10 && eps != 0.0) {
            Real r = -rep.aFromPhi * eps / d.c;
            if (d.k0 % 2 == 1) {
                rep.deltaBeta0.push_back(std::copysign(std::pow(std::abs(r), 1.0 / d.k0), r));
            } else if (r > 0.0) {
                Real b = std::pow(r, 1.0 / d.k0);
                rep.deltaBeta0 = {b, -b};
            }
        }
    }
    return rep;
}

}  // namespace fraclind
