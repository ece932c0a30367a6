#include "fraclind/angleaction.hpp"

#include <cmath>
#include <set>

#include "fraclind/errors.hpp"

namespace fraclind {

void AngleActionFunction::add_term(const TermKey& k, Complex c) {
    if (static_cast<int>(k.mode.nu.size()) != N_ - 1)
        throw Error(ErrorCode::DimensionMismatch, "fast mode length " +
                                                      std::to_string(k.mode.nu.size()) +
                                                      " != N-1 = " + std::to_string(N_ - 1));
    if (static_cast<int>(k.actionExp.size()) != N_)
        throw Error(ErrorCode::DimensionMismatch,
                    "action exponent length " + std::to_string(k.actionExp.size()) +
                        " != N = " + std::to_string(N_));
    for (int e : k.actionExp)
        if (e < 0) throw Error(ErrorCode::ValidationError, "negative action exponent");
    Complex& slot = t_[k];
    slot += c;
    if (slot == Complex(0.0, 0.0)) t_.erase(k);
}

Complex AngleActionFunction::coeff(const TermKey& k) const {
    auto it = t_.find(k);
    return it == t_.end() ? Complex(0.0, 0.0) : it->second;
}

AngleActionFunction AngleActionFunction::operator+(const AngleActionFunction& o) const {
    AngleActionFunction r = *this;
    for (const auto& [k, c] : o.t_) r.add_term(k, c);
    return r;
}

AngleActionFunction AngleActionFunction::operator*(const AngleActionFunction& o) const {
    AngleActionFunction r(N_);
    for (const auto& [k1, c1] : t_)
        for (const auto& [k2, c2] : o.t_) {
            TermKey k;
            k.mode.nu = nu_add(k1.mode.nu, k2.mode.nu);
            k.mode.m = k1.mode.m + k2.mode.m;
            k.actionExp.resize(N_);
            for (int i = 0; i < N_; ++i) k.actionExp[i] = k1.actionExp[i] + k2.actionExp[i];
            r.add_term(k, c1 * c2);
        }
    return r;
}

AngleActionFunction AngleActionFunction::scaled(Complex s) const {
    AngleActionFunction r(N_);
    if (s == Complex(0.0, 0.0)) return r;
    for (const auto& [k, c] : t_) r.t_[k] = c * s;
    return r;
}

AngleActionFunction AngleActionFunction::action_multiplied(int actionIdx) const {
    AngleActionFunction r(N_);
    for (const auto& [k, c] : t_) {
        TermKey nk = k;
        nk.actionExp[actionIdx] += 1;
        r.t_[nk] = c;
    }
    return r;
}

AngleActionFunction AngleActionFunction::nonzero_fast_part() const {
    AngleActionFunction r(N_);
    for (const auto& [k, c] : t_)
        if (!nu_is_zero(k.mode.nu)) r.t_[k] = c;
    return r;
}

AngleActionFunction AngleActionFunction::omega_solved(const std::vector<Real>& omega) const {
    AngleActionFunction r(N_);
    for (const auto& [k, c] : t_) {
        if (nu_is_zero(k.mode.nu))
            throw Error(ErrorCode::DomainViolation, "cannot invert omega.d on a fast average");
        Real x = 0.0;
        for (size_t i = 0; i < omega.size(); ++i) x += omega[i] * k.mode.nu[i];
        r.t_[k] = c / Complex(0.0, x);
    }
    return r;
}

AngleActionFunction AngleActionFunction::derivative(int label) const {
    Labels lab(N_);
    AngleActionFunction r(N_);
    for (const auto& [k, c] : t_) {
        if (lab.is_action(label)) {
            int e = k.actionExp[label];
            if (e == 0) continue;
            TermKey nk = k;
            nk.actionExp[label] = e - 1;
            r.add_term(nk, c * static_cast<Real>(e));
        } else if (label == lab.beta()) {
            if (k.mode.m == 0) continue;
            r.add_term(k, c * Complex(0.0, static_cast<Real>(k.mode.m)));
        } else {
            int i = label - N_;
            if (k.mode.nu[i] == 0) continue;
            r.add_term(k, c * Complex(0.0, static_cast<Real>(k.mode.nu[i])));
        }
    }
    return r;
}

AngleActionFunction AngleActionFunction::fast_angle_average() const {
    AngleActionFunction r(N_);
    for (const auto& [k, c] : t_)
        if (nu_is_zero(k.mode.nu)) r.t_[k] = c;
    return r;
}

Complex AngleActionFunction::eval(const std::vector<Real>& actions,
                                  const std::vector<Real>& alpha, Real beta) const {
    Complex s(0.0, 0.0);
    for (const auto& [k, c] : t_) {
        Real phase = k.mode.m * beta;
        for (int i = 0; i < N_ - 1; ++i) phase += k.mode.nu[i] * alpha[i];
        Real amp = 1.0;
        for (int i = 0; i < N_; ++i)
            for (int e = 0; e < k.actionExp[i]; ++e) amp *= actions[i];
        s += c * amp * std::polar(1.0, phase);
    }
    return s;
}

Complex AngleActionFunction::mode_eval(const NuVec& nu, Real beta) const {
    return mode_beta_derivative(nu, 0, beta);
}

Complex AngleActionFunction::mode_beta_derivative(const NuVec& nu, int j, Real beta) const {
    Complex s(0.0, 0.0);
    for (const auto& [k, c] : t_) {
        if (k.mode.nu != nu) continue;
        bool zeroActions = true;
        for (int e : k.actionExp)
            if (e != 0) zeroActions = false;
        if (!zeroActions) continue;
        Complex im(0.0, static_cast<Real>(k.mode.m));
        Complex fac(1.0, 0.0);
        for (int p = 0; p < j; ++p) fac *= im;
        s += c * fac * std::polar(1.0, k.mode.m * beta);
    }
    return s;
}

std::vector<NuVec> AngleActionFunction::support_nu() const {
    std::set<NuVec> s;
    for (const auto& [k, c] : t_) s.insert(k.mode.nu);
    return std::vector<NuVec>(s.begin(), s.end());
}

int AngleActionFunction::max_nu_l1() const {
    int s = 0;
    for (const auto& [k, c] : t_) s = std::max(s, nu_l1(k.mode.nu));
    return s;
}

int AngleActionFunction::max_abs_m() const {
    int s = 0;
    for (const auto& [k, c] : t_) s = std::max(s, std::abs(k.mode.m));
    return s;
}

int AngleActionFunction::max_action_degree() const {
    int s = 0;
    for (const auto& [k, c] : t_) {
        int d = 0;
        for (int e : k.actionExp) d += e;
        s = std::max(s, d);
    }
    return s;
}

Real AngleActionFunction::coeff_scale() const {
    Real s = 0.0;
    for (const auto& [k, c] : t_) s += std::abs(c);
    return s;
}

bool AngleActionFunction::depends_on_actions() const {
    for (const auto& [k, c] : t_)
        for (int e : k.actionExp)
            if (e != 0) return true;
    return false;
}

Real AngleActionFunction::reality_defect() const {
    Real d = 0.0;
    for (const auto& [k, c] : t_) {
        TermKey conjKey{k.mode.negated(), k.actionExp};
        d = std::max(d, std::abs(coeff(conjKey) - std::conj(c)));
    }
    return d;
}

void AngleActionFunction::complete_reality(Real tol) {
    std::map<TermKey, Complex> extra;
    for (const auto& [k, c] : t_) {
        TermKey conjKey{k.mode.negated(), k.actionExp};
        auto it = t_.find(conjKey);
        if (it == t_.end()) {
            extra[conjKey] = std::conj(c);
        } else if (std::abs(it->second - std::conj(c)) > tol * std::max(1.0, std::abs(c))) {
            throw Error(ErrorCode::RealityViolation,
                        "conflicting conjugate coefficients at mode nu=" +
                            nu_to_string(k.mode.nu) + " m=" + std::to_string(k.mode.m));
        }
    }
    for (const auto& [k, c] : extra) {
        if (t_.count(k))
            throw Error(ErrorCode::RealityViolation, "self-conjugate completion clash");
        t_[k] = c;
    }
}

void AngleActionFunction::check_reality(Real tol) const {
    Real d = reality_defect();
    if (d > tol)
        throw Error(ErrorCode::RealityViolation,
                    "conjugate symmetry violated by " + std::to_string(d));
}

AngleActionFunction build_function(int dims, const std::vector<Term>& termList,
                                   bool autoComplete, Real tol) {
    if (dims < 2) throw Error(ErrorCode::DimensionMismatch, "need N >= 2");
    AngleActionFunction f(dims);
    for (const auto& t : termList) f.add_term(TermKey{Mode{t.nu, t.m}, t.actionExp}, t.coeff);
    if (autoComplete)
        f.complete_reality(tol);
    else
        f.check_reality(tol);
    return f;
}

std::map<NuVec, Complex> tensor_derivative(const AngleActionFunction& f,
                                           const std::vector<int>& labels,
                                           const std::vector<Real>& actions, Real beta) {
    AngleActionFunction g = f;
    for (int lab : labels) g = g.derivative(lab);
    // evaluate each fast mode at the action point and beta
    std::map<NuVec, Complex> out;
    for (const auto& [k, c] : g.terms()) {
        Real amp = 1.0;
        for (size_t i = 0; i < actions.size(); ++i)
            for (int e = 0; e < k.actionExp[i]; ++e) amp *= actions[i];
        if (amp == 0.0) continue;
        out[k.mode.nu] += c * amp * std::polar(1.0, k.mode.m * beta);
    }
    for (auto it = out.begin(); it != out.end();)
        it = (it->second == Complex(0.0, 0.0)) ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace fraclind
