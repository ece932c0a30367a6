#include "fraclind/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclind/errors.hpp"

namespace fraclind {

NuVec nu_zero(int dim) { return NuVec(dim, 0); }

NuVec nu_add(const NuVec& a, const NuVec& b) {
    NuVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

NuVec nu_neg(const NuVec& a) {
    NuVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

int nu_l1(const NuVec& a) {
    int s = 0;
    for (int x : a) s += std::abs(x);
    return s;
}

bool nu_is_zero(const NuVec& a) {
    return std::all_of(a.begin(), a.end(), [](int x) { return x == 0; });
}

std::string nu_to_string(const NuVec& a) {
    std::string s = "(";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

void FourierSeries::add(const NuVec& nu, Complex v) {
    if (static_cast<int>(nu.size()) != dim_)
        throw Error(ErrorCode::DimensionMismatch, "Fourier mode of length " +
                                                      std::to_string(nu.size()) + ", expected " +
                                                      std::to_string(dim_));
    if (v == Complex(0.0, 0.0)) {
        auto it = c_.find(nu);
        if (it == c_.end()) return;
    }
    Complex& slot = c_[nu];
    slot += v;
    if (slot == Complex(0.0, 0.0)) c_.erase(nu);
}

Complex FourierSeries::coeff(const NuVec& nu) const {
    auto it = c_.find(nu);
    return it == c_.end() ? Complex(0.0, 0.0) : it->second;
}

Complex FourierSeries::zero_mode() const { return coeff(nu_zero(dim_)); }

FourierSeries FourierSeries::nonzero_part() const {
    FourierSeries r(dim_);
    for (const auto& [nu, v] : c_)
        if (!nu_is_zero(nu)) r.c_[nu] = v;
    return r;
}

FourierSeries FourierSeries::operator+(const FourierSeries& o) const {
    FourierSeries r = *this;
    for (const auto& [nu, v] : o.c_) r.add(nu, v);
    return r;
}

FourierSeries FourierSeries::operator-(const FourierSeries& o) const {
    FourierSeries r = *this;
    for (const auto& [nu, v] : o.c_) r.add(nu, -v);
    return r;
}

FourierSeries FourierSeries::operator*(const FourierSeries& o) const {
    FourierSeries r(dim_);
    for (const auto& [nu1, v1] : c_)
        for (const auto& [nu2, v2] : o.c_) r.add(nu_add(nu1, nu2), v1 * v2);
    return r;
}

FourierSeries FourierSeries::scaled(Complex s) const {
    FourierSeries r(dim_);
    if (s == Complex(0.0, 0.0)) return r;
    for (const auto& [nu, v] : c_) r.c_[nu] = v * s;
    return r;
}

FourierSeries FourierSeries::angle_derivative(int i) const {
    FourierSeries r(dim_);
    for (const auto& [nu, v] : c_)
        if (nu[i] != 0) r.c_[nu] = v * Complex(0.0, static_cast<Real>(nu[i]));
    return r;
}

FourierSeries FourierSeries::omega_derivative(const std::vector<Real>& omega) const {
    FourierSeries r(dim_);
    for (const auto& [nu, v] : c_) {
        Real x = 0.0;
        for (size_t i = 0; i < omega.size(); ++i) x += omega[i] * nu[i];
        if (x != 0.0) r.c_[nu] = v * Complex(0.0, x);
    }
    return r;
}

FourierSeries FourierSeries::omega_solve(const std::vector<Real>& omega) const {
    FourierSeries r(dim_);
    for (const auto& [nu, v] : c_) {
        if (nu_is_zero(nu)) continue;
        Real x = 0.0;
        for (size_t i = 0; i < omega.size(); ++i) x += omega[i] * nu[i];
        r.c_[nu] = v / Complex(0.0, x);
    }
    return r;
}

Complex FourierSeries::eval(const std::vector<Real>& psi) const {
    Complex s(0.0, 0.0);
    for (const auto& [nu, v] : c_) {
        Real phase = 0.0;
        for (size_t i = 0; i < psi.size(); ++i) phase += nu[i] * psi[i];
        s += v * std::polar(1.0, phase);
    }
    return s;
}

Real FourierSeries::l1_norm() const {
    Real s = 0.0;
    for (const auto& [nu, v] : c_) s += std::abs(v);
    return s;
}

Real FourierSeries::max_abs() const {
    Real s = 0.0;
    for (const auto& [nu, v] : c_) s = std::max(s, std::abs(v));
    return s;
}

int FourierSeries::max_nu_l1() const {
    int s = 0;
    for (const auto& [nu, v] : c_) s = std::max(s, nu_l1(nu));
    return s;
}

Real FourierSeries::reality_defect() const {
    Real d = 0.0;
    for (const auto& [nu, v] : c_) d = std::max(d, std::abs(coeff(nu_neg(nu)) - std::conj(v)));
    return d;
}

FourierSeries FourierSeries::pruned(Real eps) const {
    FourierSeries r(dim_);
    for (const auto& [nu, v] : c_)
        if (std::abs(v) > eps) r.c_[nu] = v;
    return r;
}

FourierSeries FourierSeries::mode_shifted(const NuVec& shift) const {
    FourierSeries r(dim_);
    for (const auto& [nu, v] : c_) r.c_[nu_add(nu, shift)] = v;
    return r;
}

bool EtaPoly::is_zero() const {
    for (const auto& f : ord_)
        if (!f.empty()) return false;
    return true;
}

int EtaPoly::lowest_order() const {
    for (int k = 0; k <= kmax_; ++k)
        if (!ord_[k].empty()) return k;
    return kmax_ + 1;
}

EtaPoly EtaPoly::operator+(const EtaPoly& o) const {
    EtaPoly r(dim_, kmax_);
    for (int k = 0; k <= kmax_; ++k) r.ord_[k] = ord_[k] + o.ord_[k];
    return r;
}

EtaPoly EtaPoly::operator-(const EtaPoly& o) const {
    EtaPoly r(dim_, kmax_);
    for (int k = 0; k <= kmax_; ++k) r.ord_[k] = ord_[k] - o.ord_[k];
    return r;
}

EtaPoly EtaPoly::operator*(const EtaPoly& o) const {
    EtaPoly r(dim_, kmax_);
    int la = lowest_order(), lb = o.lowest_order();
    for (int ka = la; ka <= kmax_; ++ka) {
        if (ord_[ka].empty()) continue;
        for (int kb = lb; ka + kb <= kmax_; ++kb) {
            if (o.ord_[kb].empty()) continue;
            r.ord_[ka + kb] = r.ord_[ka + kb] + ord_[ka] * o.ord_[kb];
        }
    }
    return r;
}

EtaPoly EtaPoly::scaled(Complex s) const {
    EtaPoly r(dim_, kmax_);
    for (int k = 0; k <= kmax_; ++k) r.ord_[k] = ord_[k].scaled(s);
    return r;
}

EtaPoly EtaPoly::exp_of() const {
    if (!ord_[0].empty())
        throw Error(ErrorCode::DomainViolation, "exp of an eta-series with constant term");
    EtaPoly r = constant(dim_, kmax_, Complex(1.0, 0.0));
    int low = lowest_order();
    if (low > kmax_) return r;
    EtaPoly pw = constant(dim_, kmax_, Complex(1.0, 0.0));
    Real fact = 1.0;
    int jmax = kmax_ / low;
    for (int j = 1; j <= jmax; ++j) {
        pw = pw * (*this);
        fact *= j;
        r = r + pw.scaled(Complex(1.0 / fact, 0.0));
    }
    return r;
}

EtaPoly EtaPoly::mode_shifted(const NuVec& shift) const {
    EtaPoly r(dim_, kmax_);
    for (int k = 0; k <= kmax_; ++k) r.ord_[k] = ord_[k].mode_shifted(shift);
    return r;
}

EtaPoly EtaPoly::omega_derivative(const std::vector<Real>& omega) const {
    EtaPoly r(dim_, kmax_);
    for (int k = 0; k <= kmax_; ++k) r.ord_[k] = ord_[k].omega_derivative(omega);
    return r;
}

EtaPoly EtaPoly::constant(int dim, int kmax, Complex v) {
    EtaPoly r(dim, kmax);
    r.ord_[0].add(nu_zero(dim), v);
    return r;
}

EtaPoly EtaPoly::single(int dim, int kmax, int k, const FourierSeries& f) {
    EtaPoly r(dim, kmax);
    if (k <= kmax) r.ord_[k] = f;
    return r;
}

}  // namespace fraclind
