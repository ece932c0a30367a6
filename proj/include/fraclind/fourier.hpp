#ifndef FRACLIND_FOURIER_HPP
#define FRACLIND_FOURIER_HPP

#include <complex>
#include <map>
#include <vector>

namespace fraclind {

using Real = double;
using Complex = std::complex<Real>;

/// Fast-angle harmonic vector, length N-1.
using NuVec = std::vector<int>;

NuVec nu_zero(int dim);
NuVec nu_add(const NuVec& a, const NuVec& b);
NuVec nu_neg(const NuVec& a);
int nu_l1(const NuVec& a);
bool nu_is_zero(const NuVec& a);
std::string nu_to_string(const NuVec& a);

/// Finite Fourier series over the fast angles: map nu -> complex coefficient.
/// Immutable-style value type; all operations return new values.
class FourierSeries {
  public:
    FourierSeries() : dim_(0) {}
    explicit FourierSeries(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    bool empty() const { return c_.empty(); }
    const std::map<NuVec, Complex>& terms() const { return c_; }

    void add(const NuVec& nu, Complex v);
    Complex coeff(const NuVec& nu) const;
    Complex zero_mode() const;
    FourierSeries nonzero_part() const;

    FourierSeries operator+(const FourierSeries& o) const;
    FourierSeries operator-(const FourierSeries& o) const;
    FourierSeries operator*(const FourierSeries& o) const;  // convolution
    FourierSeries scaled(Complex s) const;

    /// d/dpsi_i as multiplication by i nu_i.
    FourierSeries angle_derivative(int i) const;

    /// Applies (omega . d/dpsi): multiplies coeff(nu) by i (omega . nu).
    FourierSeries omega_derivative(const std::vector<Real>& omega) const;

    /// Inverse of omega_derivative on the zero-average part; requires the
    /// zero mode to vanish (it is dropped).
    FourierSeries omega_solve(const std::vector<Real>& omega) const;

    Complex eval(const std::vector<Real>& psi) const;
    Real l1_norm() const;
    Real max_abs() const;
    int max_nu_l1() const;

    /// Max deviation from coeff(-nu) == conj(coeff(nu)).
    Real reality_defect() const;

    /// Drops entries with |c| <= eps (exact zeros by default).
    FourierSeries pruned(Real eps = 0.0) const;

    /// Multiplies by the single harmonic e^{i shift.psi}.
    FourierSeries mode_shifted(const NuVec& shift) const;

  private:
    int dim_;
    std::map<NuVec, Complex> c_;
};

/// Truncated power series in eta with FourierSeries coefficients.
class EtaPoly {
  public:
    EtaPoly() : dim_(0), kmax_(0) {}
    EtaPoly(int dim, int kmax) : dim_(dim), kmax_(kmax), ord_(kmax + 1, FourierSeries(dim)) {}

    int dim() const { return dim_; }
    int kmax() const { return kmax_; }
    const FourierSeries& order(int k) const { return ord_[k]; }
    FourierSeries& order(int k) { return ord_[k]; }

    bool is_zero() const;
    /// Lowest k with a nonempty coefficient; kmax+1 if identically zero.
    int lowest_order() const;

    EtaPoly operator+(const EtaPoly& o) const;
    EtaPoly operator-(const EtaPoly& o) const;
    EtaPoly operator*(const EtaPoly& o) const;  // truncated at kmax
    EtaPoly scaled(Complex s) const;

    /// exp(this); requires a vanishing order-0 coefficient.
    EtaPoly exp_of() const;

    EtaPoly mode_shifted(const NuVec& shift) const;

    /// Applies (omega . d/dpsi) order by order.
    EtaPoly omega_derivative(const std::vector<Real>& omega) const;

    static EtaPoly constant(int dim, int kmax, Complex v);
    static EtaPoly single(int dim, int kmax, int k, const FourierSeries& f);

  private:
    int dim_;
    int kmax_;
    std::vector<FourierSeries> ord_;
};

}  // namespace fraclind

#endif
