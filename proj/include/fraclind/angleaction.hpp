#ifndef FRACLIND_ANGLEACTION_HPP
#define FRACLIND_ANGLEACTION_HPP

#include <map>
#include <vector>

#include "fraclind/fourier.hpp"
#include "fraclind/labels.hpp"

namespace fraclind {

/// Joint harmonic of the fast angles (nu) and the slow angle (m).
struct Mode {
    NuVec nu;  // length N-1
    int m = 0;

    bool operator<(const Mode& o) const {
        if (nu != o.nu) return nu < o.nu;
        return m < o.m;
    }
    bool operator==(const Mode& o) const { return nu == o.nu && m == o.m; }
    Mode negated() const { return Mode{nu_neg(nu), -m}; }
};

struct TermKey {
    Mode mode;
    std::vector<int> actionExp;  // length N: exponents of (A_1..A_{N-1}, B)

    bool operator<(const TermKey& o) const {
        if (!(mode == o.mode)) return mode < o.mode;
        return actionExp < o.actionExp;
    }
};

struct Term {
    NuVec nu;
    int m = 0;
    std::vector<int> actionExp;
    Complex coeff;
};

/// Finite Fourier-polynomial function of (A, B, alpha, beta):
///   sum_t c_t * e^{i nu_t.alpha} e^{i m_t beta} * A^p B^q.
/// Real-valued: coefficients at (-nu,-m) are conjugate to those at (nu,m).
class AngleActionFunction {
  public:
    AngleActionFunction() : N_(0) {}
    explicit AngleActionFunction(int N) : N_(N) {}

    int dims() const { return N_; }
    const std::map<TermKey, Complex>& terms() const { return t_; }
    bool empty() const { return t_.empty(); }

    void add_term(const TermKey& k, Complex c);
    Complex coeff(const TermKey& k) const;

    AngleActionFunction operator+(const AngleActionFunction& o) const;
    AngleActionFunction operator*(const AngleActionFunction& o) const;
    AngleActionFunction scaled(Complex s) const;

    /// Multiplication by the action variable with the given index.
    AngleActionFunction action_multiplied(int actionIdx) const;

    /// Restriction to terms with nu != 0.
    AngleActionFunction nonzero_fast_part() const;

    /// Inverse of (omega . d/dalpha) on the zero-fast-average part; terms with
    /// nu = 0 must be absent.
    AngleActionFunction omega_solved(const std::vector<Real>& omega) const;

    /// Partial derivative with respect to a component label:
    /// actions differentiate the polynomial part, alpha_i multiplies by
    /// i nu_i, beta multiplies by i m.
    AngleActionFunction derivative(int label) const;

    /// Restriction to terms with nu = 0 (the fast-angle average).
    AngleActionFunction fast_angle_average() const;

    Complex eval(const std::vector<Real>& actions, const std::vector<Real>& alpha,
                 Real beta) const;

    /// Coefficient function of the fast mode nu evaluated at actions=0 and the
    /// given beta:   f_nu(0, 0, beta).
    Complex mode_eval(const NuVec& nu, Real beta) const;

    /// As above for d^j/dbeta^j f_nu(0,0,beta).
    Complex mode_beta_derivative(const NuVec& nu, int j, Real beta) const;

    /// Fast modes present in the support.
    std::vector<NuVec> support_nu() const;

    int max_nu_l1() const;
    int max_abs_m() const;
    int max_action_degree() const;
    Real coeff_scale() const;  // sum of |c|
    bool depends_on_actions() const;

    Real reality_defect() const;
    /// Adds missing conjugate terms; errors if a present pair conflicts.
    void complete_reality(Real tol);
    void check_reality(Real tol) const;

  private:
    int N_;
    std::map<TermKey, Complex> t_;
};

/// Validated constructor: checks dimensions and reality (auto-completing
/// missing conjugate partners when autoComplete is set).
AngleActionFunction build_function(int dims, const std::vector<Term>& termList,
                                   bool autoComplete = true, Real tol = 1e-10);

/// Derivative tensor entry: applies the labels' derivatives in order and
/// evaluates each fast mode at (actions, beta); alpha-derivatives act as
/// i nu_i multipliers, so the result is indexed by the fast mode alone.
std::map<NuVec, Complex> tensor_derivative(const AngleActionFunction& f,
                                           const std::vector<int>& labels,
                                           const std::vector<Real>& actions, Real beta);

}  // namespace fraclind

#endif
