#ifndef FRACLIND_SELFENERGY_HPP
#define FRACLIND_SELFENERGY_HPP

#include <Eigen/Dense>
#include <vector>

#include "fraclind/model.hpp"
#include "fraclind/resonance.hpp"

namespace fraclind {

/// Real polynomial in eta, truncated at a fixed degree.
struct EtaPolynomial {
    std::vector<Real> c;  // c[k] multiplies eta^k

    EtaPolynomial() = default;
    explicit EtaPolynomial(int degree) : c(degree + 1, 0.0) {}
    int degree() const { return static_cast<int>(c.size()) - 1; }
    Real eval(Real eta) const;
};

/// 2N x 2N matrix of truncated eta-polynomials: the scale-(-1) self-energy
/// block dressing the resummed propagator. Rows carry the node-side label of
/// the exiting line, columns the slot label of the entering line; the first N
/// indices are the actions, the last N the angles.
class SelfEnergyMatrix {
  public:
    SelfEnergyMatrix() = default;
    SelfEnergyMatrix(int N, int degree);

    int N() const { return n_; }
    int degree() const { return deg_; }
    const EtaPolynomial& entry(int r, int c) const { return e_[r][c]; }
    EtaPolynomial& entry(int r, int c) { return e_[r][c]; }

    Eigen::MatrixXd evaluate(Real eta) const;
    /// Coefficient matrix of eta^k.
    Eigen::MatrixXd degree_slice(int k) const;

    // blocks at a numeric eta, in the (action, angle) splitting
    Eigen::MatrixXd blockQ(Real eta) const;  // rows actions, cols actions
    Eigen::MatrixXd blockR(Real eta) const;  // rows actions, cols angles
    Eigen::MatrixXd blockP(Real eta) const;  // rows angles,  cols actions

  private:
    int n_ = 0;
    int deg_ = 0;
    std::vector<std::vector<EtaPolynomial>> e_;
};

/// Sums the values of all zero-momentum self-energy clusters of degree <= D.
SelfEnergyMatrix self_energy_scale_minus1(const Model& m, const ResonanceData& rd, Real beta1,
                                          int D);

/// Exact per-degree checks: the symplectic-transpose symmetry and reality.
bool check_symmetry(const SelfEnergyMatrix& M);

/// Per-degree zero pattern: action-row entries vanish except the slow-action
/// row, which touches only the action columns and the slow-angle column; the
/// angle-angle block is confined to the slow-angle column.
bool check_zero_pattern(const SelfEnergyMatrix& M);

/// Scalar whose vanishing marks a singular resummed denominator.
Real invertibility_value(Real x, Real eta, const SelfEnergyMatrix& M);
bool invertibility_condition(Real x, Real eta, const SelfEnergyMatrix& M, Real tol = 1e-12);

/// (ix - M(eta))^{-1}; throws SingularDenominator when the scalar condition
/// fails.
Eigen::MatrixXcd resummed_propagator(Real x, Real eta, const SelfEnergyMatrix& M);

struct PropagatorBoundReport {
    std::vector<Real> xValues;
    std::vector<Real> norms;
    std::vector<Real> bounds;
    int scanned = 0;
    int skippedBelowThreshold = 0;
    Real minimalRho = 0.0;  // smallest rho for which all kept points pass
    bool pass = false;
};

PropagatorBoundReport propagator_bound_scan(const SelfEnergyMatrix& M, Real eta, Real rho,
                                            int k0, const std::vector<Real>& xGrid);

/// Smooth partition of unity between the plateau below C0^2/4 and above C0^2.
struct ScaleBand {
    Real C0 = 1.0;
    int n = 0;
    Real psi(Real D) const;
    Real chi(Real D) const { return 1.0 - psi(D); }
};

int n0_from_epsilon(Real C0, Real rho, Real etaBar, int k0);

struct CancellationReport {
    int families = 0;
    Real maxRowColAtZero = 0.0;      // action rows and fast-angle columns at x = 0
    Real maxCrossDerivative = 0.0;   // d/dx of the (A_i, alpha_j) entries at x = 0
    Real controlSingleCluster = 0.0; // largest single-attachment (A_i, alpha_j) entry
    bool pass = false;
};

/// Sums the lowest-degree self-energy families (pairs of nodes joined by one
/// fast line, external lines reattached in all four ways) and verifies the
/// cancellation of the action rows / fast-angle columns at x = 0 and of the
/// x-derivative on the (A_i, alpha_j) entries. Values are normalized per
/// unit eps^2.
CancellationReport cancellation_family_check(const Model& m, const ResonanceData& rd,
                                             Real beta1, Real eta,
                                             const SelfEnergyMatrix& M, Real fdStep = 0.0);

struct EigenEstimate {
    Real lambda = 0.0;  // isolated eigenvalue of the slow block
    Real ell = 0.0;     // lambda / (eps eta^{k0-1})
    Real x = 0.0;
    Real eta = 0.0;
    Real gap = 0.0;  // distance to the remaining spectrum
};

EigenEstimate lowest_eigenvalue_estimate(const Model& m, const SelfEnergyMatrix& M, Real x,
                                         Real eta, int k0, int sigma);

/// Lemma-style lower bound on the resummed denominator in terms of the
/// divisor min(x^2, |x^2 - lambda|); valid in the small-divisor band
/// x^2 <= rho eta^{2 k0 - 1}.
bool propagator_divisor_inequality(const Model& m, const SelfEnergyMatrix& M, Real x,
                                   Real eta, int k0, int sigma);

struct ExcludedMeasure {
    std::vector<std::pair<Real, Real>> intervals;  // merged, within the eps range
    Real totalMeasure = 0.0;
    Real bound = 0.0;    // fittedK * C0 2^{-m/2} epsBar etaBar^{delta1 (k0 - 1/2)}
    Real fittedK = 0.0;  // measure / reference at the fitting scale
    int scale = 0;
    int contributingModes = 0;
};

/// Sweeps eps over (epsBar/4, epsBar], excluding the eps for which some
/// divisor |omega.nu| falls within the scale-m threshold of the moving
/// self-energy root sqrt(lambda(eps)); nuCutoff bounds |nu|_1.
ExcludedMeasure excluded_measure_single_scale(const Model& m, const ResonanceData& rd,
                                              Real beta1, Real epsBar, int selfEnergyDegree,
                                              int scaleM, int nuCutoff, Real delta1,
                                              Real fittedK = 0.0);

}  // namespace fraclind

#endif
