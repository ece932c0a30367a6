#ifndef FRACLIND_LINDSTEDT_HPP
#define FRACLIND_LINDSTEDT_HPP

#include <array>
#include <vector>

#include "fraclind/model.hpp"
#include "fraclind/resonance.hpp"

namespace fraclind {

/// Truncated fractional power series for the torus parametrization:
///   X(psi) = X0(psi) + sum_{k} eta^k X^{(k)}(psi) + slow-angle averages.
/// orders[k][g] holds the Fourier coefficients of component g at order k;
/// action components carry their averages in the zero mode, fast angles have
/// zero average, and the slow-angle averages beta_k live in betaAvg.
struct EtaSeries {
    int N = 0;
    int K = 0;
    int k0 = 0;
    Real beta0 = 0.0;
    Real beta1 = 0.0;
    int sigma = 1;
    ResonanceData resonance;
    std::vector<std::vector<FourierSeries>> orders;  // [k][component], k = 0..K
    std::vector<Real> betaAvg;                       // beta_k, k = 1..K (index k)
    int betaDeterminedUpTo = 0;                      // highest k fixed by the construction
};

struct ExpandOptions {
    bool checkCompatibility = true;
    Real compatTol = 1e-9;
    /// Testing hook: when set, beta_1 is taken as given even if inconsistent.
    bool allowInconsistentBranch = false;
};

/// Order-by-order construction through order K for the chosen branch beta1.
EtaSeries expand(const Model& m, const ResonanceData& rd, Real beta1, int K,
                 const ExpandOptions& opts = {});

/// Extends a partial series by solving order k (internal building block of
/// expand; exposed for tests). Orders below k must already be solved.
void solve_order(const Model& m, EtaSeries& s, int k);

/// The four zero-average identities at order k: fast-angle force averages,
/// slow force average, and the two action-average conditions.
std::array<Real, 4> check_compatibility(const Model& m, const EtaSeries& s, int k);

/// Sums the series at a numeric eta; returns (A.., B, alpha.., beta) at psi.
std::vector<Real> evaluate_torus(const EtaSeries& s, Real eta, const std::vector<Real>& psi);

/// l1 norm over Fourier coefficients of the equations-of-motion defect of the
/// truncated series, summed over the residual orders K+1 .. K+extraOrders.
Real residual(const Model& m, const EtaSeries& s, Real eta, int extraOrders = 3);

/// Per-order Fourier l1 norms of the equations-of-motion defect, orders
/// 0..kmax (orders <= K vanish to rounding for a consistent series).
std::vector<Real> residual_order_norms(const Model& m, const EtaSeries& s, int kmax);

struct ResidualReport {
    std::vector<Real> etaValues;
    std::vector<Real> residualNorms;
    Real fittedExponent = 0.0;
};

ResidualReport residual_scaling(const Model& m, const EtaSeries& s,
                                const std::vector<Real>& etaGrid);

}  // namespace fraclind

#endif
