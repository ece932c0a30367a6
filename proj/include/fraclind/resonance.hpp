#ifndef FRACLIND_RESONANCE_HPP
#define FRACLIND_RESONANCE_HPP

#include <vector>

#include "fraclind/model.hpp"

namespace fraclind {

enum class TorusType { Elliptic, Hyperbolic, OutOfScope };

const char* torus_type_name(TorusType t);

/// Diagnostics of a degenerate resonance at a stationary point beta0 of the
/// fast-angle average of f.
struct ResonanceData {
    Real beta0 = 0.0;
    int k0 = 0;       // degeneracy order: d^j f0 = 0 at beta0 for j <= k0
    Real c = 0.0;     // d^{k0+1} f0(beta0) / k0!
    Real a = 0.0;     // second-order average coupling constant
    int sigma = 1;    // sign of eps
    std::vector<Real> beta1Branches;
    std::vector<TorusType> classificationPerBranch;
    bool existsFlag = false;
};

/// First-order correction X' = (A', B', a', b'): solves the linearized motion
/// around the unperturbed resonant torus. Components are Fourier series over
/// the fast angles; a' has zero average and the slow-angle average b0 is a
/// free parameter (0 here, fixed later by the order-by-order construction).
struct FirstOrderCorrection {
    int N = 0;
    std::vector<FourierSeries> comp;  // 2N series; action averages included
    Real b0 = 0.0;
};

std::vector<Real> find_stationary_points(const AngleActionFunction& f0, Real tol = 1e-12);

struct DegeneracyOrder {
    int k0;
    Real c;
};
DegeneracyOrder degeneracy_order(const AngleActionFunction& f0, Real beta0, int jmax = 10);

FirstOrderCorrection first_order_correction(const Model& m, Real beta0);

/// Average second-order coupling: the eps-linear part of the slow-force
/// average along X0 + eps X'. Must be real; the imaginary part is a
/// computation check.
Real constant_a(const Model& m, Real beta0);

/// Closed-form route valid when f is angle-only and the H0 Hessian is the
/// identity: (1/2) d/dbeta sum_nu (|nu|^2 |f_nu|^2 + |f_nu'|^2)/(omega.nu)^2.
Real constant_a_special(const Model& m, Real beta0);

std::vector<Real> beta1_branches(Real a, Real c, int sigma, int k0);

TorusType classify_torus(int k0, Real c, Real a, int sigma, Real beta1);

/// Full per-model diagnostics for a chosen sign of eps.
ResonanceData analyze_resonance(const Model& m, Real beta0, int sigma);

struct NormalFormReport {
    AngleActionFunction Psi1;
    AngleActionFunction Phi0;      // fast-angle average of the induced kinetic term
    std::vector<Real> zeta;        // - d/dA' Phi0 at the origin
    Real rho = 0.0;                // - d/dB' Phi0 at the origin
    Real aFromPhi = 0.0;           // d/dbeta Phi0(0,0,beta0)
    std::vector<Real> deltaBeta0;  // equilibrium shifts for the given eps
    Real slowWellCoeff = 0.0;      // coefficient of (beta-beta0)^{k0+1}, times eps
};

/// One-step canonical normal form for H = omega.A + (A^2+B^2)/2 + eps f(angles).
NormalFormReport heuristic_normal_form(const Model& m, Real beta0, Real eps);

}  // namespace fraclind

#endif
