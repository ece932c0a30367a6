#ifndef FRACLIND_MODEL_HPP
#define FRACLIND_MODEL_HPP

#include <string>
#include <vector>

#include "fraclind/angleaction.hpp"
#include "fraclind/fourier.hpp"

namespace fraclind {

/// Diophantine frequency vector omega in R^{N-1}: |omega.nu| >= C0 |nu|^{-tau0}
/// certified for all 0 < |nu|_1 <= modeCutoff at construction.
class Frequency {
  public:
    Frequency() = default;
    Frequency(std::vector<Real> omega, Real C0, Real tau0, int modeCutoff);

    const std::vector<Real>& omega() const { return w_; }
    int dim() const { return static_cast<int>(w_.size()); }
    Real C0() const { return C0_; }
    Real tau0() const { return tau0_; }
    int mode_cutoff() const { return M_; }

    Real dot(const NuVec& nu) const;

  private:
    std::vector<Real> w_;
    Real C0_ = 1.0;
    Real tau0_ = 1.0;
    int M_ = 0;
};

/// Hamiltonian in resonance-adapted coordinates:
///   H = omega.A + H0(A,B) + eps * f(A,B,alpha,beta),
/// H0 with zero gradient and positive-definite Hessian at the origin.
struct Model {
    int N = 0;
    Frequency freq;
    AngleActionFunction H0;  // pure action polynomial, vanishing to 2nd order
    AngleActionFunction f;

    void validate() const;

    /// Hessian of H0 at the origin as a dense N x N matrix (row-major).
    std::vector<std::vector<Real>> hessian() const;
};

Model load_model(const std::string& path);
Model parse_model(const std::string& jsonText);
std::string serialize_model(const Model& m);

struct AdaptedCoordinates {
    std::vector<std::vector<long long>> S;  // unimodular N x N, S nu0 = e_N
    std::vector<std::vector<long long>> Sinv;
    std::vector<Real> omega;  // length N-1, S^T (omega, 0) = omega0
};

/// Builds coordinates adapted to the resonance omega0 . nu0 = 0.
AdaptedCoordinates adapt_coordinates(const std::vector<Real>& omega0,
                                     const std::vector<long long>& nu0, Real tol = 1e-10);

}  // namespace fraclind

#endif
