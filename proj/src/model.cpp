#include "fraclind/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fraclind/errors.hpp"
#include "json.hpp"

namespace fraclind {

using nlohmann::json;

Frequency::Frequency(std::vector<Real> omega, Real C0, Real tau0, int modeCutoff)
    : w_(std::move(omega)), C0_(C0), tau0_(tau0), M_(modeCutoff) {
    if (w_.empty()) throw Error(ErrorCode::DimensionMismatch, "empty frequency vector");
    if (C0_ <= 0 || tau0_ <= 0 || M_ <= 0)
        throw Error(ErrorCode::ValidationError, "C0, tau0, modeCutoff must be positive");
    // certify |omega.nu| |nu|^tau0 >= C0 for all 0 < |nu|_1 <= M
    int d = static_cast<int>(w_.size());
    NuVec nu(d, 0);
    std::function<void(int, int)> scan = [&](int idx, int remaining) {
        if (idx == d) {
            int l1 = nu_l1(nu);
            if (l1 == 0) return;
            Real x = dot(nu);
            if (std::abs(x) * std::pow(static_cast<Real>(l1), tau0_) < C0_)
                throw Error(ErrorCode::ValidationError,
                            "Diophantine certificate fails at nu=" + nu_to_string(nu) +
                                ": |omega.nu|=" + std::to_string(std::abs(x)));
            return;
        }
        for (int v = -remaining; v <= remaining; ++v) {
            nu[idx] = v;
            scan(idx + 1, remaining - std::abs(v));
        }
        nu[idx] = 0;
    };
    scan(0, M_);
}

Real Frequency::dot(const NuVec& nu) const {
    Real x = 0.0;
    for (size_t i = 0; i < w_.size(); ++i) x += w_[i] * nu[i];
    return x;
}

void Model::validate() const {
    if (N < 2) throw Error(ErrorCode::ValidationError, "need N >= 2");
    if (freq.dim() != N - 1)
        throw Error(ErrorCode::DimensionMismatch, "omega must have length N-1");
    if (H0.dims() != N || f.dims() != N)
        throw Error(ErrorCode::DimensionMismatch, "H0/f dimension mismatch");
    for (const auto& [k, c] : H0.terms()) {
        if (!nu_is_zero(k.mode.nu) || k.mode.m != 0)
            throw Error(ErrorCode::ValidationError, "H0 must not depend on the angles");
        int deg = 0;
        for (int e : k.actionExp) deg += e;
        if (deg < 2)
            throw Error(ErrorCode::ValidationError,
                        "H0 must vanish to second order at the origin");
        if (std::abs(c.imag()) > 1e-14 * std::max(1.0, std::abs(c.real())))
            throw Error(ErrorCode::ValidationError, "H0 coefficients must be real");
    }
    H0.check_reality(1e-10);
    f.check_reality(1e-10);
    // assumption: positive-definite Hessian at the origin
    auto h = hessian();
    Eigen::MatrixXd H(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) H(i, j) = h[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw Error(ErrorCode::ValidationError,
                    "Hessian of H0 at the origin is not positive definite (min eig " +
                        std::to_string(es.eigenvalues().minCoeff()) + ")");
}

std::vector<std::vector<Real>> Model::hessian() const {
    Labels lab(N);
    std::vector<std::vector<Real>> h(N, std::vector<Real>(N, 0.0));
    std::vector<Real> zeros(N, 0.0);
    for (int i = 0; i < N; ++i) {
        AngleActionFunction di = H0.derivative(i);
        for (int j = 0; j < N; ++j) {
            AngleActionFunction dij = di.derivative(j);
            h[i][j] = dij.eval(zeros, std::vector<Real>(N - 1, 0.0), 0.0).real();
        }
    }
    return h;
}

namespace {

std::vector<Term> parse_terms(const json& arr, int N, bool allowAngles) {
    std::vector<Term> out;
    for (const auto& jt : arr) {
        Term t;
        t.nu = jt.contains("nu") ? jt.at("nu").get<std::vector<int>>() : NuVec(N - 1, 0);
        t.m = jt.value("m", 0);
        t.actionExp = jt.contains("actionExp") ? jt.at("actionExp").get<std::vector<int>>()
                                               : std::vector<int>(N, 0);
        t.coeff = Complex(jt.value("re", 0.0), jt.value("im", 0.0));
        if (!allowAngles && (!nu_is_zero(t.nu) || t.m != 0))
            throw Error(ErrorCode::ParseError, "angle-dependent term in H0");
        out.push_back(t);
    }
    return out;
}

json term_to_json(const TermKey& k, Complex c) {
    json j;
    j["nu"] = k.mode.nu;
    j["m"] = k.mode.m;
    j["actionExp"] = k.actionExp;
    j["re"] = c.real() + 0.0;  // normalizes -0.0
    j["im"] = c.imag() + 0.0;
    return j;
}

}  // namespace

Model parse_model(const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    Model m;
    try {
        m.N = j.at("N").get<int>();
        if (m.N < 2) throw Error(ErrorCode::ParseError, "N must be >= 2");
        auto omega = j.at("omega").get<std::vector<Real>>();
        Real C0 = j.value("C0", 1.0);
        Real tau0 = j.value("tau0", 1.0);
        int cutoff = j.value("modeCutoff", 20);
        m.freq = Frequency(omega, C0, tau0, cutoff);
        m.H0 = build_function(m.N, parse_terms(j.at("H0"), m.N, false));
        m.f = build_function(m.N, parse_terms(j.at("f"), m.N, true));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    m.validate();
    return m;
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open model file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string serialize_model(const Model& m) {
    json j;
    j["N"] = m.N;
    j["omega"] = m.freq.omega();
    j["C0"] = m.freq.C0();
    j["tau0"] = m.freq.tau0();
    j["modeCutoff"] = m.freq.mode_cutoff();
    json h0 = json::array(), f = json::array();
    for (const auto& [k, c] : m.H0.terms()) h0.push_back(term_to_json(k, c));
    for (const auto& [k, c] : m.f.terms()) f.push_back(term_to_json(k, c));
    j["H0"] = h0;
    j["f"] = f;
    return j.dump(2);
}

namespace {

using IMat = std::vector<std::vector<long long>>;

IMat identity_mat(int n) {
    IMat m(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

long long det_int(IMat a) {
    // fraction-free Gaussian elimination (Bareiss)
    int n = static_cast<int>(a.size());
    long long prev = 1;
    long long sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    swap = i;
                    break;
                }
            if (swap < 0) return 0;
            std::swap(a[k], a[swap]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

IMat mat_mul(const IMat& a, const IMat& b) {
    int n = static_cast<int>(a.size());
    IMat r(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (a[i][k] != 0)
                for (int j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

IMat adjugate_inverse(const IMat& a) {
    // inverse of a unimodular matrix via cofactors (det = +-1)
    int n = static_cast<int>(a.size());
    long long d = det_int(a);
    IMat inv(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IMat minor(n - 1, std::vector<long long>(n - 1, 0));
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor[rr][cc++] = a[r][c];
                }
                ++rr;
            }
            long long cof = ((i + j) % 2 == 0 ? 1 : -1) * (n > 1 ? det_int(minor) : 1);
            inv[j][i] = cof / d;
        }
    return inv;
}

}  // namespace

AdaptedCoordinates adapt_coordinates(const std::vector<Real>& omega0,
                                     const std::vector<long long>& nu0, Real tol) {
    int N = static_cast<int>(omega0.size());
    if (static_cast<int>(nu0.size()) != N)
        throw Error(ErrorCode::DimensionMismatch, "omega0 and nu0 must have equal length");
    Real res = 0.0;
    for (int i = 0; i < N; ++i) res += omega0[i] * nu0[i];
    Real scale = 0.0;
    for (int i = 0; i < N; ++i) scale += std::abs(omega0[i]) * std::abs((Real)nu0[i]);
    if (std::abs(res) > tol * std::max(1.0, scale))
        throw Error(ErrorCode::NotResonant,
                    "omega0 . nu0 = " + std::to_string(res) + " is not zero");
    long long g = 0;
    for (long long v : nu0) g = std::gcd(g, std::abs(v));
    if (g != 1) throw Error(ErrorCode::NonPrimitive, "gcd of nu0 is " + std::to_string(g));

    // Build unimodular S with S nu0 = e_N by integer row reduction of nu0.
    std::vector<long long> v = nu0;
    IMat S = identity_mat(N);
    auto row_axpy = [&](int dst, int src, long long q) {
        // v[dst] -= q v[src]; same op on S rows keeps S v-consistency
        v[dst] -= q * v[src];
        for (int j = 0; j < N; ++j) S[dst][j] -= q * S[src][j];
    };
    while (true) {
        int nz = 0, last = -1;
        for (int i = 0; i < N; ++i)
            if (v[i] != 0) {
                ++nz;
                last = i;
            }
        if (nz <= 1) break;
        int p = -1, q = -1;  // two entries with smallest nonzero magnitude
        for (int i = 0; i < N; ++i) {
            if (v[i] == 0) continue;
            if (p < 0 || std::abs(v[i]) < std::abs(v[p])) {
                q = p;
                p = i;
            } else if (q < 0 || std::abs(v[i]) < std::abs(v[q])) {
                q = i;
            }
        }
        (void)last;
        row_axpy(q, p, v[q] / v[p]);
    }
    int pos = -1;
    for (int i = 0; i < N; ++i)
        if (v[i] != 0) pos = i;
    if (pos < 0 || std::abs(v[pos]) != 1)
        throw Error(ErrorCode::NonPrimitive, "reduction did not reach a unit vector");
    if (v[pos] < 0) {
        v[pos] = -v[pos];
        for (int j = 0; j < N; ++j) S[pos][j] = -S[pos][j];
        // flipping one row flips det; flip another row's sign to restore it
        int other = (pos + 1) % N;
        for (int j = 0; j < N; ++j) S[other][j] = -S[other][j];
    }
    if (pos != N - 1) {
        std::swap(S[pos], S[N - 1]);
        std::swap(v[pos], v[N - 1]);
        for (int j = 0; j < N; ++j) S[pos][j] = -S[pos][j];  // keep det = +1
    }
    if (det_int(S) != 1)
        throw Error(ErrorCode::ValidationError, "internal: adapted matrix has det != 1");

    AdaptedCoordinates out;
    out.S = S;
    out.Sinv = adjugate_inverse(S);
    // (omega, 0) = S^{-T} omega0, i.e. omega_j = sum_i Sinv[i][j] omega0[i]
    std::vector<Real> u(N, 0.0);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) u[j] += static_cast<Real>(out.Sinv[i][j]) * omega0[i];
    if (std::abs(u[N - 1]) > tol * std::max(1.0, scale))
        throw Error(ErrorCode::ValidationError, "internal: slow frequency not annihilated");
    out.omega.assign(u.begin(), u.end() - 1);

    // verify S^T (omega, 0) = omega0
    for (int i = 0; i < N; ++i) {
        Real s = 0.0;
        for (int j = 0; j < N - 1; ++j) s += static_cast<Real>(out.S[j][i]) * out.omega[j];
        if (std::abs(s - omega0[i]) > 1e-9 * std::max(1.0, std::abs(omega0[i])))
            throw Error(ErrorCode::ValidationError, "internal: adapted frequencies mismatch");
    }
    return out;
}

}  // namespace fraclind
