#include "fraclind/trees.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fraclind/errors.hpp"

namespace fraclind {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

TreeOracle::TreeOracle(const Model& m, const ResonanceData& rd, Real beta1,
                       TreeOracleOptions opts)
    : m_(m),
      lab_(m.N),
      beta0_(rd.beta0),
      beta1_(beta1),
      sigma_(rd.sigma),
      k0_(rd.k0),
      c_(rd.c),
      cap_(opts.cap > 0 ? opts.cap : 2 * rd.k0 + 2),
      applyForbidden_(opts.applyForbidden),
      zeroSector_(opts.zeroSectorOnly) {
    if (beta1_ == 0.0) throw Error(ErrorCode::ZeroBranch, "beta1 must be nonzero");
    // Hessian inverse for the zero-momentum action propagator (Gauss-Jordan
    // on the small positive-definite block)
    auto h = m.hessian();
    const int N = m.N;
    std::vector<std::vector<Real>> inv(N, std::vector<Real>(N, 0.0));
    {
        std::vector<std::vector<Real>> a = h;
        for (int i = 0; i < N; ++i) inv[i][i] = 1.0;
        for (int col = 0; col < N; ++col) {
            int piv = col;
            for (int r = col + 1; r < N; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            std::swap(a[piv], a[col]);
            std::swap(inv[piv], inv[col]);
            Real d = a[col][col];
            if (d == 0.0) throw Error(ErrorCode::SingularHessian, "kinetic Hessian singular");
            for (int j = 0; j < N; ++j) {
                a[col][j] /= d;
                inv[col][j] /= d;
            }
            for (int r = 0; r < N; ++r) {
                if (r == col) continue;
                Real f = a[r][col];
                if (f == 0.0) continue;
                for (int j = 0; j < N; ++j) {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    hinv_ = inv;
    fSupport_ = m.f.support_nu();
    if (zeroSector_) {
        fSupport_.clear();
        fSupport_.push_back(nu_zero(N - 1));
    }

    const int capExt = cap_ + k0_ - 1;
    momBound_ = zeroSector_ ? 0 : capExt * std::max(1, m.f.max_nu_l1());

    // candidate child keys in canonical order: by degree, label, momentum
    NuVec nu(N - 1, 0);
    std::function<void(int, int, int, int)> scanNu = [&](int idx, int rem, int d, int g) {
        if (idx == N - 1) {
            childKeys_.push_back(Key{d, nu, g});
            return;
        }
        for (int v = -rem; v <= rem; ++v) {
            nu[idx] = v;
            scanNu(idx + 1, rem - std::abs(v), d, g);
        }
        nu[idx] = 0;
    };
    for (int d = 1; d <= capExt; ++d)
        for (int g = 0; g < 2 * N; ++g) scanNu(0, momBound_, d, g);
}

const std::vector<int>& TreeOracle::enumerate_trees(int k, const NuVec& nu, int gamma) {
    if (k > cap_)
        throw Error(ErrorCode::CapExceeded, "degree " + std::to_string(k) +
                                                " beyond the enumeration cap " +
                                                std::to_string(cap_));
    if (k < 1) throw Error(ErrorCode::OutOfRange, "degree must be positive");
    return build(Key{k, nu, gamma});
}

Complex TreeOracle::sum_tree_values(int k, const NuVec& nu, int gamma) {
    Complex s(0.0, 0.0);
    for (int id : enumerate_trees(k, nu, gamma)) s += pool_[id].value;
    return s;
}

const std::vector<int>& TreeOracle::build(const Key& key) {
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    for (const auto& k : buildStack_)
        if (!(k < key) && !(key < k)) {
            // only reachable with the forbidden-configuration filter disabled
            static const std::vector<int> empty;
            if (!applyForbidden_) return empty;
            throw Error(ErrorCode::ValidationError, "internal: cyclic tree recursion");
        }
    buildStack_.push_back(key);

    std::vector<int> out;
    const int N = m_.N;

    if (!nu_is_zero(key.nu)) {
        // diagonal propagator 1/(i omega.nu)
        Real x = m_.freq.dot(key.nu);
        Complex prop = Complex(1.0, 0.0) / Complex(0.0, x);
        node_configs(key, key.gamma, prop, false, out);
    } else if (lab_.is_action(key.gamma)) {
        // zero-momentum action line: inverse-Hessian propagator
        for (int gp = N; gp < 2 * N; ++gp) {
            Real entry = hinv_[key.gamma][gp - N];
            if (entry == 0.0) continue;
            node_configs(key, gp, Complex(-entry, 0.0), false, out);
        }
    } else if (key.gamma == lab_.beta()) {
        if (key.k == 1) {
            LabeledTree leaf;
            leaf.degree = 1;
            leaf.lineMomentum = key.nu;
            leaf.gammaLeft = key.gamma;
            leaf.isLeaf = true;
            leaf.value = Complex(beta1_, 0.0);
            leaf.lineCount = 1;
            leaf.leafCount = 1;
            pool_.push_back(leaf);
            out.push_back(static_cast<int>(pool_.size()) - 1);
        } else {
            // slow-angle average line: carries the branch-relation weight
            Real denom = sigma_ * k0_ * c_ * std::pow(beta1_, k0_ - 1);
            node_configs(key, lab_.B(), Complex(1.0 / denom, 0.0), true, out);
        }
    }
    // zero-momentum fast-angle lines have no propagator piece: empty list

    buildStack_.pop_back();
    return memo_.emplace(key, std::move(out)).first->second;
}

void TreeOracle::node_configs(const Key& key, int gammaRight, Complex prop, bool special,
                              std::vector<int>& out) {
    const int budget = key.k + (special ? 2 * k0_ - 1 : 0);
    std::vector<int> stack;

    // perturbation nodes: one per fast harmonic of f
    for (const auto& nuv : fSupport_) {
        int rem = budget - k0_;
        if (rem < 0) continue;
        NuVec target = nu_add(key.nu, nu_neg(nuv));
        choose_children(1, nuv, key, gammaRight, prop, special, rem, target, false, stack, 0,
                        0, out);
    }
    // kinetic nodes: nonzero only for an action derivative on the node side
    if (lab_.is_angle(gammaRight) && !special) {
        NuVec zeroMode = nu_zero(m_.N - 1);
        choose_children(0, zeroMode, key, gammaRight, prop, false, budget, key.nu, true,
                        stack, 0, 0, out);
    }
}

void TreeOracle::choose_children(int deltaDeg, const NuVec& nodeMode, const Key& key,
                                 int gammaRight, Complex prop, bool special, int budget,
                                 const NuVec& momTarget, bool actionSlotsOnly,
                                 std::vector<int>& stack, int minKeyPos, int minEntryIdx,
                                 std::vector<int>& out) {
    if (nu_l1(momTarget) > budget * std::max(1, m_.f.max_nu_l1())) return;
    if (budget == 0) {
        if (nu_is_zero(momTarget))
            emit_config(deltaDeg, nodeMode, key, gammaRight, prop, special, stack, out);
        return;
    }

    for (size_t pos = static_cast<size_t>(minKeyPos); pos < childKeys_.size(); ++pos) {
        const Key& ck = childKeys_[pos];
        if (ck.k > budget) break;  // keys sorted by degree first
        if (actionSlotsOnly && !lab_.is_action(ck.gamma)) continue;
        // a slow-average subtree below a slow-average line must strictly
        // descend in degree, otherwise the weight would re-derive itself
        if (special && ck.gamma == lab_.beta() && nu_is_zero(ck.nu) && ck.k >= key.k) continue;
        // a lone kinetic insertion on a zero-momentum line is forbidden;
        // pruned before recursing so the registry stays acyclic
        if (applyForbidden_ && deltaDeg == 0 && stack.empty() && ck.k == budget &&
            nu_is_zero(ck.nu))
            continue;
        const std::vector<int>& entries = build(ck);
        if (entries.empty()) continue;
        size_t startIdx =
            (pos == static_cast<size_t>(minKeyPos)) ? static_cast<size_t>(minEntryIdx) : 0;
        for (size_t idx = startIdx; idx < entries.size(); ++idx) {
            stack.push_back(entries[idx]);
            choose_children(deltaDeg, nodeMode, key, gammaRight, prop, special,
                            budget - ck.k, nu_add(momTarget, nu_neg(ck.nu)), actionSlotsOnly,
                            stack, static_cast<int>(pos), static_cast<int>(idx), out);
            stack.pop_back();
        }
    }
}

void TreeOracle::emit_config(int deltaDeg, const NuVec& nodeMode, const Key& key,
                             int gammaRight, Complex prop, bool special,
                             const std::vector<int>& children, std::vector<int>& out) {
    const int p = static_cast<int>(children.size());
    if (deltaDeg == 0 && p == 0) return;  // kinetic gradient vanishes at the origin

    if (applyForbidden_) {
        // single kinetic insertion on a zero-momentum line
        if (deltaDeg == 0 && p == 1 && nu_is_zero(pool_[children[0]].lineMomentum)) return;
        // slow-average self-reference: full slow slot count, zero exit
        // momentum, all slots on the slow angle, all but at most one a leaf
        if (deltaDeg == 1 && p == k0_ && nu_is_zero(nodeMode) && gammaRight == lab_.B() &&
            nu_is_zero(key.nu)) {
            bool allBeta = true;
            int leaves = 0;
            for (int id : children) {
                if (pool_[id].gammaLeft != lab_.beta()) allBeta = false;
                if (pool_[id].isLeaf) ++leaves;
            }
            if (allBeta && leaves >= k0_ - 1) return;
        }
    }

    std::vector<int> slots;
    slots.reserve(p);
    for (int id : children) slots.push_back(pool_[id].gammaLeft);
    Complex factor = node_factor(deltaDeg, nodeMode, gammaRight, slots);
    if (factor == Complex(0.0, 0.0)) return;

    Complex value = prop * factor;
    if (deltaDeg == 1) value *= static_cast<Real>(sigma_);
    Real aut = 1.0;
    int run = 1;
    for (int i = 1; i <= p; ++i) {
        if (i < p && children[i] == children[i - 1]) {
            ++run;
        } else {
            for (int r = 2; r <= run; ++r) aut *= r;
            run = 1;
        }
    }
    value /= aut;
    int lines = 1, nodes = 1, leaves = 0;
    for (int id : children) {
        value *= pool_[id].value;
        lines += pool_[id].lineCount;
        nodes += pool_[id].nodeCount;
        leaves += pool_[id].leafCount;
    }

    LabeledTree t;
    t.degree = key.k;
    t.lineMomentum = key.nu;
    t.gammaLeft = key.gamma;
    t.gammaRight = gammaRight;
    t.lineSpecial = special;
    t.deltaDegree = deltaDeg;
    t.nodeMode = nodeMode;
    t.children = children;
    t.value = value;
    t.lineCount = lines;
    t.nodeCount = nodes;
    t.leafCount = leaves;
    pool_.push_back(std::move(t));
    out.push_back(static_cast<int>(pool_.size()) - 1);
}

Complex TreeOracle::node_factor(int deltaDeg, const NuVec& nodeMode, int gammaRight,
                                const std::vector<int>& slotLabels) {
    // the symplectic pairing turns the node-side label into an angle
    // derivative (sign -1) on actions and an action derivative on angles
    int outer;
    Real sign;
    if (lab_.is_action(gammaRight)) {
        outer = gammaRight + m_.N;
        sign = -1.0;
    } else {
        outer = gammaRight - m_.N;
        sign = 1.0;
    }
    std::vector<int> labels = slotLabels;
    labels.push_back(outer);
    std::sort(labels.begin(), labels.end());

    auto& cache = (deltaDeg == 1) ? tensorCacheF_ : tensorCacheH_;
    auto it = cache.find(labels);
    if (it == cache.end()) {
        const AngleActionFunction& g = (deltaDeg == 1) ? m_.f : m_.H0;
        std::vector<Real> zero(m_.N, 0.0);
        it = cache.emplace(labels, tensor_derivative(g, labels, zero, beta0_)).first;
    }
    auto jt = it->second.find(nodeMode);
    if (jt == it->second.end()) return Complex(0.0, 0.0);
    return sign * jt->second;
}

TreeOracle::LineCountReport TreeOracle::line_count_check(int k, const NuVec& nu, int gamma) {
    const auto& ids = enumerate_trees(k, nu, gamma);
    LineCountReport rep;
    rep.trees = static_cast<int>(ids.size());
    rep.globalLower = ceil_div(k, k0_);
    rep.globalUpper = 3 * k0_ * k;
    if (lab_.is_action(gamma) && k >= k0_ + 1)
        rep.refinedUpper = 3 * k0_ * (k - k0_ + 1) - 4 * k0_ - 2;
    else if (lab_.is_angle(gamma) && !(gamma == lab_.beta() && nu_is_zero(nu)) &&
             k >= k0_ + 1)
        rep.refinedUpper = 3 * k0_ * (k - k0_ + 1) - 4 * k0_ - 1;
    else if (gamma == lab_.beta() && nu_is_zero(nu) && k >= 2)
        rep.refinedUpper = 3 * k0_ * k - 4 * k0_;

    rep.pass = true;
    bool first = true;
    for (int id : ids) {
        int lines = pool_[id].lineCount;
        if (first) {
            rep.minLines = rep.maxLines = lines;
            first = false;
        }
        rep.minLines = std::min(rep.minLines, lines);
        rep.maxLines = std::max(rep.maxLines, lines);
        if (lines < rep.globalLower || lines > rep.globalUpper) rep.pass = false;
        if (rep.refinedUpper > 0 && lines > rep.refinedUpper) rep.pass = false;
    }
    if (!rep.pass)
        throw Error(ErrorCode::BoundViolated,
                    "line count outside the admissible range at degree " + std::to_string(k));
    return rep;
}

}  // namespace fraclind
