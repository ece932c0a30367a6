#ifndef FRACLIND_TREES_HPP
#define FRACLIND_TREES_HPP

#include <vector>

#include "fraclind/lindstedt.hpp"
#include "fraclind/model.hpp"
#include "fraclind/resonance.hpp"

namespace fraclind {

/// One allowed labeled rooted subtree, stored with its root line. Children
/// are registry indices in canonical (sorted) order; equal indices denote
/// identical subtrees and contribute the usual 1/m! symmetry factor, which is
/// already folded into `value` together with the root-line propagator.
struct LabeledTree {
    int degree = 0;
    NuVec lineMomentum;   // root-line momentum
    int gammaLeft = -1;   // component picked at the parent
    int gammaRight = -1;  // node-side label; -1 for a leaf
    bool isLeaf = false;
    bool lineSpecial = false;  // zero-momentum slow-angle line with its own weight
    int deltaDegree = 0;       // 1 for perturbation nodes, 0 for kinetic ones
    NuVec nodeMode;
    std::vector<int> children;  // registry ids
    Complex value{0.0, 0.0};    // coefficient of eta^degree
    int lineCount = 0;
    int nodeCount = 0;
    int leafCount = 0;
};

struct TreeOracleOptions {
    int cap = 0;                 // 0: default 2 k0 + 2
    bool applyForbidden = true;  // testing hook for the negative control
    bool zeroSectorOnly = false; // restrict to zero-momentum internals
};

/// Exhaustive enumeration of the allowed trees contributing to each series
/// coefficient, with memoized subtree registry shared across queries.
class TreeOracle {
  public:
    TreeOracle(const Model& m, const ResonanceData& rd, Real beta1,
               TreeOracleOptions opts = {});

    int cap() const { return cap_; }
    const LabeledTree& tree(int id) const { return pool_[id]; }

    /// All allowed trees of the given degree, root momentum and root label.
    const std::vector<int>& enumerate_trees(int k, const NuVec& nu, int gamma);

    /// Value of a single enumerated tree (coefficient of eta^degree).
    Complex tree_value(int id) const { return pool_[id].value; }

    /// Sum over the enumerated trees: must reproduce the recursion
    /// coefficient (X^{(k)}_nu)_gamma.
    Complex sum_tree_values(int k, const NuVec& nu, int gamma);

    struct LineCountReport {
        int trees = 0;
        int minLines = 0;
        int maxLines = 0;
        int globalLower = 0;  // ceil(k / k0)
        int globalUpper = 0;  // 3 k0 k
        int refinedUpper = 0; // per-root-type bound; 0 when not applicable
        bool pass = false;
    };

    /// Checks the per-tree line counts against the global and per-root-type
    /// bounds; throws BoundViolated on failure.
    LineCountReport line_count_check(int k, const NuVec& nu, int gamma);

  private:
    struct Key {
        int k;
        NuVec nu;
        int gamma;
        bool operator<(const Key& o) const {
            if (k != o.k) return k < o.k;
            if (nu != o.nu) return nu < o.nu;
            return gamma < o.gamma;
        }
    };

    const std::vector<int>& build(const Key& key);
    void node_configs(const Key& key, int gammaRight, Complex prop, bool special,
                      std::vector<int>& out);
    void choose_children(int deltaDeg, const NuVec& nodeMode, const Key& key, int gammaRight,
                         Complex prop, bool special, int budget, const NuVec& momTarget,
                         bool actionSlotsOnly, std::vector<int>& stack, int minKeyPos,
                         int minEntryIdx, std::vector<int>& out);
    void emit_config(int deltaDeg, const NuVec& nodeMode, const Key& key, int gammaRight,
                     Complex prop, bool special, const std::vector<int>& children,
                     std::vector<int>& out);
    Complex node_factor(int deltaDeg, const NuVec& nodeMode, int gammaRight,
                        const std::vector<int>& slotLabels);

    const Model& m_;
    Labels lab_;
    Real beta0_;
    Real beta1_;
    int sigma_;
    int k0_;
    Real c_;
    int cap_;
    bool applyForbidden_;
    bool zeroSector_;
    int momBound_;
    std::vector<std::vector<Real>> hinv_;
    std::vector<NuVec> fSupport_;
    std::vector<LabeledTree> pool_;
    std::map<Key, std::vector<int>> memo_;
    std::vector<Key> childKeys_;  // candidate key order for canonical multisets
    std::map<std::vector<int>, std::map<NuVec, Complex>> tensorCacheF_, tensorCacheH_;
    std::vector<Key> buildStack_;
};

}  // namespace fraclind

#endif
