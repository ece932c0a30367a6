#ifndef FRACLIND_REPORT_HPP
#define FRACLIND_REPORT_HPP

#include <string>
#include <vector>

#include "fraclind/lindstedt.hpp"
#include "fraclind/model.hpp"
#include "fraclind/resonance.hpp"
#include "fraclind/selfenergy.hpp"

namespace fraclind {

struct RunConfig {
    std::string modelPath;
    std::string command;
    int K = 6;
    std::string branch = "auto";  // plus | minus | auto
    std::vector<Real> etaGrid = {1e-3, 2e-3, 5e-3, 1e-2};
    int treeCap = 0;  // 0: default 2 k0 + 2
    int treeK = 0;
    std::string treeGamma = "b";
    NuVec treeNu;
    int resumDegree = 0;  // 0: default 2 k0
    Real eta = 1e-2;
    Real rho = 10.0;
    Real delta1 = 0.25;
    std::string outputDir = ".";
    std::string precision = "double";
    unsigned long long seed = 20240809ULL;

    std::string canonical() const;
    /// FNV-1a of the canonical form; embedded in every report.
    std::string hash() const;
};

std::string analyze_report_json(const Model& m, const RunConfig& cfg);

struct ExpandArtifacts {
    std::string coefficientsCsv;
    std::string averagesCsv;
    std::string residualJson;
    std::string residualPlot;
};
ExpandArtifacts expand_artifacts(const Model& m, const EtaSeries& s, const ResidualReport& rep,
                                 const RunConfig& cfg);

std::string trees_report_json(const Model& m, const RunConfig& cfg, int treeCount,
                              Complex treeSum, Complex recursionValue);

struct ResumArtifacts {
    std::string matrixJson;
    std::string checksJson;
    std::string propagatorPlot;
};
ResumArtifacts resum_artifacts(const Model& m, const ResonanceData& rd,
                               const SelfEnergyMatrix& M, const PropagatorBoundReport& scan,
                               const RunConfig& cfg);

void write_file(const std::string& path, const std::string& content);

}  // namespace fraclind

#endif
