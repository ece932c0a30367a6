#include "fraclind/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fraclind/errors.hpp"
#include "json.hpp"

namespace fraclind {

using nlohmann::json;

namespace {

std::string num(Real v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v + 0.0);
    return buf;
}

}  // namespace

std::string RunConfig::canonical() const {
    std::ostringstream ss;
    ss << "command=" << command << ";model=" << modelPath << ";K=" << K
       << ";branch=" << branch << ";etaGrid=";
    for (Real e : etaGrid) ss << num(e) << ",";
    ss << ";treeCap=" << treeCap << ";treeK=" << treeK << ";treeGamma=" << treeGamma
       << ";treeNu=";
    for (int v : treeNu) ss << v << ",";
    ss << ";resumDegree=" << resumDegree << ";eta=" << num(eta) << ";rho=" << num(rho)
       << ";delta1=" << num(delta1) << ";precision=" << precision << ";seed=" << seed;
    return ss.str();
}

std::string RunConfig::hash() const {
    // FNV-1a, stable across platforms
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", h);
    return buf;
}

std::string analyze_report_json(const Model& m, const RunConfig& cfg) {
    json j;
    j["configHash"] = cfg.hash();
    j["command"] = "analyze";
    j["model"] = cfg.modelPath;
    auto pts = find_stationary_points(m.f.fast_angle_average());
    j["beta0"] = pts;
    json perPoint = json::array();
    for (Real b : pts) {
        json p;
        p["beta0"] = b;
        try {
            auto d = degeneracy_order(m.f, b);
            p["k0"] = d.k0;
            p["c"] = d.c;
            if (d.k0 >= 2) {
                auto rd = analyze_resonance(m, b, 1);
                p["a"] = rd.a;
                p["existsFlag"] = rd.existsFlag;
                json branches = json::array();
                for (size_t i = 0; i < rd.beta1Branches.size(); ++i) {
                    json br;
                    br["beta1"] = rd.beta1Branches[i];
                    br["classification"] = torus_type_name(rd.classificationPerBranch[i]);
                    branches.push_back(br);
                }
                p["branches"] = branches;
            } else {
                p["note"] = "nondegenerate point: outside this tool's scope";
            }
        } catch (const Error& e) {
            p["error"] = e.what();
        }
        perPoint.push_back(p);
    }
    j["stationaryPoints"] = perPoint;
    return j.dump(2);
}

ExpandArtifacts expand_artifacts(const Model& m, const EtaSeries& s, const ResidualReport& rep,
                                 const RunConfig& cfg) {
    ExpandArtifacts art;
    Labels lab(m.N);
    {
        std::ostringstream csv;
        csv << "k";
        for (int i = 1; i < m.N; ++i) csv << ",nu" << i;
        csv << ",component,re,im\n";
        for (int k = 1; k <= s.K; ++k)
            for (int g = 0; g < 2 * m.N; ++g)
                for (const auto& [nu, v] : s.orders[k][g].terms()) {
                    csv << k;
                    for (int x : nu) csv << "," << x;
                    csv << "," << lab.name(g) << "," << num(v.real()) << "," << num(v.imag())
                        << "\n";
                }
        art.coefficientsCsv = csv.str();
    }
    {
        std::ostringstream csv;
        csv << "k,beta_k\n";
        for (int k = 1; k <= s.K; ++k) csv << k << "," << num(s.betaAvg[k]) << "\n";
        art.averagesCsv = csv.str();
    }
    {
        json j;
        j["configHash"] = cfg.hash();
        j["command"] = "expand";
        j["model"] = cfg.modelPath;
        j["K"] = s.K;
        j["k0"] = s.k0;
        j["beta0"] = s.beta0;
        j["beta1"] = s.beta1;
        j["branch"] = cfg.branch;
        j["sigma"] = s.sigma;
        j["etaValues"] = rep.etaValues;
        j["residualNorms"] = rep.residualNorms;
        j["fittedExponent"] = rep.fittedExponent;
        art.residualJson = j.dump(2);
    }
    {
        std::ostringstream dat;
        dat << "# equations-of-motion defect of the truncated series\n";
        dat << "# columns: eta, l1 norm over Fourier coefficients\n";
        for (size_t i = 0; i < rep.etaValues.size(); ++i)
            dat << num(rep.etaValues[i]) << " " << num(rep.residualNorms[i]) << "\n";
        art.residualPlot = dat.str();
    }
    return art;
}

std::string trees_report_json(const Model& m, const RunConfig& cfg, int treeCount,
                              Complex treeSum, Complex recursionValue) {
    (void)m;
    json j;
    j["configHash"] = cfg.hash();
    j["command"] = "trees";
    j["model"] = cfg.modelPath;
    j["k"] = cfg.treeK;
    j["gamma"] = cfg.treeGamma;
    j["nu"] = cfg.treeNu;
    j["treeCount"] = treeCount;
    j["treeSum"] = {treeSum.real(), treeSum.imag()};
    j["recursionValue"] = {recursionValue.real(), recursionValue.imag()};
    j["difference"] = std::abs(treeSum - recursionValue);
    return j.dump(2);
}

ResumArtifacts resum_artifacts(const Model& m, const ResonanceData& rd,
                               const SelfEnergyMatrix& M, const PropagatorBoundReport& scan,
                               const RunConfig& cfg) {
    ResumArtifacts art;
    Labels lab(m.N);
    {
        json j;
        j["configHash"] = cfg.hash();
        j["degree"] = M.degree();
        json entries = json::array();
        for (int r = 0; r < 2 * m.N; ++r)
            for (int c = 0; c < 2 * m.N; ++c) {
                bool nonzero = false;
                for (Real v : M.entry(r, c).c)
                    if (v != 0.0) nonzero = true;
                if (!nonzero) continue;
                json e;
                e["row"] = lab.name(r);
                e["col"] = lab.name(c);
                e["coefficients"] = M.entry(r, c).c;
                entries.push_back(e);
            }
        j["entries"] = entries;
        art.matrixJson = j.dump(2);
    }
    {
        json j;
        j["configHash"] = cfg.hash();
        j["command"] = "resum";
        j["model"] = cfg.modelPath;
        j["eta"] = cfg.eta;
        j["rho"] = cfg.rho;
        j["k0"] = rd.k0;
        j["beta1"] = rd.beta1Branches.empty() ? 0.0 : rd.beta1Branches[0];
        j["symmetry"] = check_symmetry(M);
        j["zeroPattern"] = check_zero_pattern(M);
        j["boundScan"] = {{"scanned", scan.scanned},
                          {"skippedBelowThreshold", scan.skippedBelowThreshold},
                          {"pass", scan.pass},
                          {"minimalRho", scan.minimalRho}};
        art.checksJson = j.dump(2);
    }
    {
        std::ostringstream dat;
        dat << "# resummed propagator norm against its spectral bound\n";
        dat << "# columns: x, norm, bound\n";
        for (size_t i = 0; i < scan.xValues.size(); ++i)
            dat << num(scan.xValues[i]) << " " << num(scan.norms[i]) << " "
                << num(scan.bounds[i]) << "\n";
        art.propagatorPlot = dat.str();
    }
    return art;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace fraclind
