#pragma once

#include <string>
#include <vector>

#include "latticespread/analysis.hpp"
#include "latticespread/coupling.hpp"
#include "latticespread/geometry.hpp"
#include "latticespread/snapshot.hpp"

namespace latticespread {

// Pipeline stages a scenario may run. Classification and Spa consume the
// Dynamics snapshots; Contours consumes the Dispersion samples.
enum class ScenarioStage { Dynamics, Classification, Dispersion, Contours, Spa };

struct DispersionParams {
  // Samples per axis: a full-period 1D grid, or an n x n zone grid in 2D.
  int grid = 1024;
  // Real-space cutoff for lattice sums (displacements up to this radius).
  long long window_radius = 400;
  // Positive values select the Gaussian-regularized reciprocal sum for 2D
  // free-space models; zero keeps the direct lattice sum.
  double a_ho = 0.0;
  // 2D sampling window: [-pi, pi) per axis when true, [0, 2pi) when false.
  // The shifted window keeps level sets around the zone corner in one piece.
  bool centered = true;
};

struct ScenarioOutputs {
  std::string directory = "out";
  // Which data files get written: "csv" gates the CSV tables, "json" gates
  // the JSON reports (snapshot sidecars, classification, contours). The
  // manifest is always written.
  std::vector<std::string> formats = {"csv", "json"};
};

// A fully deterministic, seed-free description of one canned run. Round-trips
// losslessly through JSON; parsing rejects unknown keys at every level.
struct ScenarioConfig {
  std::string name;
  std::string description;
  CouplingModel model;
  LatticeGeometry geometry;
  std::vector<double> times;
  // Initial excitation site; -1 places it on the geometry origin.
  int initial_site = -1;
  std::vector<ScenarioStage> stages = {ScenarioStage::Dynamics,
                                       ScenarioStage::Classification};
  std::vector<SectionKind> sections = {SectionKind::Row};
  ClassifyParams analysis;
  DispersionParams dispersion;
  ScenarioOutputs outputs;
  // Provenance annotations (parameter substitutions, illustrative choices);
  // echoed verbatim into the manifest.
  std::vector<std::string> notes;

  void validate() const;
};

ScenarioConfig parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& config);

struct ScenarioInfo {
  std::string name;
  std::string description;
};

// Builtin registry, in a fixed publication-figure order.
const std::vector<ScenarioInfo>& list_scenarios();
ScenarioConfig builtin_scenario(const std::string& name);

struct BundleFile {
  std::string path;  // relative to the bundle directory
  std::string checksum;
};

struct SectionReport {
  SectionKind kind = SectionKind::Row;
  ClassificationResult result;
};

struct RunSummary {
  std::string bundle_directory;
  std::vector<BundleFile> files;  // sorted by path; excludes manifest/timing
  std::vector<SectionReport> classifications;
  // Any classified section split.
  bool split = false;
  double wall_seconds = 0.0;
};

// Runs every configured stage and writes the bundle
// <outputs.directory>/<name>/{manifest.json, snapshots/, dispersion/,
// contours.json, classification.json, spa/}. The bundle directory is
// recreated from scratch; on any stage failure it is removed again and the
// error names the failed stage. Everything except timing.json is
// byte-reproducible across runs on the same machine.
RunSummary run_scenario(const ScenarioConfig& config);

const char* to_string(ScenarioStage stage);
const char* to_string(SectionKind kind);

}  // namespace latticespread
