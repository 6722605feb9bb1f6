#include "latticespread/scenario.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "latticespread/dispersion1d.hpp"
#include "latticespread/dispersion2d.hpp"
#include "latticespread/hamiltonian.hpp"
#include "latticespread/propagate.hpp"
#include "latticespread/reciprocal2d.hpp"
#include "latticespread/spa.hpp"
#include "latticespread/version.hpp"

namespace latticespread {
namespace {

namespace stdfs = std::filesystem;
using Json = nlohmann::ordered_json;

[[noreturn]] void usage_fail(const std::string& message) {
  throw Error(ErrorCategory::Usage, "scenario", message);
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string checksum_string(std::uint64_t hash) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string checksum_of(const std::string& bytes) {
  return checksum_string(fnv1a64(bytes.data(), bytes.size()));
}

void append_number(std::string& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out += buf;
}

constexpr std::pair<ScenarioStage, const char*> kStageNames[] = {
    {ScenarioStage::Dynamics, "dynamics"},
    {ScenarioStage::Classification, "classification"},
    {ScenarioStage::Dispersion, "dispersion"},
    {ScenarioStage::Contours, "contours"},
    {ScenarioStage::Spa, "spa"},
};

constexpr std::pair<SectionKind, const char*> kSectionNames[] = {
    {SectionKind::Row, "row"},
    {SectionKind::Column, "column"},
    {SectionKind::DiagonalMain, "diagonal_main"},
    {SectionKind::DiagonalAnti, "diagonal_anti"},
    {SectionKind::Radial, "radial"},
};

ScenarioStage parse_stage(const std::string& text) {
  for (const auto& [stage, name] : kStageNames) {
    if (text == name) return stage;
  }
  usage_fail("unknown stage \"" + text + "\"");
}

SectionKind parse_section(const std::string& text) {
  for (const auto& [kind, name] : kSectionNames) {
    if (text == name) return kind;
  }
  usage_fail("unknown section \"" + text + "\"");
}

const char* label_string(SpreadingLabel label) {
  return label == SpreadingLabel::Split ? "split" : "unsplit";
}

// --- strict JSON access -----------------------------------------------------

void check_keys(const Json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* key) { return it.key() == key; });
    if (!known) usage_fail(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

const Json* find(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const Json& need(const Json& obj, const char* where, const char* key) {
  const Json* value = find(obj, key);
  if (value == nullptr) usage_fail(std::string(where) + ": missing key \"" + key + "\"");
  return *value;
}

double as_number(const Json& value, const char* what) {
  if (!value.is_number()) usage_fail(std::string(what) + " must be a number");
  return value.get<double>();
}

long long as_integer(const Json& value, const char* what) {
  if (!value.is_number_integer()) usage_fail(std::string(what) + " must be an integer");
  return value.get<long long>();
}

std::string as_string(const Json& value, const char* what) {
  if (!value.is_string()) usage_fail(std::string(what) + " must be a string");
  return value.get<std::string>();
}

bool as_boolean(const Json& value, const char* what) {
  if (!value.is_boolean()) usage_fail(std::string(what) + " must be a boolean");
  return value.get<bool>();
}

void expect_object(const Json& value, const char* what) {
  if (!value.is_object()) usage_fail(std::string(what) + " must be an object");
}

void expect_array(const Json& value, const char* what) {
  if (!value.is_array()) usage_fail(std::string(what) + " must be an array");
}

// --- model / geometry schema ------------------------------------------------

Json model_to_json(const CouplingModel& model) {
  Json j = Json::object();
  j["type"] = model.name();
  if (model.is_power_law()) {
    j["alpha"] = model.power_law().alpha;
  } else if (model.is_waveguide()) {
    j["k_a"] = model.waveguide().k_a;
  } else {
    j["k_a"] = model.free_space().k_a;
    Json pol = Json::array();
    for (int i = 0; i < 3; ++i) {
      const Complex entry = model.free_space().polarization(i);
      if (entry.imag() == 0.0) {
        pol.push_back(entry.real());
      } else {
        pol.push_back(Json::array({entry.real(), entry.imag()}));
      }
    }
    j["polarization"] = std::move(pol);
  }
  return j;
}

CouplingModel model_from_json(const Json& j) {
  expect_object(j, "model");
  const std::string type = as_string(need(j, "model", "type"), "model.type");
  try {
    if (type == "power_law") {
      check_keys(j, "model", {"type", "alpha"});
      return CouplingModel(
          PowerLawCoupling{as_number(need(j, "model", "alpha"), "model.alpha")});
    }
    if (type == "waveguide") {
      check_keys(j, "model", {"type", "k_a"});
      return CouplingModel(
          WaveguideCoupling{as_number(need(j, "model", "k_a"), "model.k_a")});
    }
    if (type == "free_space") {
      check_keys(j, "model", {"type", "k_a", "polarization"});
      const Json& pol = need(j, "model", "polarization");
      if (!pol.is_array() || pol.size() != 3) {
        usage_fail("model.polarization must be an array of three entries");
      }
      Eigen::Vector3cd vec;
      for (int i = 0; i < 3; ++i) {
        const Json& entry = pol[static_cast<std::size_t>(i)];
        if (entry.is_number()) {
          vec(i) = Complex(entry.get<double>(), 0.0);
        } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                   entry[1].is_number()) {
          vec(i) = Complex(entry[0].get<double>(), entry[1].get<double>());
        } else {
          usage_fail("model.polarization entries must be numbers or [re, im] pairs");
        }
      }
      return CouplingModel(
          FreeSpaceCoupling{as_number(need(j, "model", "k_a"), "model.k_a"), vec});
    }
  } catch (const Error& error) {
    if (error.category == ErrorCategory::Usage) throw;
    usage_fail(std::string("model: ") + error.what());
  }
  usage_fail("model.type must be one of power_law, waveguide, free_space");
}

Json geometry_to_json(const LatticeGeometry& geometry) {
  Json j = Json::object();
  j["n_x"] = geometry.n_x;
  j["n_y"] = geometry.n_y;
  j["a_x"] = geometry.a_x;
  j["a_y"] = geometry.a_y;
  return j;
}

LatticeGeometry geometry_from_json(const Json& j) {
  expect_object(j, "geometry");
  check_keys(j, "geometry", {"n_x", "n_y", "a_x", "a_y"});
  const long long n_x = as_integer(need(j, "geometry", "n_x"), "geometry.n_x");
  long long n_y = 1;
  double a_x = 1.0;
  double a_y = 1.0;
  if (const Json* v = find(j, "n_y")) n_y = as_integer(*v, "geometry.n_y");
  if (const Json* v = find(j, "a_x")) a_x = as_number(*v, "geometry.a_x");
  if (const Json* v = find(j, "a_y")) a_y = as_number(*v, "geometry.a_y");
  if (n_x < 1 || n_x > 1'000'000 || n_y < 1 || n_y > 1'000'000) {
    usage_fail("geometry sizes must lie in [1, 1e6]");
  }
  try {
    if (n_y == 1) {
      if (a_y != 1.0) usage_fail("geometry: a_y is meaningless for a chain; use 1");
      return LatticeGeometry::chain(static_cast<int>(n_x), a_x);
    }
    return LatticeGeometry::square(static_cast<int>(n_x), static_cast<int>(n_y), a_x, a_y);
  } catch (const Error& error) {
    if (error.category == ErrorCategory::Usage) throw;
    usage_fail(std::string("geometry: ") + error.what());
  }
}

Json config_to_json(const ScenarioConfig& config) {
  Json j = Json::object();
  j["name"] = config.name;
  j["description"] = config.description;
  j["model"] = model_to_json(config.model);
  j["geometry"] = geometry_to_json(config.geometry);
  j["times"] = config.times;
  j["initial_site"] = config.initial_site;
  Json stages = Json::array();
  for (const ScenarioStage stage : config.stages) stages.push_back(to_string(stage));
  j["stages"] = std::move(stages);
  Json sections = Json::array();
  for (const SectionKind kind : config.sections) sections.push_back(to_string(kind));
  j["sections"] = std::move(sections);
  Json analysis = Json::object();
  analysis["window"] = config.analysis.window;
  analysis["threshold_frac"] = config.analysis.threshold_frac;
  analysis["rate_floor"] = config.analysis.rate_floor;
  analysis["valley_frac"] = config.analysis.valley_frac;
  j["analysis"] = std::move(analysis);
  Json dispersion = Json::object();
  dispersion["grid"] = config.dispersion.grid;
  dispersion["window_radius"] = config.dispersion.window_radius;
  dispersion["a_ho"] = config.dispersion.a_ho;
  dispersion["centered"] = config.dispersion.centered;
  j["dispersion"] = std::move(dispersion);
  Json outputs = Json::object();
  outputs["directory"] = config.outputs.directory;
  outputs["formats"] = config.outputs.formats;
  j["outputs"] = std::move(outputs);
  j["notes"] = config.notes;
  return j;
}

bool has_stage(const ScenarioConfig& config, ScenarioStage stage) {
  return std::find(config.stages.begin(), config.stages.end(), stage) !=
         config.stages.end();
}

bool has_format(const ScenarioConfig& config, const char* format) {
  return std::find(config.outputs.formats.begin(), config.outputs.formats.end(),
                   format) != config.outputs.formats.end();
}

// --- bundle writing ---------------------------------------------------------

void write_file(const stdfs::path& full, const std::string& bytes) {
  std::ofstream out(full, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  require(out.good(), "scenario", "failed to write " + full.string());
}

struct BundleWriter {
  stdfs::path root;
  std::vector<BundleFile> files;

  void write(const std::string& relative, const std::string& bytes) {
    const stdfs::path full = root / relative;
    std::error_code ec;
    stdfs::create_directories(full.parent_path(), ec);
    write_file(full, bytes);
    files.push_back({relative, checksum_of(bytes)});
  }
};

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

std::string snapshot_name(std::size_t index, const char* suffix) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "t_%03zu%s", index, suffix);
  return buf;
}

std::string amplitude_checksum(const WaveformSnapshot& snap) {
  return checksum_string(fnv1a64(
      snap.amplitudes.data(), sizeof(Complex) * static_cast<std::size_t>(snap.amplitudes.size())));
}

// --- stage bodies -----------------------------------------------------------

void write_snapshots(BundleWriter& writer, const ScenarioConfig& config,
                     const std::vector<WaveformSnapshot>& snapshots,
                     const std::string& config_checksum) {
  const bool want_csv = has_format(config, "csv");
  const bool want_json = has_format(config, "json");
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const WaveformSnapshot& snap = snapshots[s];
    if (want_csv) {
      std::string csv = "site,x,y,prob,re,im\n";
      for (int i = 0; i < config.geometry.size(); ++i) {
        const std::array<double, 2> pos = config.geometry.position(i);
        const Complex amp = snap.amplitudes(i);
        csv += std::to_string(i);
        csv += ',';
        append_number(csv, pos[0]);
        csv += ',';
        append_number(csv, pos[1]);
        csv += ',';
        append_number(csv, std::norm(amp));
        csv += ',';
        append_number(csv, amp.real());
        csv += ',';
        append_number(csv, amp.imag());
        csv += '\n';
      }
      writer.write("snapshots/" + snapshot_name(s, ".csv"), csv);
    }
    if (want_json) {
      Json side = Json::object();
      side["time"] = snap.time;
      side["survival"] = snap.survival();
      side["sites"] = config.geometry.size();
      side["model"] = config.model.name();
      side["config_checksum"] = config_checksum;
      side["amplitude_checksum"] = amplitude_checksum(snap);
      writer.write("snapshots/" + snapshot_name(s, ".json"), json_text(side));
    }
  }
  if (want_csv) {
    std::string csv = "time,survival\n";
    for (const WaveformSnapshot& snap : snapshots) {
      append_number(csv, snap.time);
      csv += ',';
      append_number(csv, snap.survival());
      csv += '\n';
    }
    writer.write("snapshots/survival.csv", csv);
  }
}

void run_classification(BundleWriter& writer, const ScenarioConfig& config,
                        const std::vector<WaveformSnapshot>& snapshots,
                        RunSummary& summary) {
  Json sections_json = Json::array();
  for (const SectionKind kind : config.sections) {
    std::vector<SectionProfile> profiles;
    profiles.reserve(snapshots.size());
    for (const WaveformSnapshot& snap : snapshots) {
      profiles.push_back(cross_section(snap, config.geometry, kind));
    }
    ClassificationResult result = classify_spreading(profiles, config.analysis);
    if (result.label == SpreadingLabel::Split) summary.split = true;

    Json section = Json::object();
    section["section"] = to_string(kind);
    section["label"] = label_string(result.label);
    section["front_velocity"] = result.diagnostics.front_velocity;
    section["rate_floor"] = result.diagnostics.rate_floor;
    Json tracks = Json::array();
    for (const PeakTrack& track : result.tracks) {
      Json t = Json::object();
      t["separation_rate"] = track.separation_rate;
      Json points = Json::array();
      for (const TrackPoint& point : track.points) {
        Json p = Json::object();
        p["time"] = point.time;
        p["position"] = point.position;
        p["height"] = point.height;
        points.push_back(std::move(p));
      }
      t["points"] = std::move(points);
      tracks.push_back(std::move(t));
    }
    section["tracks"] = std::move(tracks);
    sections_json.push_back(std::move(section));

    summary.classifications.push_back({kind, std::move(result)});
  }

  if (has_format(config, "json")) {
    Json report = Json::object();
    report["label"] = summary.split ? "split" : "unsplit";
    Json params = Json::object();
    params["window"] = config.analysis.window;
    params["threshold_frac"] = config.analysis.threshold_frac;
    params["rate_floor"] = config.analysis.rate_floor;
    params["valley_frac"] = config.analysis.valley_frac;
    report["params"] = std::move(params);
    report["sections"] = std::move(sections_json);
    Json provenance = Json::array();
    for (const WaveformSnapshot& snap : snapshots) {
      provenance.push_back(amplitude_checksum(snap));
    }
    report["snapshots"] = std::move(provenance);
    writer.write("classification.json", json_text(report));
  }
}

void run_dispersion_1d(BundleWriter& writer, const ScenarioConfig& config) {
  const auto disp = make_dispersion(config.model);
  const Dispersion1DGrid grid = sample_dispersion(*disp, config.dispersion.grid);
  if (!has_format(config, "csv")) return;
  std::string csv = "k,re_omega,im_omega,d1,d2,masked,subradiant\n";
  for (std::size_t i = 0; i < grid.k.size(); ++i) {
    append_number(csv, grid.k[i]);
    csv += ',';
    append_number(csv, grid.omega[i].real());
    csv += ',';
    append_number(csv, grid.omega[i].imag());
    csv += ',';
    append_number(csv, grid.d1[i]);
    csv += ',';
    append_number(csv, grid.d2[i]);
    csv += ',';
    csv += grid.masked[i] ? '1' : '0';
    csv += ',';
    csv += grid.subradiant[i] ? '1' : '0';
    csv += '\n';
  }
  writer.write("dispersion/band.csv", csv);
}

void write_hessian_csv(BundleWriter& writer, const HessianField& field) {
  std::string csv = "kx,ky,det,valid\n";
  for (int iy = 0; iy < field.n; ++iy) {
    for (int ix = 0; ix < field.n; ++ix) {
      const std::size_t idx = field.index(ix, iy);
      append_number(csv, field.k_lo + ix * field.spacing);
      csv += ',';
      append_number(csv, field.k_lo + iy * field.spacing);
      csv += ',';
      append_number(csv, field.det[idx]);
      csv += ',';
      csv += field.valid[idx] ? '1' : '0';
      csv += '\n';
    }
  }
  writer.write("dispersion/hessian.csv", csv);
}

HessianField run_dispersion_2d(BundleWriter& writer, const ScenarioConfig& config) {
  const bool want_csv = has_format(config, "csv");
  const int n = config.dispersion.grid;
  HessianField field;
  if (config.dispersion.a_ho > 0.0) {
    const FreeSpaceCoupling& fsc = config.model.free_space();
    const ReciprocalDispersion2D rec(fsc.k_a, fsc.polarization, config.geometry.a_x,
                                     config.geometry.a_y, config.dispersion.a_ho);
    const double k_lo = config.dispersion.centered ? -kPi : 0.0;
    const double spacing = 2.0 * kPi / n;
    if (want_csv) {
      std::string csv = "kx,ky,re_omega,im_omega,masked,subradiant\n";
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          const double kx = k_lo + ix * spacing;
          const double ky = k_lo + iy * spacing;
          const Complex omega = rec.omega(kx, ky);
          append_number(csv, kx);
          csv += ',';
          append_number(csv, ky);
          csv += ',';
          append_number(csv, omega.real());
          csv += ',';
          append_number(csv, omega.imag());
          csv += ",0,";
          csv += std::hypot(kx, ky) > fsc.k_a ? '1' : '0';
          csv += '\n';
        }
      }
      writer.write("dispersion/grid.csv", csv);
    }
    field = hessian_field([&](double kx, double ky) { return rec.re_omega(kx, ky); }, n,
                          k_lo, k_lo + 2.0 * kPi, true);
  } else {
    const Dispersion2DGrid grid = sample_dispersion_2d(
        config.model, n, config.dispersion.window_radius, config.dispersion.centered);
    if (want_csv) {
      std::string csv = "kx,ky,re_omega,im_omega,masked,subradiant\n";
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          const std::size_t idx = grid.index(ix, iy);
          append_number(csv, grid.kx(ix));
          csv += ',';
          append_number(csv, grid.ky(iy));
          csv += ',';
          append_number(csv, grid.omega[idx].real());
          csv += ',';
          append_number(csv, grid.omega[idx].imag());
          csv += ',';
          csv += grid.masked[idx] ? '1' : '0';
          csv += ',';
          csv += grid.subradiant[idx] ? '1' : '0';
          csv += '\n';
        }
      }
      writer.write("dispersion/grid.csv", csv);
    }
    field = hessian_field(grid);
  }
  if (want_csv) write_hessian_csv(writer, field);
  return field;
}

void run_contours(BundleWriter& writer, const ScenarioConfig& config,
                  const HessianField& field) {
  const ContourSet set = zero_contours(field);
  if (!has_format(config, "json")) return;
  Json report = Json::object();
  report["field"] = "det_hessian";
  report["n"] = field.n;
  report["k_lo"] = field.k_lo;
  report["spacing"] = field.spacing;
  std::size_t closed = 0;
  Json contours = Json::array();
  for (const Contour& contour : set.contours) {
    if (contour.closed) ++closed;
    Json c = Json::object();
    c["closed"] = contour.closed;
    c["signed_area"] = contour.signed_area;
    Json points = Json::array();
    for (const std::array<double, 2>& point : contour.points) {
      points.push_back(Json::array({point[0], point[1]}));
    }
    c["points"] = std::move(points);
    contours.push_back(std::move(c));
  }
  report["closed_count"] = closed;
  report["contours"] = std::move(contours);
  writer.write("contours.json", json_text(report));
}

void run_spa(BundleWriter& writer, const ScenarioConfig& config,
             const std::vector<WaveformSnapshot>& snapshots) {
  const auto disp = make_dispersion(config.model);
  const bool want_csv = has_format(config, "csv");
  const bool subradiant_only = config.model.light_wavenumber() > 0.0;
  Json per_time = Json::array();
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const WaveformSnapshot& snap = snapshots[s];
    Json entry = Json::object();
    entry["time"] = snap.time;
    Json peaks_json = Json::array();
    for (const SpaPeak& peak : predicted_peaks(*disp, snap.time)) {
      Json p = Json::object();
      p["k"] = peak.k;
      p["velocity"] = peak.velocity;
      p["x"] = peak.x;
      peaks_json.push_back(std::move(p));
    }
    entry["peaks"] = std::move(peaks_json);
    per_time.push_back(std::move(entry));

    if (!want_csv) continue;
    std::vector<double> x(static_cast<std::size_t>(config.geometry.size()));
    for (int i = 0; i < config.geometry.size(); ++i) {
      x[static_cast<std::size_t>(i)] = config.geometry.position(i)[0];
    }
    SpaOptions options;
    options.normalization = SpaNormalization::ToSurvival;
    options.survival = snap.survival();
    options.subradiant_only = subradiant_only;
    const SpaWaveform wave = spa_waveform(*disp, x, snap.time, options);
    std::string csv = "x,exact_prob,spa_prob,stationary_count,caustic\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
      append_number(csv, x[i]);
      csv += ',';
      append_number(csv, std::norm(snap.amplitudes(static_cast<int>(i))));
      csv += ',';
      append_number(csv, wave.probability[i]);
      csv += ',';
      csv += std::to_string(wave.stationary_k[i].size());
      csv += ',';
      csv += wave.caustic[i] ? '1' : '0';
      csv += '\n';
    }
    writer.write("spa/" + snapshot_name(s, "_compare.csv"), csv);
  }
  if (has_format(config, "json")) {
    Json report = Json::object();
    report["subradiant_only"] = subradiant_only;
    report["times"] = std::move(per_time);
    writer.write("spa/peaks.json", json_text(report));
  }
}

}  // namespace

const char* to_string(ScenarioStage stage) {
  for (const auto& [value, name] : kStageNames) {
    if (value == stage) return name;
  }
  return "unknown";
}

const char* to_string(SectionKind kind) {
  for (const auto& [value, name] : kSectionNames) {
    if (value == kind) return name;
  }
  return "unknown";
}

void ScenarioConfig::validate() const {
  require_usage(!name.empty(), "scenario", "name must be non-empty");
  for (const char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_' ||
                    ch == '-' || ch == '.';
    require_usage(ok, "scenario",
                  "name may use only lowercase letters, digits, '_', '-', '.'");
  }
  require_usage(name.front() != '.', "scenario", "name must not start with '.'");
  model.validate();
  geometry.validate();
  require_usage(!model.is_waveguide() || geometry.dimension == 1, "scenario",
                "waveguide coupling is chain-only");

  require_usage(!stages.empty(), "scenario", "at least one stage is required");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    for (std::size_t j = i + 1; j < stages.size(); ++j) {
      require_usage(stages[i] != stages[j], "scenario",
                    std::string("duplicate stage \"") + to_string(stages[i]) + "\"");
    }
  }
  const bool dynamics = has_stage(*this, ScenarioStage::Dynamics);
  const bool classification = has_stage(*this, ScenarioStage::Classification);
  const bool dispersion_stage = has_stage(*this, ScenarioStage::Dispersion);
  const bool contours = has_stage(*this, ScenarioStage::Contours);
  const bool spa = has_stage(*this, ScenarioStage::Spa);
  require_usage(!classification || dynamics, "scenario",
                "classification needs the dynamics stage");
  require_usage(!spa || dynamics, "scenario",
                "stationary-phase comparison needs the dynamics stage");
  require_usage(!contours || dispersion_stage, "scenario",
                "contours need the dispersion stage");

  if (dynamics) {
    require_usage(!times.empty(), "scenario", "dynamics needs at least one time");
    require_usage(times.size() <= 1000, "scenario", "too many snapshot times");
    for (std::size_t i = 0; i < times.size(); ++i) {
      require_usage(times[i] > 0.0, "scenario", "times must be positive");
      if (i > 0) {
        require_usage(times[i] > times[i - 1], "scenario",
                      "times must be strictly increasing");
      }
    }
  } else {
    require_usage(times.empty(), "scenario",
                  "times are only meaningful with the dynamics stage");
  }
  require_usage(initial_site == -1 ||
                    (initial_site >= 0 && initial_site < geometry.size()),
                "scenario", "initial_site must be -1 or a valid site index");

  if (classification) {
    require_usage(times.size() >= 3, "scenario",
                  "classification needs at least three times");
    require_usage(!sections.empty(), "scenario",
                  "classification needs at least one section");
    for (std::size_t i = 0; i < sections.size(); ++i) {
      for (std::size_t j = i + 1; j < sections.size(); ++j) {
        require_usage(sections[i] != sections[j], "scenario",
                      std::string("duplicate section \"") + to_string(sections[i]) + "\"");
      }
    }
    if (geometry.dimension == 1) {
      for (const SectionKind kind : sections) {
        require_usage(kind == SectionKind::Row, "scenario",
                      "a chain only has row sections");
      }
    } else {
      for (const SectionKind kind : sections) {
        const bool diagonal =
            kind == SectionKind::DiagonalMain || kind == SectionKind::DiagonalAnti;
        require_usage(!diagonal || geometry.n_x == geometry.n_y, "scenario",
                      "diagonal sections need a square lattice");
      }
    }
    require_usage(analysis.window >= 1 && analysis.window % 2 == 1, "scenario",
                  "analysis.window must be odd and positive");
    require_usage(analysis.threshold_frac > 0.0 && analysis.threshold_frac < 1.0,
                  "scenario", "analysis.threshold_frac must lie in (0, 1)");
    require_usage(analysis.rate_floor >= 0.0, "scenario",
                  "analysis.rate_floor must be non-negative");
    require_usage(analysis.valley_frac > 0.0 && analysis.valley_frac < 1.0, "scenario",
                  "analysis.valley_frac must lie in (0, 1)");
  }

  if (dispersion_stage) {
    require_usage(dispersion.grid >= 16 && dispersion.grid <= 16384, "scenario",
                  "dispersion.grid must lie in [16, 16384]");
    require_usage(dispersion.window_radius >= 1, "scenario",
                  "dispersion.window_radius must be positive");
    require_usage(dispersion.a_ho >= 0.0, "scenario",
                  "dispersion.a_ho must be non-negative");
    if (dispersion.a_ho > 0.0) {
      require_usage(model.is_free_space() && geometry.dimension == 2, "scenario",
                    "regularized reciprocal sums apply to 2D free-space models only");
    }
    if (geometry.dimension == 2) {
      require_usage(geometry.a_x == 1.0 && geometry.a_y == 1.0, "scenario",
                    "2D dispersion sampling assumes unit spacings");
    }
  }
  require_usage(!contours || geometry.dimension == 2, "scenario",
                "contours need a 2D dispersion grid");
  if (spa) {
    require_usage(geometry.dimension == 1 && geometry.a_x == 1.0, "scenario",
                  "stationary-phase comparison needs a unit-spacing chain");
  }

  require_usage(!outputs.directory.empty(), "scenario",
                "outputs.directory must be non-empty");
  require_usage(!outputs.formats.empty(), "scenario",
                "outputs.formats must name at least one format");
  for (std::size_t i = 0; i < outputs.formats.size(); ++i) {
    require_usage(outputs.formats[i] == "csv" || outputs.formats[i] == "json",
                  "scenario", "outputs.formats entries must be \"csv\" or \"json\"");
    for (std::size_t j = i + 1; j < outputs.formats.size(); ++j) {
      require_usage(outputs.formats[i] != outputs.formats[j], "scenario",
                    "duplicate output format \"" + outputs.formats[i] + "\"");
    }
  }
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& error) {
    usage_fail(std::string("config is not valid JSON: ") + error.what());
  }
  if (!j.is_object()) usage_fail("config root must be an object");
  check_keys(j, "config",
             {"name", "description", "model", "geometry", "times", "initial_site",
              "stages", "sections", "analysis", "dispersion", "outputs", "notes"});

  ScenarioConfig config;
  config.name = as_string(need(j, "config", "name"), "name");
  if (const Json* v = find(j, "description")) {
    config.description = as_string(*v, "description");
  }
  config.model = model_from_json(need(j, "config", "model"));
  config.geometry = geometry_from_json(need(j, "config", "geometry"));

  const Json& times = need(j, "config", "times");
  expect_array(times, "times");
  config.times.clear();
  for (const Json& t : times) config.times.push_back(as_number(t, "times entry"));

  if (const Json* v = find(j, "initial_site")) {
    config.initial_site = static_cast<int>(as_integer(*v, "initial_site"));
  }
  if (const Json* v = find(j, "stages")) {
    expect_array(*v, "stages");
    config.stages.clear();
    for (const Json& s : *v) {
      config.stages.push_back(parse_stage(as_string(s, "stages entry")));
    }
  }
  if (const Json* v = find(j, "sections")) {
    expect_array(*v, "sections");
    config.sections.clear();
    for (const Json& s : *v) {
      config.sections.push_back(parse_section(as_string(s, "sections entry")));
    }
  }
  if (const Json* v = find(j, "analysis")) {
    expect_object(*v, "analysis");
    check_keys(*v, "analysis", {"window", "threshold_frac", "rate_floor", "valley_frac"});
    if (const Json* w = find(*v, "window")) {
      config.analysis.window = static_cast<int>(as_integer(*w, "analysis.window"));
    }
    if (const Json* w = find(*v, "threshold_frac")) {
      config.analysis.threshold_frac = as_number(*w, "analysis.threshold_frac");
    }
    if (const Json* w = find(*v, "rate_floor")) {
      config.analysis.rate_floor = as_number(*w, "analysis.rate_floor");
    }
    if (const Json* w = find(*v, "valley_frac")) {
      config.analysis.valley_frac = as_number(*w, "analysis.valley_frac");
    }
  }
  if (const Json* v = find(j, "dispersion")) {
    expect_object(*v, "dispersion");
    check_keys(*v, "dispersion", {"grid", "window_radius", "a_ho", "centered"});
    if (const Json* w = find(*v, "grid")) {
      config.dispersion.grid = static_cast<int>(as_integer(*w, "dispersion.grid"));
    }
    if (const Json* w = find(*v, "window_radius")) {
      config.dispersion.window_radius = as_integer(*w, "dispersion.window_radius");
    }
    if (const Json* w = find(*v, "a_ho")) {
      config.dispersion.a_ho = as_number(*w, "dispersion.a_ho");
    }
    if (const Json* w = find(*v, "centered")) {
      config.dispersion.centered = as_boolean(*w, "dispersion.centered");
    }
  }
  if (const Json* v = find(j, "outputs")) {
    expect_object(*v, "outputs");
    check_keys(*v, "outputs", {"directory", "formats"});
    if (const Json* w = find(*v, "directory")) {
      config.outputs.directory = as_string(*w, "outputs.directory");
    }
    if (const Json* w = find(*v, "formats")) {
      expect_array(*w, "outputs.formats");
      config.outputs.formats.clear();
      for (const Json& f : *w) {
        config.outputs.formats.push_back(as_string(f, "outputs.formats entry"));
      }
    }
  }
  if (const Json* v = find(j, "notes")) {
    expect_array(*v, "notes");
    config.notes.clear();
    for (const Json& n : *v) config.notes.push_back(as_string(n, "notes entry"));
  }

  config.validate();
  return config;
}

std::string scenario_to_json(const ScenarioConfig& config) {
  return json_text(config_to_json(config));
}

namespace {

// --- builtin registry ---------------------------------------------------------

Eigen::Vector3cd axis_x() { return {1.0, 0.0, 0.0}; }
Eigen::Vector3cd axis_y() { return {0.0, 1.0, 0.0}; }
Eigen::Vector3cd axis_z() { return {0.0, 0.0, 1.0}; }

// Mostly out-of-plane with a small equal in-plane component, so a 2D lattice
// couples anisotropically without losing the long 1/r tail.
Eigen::Vector3cd tilted_polarization() {
  const double s = std::sin(kPi / 12.0) / std::sqrt(2.0);
  return {s, s, std::cos(kPi / 12.0)};
}

constexpr const char* kTimesNote =
    "snapshot times are illustrative picks showing early, developing, and late "
    "spreading";

ScenarioConfig chain_scenario(const char* name, const char* description,
                              CouplingModel model, std::vector<double> times) {
  ScenarioConfig config;
  config.name = name;
  config.description = description;
  config.model = std::move(model);
  config.geometry = LatticeGeometry::chain(751);
  config.times = std::move(times);
  config.stages = {ScenarioStage::Dynamics, ScenarioStage::Classification,
                   ScenarioStage::Dispersion};
  return config;
}

ScenarioConfig square_scenario(const char* name, const char* description,
                               CouplingModel model, std::vector<double> times) {
  ScenarioConfig config;
  config.name = name;
  config.description = description;
  config.model = std::move(model);
  config.geometry = LatticeGeometry::square(93, 93);
  config.times = std::move(times);
  config.stages = {ScenarioStage::Dynamics, ScenarioStage::Classification};
  return config;
}

ScenarioConfig rect_scenario(const char* name, const char* description,
                             const Eigen::Vector3cd& polarization) {
  ScenarioConfig config;
  config.name = name;
  config.description = description;
  config.model = CouplingModel(FreeSpaceCoupling{2.0, polarization});
  config.geometry = LatticeGeometry::square(93, 93, 0.4, 0.8);
  config.times = {6, 12, 18};
  config.stages = {ScenarioStage::Dynamics, ScenarioStage::Classification};
  config.sections = {SectionKind::Row, SectionKind::Column};
  config.notes = {"spacings and wavenumber are representative anisotropic values",
                  kTimesNote};
  return config;
}

ScenarioConfig make_builtin(const std::string& name) {
  if (name == "fig2a") {
    return chain_scenario("fig2a", "power-law chain, alpha = 1: one centered packet",
                          CouplingModel(PowerLawCoupling{1.0}), {1, 2, 4});
  }
  if (name == "fig2b") {
    return chain_scenario("fig2b",
                          "power-law chain, alpha = 2: boundary exponent, still unsplit",
                          CouplingModel(PowerLawCoupling{2.0}), {20, 40, 60});
  }
  if (name == "fig2c") {
    ScenarioConfig config = chain_scenario(
        "fig2c", "power-law chain, alpha = 3: ballistic splitting at the inflection speed",
        CouplingModel(PowerLawCoupling{3.0}), {20, 40, 60});
    config.stages.push_back(ScenarioStage::Spa);
    return config;
  }
  if (name == "fig3a_wg") {
    ScenarioConfig config = chain_scenario(
        "fig3a_wg", "waveguide chain, k_a = 0.3 pi: metastable packet pinned at the origin",
        CouplingModel(WaveguideCoupling{0.3 * kPi}), {10, 20, 30});
    config.notes = {
        "channel wavenumber 0.3 pi is a representative incommensurate choice with a "
        "nonempty subradiant zone",
        kTimesNote};
    return config;
  }
  if (name == "fig3b_par_0.6pi") {
    ScenarioConfig config = chain_scenario(
        "fig3b_par_0.6pi", "free-space chain, axial polarization, k_a = 0.6 pi: unsplit",
        CouplingModel(FreeSpaceCoupling{0.6 * kPi, axis_x()}), {40, 80, 120});
    config.notes = {kTimesNote};
    return config;
  }
  if (name == "fig3b_par_0.15pi") {
    ScenarioConfig config = chain_scenario(
        "fig3b_par_0.15pi",
        "free-space chain, axial polarization, k_a = 0.15 pi: fast split from the "
        "band's curvature minimum",
        CouplingModel(FreeSpaceCoupling{0.15 * kPi, axis_x()}), {3, 6, 9});
    config.stages.push_back(ScenarioStage::Spa);
    config.notes = {
        "packets move at roughly 33 sites per unit time; times past 10 would reach "
        "the lattice edge",
        kTimesNote};
    return config;
  }
  if (name == "fig3c_perp_0.3pi") {
    ScenarioConfig config = chain_scenario(
        "fig3c_perp_0.3pi",
        "free-space chain, transverse polarization, k_a = 0.3 pi: split with a "
        "subsidiary wave train",
        CouplingModel(FreeSpaceCoupling{0.3 * kPi, axis_y()}), {40, 55, 70});
    config.notes = {kTimesNote};
    return config;
  }
  if (name == "fig4a") {
    ScenarioConfig config = square_scenario(
        "fig4a",
        "free-space square lattice, k_a = 0.3 pi, tilted polarization: split along "
        "the diagonal",
        CouplingModel(FreeSpaceCoupling{0.3 * kPi, tilted_polarization()}),
        {12, 18, 24});
    config.sections = {SectionKind::DiagonalMain};
    config.notes = {kTimesNote};
    return config;
  }
  if (name == "fig4b") {
    ScenarioConfig config = square_scenario(
        "fig4b",
        "free-space square lattice, k_a = 1.2 pi, tilted polarization: unsplit at "
        "the same decay-matched times",
        CouplingModel(FreeSpaceCoupling{1.2 * kPi, tilted_polarization()}),
        {12, 18, 24});
    config.sections = {SectionKind::DiagonalMain};
    config.notes = {kTimesNote};
    return config;
  }
  if (name == "sm_fig_s3_spa") {
    ScenarioConfig config = chain_scenario(
        "sm_fig_s3_spa",
        "alpha = 3 chain with stationary-phase reconstruction of the split packets",
        CouplingModel(PowerLawCoupling{3.0}), {20, 40, 60});
    config.stages = {ScenarioStage::Dynamics, ScenarioStage::Classification,
                     ScenarioStage::Spa};
    return config;
  }
  if (name == "sm_fig_s4") {
    ScenarioConfig config = square_scenario(
        "sm_fig_s4",
        "power-law square lattice, alpha = 2: caustic ring splits the axial cut",
        CouplingModel(PowerLawCoupling{2.0}), {3, 6, 9});
    config.stages = {ScenarioStage::Dynamics, ScenarioStage::Classification,
                     ScenarioStage::Dispersion, ScenarioStage::Contours};
    config.analysis.window = 3;
    config.dispersion.grid = 256;
    config.dispersion.centered = false;
    config.notes = {
        "analysis window 3: the caustic packets sit within a few sites of the origin "
        "at these times",
        "zone window [0, 2 pi) keeps the corner-centered contour loop in one piece",
        kTimesNote};
    return config;
  }
  if (name == "sm_fig_s5") {
    ScenarioConfig config;
    config.name = "sm_fig_s5";
    config.description =
        "regularized reciprocal dispersion of the free-space square lattice, with "
        "det-Hessian contours";
    config.model = CouplingModel(FreeSpaceCoupling{0.3 * kPi, tilted_polarization()});
    config.geometry = LatticeGeometry::square(93, 93);
    config.stages = {ScenarioStage::Dispersion, ScenarioStage::Contours};
    config.dispersion.grid = 256;
    config.dispersion.a_ho = 0.1;
    config.notes = {"a_ho = 0.1 sets the Gaussian regularization width"};
    return config;
  }
  if (name == "sm_fig_s6_x") {
    return rect_scenario("sm_fig_s6_x",
                         "rectangular free-space lattice (a_x = 0.4, a_y = 0.8, k_a = "
                         "2.0), x polarization: splits along rows only",
                         axis_x());
  }
  if (name == "sm_fig_s6_y") {
    return rect_scenario("sm_fig_s6_y",
                         "rectangular free-space lattice (a_x = 0.4, a_y = 0.8, k_a = "
                         "2.0), y polarization: splits along rows only",
                         axis_y());
  }
  if (name == "sm_fig_s6_z") {
    return rect_scenario("sm_fig_s6_z",
                         "rectangular free-space lattice (a_x = 0.4, a_y = 0.8, k_a = "
                         "2.0), z polarization: splits along rows only",
                         axis_z());
  }
  usage_fail("unknown scenario \"" + name + "\"");
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "fig2a",          "fig2b",           "fig2c",
      "fig3a_wg",       "fig3b_par_0.6pi", "fig3b_par_0.15pi",
      "fig3c_perp_0.3pi", "fig4a",         "fig4b",
      "sm_fig_s3_spa",  "sm_fig_s4",       "sm_fig_s5",
      "sm_fig_s6_x",    "sm_fig_s6_y",     "sm_fig_s6_z",
  };
  return names;
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> out;
    out.reserve(builtin_names().size());
    for (const std::string& name : builtin_names()) {
      const ScenarioConfig config = make_builtin(name);
      out.push_back({config.name, config.description});
    }
    return out;
  }();
  return infos;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig config = make_builtin(name);
  config.validate();
  return config;
}

RunSummary run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const Json config_json = config_to_json(config);
  const std::string config_text = json_text(config_json);
  const std::string config_checksum = checksum_of(config_text);

  BundleWriter writer;
  writer.root = stdfs::path(config.outputs.directory) / config.name;

  RunSummary summary;
  summary.bundle_directory = writer.root.string();

  std::error_code ec;
  const char* stage_name = "prepare";
  try {
    stdfs::remove_all(writer.root, ec);
    stdfs::create_directories(writer.root, ec);
    require(stdfs::is_directory(writer.root), "scenario",
            "cannot create bundle directory " + writer.root.string());

    std::vector<WaveformSnapshot> snapshots;
    if (has_stage(config, ScenarioStage::Dynamics)) {
      stage_name = "dynamics";
      const Hamiltonian h = build_hamiltonian(config.geometry, config.model);
      const int site =
          config.initial_site >= 0 ? config.initial_site : config.geometry.origin_site;
      snapshots = evolve(h, site, config.times);
      for (const WaveformSnapshot& snap : snapshots) snap.check_physical();
      write_snapshots(writer, config, snapshots, config_checksum);
    }
    if (has_stage(config, ScenarioStage::Classification)) {
      stage_name = "classification";
      run_classification(writer, config, snapshots, summary);
    }
    std::optional<HessianField> hessian;
    if (has_stage(config, ScenarioStage::Dispersion)) {
      stage_name = "dispersion";
      if (config.geometry.dimension == 1) {
        run_dispersion_1d(writer, config);
      } else {
        hessian = run_dispersion_2d(writer, config);
      }
    }
    if (has_stage(config, ScenarioStage::Contours)) {
      stage_name = "contours";
      require(hessian.has_value(), "scenario", "contours need a 2D dispersion grid");
      run_contours(writer, config, *hessian);
    }
    if (has_stage(config, ScenarioStage::Spa)) {
      stage_name = "spa";
      run_spa(writer, config, snapshots);
    }

    stage_name = "manifest";
    std::sort(writer.files.begin(), writer.files.end(),
              [](const BundleFile& a, const BundleFile& b) { return a.path < b.path; });
    Json manifest = Json::object();
    manifest["scenario"] = config.name;
    manifest["description"] = config.description;
    manifest["library_version"] = kLibraryVersion;
    manifest["bundle_format"] = kBundleFormat;
    manifest["config"] = config_json;
    manifest["config_checksum"] = config_checksum;
    manifest["notes"] = config.notes;
    Json files = Json::array();
    for (const BundleFile& file : writer.files) {
      Json f = Json::object();
      f["path"] = file.path;
      f["checksum"] = file.checksum;
      files.push_back(std::move(f));
    }
    manifest["files"] = std::move(files);
    write_file(writer.root / "manifest.json", json_text(manifest));

    // Wall time lives outside the manifest so the manifest (and everything it
    // checksums) is byte-identical across runs.
    stage_name = "timing";
    const auto stop = std::chrono::steady_clock::now();
    summary.wall_seconds = std::chrono::duration<double>(stop - start).count();
    Json timing = Json::object();
    timing["wall_seconds"] = summary.wall_seconds;
    write_file(writer.root / "timing.json", json_text(timing));
  } catch (const Error& error) {
    stdfs::remove_all(writer.root, ec);
    throw Error(error.category, "scenario",
                config.name + " failed at stage " + stage_name + ": " + error.what());
  } catch (const std::exception& error) {
    stdfs::remove_all(writer.root, ec);
    throw Error(ErrorCategory::Runtime, "scenario",
                config.name + " failed at stage " + stage_name + ": " + error.what());
  }

  summary.files = std::move(writer.files);
  return summary;
}

}  // namespace latticespread
