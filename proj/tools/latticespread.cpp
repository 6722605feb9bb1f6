// Command-line front end. Data goes to files; stdout carries only `list`
// output and --dry-run configs, so pipelines can consume it safely.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latticespread/analysis.hpp"
#include "latticespread/battery.hpp"
#include "latticespread/dispersion1d.hpp"
#include "latticespread/dispersion2d.hpp"
#include "latticespread/reciprocal2d.hpp"
#include "latticespread/scenario.hpp"
#include "latticespread/version.hpp"

namespace lsp = latticespread;
using Json = nlohmann::ordered_json;

namespace {

int g_log_rank = 1;  // error = 0, info = 1, debug = 2

void log_line(int rank, const std::string& message) {
  if (rank <= g_log_rank) std::fprintf(stderr, "latticespread: %s\n", message.c_str());
}
void log_info(const std::string& message) { log_line(1, message); }
void log_debug(const std::string& message) { log_line(2, message); }

[[noreturn]] void usage_error(const std::string& message) {
  throw lsp::Error(lsp::ErrorCategory::Usage, "cli", message);
}

// One machine-parseable JSON line, then a human sentence, both on stderr.
int report_failure(const lsp::Error& error) {
  const bool usage = error.category == lsp::ErrorCategory::Usage;
  Json line = Json::object();
  line["error"] = Json::object();
  line["error"]["category"] = usage ? "usage" : "runtime";
  line["error"]["stage"] = error.stage;
  line["error"]["message"] = error.what();
  std::fprintf(stderr, "%s\n", line.dump().c_str());
  std::fprintf(stderr, "latticespread: %s error in stage \"%s\": %s\n",
               usage ? "usage" : "runtime", error.stage.c_str(), error.what());
  return usage ? 1 : 2;
}

void append_number(std::string& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  out += buf;
}

void write_text_file(const std::string& path, const std::string& bytes) {
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) {
    std::error_code ec;
    std::filesystem::create_directories(path.substr(0, slash), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  lsp::require(out.good(), "cli", "failed to write " + path);
}

void print_stdout(const std::string& text) { std::fwrite(text.data(), 1, text.size(), stdout); }

// --- flag -> model/geometry resolution --------------------------------------

struct ModelFlags {
  std::string kind;       // powerlaw | waveguide | freespace
  double alpha = 3.0;
  double k_a = 0.3 * lsp::kPi;
  std::string pol = "z";  // x | y | z | tilted | "px,py,pz"
  bool alpha_set = false;
  bool k_a_set = false;
  bool pol_set = false;
};

Eigen::Vector3cd parse_polarization(const std::string& text) {
  if (text == "x") return {1.0, 0.0, 0.0};
  if (text == "y") return {0.0, 1.0, 0.0};
  if (text == "z") return {0.0, 0.0, 1.0};
  if (text == "tilted") {
    const double s = std::sin(lsp::kPi / 12.0) / std::sqrt(2.0);
    return {s, s, std::cos(lsp::kPi / 12.0)};
  }
  std::istringstream in(text);
  double px, py, pz;
  char c1, c2;
  if ((in >> px >> c1 >> py >> c2 >> pz) && c1 == ',' && c2 == ',' && in.eof()) {
    return {px, py, pz};
  }
  usage_error("--pol expects x, y, z, tilted, or three comma-separated numbers");
}

lsp::CouplingModel resolve_model(const ModelFlags& flags) {
  if (flags.kind == "powerlaw") {
    if (flags.k_a_set) usage_error("--k-a conflicts with --model powerlaw");
    if (flags.pol_set) usage_error("--pol conflicts with --model powerlaw");
    return lsp::CouplingModel(lsp::PowerLawCoupling{flags.alpha});
  }
  if (flags.kind == "waveguide") {
    if (flags.alpha_set) usage_error("--alpha conflicts with --model waveguide");
    if (flags.pol_set) usage_error("--pol conflicts with --model waveguide");
    return lsp::CouplingModel(lsp::WaveguideCoupling{flags.k_a});
  }
  if (flags.kind == "freespace") {
    if (flags.alpha_set) usage_error("--alpha conflicts with --model freespace");
    return lsp::CouplingModel(
        lsp::FreeSpaceCoupling{flags.k_a, parse_polarization(flags.pol)});
  }
  usage_error("--model expects powerlaw, waveguide, or freespace");
}

struct GeometryFlags {
  int n = 751;
  int n_x = 0;  // > 0 selects a 2D lattice
  int n_y = 0;
  double a_x = 1.0;
  double a_y = 1.0;
  bool n_set = false;
};

lsp::LatticeGeometry resolve_geometry(const GeometryFlags& flags) {
  if (flags.n_x > 0) {
    if (flags.n_set) usage_error("--n conflicts with --nx; pass one of them");
    const int n_y = flags.n_y > 0 ? flags.n_y : flags.n_x;
    return lsp::LatticeGeometry::square(flags.n_x, n_y, flags.a_x, flags.a_y);
  }
  if (flags.n_y > 0) usage_error("--ny needs --nx");
  return lsp::LatticeGeometry::chain(flags.n, flags.a_x);
}

void add_model_flags(CLI::App* cmd, ModelFlags& flags, bool required) {
  auto* kind = cmd->add_option("--model", flags.kind,
                               "coupling model: powerlaw, waveguide, freespace");
  if (required) kind->required();
  cmd->add_option("--alpha", flags.alpha, "power-law exponent (powerlaw)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--k-a", flags.k_a, "light wavenumber in units of 1/a")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--pol", flags.pol,
                  "free-space polarization: x, y, z, tilted, or px,py,pz");
}

void read_model_counts(CLI::App* cmd, ModelFlags& flags) {
  flags.alpha_set = cmd->count("--alpha") > 0;
  flags.k_a_set = cmd->count("--k-a") > 0;
  flags.pol_set = cmd->count("--pol") > 0;
}

void add_geometry_flags(CLI::App* cmd, GeometryFlags& flags) {
  cmd->add_option("--n", flags.n, "chain length")->check(CLI::PositiveNumber);
  cmd->add_option("--nx", flags.n_x, "2D lattice columns")->check(CLI::PositiveNumber);
  cmd->add_option("--ny", flags.n_y, "2D lattice rows (defaults to --nx)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ax", flags.a_x, "lattice spacing along x")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ay", flags.a_y, "lattice spacing along y")
      ->check(CLI::PositiveNumber);
}

// --- subcommand bodies -------------------------------------------------------

int execute_scenario(const lsp::ScenarioConfig& config, bool dry_run) {
  if (dry_run) {
    print_stdout(lsp::scenario_to_json(config));
    return 0;
  }
  const lsp::RunSummary summary = lsp::run_scenario(config);
  std::ostringstream note;
  note << "wrote " << summary.bundle_directory << " (" << summary.files.size()
       << " files, " << summary.wall_seconds << " s)";
  log_info(note.str());
  for (const lsp::SectionReport& report : summary.classifications) {
    std::ostringstream row;
    row << "  " << lsp::to_string(report.kind) << ": "
        << (report.result.label == lsp::SpreadingLabel::Split ? "split" : "unsplit")
        << " (" << report.result.tracks.size() << " tracks)";
    log_info(row.str());
  }
  return 0;
}

int run_dispersion(const ModelFlags& model_flags, int grid, bool derivs,
                   const std::string& out_dir, bool dry_run) {
  const lsp::CouplingModel model = resolve_model(model_flags);
  if (dry_run) {
    Json j = Json::object();
    j["subcommand"] = "dispersion";
    j["model"] = Json::parse(lsp::scenario_to_json([&] {
      lsp::ScenarioConfig c;
      c.name = "dispersion";
      c.model = model;
      c.geometry = lsp::LatticeGeometry::chain(5);
      c.stages = {lsp::ScenarioStage::Dispersion};
      return c;
    }()))["model"];
    j["grid"] = grid;
    j["derivs"] = derivs;
    j["out"] = out_dir + "/dispersion.csv";
    print_stdout(j.dump(2) + "\n");
    return 0;
  }
  const auto disp = lsp::make_dispersion(model);
  const lsp::Dispersion1DGrid samples = lsp::sample_dispersion(*disp, grid);
  std::string csv = derivs ? "k,re_omega,im_omega,d1,d2,masked,subradiant\n"
                           : "k,re_omega,im_omega,masked,subradiant\n";
  for (std::size_t i = 0; i < samples.k.size(); ++i) {
    append_number(csv, samples.k[i]);
    csv += ',';
    append_number(csv, samples.omega[i].real());
    csv += ',';
    append_number(csv, samples.omega[i].imag());
    csv += ',';
    if (derivs) {
      append_number(csv, samples.d1[i]);
      csv += ',';
      append_number(csv, samples.d2[i]);
      csv += ',';
    }
    csv += samples.masked[i] ? '1' : '0';
    csv += ',';
    csv += samples.subradiant[i] ? '1' : '0';
    csv += '\n';
  }
  write_text_file(out_dir + "/dispersion.csv", csv);
  log_info("wrote " + out_dir + "/dispersion.csv (" + disp->name() + ", " +
           std::to_string(samples.k.size()) + " rows)");
  return 0;
}

int run_hessian(const ModelFlags& model_flags, int grid, long long window_radius,
                double a_ho, bool zone_corner, const std::string& out_dir,
                bool dry_run) {
  const lsp::CouplingModel model = resolve_model(model_flags);
  lsp::require_usage(!model.is_waveguide(), "cli",
                     "waveguide couplings are one-dimensional; hessian needs a 2D model");
  lsp::require_usage(a_ho == 0.0 || model.is_free_space(), "cli",
                     "--a-ho selects the regularized reciprocal sum, which needs "
                     "--model freespace");
  if (dry_run) {
    Json j = Json::object();
    j["subcommand"] = "hessian";
    j["model"] = model.name();
    if (model.is_power_law()) j["alpha"] = model.power_law().alpha;
    if (model.is_free_space()) j["k_a"] = model.free_space().k_a;
    j["grid"] = grid;
    j["window_radius"] = window_radius;
    j["a_ho"] = a_ho;
    j["centered"] = !zone_corner;
    j["out"] = out_dir;
    print_stdout(j.dump(2) + "\n");
    return 0;
  }

  lsp::HessianField field;
  std::string grid_csv = "kx,ky,re_omega,im_omega,masked,subradiant\n";
  if (a_ho > 0.0) {
    const lsp::FreeSpaceCoupling& fsc = model.free_space();
    const lsp::ReciprocalDispersion2D rec(fsc.k_a, fsc.polarization, 1.0, 1.0, a_ho);
    const double k_lo = zone_corner ? 0.0 : -lsp::kPi;
    const double spacing = 2.0 * lsp::kPi / grid;
    for (int iy = 0; iy < grid; ++iy) {
      for (int ix = 0; ix < grid; ++ix) {
        const double kx = k_lo + ix * spacing;
        const double ky = k_lo + iy * spacing;
        const lsp::Complex omega = rec.omega(kx, ky);
        append_number(grid_csv, kx);
        grid_csv += ',';
        append_number(grid_csv, ky);
        grid_csv += ',';
        append_number(grid_csv, omega.real());
        grid_csv += ',';
        append_number(grid_csv, omega.imag());
        grid_csv += ",0,";
        grid_csv += std::hypot(kx, ky) > fsc.k_a ? '1' : '0';
        grid_csv += '\n';
      }
    }
    field = lsp::hessian_field(
        [&](double kx, double ky) { return rec.re_omega(kx, ky); }, grid, k_lo,
        k_lo + 2.0 * lsp::kPi, true);
  } else {
    const lsp::Dispersion2DGrid samples =
        lsp::sample_dispersion_2d(model, grid, window_radius, !zone_corner);
    for (int iy = 0; iy < grid; ++iy) {
      for (int ix = 0; ix < grid; ++ix) {
        const std::size_t idx = samples.index(ix, iy);
        append_number(grid_csv, samples.kx(ix));
        grid_csv += ',';
        append_number(grid_csv, samples.ky(iy));
        grid_csv += ',';
        append_number(grid_csv, samples.omega[idx].real());
        grid_csv += ',';
        append_number(grid_csv, samples.omega[idx].imag());
        grid_csv += ',';
        grid_csv += samples.masked[idx] ? '1' : '0';
        grid_csv += ',';
        grid_csv += samples.subradiant[idx] ? '1' : '0';
        grid_csv += '\n';
      }
    }
    field = lsp::hessian_field(samples);
  }
  write_text_file(out_dir + "/grid.csv", grid_csv);

  std::string hessian_csv = "kx,ky,det,valid\n";
  for (int iy = 0; iy < field.n; ++iy) {
    for (int ix = 0; ix < field.n; ++ix) {
      const std::size_t idx = field.index(ix, iy);
      append_number(hessian_csv, field.k_lo + ix * field.spacing);
      hessian_csv += ',';
      append_number(hessian_csv, field.k_lo + iy * field.spacing);
      hessian_csv += ',';
      append_number(hessian_csv, field.det[idx]);
      hessian_csv += ',';
      hessian_csv += field.valid[idx] ? '1' : '0';
      hessian_csv += '\n';
    }
  }
  write_text_file(out_dir + "/hessian.csv", hessian_csv);

  const lsp::ContourSet set = lsp::zero_contours(field);
  Json report = Json::object();
  report["field"] = "det_hessian";
  report["n"] = field.n;
  report["k_lo"] = field.k_lo;
  report["spacing"] = field.spacing;
  std::size_t closed = 0;
  Json contours = Json::array();
  for (const lsp::Contour& contour : set.contours) {
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
  write_text_file(out_dir + "/contours.json", report.dump(2) + "\n");
  log_info("wrote " + out_dir + "/{grid.csv, hessian.csv, contours.json}; " +
           std::to_string(set.contours.size()) + " contours, " +
           std::to_string(closed) + " closed");
  return 0;
}

int run_verify(const std::string& suite, bool dry_run) {
  lsp::require_usage(suite == "nogo", "cli", "unknown suite \"" + suite + "\"");
  if (dry_run) {
    Json j = Json::object();
    j["subcommand"] = "verify";
    j["suite"] = suite;
    j["bands_1d"] = lsp::battery_1d().size();
    j["bands_2d"] = lsp::battery_2d().size();
    print_stdout(j.dump(2) + "\n");
    return 0;
  }
  int failures = 0;
  const auto check = [&](const std::string& name, bool pass, double value) {
    std::ostringstream row;
    row << (pass ? "pass" : "FAIL") << "  " << name << "  (" << value << ")";
    log_line(0, row.str());
    if (!pass) ++failures;
  };
  for (const lsp::SmoothDispersion1D& band : lsp::battery_1d()) {
    for (int n = 1; n <= 2; ++n) {
      const lsp::MomentIntegral moment = lsp::moment_integrals(band, n, 4096);
      check(band.name() + " zone integral of derivative " + std::to_string(n),
            moment.applicable && std::abs(moment.value) < 1e-9, moment.value);
    }
    if (!band.flat()) {
      const lsp::StationarySet set = lsp::find_inflection_points(band);
      bool positive = false;
      bool negative = false;
      for (const double v : set.group_velocity) {
        positive = positive || v > 0.0;
        negative = negative || v < 0.0;
      }
      check(band.name() + " curvature zeros with both velocity signs",
            set.inflection_k.size() >= 2 && positive && negative,
            static_cast<double>(set.inflection_k.size()));
    }
  }
  for (const lsp::SmoothBand2D& band : lsp::battery_2d()) {
    const lsp::GaussBonnetResult torus = lsp::gauss_bonnet_check(band.omega, 512);
    check(band.name + " torus curvature integral",
          torus.applicable && std::abs(torus.value) < 1e-3, torus.value);
  }
  if (failures > 0) {
    throw lsp::Error(lsp::ErrorCategory::Runtime, "verify",
                     std::to_string(failures) + " checks failed in suite nogo");
  }
  log_info("suite nogo: all checks passed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-excitation spreading on lattices with long-range couplings"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", lsp::kLibraryVersion);

  int threads = 1;
  std::string log_level = "info";
  bool dry_run = false;
  app.add_option("--threads", threads,
                 "worker-parallelism cap (computations are deterministic "
                 "for any value)")
      ->envname("LATTICESPREAD_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_option("--log-level", log_level, "stderr verbosity")
      ->check(CLI::IsMember({"error", "info", "debug"}));
  app.add_flag("--dry-run", dry_run,
               "print the resolved effective config as JSON and exit");

  // run
  auto* run_cmd = app.add_subcommand("run", "run a canned or file-defined scenario");
  std::string scenario_name;
  std::string config_path;
  std::string run_out;
  std::vector<std::string> run_formats;
  run_cmd->add_option("--scenario", scenario_name, "canned scenario name (see list)");
  run_cmd->add_option("--config", config_path, "scenario config JSON file")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_out, "output directory (overrides config)");
  run_cmd->add_option("--formats", run_formats, "output formats (overrides config)")
      ->delimiter(',');

  // simulate / classify / spa share model, geometry, and time flags
  ModelFlags sim_model, cls_model, spa_model, disp_model, hess_model;
  GeometryFlags sim_geom, cls_geom, spa_geom;
  std::vector<double> sim_times, cls_times, spa_times;
  int sim_site = -1, cls_site = -1, spa_site = -1;
  std::string sim_out = "out", cls_out = "out", spa_out = "out";
  std::string sim_name = "simulate", cls_name = "classify", spa_name = "spa";

  const auto add_dynamics_flags = [](CLI::App* cmd, ModelFlags& model,
                                     GeometryFlags& geom, std::vector<double>& times,
                                     int& site, std::string& out, std::string& name) {
    add_model_flags(cmd, model, true);
    add_geometry_flags(cmd, geom);
    cmd->add_option("--times", times, "snapshot times, comma separated")
        ->delimiter(',')
        ->required();
    cmd->add_option("--initial-site", site, "excitation site (-1 = lattice center)");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--name", name, "bundle name");
  };

  auto* sim_cmd = app.add_subcommand("simulate", "evolve a model and write snapshots");
  add_dynamics_flags(sim_cmd, sim_model, sim_geom, sim_times, sim_site, sim_out,
                     sim_name);

  auto* cls_cmd =
      app.add_subcommand("classify", "evolve a model and classify the spreading");
  add_dynamics_flags(cls_cmd, cls_model, cls_geom, cls_times, cls_site, cls_out,
                     cls_name);
  std::vector<std::string> cls_sections = {"row"};
  lsp::ClassifyParams cls_params;
  cls_cmd->add_option("--sections", cls_sections,
                      "cuts to classify: row, column, diagonal_main, diagonal_anti, "
                      "radial")
      ->delimiter(',');
  cls_cmd->add_option("--window", cls_params.window, "smoothing window (odd)");
  cls_cmd->add_option("--threshold-frac", cls_params.threshold_frac,
                      "peak height threshold fraction");
  cls_cmd->add_option("--rate-floor", cls_params.rate_floor,
                      "minimum separation speed (0 derives from the wavefront)");
  cls_cmd->add_option("--valley-frac", cls_params.valley_frac,
                      "required valley depth between counter-moving packets");

  auto* spa_cmd = app.add_subcommand(
      "spa", "compare exact waveforms against the stationary-phase approximation");
  add_dynamics_flags(spa_cmd, spa_model, spa_geom, spa_times, spa_site, spa_out,
                     spa_name);

  // dispersion
  auto* disp_cmd =
      app.add_subcommand("dispersion", "sample a 1D dispersion on a periodic grid");
  int disp_grid = 1024;
  bool disp_derivs = false;
  std::string disp_out = "out";
  add_model_flags(disp_cmd, disp_model, true);
  disp_cmd->add_option("--grid", disp_grid, "sample count")->check(CLI::PositiveNumber);
  disp_cmd->add_flag("--derivs", disp_derivs, "include d1 and d2 columns");
  disp_cmd->add_option("--out", disp_out, "output directory");

  // hessian
  auto* hess_cmd = app.add_subcommand(
      "hessian", "sample a 2D dispersion, its Hessian determinant, and contours");
  int hess_grid = 256;
  long long hess_window = 400;
  double hess_a_ho = 0.0;
  bool hess_corner = false;
  std::string hess_out = "out";
  add_model_flags(hess_cmd, hess_model, true);
  hess_cmd->add_option("--grid", hess_grid, "samples per axis (even)")
      ->check(CLI::PositiveNumber);
  hess_cmd->add_option("--window-radius", hess_window,
                       "real-space cutoff for lattice sums");
  hess_cmd->add_option("--a-ho", hess_a_ho,
                       "Gaussian regularization width (freespace reciprocal sum)");
  hess_cmd->add_flag("--zone-corner", hess_corner,
                     "sample [0, 2 pi) instead of [-pi, pi)");
  hess_cmd->add_option("--out", hess_out, "output directory");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "run identity-check suites on builtin bands");
  std::string suite;
  verify_cmd->add_option("--suite", suite, "suite name: nogo")->required();

  // list
  auto* list_cmd = app.add_subcommand("list", "list canned scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::ostringstream human;
    human << e.what();
    return report_failure(lsp::Error(lsp::ErrorCategory::Usage, "cli", human.str()));
  }

  if (log_level == "error") g_log_rank = 0;
  if (log_level == "debug") g_log_rank = 2;
  log_debug("threads cap: " + std::to_string(threads) +
            " (current computations are single-threaded)");

  try {
    if (*list_cmd) {
      if (dry_run) {
        Json j = Json::object();
        j["subcommand"] = "list";
        print_stdout(j.dump(2) + "\n");
        return 0;
      }
      for (const lsp::ScenarioInfo& info : lsp::list_scenarios()) {
        std::printf("%-18s %s\n", info.name.c_str(), info.description.c_str());
      }
      return 0;
    }
    if (*run_cmd) {
      if (!scenario_name.empty() && !config_path.empty()) {
        usage_error("both --scenario and --config define the scenario; pass one");
      }
      if (scenario_name.empty() && config_path.empty()) {
        usage_error("run needs --scenario or --config");
      }
      lsp::ScenarioConfig config;
      if (!scenario_name.empty()) {
        config = lsp::builtin_scenario(scenario_name);
      } else {
        std::ostringstream text;
        text << std::ifstream(config_path).rdbuf();
        config = lsp::parse_scenario(text.str());
      }
      if (run_cmd->count("--out") > 0) {
        log_debug("flag --out overrides config outputs.directory");
        config.outputs.directory = run_out;
      }
      if (run_cmd->count("--formats") > 0) {
        log_debug("flag --formats overrides config outputs.formats");
        config.outputs.formats = run_formats;
      }
      config.validate();
      return execute_scenario(config, dry_run);
    }
    if (*sim_cmd || *cls_cmd || *spa_cmd) {
      CLI::App* cmd = *sim_cmd ? sim_cmd : (*cls_cmd ? cls_cmd : spa_cmd);
      ModelFlags& model = *sim_cmd ? sim_model : (*cls_cmd ? cls_model : spa_model);
      read_model_counts(cmd, model);
      GeometryFlags& geom = *sim_cmd ? sim_geom : (*cls_cmd ? cls_geom : spa_geom);
      geom.n_set = cmd->count("--n") > 0;

      lsp::ScenarioConfig config;
      config.name = *sim_cmd ? sim_name : (*cls_cmd ? cls_name : spa_name);
      config.model = resolve_model(model);
      config.geometry = resolve_geometry(geom);
      config.times = *sim_cmd ? sim_times : (*cls_cmd ? cls_times : spa_times);
      config.initial_site = *sim_cmd ? sim_site : (*cls_cmd ? cls_site : spa_site);
      config.outputs.directory = *sim_cmd ? sim_out : (*cls_cmd ? cls_out : spa_out);
      if (*sim_cmd) {
        config.stages = {lsp::ScenarioStage::Dynamics};
      } else if (*cls_cmd) {
        config.stages = {lsp::ScenarioStage::Dynamics,
                         lsp::ScenarioStage::Classification};
        config.analysis = cls_params;
        config.sections.clear();
        for (const std::string& name : cls_sections) {
          bool known = false;
          for (const lsp::SectionKind kind :
               {lsp::SectionKind::Row, lsp::SectionKind::Column,
                lsp::SectionKind::DiagonalMain, lsp::SectionKind::DiagonalAnti,
                lsp::SectionKind::Radial}) {
            if (name == lsp::to_string(kind)) {
              config.sections.push_back(kind);
              known = true;
            }
          }
          if (!known) usage_error("unknown section \"" + name + "\"");
        }
      } else {
        config.stages = {lsp::ScenarioStage::Dynamics, lsp::ScenarioStage::Spa};
      }
      config.validate();
      return execute_scenario(config, dry_run);
    }
    if (*disp_cmd) {
      read_model_counts(disp_cmd, disp_model);
      return run_dispersion(disp_model, disp_grid, disp_derivs, disp_out, dry_run);
    }
    if (*hess_cmd) {
      read_model_counts(hess_cmd, hess_model);
      return run_hessian(hess_model, hess_grid, hess_window, hess_a_ho, hess_corner,
                         hess_out, dry_run);
    }
    if (*verify_cmd) {
      return run_verify(suite, dry_run);
    }
    usage_error("no subcommand selected");
  } catch (const lsp::Error& error) {
    return report_failure(error);
  } catch (const std::exception& error) {
    return report_failure(
        lsp::Error(lsp::ErrorCategory::Runtime, "cli", error.what()));
  }
  return 0;
}
