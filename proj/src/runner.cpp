#include "eitprop/runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "eitprop/errors.hpp"
#include "eitprop/field_io.hpp"
#include "eitprop/parallel.hpp"
#include "eitprop/sources.hpp"

namespace eitprop {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

  const fs::path& root() const { return root_; }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream out(root_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + (root_ / name).string() + "'");
    out << text;
    out.close();
    record(name);
  }

  void record(const std::string& name) {
    const auto p = root_ / name;
    artifacts_.push_back({name, sha256_file(p), fs::file_size(p)});
  }

  std::vector<Artifact>& artifacts() { return artifacts_; }

 private:
  fs::path root_;
  std::vector<Artifact> artifacts_;
};

json medium_json(const MediumParams& m) {
  return json{{"alpha_per_m", m.alpha},
              {"gamma_p_per_s", m.gamma_p},
              {"gamma_per_s", m.gamma},
              {"diffusion_m2_per_s", m.diffusion},
              {"delta_per_s", m.delta}};
}

json derived_json(const MediumParams& m, const OpticalParams& o, double reference_waist) {
  json d;
  d["k0_per_m"] = dicke_width_k0(m);
  if (m.alpha > 0.0 && m.gamma_p > 0.0) {
    d["group_velocity_m_per_s"] = group_velocity(m);
  } else {
    d["group_velocity_m_per_s"] = nullptr;
  }
  d["kappa_per_m"] = absorption_kappa(m);
  d["condition_residual"] = check_cancellation(m, o);
  d["q_times_diffusion_m_per_s"] = o.carrier_wavenumber * m.diffusion;
  if (reference_waist > 0.0) {
    const double zr = rayleigh_length(reference_waist, o.carrier_wavenumber);
    d["reference_waist_m"] = reference_waist;
    d["rayleigh_length_m"] = zr;
    d["kappa_times_rayleigh_length"] = absorption_kappa(m) * zr;
  }
  return d;
}

json artifacts_json(const std::vector<Artifact>& artifacts) {
  auto a = json::array();
  for (const auto& x : artifacts) {
    a.push_back({{"path", x.name}, {"sha256", x.sha256}, {"bytes", x.bytes}});
  }
  return a;
}

json base_metadata(const ScenarioConfig& cfg, std::string_view command) {
  json meta;
  meta["tool"] = "eitprop";
  meta["version"] = std::string(kToolVersion);
  meta["command"] = std::string(command);
  meta["config_hash"] = config_hash(cfg);
  meta["resolved_config"] = to_toml(cfg);
  meta["optics"] = {{"wavelength_m", cfg.optics.wavelength},
                    {"carrier_wavenumber_per_m", cfg.optics.carrier_wavenumber}};
  if (cfg.medium || cfg.design) {
    const auto m = cfg.base_medium();
    meta["medium"] = medium_json(m);
    meta["derived"] = derived_json(m, cfg.optics, cfg.source.reference_waist);
  }
  return meta;
}

void finish(OutputDir& out, json meta, RunResult& result, double seconds) {
  meta["warnings"] = result.warnings;
  meta["wall_clock_seconds"] = seconds;
  meta["artifacts"] = artifacts_json(out.artifacts());
  std::ofstream f(out.root() / "metadata.json");
  if (!f) throw std::runtime_error("cannot write metadata.json");
  f << meta.dump(2) << '\n';
  result.artifacts = out.artifacts();
  result.metadata = std::move(meta);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> intensity(const ComplexField& f) {
  std::vector<double> v(f.values().size());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = std::norm(f.values()[n]);
  return v;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

std::string slice_name(std::size_t n, std::string_view ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "slice_%03zu", n);
  return std::string(buf) + std::string(ext);
}

DiagnosticsReport measure(const Scenario& s, const ComplexField& f) {
  DiagnosticsReport r;
  r.total_power = total_power(f);
  if (r.total_power > 0.0) {
    r.centroid = centroid(f);
    r.width_x = second_moment_width(f, Axis::x);
    r.width_y = second_moment_width(f, Axis::y);
    if (!s.beam_centers.empty()) r.per_beam = per_beam_widths(f, s.beam_centers, s.half_window);
  }
  return r;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::string material = to_toml(cfg);
  if (cfg.source.image) material += "\nimage:" + sha256_file(cfg.source.image->path);
  if (cfg.source.raw) {
    auto sidecar = *cfg.source.raw;
    sidecar.replace_extension(".json");
    material += "\nraw:" + sha256_file(*cfg.source.raw) + ":" + sha256_file(sidecar);
  }
  return sha256_hex(material);
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  std::optional<ComplexField> raw_input;
  if (cfg.source.raw) {
    auto file = read_raw_field(*cfg.source.raw);
    if (file.field.representation() != Representation::real_space) {
      throw ConfigError("source.raw: dump must be in real-space representation");
    }
    raw_input = std::move(file.field);
  }

  std::optional<TransverseGrid> grid;
  if (cfg.grid) {
    const auto& g = *cfg.grid;
    const std::size_t scale = g.double_window ? 2 : 1;
    grid = make_grid(g.nx * scale, g.ny * scale, g.dx, g.dy);
  } else if (raw_input) {
    grid = raw_input->grid();
  } else {
    throw ConfigError("grid: missing section");
  }

  std::optional<MediumParams> medium;
  if (cfg.medium || cfg.design) medium = cfg.base_medium();

  PropagationMode mode = FreeSpace{};
  switch (cfg.run.mode) {
    case ModeKind::free_space: break;
    case ModeKind::uniform: mode = UniformChi{cfg.run.uniform_chi}; break;
    case ModeKind::eit: {
      if (!medium) throw ConfigError("run.mode: eit mode needs a medium");
      if (cfg.run.delta_over_gamma) medium->delta = *cfg.run.delta_over_gamma * medium->gamma;
      mode = EitMedium{*medium};
      break;
    }
  }

  std::vector<Point> centers;
  std::optional<ComplexField> input;
  if (!cfg.source.beams.empty()) {
    input = composite_beams(*grid, cfg.source.beams);
    for (const auto& b : cfg.source.beams) centers.push_back({b.x0, b.y0});
  } else if (cfg.source.image) {
    const auto& ic = *cfg.source.image;
    input = load_raster(ic.path, *grid, RasterOptions{ic.pitch, ic.mapping, ic.blur_px});
  } else if (raw_input) {
    if (!(raw_input->grid() == *grid)) {
      throw ConfigError("source.raw: dump grid does not match the [grid] section");
    }
    input = std::move(*raw_input);
  } else {
    throw ConfigError("source: no beams, image or raw field given");
  }

  const double half = cfg.run.beam_half_window > 0.0 ? cfg.run.beam_half_window
                                                     : default_half_window(centers);
  return Scenario{*grid, cfg.optics, mode, medium, std::move(*input), std::move(centers), half};
}

PropagationOutcome simulate(const ScenarioConfig& cfg, unsigned threads) {
  auto scenario = build_scenario(cfg);
  std::vector<std::string> warnings = cfg.warnings;

  std::optional<double> band;
  if (scenario.medium) {
    band = band_limit_report(scenario.input, dicke_width_k0(*scenario.medium),
                             cfg.run.band_limit_fraction);
    if (*band > cfg.run.band_limit_warn) {
      std::ostringstream msg;
      msg << "band_limit: " << *band << " of the input power lies above "
          << cfg.run.band_limit_fraction << "*k0 (warning threshold " << cfg.run.band_limit_warn
          << "); the k^2 cancellation is only accurate for k << k0";
      warnings.push_back(msg.str());
    }
  }

  const auto background = cfg.run.factor_background ? Background::factor_out : Background::keep;
  PropagationPlan plan{cfg.run.slices};
  auto slices = propagate_slices(scenario.input, scenario.mode, scenario.optics, plan,
                                 background, threads);

  const auto input_report = measure(scenario, scenario.input);
  if (!(input_report.total_power > 0.0)) throw ConfigError("source: input field has zero power");
  auto report = measure(scenario, slices.back());
  const double z = plan.total();
  double log_t = std::log(report.total_power / input_report.total_power);
  if (background == Background::factor_out) {
    log_t += 2.0 * background_exponent(scenario.mode, z).real();
  }
  report.log_transmission = log_t;
  report.transmission = std::exp(log_t);
  if (!(report.total_power > 0.0)) {
    throw std::runtime_error(
        "output power underflowed to zero; set run.factor_background = true for strongly absorbing runs");
  }
  if (cfg.source.image) report.fidelity = image_fidelity(scenario.input, slices.back());

  double spreading = 0.0;
  if (!report.per_beam.empty()) {
    for (std::size_t n = 0; n < report.per_beam.size(); ++n) {
      spreading += report.per_beam[n].width_x / input_report.per_beam[n].width_x - 1.0;
    }
    spreading /= static_cast<double>(report.per_beam.size());
  } else {
    spreading = report.width_x / input_report.width_x - 1.0;
  }

  return PropagationOutcome{std::move(scenario), plan.slices,  std::move(slices), std::move(report),
                            input_report,        spreading,    band,              std::move(warnings)};
}

RunResult run_chi_scan(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto base = cfg.base_medium();
  if (!(base.alpha > 0.0)) throw ConfigError("medium.alpha: chi scan normalizes by alpha, which must be > 0");
  OutputDir out(opts.out_dir);
  RunResult result;
  result.warnings = cfg.warnings;

  const double k0 = dicke_width_k0(base);
  auto files = json::array();
  for (double ratio : cfg.scan.delta_over_gamma) {
    auto m = base;
    m.delta = ratio * m.gamma;
    std::ostringstream text;
    text << "k_over_k0,im_chi_over_alpha,re_chi_over_alpha\n";
    for (std::size_t n = 0; n < cfg.scan.points; ++n) {
      const double kk = cfg.scan.k_max_over_k0 * static_cast<double>(n) /
                        static_cast<double>(cfg.scan.points - 1);
      const auto c = chi(m, (kk * k0) * (kk * k0)) / m.alpha;
      text << num(kk) << ',' << num(c.imag()) << ',' << num(c.real()) << '\n';
    }
    char name[64];
    std::snprintf(name, sizeof name, "chi_delta_%+g.csv", ratio);
    out.write_text(name, text.str());
    files.push_back({{"delta_over_gamma", ratio}, {"file", name}});
  }
  auto meta = base_metadata(cfg, "chi-scan");
  meta["scan"] = {{"k_max_over_k0", cfg.scan.k_max_over_k0},
                  {"points", cfg.scan.points},
                  {"gamma_over_gamma_p", base.gamma / base.gamma_p},
                  {"files", files}};
  finish(out, std::move(meta), result, seconds_since(t0));
  return result;
}

RunResult run_propagate(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  auto outcome = simulate(cfg, opts.threads);
  OutputDir out(opts.out_dir);
  RunResult result;
  result.warnings = outcome.warnings;

  const auto& s = outcome.scenario;
  const auto& g = s.grid;
  const bool norm = cfg.run.normalize_heatmaps;

  // index 0 is the input plane
  std::vector<const ComplexField*> fields{&s.input};
  std::vector<double> zs{0.0};
  for (std::size_t n = 0; n < outcome.slices.size(); ++n) {
    fields.push_back(&outcome.slices[n]);
    zs.push_back(outcome.z[n]);
  }
  std::vector<std::vector<double>> maps;
  for (const auto* f : fields) maps.push_back(intensity(*f));
  double global_max = 0.0;
  for (const auto& m : maps) global_max = std::max(global_max, max_of(m));

  for (std::size_t n = 0; n < fields.size(); ++n) {
    const double scale = norm ? max_of(maps[n]) : global_max;
    write_pgm(out.root() / slice_name(n, ".pgm"), intensity_to_image(maps[n], g.nx(), g.ny(), scale));
    out.record(slice_name(n, ".pgm"));
    if (cfg.run.write_raw) {
      write_raw_field(*fields[n], zs[n], out.root() / slice_name(n, ".raw"));
      out.record(slice_name(n, ".raw"));
      out.record(slice_name(n, ".json"));
    }
  }

  // width vs z
  {
    std::ostringstream text;
    text << "z_m,width_x_m,width_y_m,log_power_rel";
    for (std::size_t b = 0; b < s.beam_centers.size(); ++b) {
      text << ",beam" << b << "_width_x_m,beam" << b << "_width_y_m";
    }
    text << '\n';
    const double p0 = total_power(s.input);
    for (std::size_t n = 0; n < fields.size(); ++n) {
      const auto r = measure(s, *fields[n]);
      text << num(zs[n]) << ',' << num(r.width_x) << ',' << num(r.width_y) << ','
           << num(std::log(r.total_power / p0));
      for (const auto& b : r.per_beam) text << ',' << num(b.width_x) << ',' << num(b.width_y);
      text << '\n';
    }
    out.write_text("widths.csv", text.str());
  }

  // y = 0 cross-sections, one column per plane, plus the x-z map
  {
    std::vector<Profile> profiles;
    for (const auto* f : fields) profiles.push_back(cross_section(*f, Axis::x, norm));
    const char* unit = norm ? "rel" : "arb";
    std::ostringstream text;
    text << "x_m";
    for (std::size_t n = 0; n < fields.size(); ++n) text << ",I_plane" << n << '_' << unit;
    text << '\n';
    for (std::size_t i = 0; i < g.nx(); ++i) {
      text << num(profiles[0].coord[i]);
      for (const auto& p : profiles) text << ',' << num(p.intensity[i]);
      text << '\n';
    }
    out.write_text("cross_section.csv", text.str());

    double pmax = 0.0;
    for (const auto& p : profiles) pmax = std::max(pmax, max_of(p.intensity));
    GrayImage xz{g.nx(), profiles.size(), 255, std::vector<std::uint8_t>(g.nx() * profiles.size())};
    for (std::size_t r = 0; r < profiles.size(); ++r) {
      const double scale = norm ? max_of(profiles[r].intensity) : pmax;
      for (std::size_t i = 0; i < g.nx(); ++i) {
        const double v = scale > 0.0 ? std::clamp(profiles[r].intensity[i] / scale, 0.0, 1.0) : 0.0;
        xz.pixels[r * g.nx() + i] = static_cast<std::uint8_t>(std::lround(255.0 * v));
      }
    }
    write_pgm(out.root() / "xz_section.pgm", xz);
    out.record("xz_section.pgm");
  }

  {
    auto rep = to_json(outcome.report);
    rep["z_m"] = outcome.z.back();
    rep["input"] = to_json(outcome.input_report);
    rep["spreading"] = outcome.spreading;
    if (outcome.band_limit_fraction) rep["band_limit_fraction"] = *outcome.band_limit_fraction;
    out.write_text("report.json", rep.dump(2) + "\n");
  }

  auto meta = base_metadata(cfg, "propagate");
  meta["grid"] = {{"nx", g.nx()}, {"ny", g.ny()}, {"dx_m", g.dx()}, {"dy_m", g.dy()}};
  if (s.medium) {
    meta["run_medium"] = medium_json(*s.medium);
    meta["run_derived"] = derived_json(*s.medium, cfg.optics, cfg.source.reference_waist);
  }
  meta["slices_m"] = outcome.z;
  meta["threads"] = opts.threads;
  finish(out, std::move(meta), result, seconds_since(t0));
  result.outcome = std::move(outcome);
  return result;
}

RunResult run_design(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!cfg.medium && !cfg.design) throw ConfigError("design: needs a [design] or [medium] section");
  const auto m = cfg.base_medium();
  OutputDir out(opts.out_dir);
  RunResult result;
  result.warnings = cfg.warnings;

  const double residual = check_cancellation(m, cfg.optics);
  if (std::abs(residual) > 1e-12) {
    if (cfg.design) {
      throw std::runtime_error("design: back-solved medium misses the cancellation condition (residual " +
                               num(residual) + ")");
    }
    result.warnings.push_back("design: explicit medium does not satisfy the cancellation condition "
                              "(residual " + num(residual) + ")");
  }
  const double w0 = cfg.source.reference_waist > 0.0 ? cfg.source.reference_waist
                                                     : std::numbers::pi / dicke_width_k0(m);
  json d;
  d["medium"] = medium_json(m);
  d["derived"] = derived_json(m, cfg.optics, w0);
  d["gamma_over_gamma_p"] = m.gamma_p > 0.0 ? json(m.gamma / m.gamma_p) : json(nullptr);
  out.write_text("design.json", d.dump(2) + "\n");

  std::ostringstream toml_text;
  toml_text << "[medium]\n"
            << "alpha = " << num(m.alpha) << "  # 1/m\n"
            << "gamma_p = " << num(m.gamma_p) << "  # 1/s\n"
            << "gamma = " << num(m.gamma) << "  # 1/s\n"
            << "diffusion = " << num(m.diffusion) << "  # m^2/s\n"
            << "delta = " << num(m.delta) << "  # 1/s\n";
  out.write_text("medium.toml", toml_text.str());

  finish(out, base_metadata(cfg, "design"), result, seconds_since(t0));
  return result;
}

RunResult run_sweep(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!cfg.sweep) throw ConfigError("sweep: missing [sweep] section");
  const auto& sweep = *cfg.sweep;
  OutputDir out(opts.out_dir);
  RunResult result;
  result.warnings = cfg.warnings;

  struct Row {
    std::string status = "ok";
    std::optional<PropagationOutcome> outcome;
    std::string config_hash;
    std::vector<std::string> warnings;
    std::vector<Artifact> artifacts;
  };
  std::vector<Row> rows(sweep.values.size());
  parallel_for(rows.size(), opts.threads, [&](std::size_t n) {
    auto& row = rows[n];
    try {
      const auto child = with_override(cfg, sweep.parameter, sweep.values[n]);
      char dir[32];
      std::snprintf(dir, sizeof dir, "sweep_%03zu", n);
      auto r = run_propagate(child, RunOptions{out.root() / dir, 1});
      row.config_hash = r.metadata.value("config_hash", "");
      for (auto a : r.artifacts) {
        a.name = std::string(dir) + "/" + a.name;
        row.artifacts.push_back(std::move(a));
      }
      const auto meta_path = out.root() / dir / "metadata.json";
      row.artifacts.push_back({std::string(dir) + "/metadata.json", sha256_file(meta_path),
                               fs::file_size(meta_path)});
      row.warnings = r.warnings;
      row.outcome = std::move(r.outcome);
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  });

  std::ostringstream text;
  text << "index,value,width_x_m,width_y_m,spreading,transmission,log_transmission,status\n";
  auto points = json::array();
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const auto& row = rows[n];
    text << n << ',' << csv_field(sweep.values[n]);
    if (row.outcome) {
      const auto& r = row.outcome->report;
      text << ',' << num(r.width_x) << ',' << num(r.width_y) << ',' << num(row.outcome->spreading)
           << ',' << num(r.transmission) << ',' << num(r.log_transmission);
    } else {
      text << ",,,,,";
    }
    text << ',' << csv_field(row.status) << '\n';
    for (const auto& a : row.artifacts) out.artifacts().push_back(a);
    for (const auto& w : row.warnings) {
      result.warnings.push_back("sweep point " + std::to_string(n) + ": " + w);
    }
    if (row.status != "ok") result.warnings.push_back("sweep point " + std::to_string(n) + " failed: " + row.status);
    points.push_back({{"index", n}, {"value", sweep.values[n]}, {"status", row.status},
                      {"config_hash", row.config_hash}});
  }
  out.write_text("sweep.csv", text.str());

  auto meta = base_metadata(cfg, "sweep");
  meta["sweep"] = {{"parameter", sweep.parameter}, {"points", points}};
  meta["threads"] = opts.threads;
  finish(out, std::move(meta), result, seconds_since(t0));
  return result;
}

}  // namespace eitprop
