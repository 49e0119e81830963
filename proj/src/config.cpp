#include "eitprop/config.hpp"

#include <cstdio>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "eitprop/errors.hpp"
#include "eitprop/propagator.hpp"
#include "eitprop/units.hpp"

namespace eitprop {
namespace {

// Tracks which keys of a table were read so leftovers can be reported.
class Section {
 public:
  Section(const toml::table* table, std::string prefix, std::vector<std::string>& unknown)
      : table_(table), prefix_(std::move(prefix)), unknown_(unknown) {}
  Section(const Section&) = delete;
  ~Section() {
    if (table_ == nullptr) return;
    for (auto&& [k, v] : *table_) {
      if (!used_.contains(std::string(k.str()))) unknown_.push_back(prefix_ + std::string(k.str()));
    }
  }

  bool present() const { return table_ != nullptr; }
  bool has(std::string_view key) const { return table_ != nullptr && table_->contains(key); }

  const toml::node* get(std::string_view key) {
    if (table_ == nullptr) return nullptr;
    used_.insert(std::string(key));
    return table_->get(key);
  }

  std::string path(std::string_view key) const { return prefix_ + std::string(key); }

  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    throw ConfigError(path(key) + ": " + what);
  }

  double quantity(std::string_view key, Dimension dim, std::span<const NamedUnit> units) {
    const auto* node = get(key);
    if (node == nullptr) fail(key, "missing required key");
    return quantity_of(*node, key, dim, units);
  }

  std::optional<double> optional_quantity(std::string_view key, Dimension dim,
                                          std::span<const NamedUnit> units) {
    const auto* node = get(key);
    if (node == nullptr) return std::nullopt;
    return quantity_of(*node, key, dim, units);
  }

  double quantity_of(const toml::node& node, std::string_view key, Dimension dim,
                     std::span<const NamedUnit> units) const {
    try {
      if (const auto* s = node.as_string()) return parse_quantity(s->get(), dim, units);
      if (const auto v = node.value<double>(); v && (node.is_integer() || node.is_floating_point())) {
        if (!std::isfinite(*v)) throw ConfigError("non-finite value");
        return *v;
      }
    } catch (const ConfigError& e) {
      fail(key, e.what());
    }
    fail(key, "expected a number or a quantity string");
  }

  bool flag(std::string_view key, bool fallback) {
    const auto* node = get(key);
    if (node == nullptr) return fallback;
    if (const auto* b = node->as_boolean()) return b->get();
    fail(key, "expected true or false");
  }

  std::optional<long long> integer(std::string_view key) {
    const auto* node = get(key);
    if (node == nullptr) return std::nullopt;
    if (const auto* i = node->as_integer()) return i->get();
    fail(key, "expected an integer");
  }

  std::optional<std::string> string(std::string_view key) {
    const auto* node = get(key);
    if (node == nullptr) return std::nullopt;
    if (const auto* s = node->as_string()) return s->get();
    fail(key, "expected a string");
  }

  const toml::table* table(std::string_view key) {
    const auto* node = get(key);
    if (node == nullptr) return nullptr;
    if (const auto* t = node->as_table()) return t;
    fail(key, "expected a table");
  }

 private:
  const toml::table* table_;
  std::string prefix_;
  std::vector<std::string>& unknown_;
  std::set<std::string> used_;
};

ModeKind parse_mode(const std::string& s, Section& sec) {
  if (s == "free_space") return ModeKind::free_space;
  if (s == "eit") return ModeKind::eit;
  if (s == "uniform") return ModeKind::uniform;
  sec.fail("mode", "unknown mode '" + s + "' (expected free_space, eit or uniform)");
}

std::string_view mode_name(ModeKind m) {
  switch (m) {
    case ModeKind::free_space: return "free_space";
    case ModeKind::eit: return "eit";
    case ModeKind::uniform: return "uniform";
  }
  return "?";
}

std::complex<double> complex_of(const toml::node& node, Section& sec, std::string_view key,
                                Dimension dim, std::span<const NamedUnit> units) {
  if (const auto* arr = node.as_array()) {
    if (arr->size() != 2) sec.fail(key, "expected [re, im]");
    return {sec.quantity_of(*arr->get(0), key, dim, units),
            sec.quantity_of(*arr->get(1), key, dim, units)};
  }
  return {sec.quantity_of(node, key, dim, units), 0.0};
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

void resolve_sections(const toml::table& doc, const std::filesystem::path& base_dir,
                      ScenarioConfig& cfg, std::vector<std::string>& unknown) {
  std::vector<NamedUnit> units;

  Section root(&doc, "", unknown);
  for (const char* k : {"optics", "medium", "design", "grid", "source", "run", "scan", "sweep"}) {
    if (root.has(k)) root.table(k);
  }

  Section optics(doc["optics"].as_table(), "optics.", unknown);
  if (!optics.present()) throw ConfigError("optics: missing section (wavelength is required)");
  cfg.optics = OpticalParams::from_wavelength(optics.quantity("wavelength", Dimension::length, {}));

  Section source(doc["source"].as_table(), "source.", unknown);
  const auto add_waist_units = [&](double w0) {
    cfg.source.reference_waist = w0;
    units.push_back({"w0", Dimension::length, w0});
    units.push_back({"zR", Dimension::length, 0.5 * cfg.optics.carrier_wavenumber * w0 * w0});
  };
  if (auto w = source.optional_quantity("reference_waist", Dimension::length, {})) {
    if (!(*w > 0.0)) source.fail("reference_waist", "must be > 0");
    add_waist_units(*w);
  }

  Section medium(doc["medium"].as_table(), "medium.", unknown);
  Section design(doc["design"].as_table(), "design.", unknown);
  if (medium.present() && design.present()) {
    throw ConfigError("medium/design: both an explicit medium and design targets given; use exactly one");
  }
  if (medium.present()) {
    MediumParams m;
    m.alpha = medium.quantity("alpha", Dimension::inverse_length, units);
    m.gamma_p = medium.quantity("gamma_p", Dimension::rate, units);
    m.gamma = medium.quantity("gamma", Dimension::rate, units);
    m.diffusion = medium.quantity("diffusion", Dimension::diffusivity, units);
    const auto delta = medium.optional_quantity("delta", Dimension::rate, units);
    const auto ratio = medium.optional_quantity("delta_over_gamma", Dimension::dimensionless, {});
    if (delta && ratio) medium.fail("delta", "give either delta or delta_over_gamma, not both");
    m.delta = delta ? *delta : ratio ? *ratio * m.gamma : 0.0;
    m.validate();
    cfg.medium = m;
  }
  if (design.present()) {
    DesignTargets t;
    t.wavelength = cfg.optics.wavelength;
    const auto k0 = design.optional_quantity("k0", Dimension::inverse_length, units);
    const auto feature = design.optional_quantity("feature_scale", Dimension::length, units);
    if (k0 && feature) design.fail("k0", "give either k0 or feature_scale (pi/k0), not both");
    if (!k0 && !feature) design.fail("k0", "one of k0 or feature_scale is required");
    if (feature && !(*feature > 0.0)) design.fail("feature_scale", "must be > 0");
    t.k0 = k0 ? *k0 : std::numbers::pi / *feature;
    t.gamma_over_gamma_p =
        design.optional_quantity("gamma_over_gamma_p", Dimension::dimensionless, {}).value_or(2.0);
    t.diffusion = design.optional_quantity("diffusion", Dimension::diffusivity, units);
    t.gamma = design.optional_quantity("gamma", Dimension::rate, units);
    design_medium(t);  // surfaces infeasible targets at parse time
    cfg.design = t;
  }
  if (cfg.source.reference_waist == 0.0 && (cfg.medium || cfg.design)) {
    add_waist_units(std::numbers::pi / dicke_width_k0(cfg.base_medium()));
  }

  const toml::array* beams = nullptr;
  if (const auto* node = source.get("beams")) {
    beams = node->as_array();
    if (beams == nullptr || !beams->is_array_of_tables()) {
      source.fail("beams", "expected [[source.beams]] tables");
    }
    if (beams->empty()) source.fail("beams", "empty beam list");
  }
  // without a medium or explicit reference, the first beam defines w0
  if (cfg.source.reference_waist == 0.0 && beams != nullptr) {
    if (const auto* w = beams->get(0)->as_table()->get("waist")) {
      std::vector<std::string> ignored;
      const Section peek(nullptr, "source.beams[0].", ignored);
      add_waist_units(peek.quantity_of(*w, "waist", Dimension::length, {}));
    }
  }

  Section grid(doc["grid"].as_table(), "grid.", unknown);
  if (grid.present()) {
    GridSection g;
    const auto nx = grid.integer("nx");
    if (!nx) grid.fail("nx", "missing required key");
    const auto ny = grid.integer("ny").value_or(*nx);
    if (*nx <= 0 || ny <= 0) grid.fail("nx", "sample counts must be positive");
    g.nx = static_cast<std::size_t>(*nx);
    g.ny = static_cast<std::size_t>(ny);
    const auto pitch = grid.optional_quantity("pitch", Dimension::length, units);
    const auto window = grid.optional_quantity("window", Dimension::length, units);
    if (pitch && window) grid.fail("pitch", "give either pitch or window, not both");
    if (!pitch && !window) grid.fail("pitch", "one of pitch or window is required");
    g.dx = pitch ? *pitch : *window / static_cast<double>(g.nx);
    const auto pitch_y = grid.optional_quantity("pitch_y", Dimension::length, units);
    g.dy = pitch_y ? *pitch_y : pitch ? *pitch : *window / static_cast<double>(g.ny);
    g.double_window = grid.flag("double_window", false);
    make_grid(g.nx, g.ny, g.dx, g.dy);
    cfg.grid = g;
  }

  if (beams != nullptr) {
    for (std::size_t n = 0; n < beams->size(); ++n) {
      Section b(beams->get(n)->as_table(), "source.beams[" + std::to_string(n) + "].", unknown);
      BeamSpec spec;
      const auto waist = b.optional_quantity("waist", Dimension::length, units);
      if (!waist && cfg.source.reference_waist == 0.0) {
        b.fail("waist", "missing and no reference_waist to default to");
      }
      spec.waist = waist.value_or(cfg.source.reference_waist);
      if (!(spec.waist > 0.0)) b.fail("waist", "must be > 0");
      spec.x0 = b.optional_quantity("x", Dimension::length, units).value_or(0.0);
      spec.y0 = b.optional_quantity("y", Dimension::length, units).value_or(0.0);
      if (const auto* a = b.get("amplitude")) {
        spec.amplitude = complex_of(*a, b, "amplitude", Dimension::dimensionless, {});
      }
      cfg.source.beams.push_back(spec);
    }
  }
  if (const auto* img = source.table("image")) {
    Section s(img, "source.image.", unknown);
    ImageSourceConfig ic;
    const auto path = s.string("path");
    if (!path) s.fail("path", "missing required key");
    ic.path = resolve_path(base_dir, *path);
    ic.pitch = s.quantity("pitch", Dimension::length, units);
    if (!(ic.pitch > 0.0)) s.fail("pitch", "must be > 0");
    const auto mapping = s.string("mapping").value_or("sqrt");
    if (mapping == "sqrt" || mapping == "square_root") {
      ic.mapping = AmplitudeMapping::square_root;
    } else if (mapping == "linear") {
      ic.mapping = AmplitudeMapping::linear;
    } else {
      s.fail("mapping", "expected 'sqrt' or 'linear'");
    }
    ic.blur_px = s.optional_quantity("blur_px", Dimension::dimensionless, {}).value_or(2.0);
    if (ic.blur_px < 0.0) s.fail("blur_px", "must be >= 0");
    cfg.source.image = ic;
  }
  if (const auto* raw = source.table("raw")) {
    Section s(raw, "source.raw.", unknown);
    const auto path = s.string("path");
    if (!path) s.fail("path", "missing required key");
    cfg.source.raw = resolve_path(base_dir, *path);
  }
  const int kinds = (beams != nullptr ? 1 : 0) + (cfg.source.image ? 1 : 0) + (cfg.source.raw ? 1 : 0);
  if (kinds > 1) {
    throw ConfigError("source: conflicting source kinds (beams, image, raw); give exactly one");
  }

  Section run(doc["run"].as_table(), "run.", unknown);
  auto& r = cfg.run;
  if (run.present()) {
    r.mode = parse_mode(run.string("mode").value_or("free_space"), run);
    r.delta_over_gamma = run.optional_quantity("delta_over_gamma", Dimension::dimensionless, {});
    if (const auto* c = run.get("uniform_chi")) {
      r.uniform_chi = complex_of(*c, run, "uniform_chi", Dimension::inverse_length, units);
    }
    const bool has_z = run.has("z");
    r.z = run.optional_quantity("z", Dimension::length, units).value_or(0.0);
    if (!(r.z >= 0.0)) run.fail("z", "must be >= 0");
    const auto count = run.integer("slices");
    const auto* positions = run.get("slice_positions");
    if (count && positions) run.fail("slices", "give either slices or slice_positions, not both");
    if (count) {
      if (*count < 1) run.fail("slices", "must be >= 1");
      if (*count > 1 && r.z == 0.0) run.fail("slices", "several slices need run.z > 0");
      r.slices = PropagationPlan::uniform(r.z, static_cast<std::size_t>(*count)).slices;
    } else if (positions != nullptr) {
      const auto* arr = positions->as_array();
      if (arr == nullptr || arr->empty()) run.fail("slice_positions", "expected a non-empty array");
      for (const auto& node : *arr) {
        r.slices.push_back(run.quantity_of(node, "slice_positions", Dimension::length, units));
      }
      if (has_z && r.slices.back() != r.z) run.fail("slice_positions", "last position must equal run.z");
      r.z = r.slices.back();
    } else {
      r.slices = {r.z};
    }
    for (std::size_t n = 0; n < r.slices.size(); ++n) {
      if (!(r.slices[n] >= 0.0) || (n > 0 && !(r.slices[n] > r.slices[n - 1]))) {
        run.fail("slice_positions", "positions must be >= 0 and strictly increasing");
      }
    }
    r.normalize_heatmaps = run.flag("normalize_heatmaps", true);
    r.factor_background = run.flag("factor_background", false);
    r.write_raw = run.flag("write_raw", true);
    r.band_limit_fraction =
        run.optional_quantity("band_limit_fraction", Dimension::dimensionless, {}).value_or(0.3);
    r.band_limit_warn =
        run.optional_quantity("band_limit_warn", Dimension::dimensionless, {}).value_or(1e-2);
    r.beam_half_window =
        run.optional_quantity("beam_half_window", Dimension::length, units).value_or(0.0);
    if (r.beam_half_window < 0.0) run.fail("beam_half_window", "must be >= 0");
  } else {
    r.slices = {0.0};
  }
  if (r.mode == ModeKind::eit && !cfg.medium && !cfg.design) {
    throw ConfigError("run.mode: eit mode needs a [medium] or [design] section");
  }

  Section scan(doc["scan"].as_table(), "scan.", unknown);
  if (scan.present()) {
    auto& s = cfg.scan;
    s.k_max_over_k0 =
        scan.optional_quantity("k_max_over_k0", Dimension::dimensionless, {}).value_or(4.0);
    if (!(s.k_max_over_k0 > 0.0)) scan.fail("k_max_over_k0", "must be > 0");
    const auto points = scan.integer("points").value_or(401);
    if (points < 2) scan.fail("points", "must be >= 2");
    s.points = static_cast<std::size_t>(points);
    if (const auto* d = scan.get("delta_over_gamma")) {
      const auto* arr = d->as_array();
      if (arr == nullptr || arr->empty()) scan.fail("delta_over_gamma", "expected a non-empty array");
      s.delta_over_gamma.clear();
      for (const auto& node : *arr) {
        s.delta_over_gamma.push_back(
            scan.quantity_of(node, "delta_over_gamma", Dimension::dimensionless, {}));
      }
    }
  }

  Section sweep(doc["sweep"].as_table(), "sweep.", unknown);
  if (sweep.present()) {
    SweepSection s;
    const auto param = sweep.string("parameter");
    if (!param || param->empty()) sweep.fail("parameter", "missing required key");
    s.parameter = *param;
    const auto* vals = sweep.get("values");
    if (vals == nullptr || vals->as_array() == nullptr || vals->as_array()->empty()) {
      sweep.fail("values", "expected a non-empty array");
    }
    for (const auto& node : *vals->as_array()) {
      if (const auto* str = node.as_string()) {
        s.values.push_back(str->get());
      } else if (const auto* i = node.as_integer()) {
        s.values.push_back(std::to_string(i->get()));
      } else if (const auto* d = node.as_floating_point()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", d->get());
        s.values.push_back(buf);
      } else if (const auto* b = node.as_boolean()) {
        s.values.push_back(b->get() ? "true" : "false");
      } else {
        sweep.fail("values", "entries must be strings, numbers or booleans");
      }
    }
    cfg.sweep = s;
  }
}

toml::table parse_toml(std::string_view text, const std::string& source_name) {
  try {
    return toml::parse(text, source_name);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "toml: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(msg.str());
  }
}

ScenarioConfig resolve(const toml::table& doc, std::string_view text,
                       const std::filesystem::path& base_dir, bool strict) {
  ScenarioConfig cfg;
  std::vector<std::string> unknown;
  resolve_sections(doc, base_dir, cfg, unknown);
  cfg.document = std::string(text);
  cfg.base_dir = base_dir;
  for (const auto& key : unknown) {
    if (strict) throw ConfigError(key + ": unknown key");
    cfg.warnings.push_back("unknown key '" + key + "' ignored");
  }
  return cfg;
}

}  // namespace

MediumParams ScenarioConfig::base_medium() const {
  if (medium) return *medium;
  if (design) return design_medium(*design);
  throw ConfigError("medium: no [medium] or [design] section");
}

bool ScenarioConfig::same_settings(const ScenarioConfig& o) const {
  return optics == o.optics && medium == o.medium && design == o.design && grid == o.grid &&
         source == o.source && run == o.run && scan == o.scan && sweep == o.sweep;
}

ScenarioConfig parse_config_string(std::string_view text, const std::filesystem::path& base_dir,
                                   bool strict) {
  return resolve(parse_toml(text, "<config>"), text, base_dir, strict);
}

ScenarioConfig parse_config(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto text = buf.str();
  return resolve(parse_toml(text, path.string()), text, path.parent_path(), strict);
}

std::string to_toml(const ScenarioConfig& cfg) {
  toml::table doc;
  doc.insert("optics", toml::table{{"wavelength", cfg.optics.wavelength}});
  if (cfg.medium) {
    const auto& m = *cfg.medium;
    doc.insert("medium", toml::table{{"alpha", m.alpha},
                                     {"gamma_p", m.gamma_p},
                                     {"gamma", m.gamma},
                                     {"diffusion", m.diffusion},
                                     {"delta", m.delta}});
  }
  if (cfg.design) {
    const auto& t = *cfg.design;
    toml::table d{{"k0", t.k0}, {"gamma_over_gamma_p", t.gamma_over_gamma_p}};
    if (t.diffusion) d.insert("diffusion", *t.diffusion);
    if (t.gamma) d.insert("gamma", *t.gamma);
    doc.insert("design", std::move(d));
  }
  if (cfg.grid) {
    const auto& g = *cfg.grid;
    doc.insert("grid", toml::table{{"nx", static_cast<std::int64_t>(g.nx)},
                                   {"ny", static_cast<std::int64_t>(g.ny)},
                                   {"pitch", g.dx},
                                   {"pitch_y", g.dy},
                                   {"double_window", g.double_window}});
  }
  {
    toml::table s;
    if (cfg.source.reference_waist > 0.0) s.insert("reference_waist", cfg.source.reference_waist);
    if (!cfg.source.beams.empty()) {
      toml::array beams;
      for (const auto& b : cfg.source.beams) {
        beams.push_back(toml::table{{"waist", b.waist},
                                    {"x", b.x0},
                                    {"y", b.y0},
                                    {"amplitude", toml::array{b.amplitude.real(), b.amplitude.imag()}}});
      }
      s.insert("beams", std::move(beams));
    }
    if (cfg.source.image) {
      const auto& i = *cfg.source.image;
      s.insert("image", toml::table{{"path", i.path.string()},
                                    {"pitch", i.pitch},
                                    {"mapping", i.mapping == AmplitudeMapping::linear ? "linear" : "sqrt"},
                                    {"blur_px", i.blur_px}});
    }
    if (cfg.source.raw) s.insert("raw", toml::table{{"path", cfg.source.raw->string()}});
    doc.insert("source", std::move(s));
  }
  {
    const auto& r = cfg.run;
    toml::array slices;
    for (double z : r.slices) slices.push_back(z);
    toml::table t{{"mode", std::string(mode_name(r.mode))},
                  {"uniform_chi", toml::array{r.uniform_chi.real(), r.uniform_chi.imag()}},
                  {"z", r.z},
                  {"slice_positions", std::move(slices)},
                  {"normalize_heatmaps", r.normalize_heatmaps},
                  {"factor_background", r.factor_background},
                  {"write_raw", r.write_raw},
                  {"band_limit_fraction", r.band_limit_fraction},
                  {"band_limit_warn", r.band_limit_warn},
                  {"beam_half_window", r.beam_half_window}};
    if (r.delta_over_gamma) t.insert("delta_over_gamma", *r.delta_over_gamma);
    doc.insert("run", std::move(t));
  }
  {
    toml::array deltas;
    for (double d : cfg.scan.delta_over_gamma) deltas.push_back(d);
    doc.insert("scan", toml::table{{"k_max_over_k0", cfg.scan.k_max_over_k0},
                                   {"points", static_cast<std::int64_t>(cfg.scan.points)},
                                   {"delta_over_gamma", std::move(deltas)}});
  }
  if (cfg.sweep) {
    toml::array values;
    for (const auto& v : cfg.sweep->values) values.push_back(v);
    doc.insert("sweep", toml::table{{"parameter", cfg.sweep->parameter}, {"values", std::move(values)}});
  }
  std::ostringstream os;
  os << doc << '\n';
  return os.str();
}

ScenarioConfig with_override(const ScenarioConfig& cfg, std::string_view key_path,
                             std::string_view value, bool strict) {
  auto doc = parse_toml(cfg.document, "<config>");
  toml::table* table = &doc;
  std::string_view rest = key_path;
  while (true) {
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos) break;
    const auto part = rest.substr(0, dot);
    rest.remove_prefix(dot + 1);
    auto* node = table->get(part);
    if (node == nullptr) {
      table->insert(part, toml::table{});
      node = table->get(part);
    }
    table = node->as_table();
    if (table == nullptr) {
      throw ConfigError("sweep.parameter: '" + std::string(key_path) + "' does not name a table key");
    }
  }
  if (rest.empty()) throw ConfigError("sweep.parameter: empty key in '" + std::string(key_path) + "'");

  const std::string v(value);
  if (v == "true" || v == "false") {
    table->insert_or_assign(rest, v == "true");
  } else {
    std::size_t used = 0;
    bool numeric = false;
    double number = 0.0;
    try {
      number = std::stod(v, &used);
      numeric = used == v.size();
    } catch (const std::exception&) {
    }
    const bool integral = numeric && v.find_first_of(".eE") == std::string::npos;
    if (integral) {
      table->insert_or_assign(rest, static_cast<std::int64_t>(std::stoll(v)));
    } else if (numeric) {
      table->insert_or_assign(rest, number);
    } else {
      table->insert_or_assign(rest, v);
    }
  }
  // the override replaces the sweep itself
  doc.erase("sweep");
  std::ostringstream os;
  os << doc;
  return resolve(doc, os.str(), cfg.base_dir, strict);
}

}  // namespace eitprop
