#include <initializer_list>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coreloss/cancellation.hpp"
#include "coreloss/config.hpp"
#include "coreloss/csv.hpp"
#include "coreloss/cwh.hpp"
#include "coreloss/errors.hpp"
#include "coreloss/excitation.hpp"
#include "coreloss/generic_model.hpp"
#include "coreloss/kernels.hpp"
#include "coreloss/loss.hpp"
#include "coreloss/magnetics.hpp"
#include "coreloss/pipeline.hpp"
#include "coreloss/svg.hpp"
#include "coreloss/timeseries.hpp"

namespace fs = std::filesystem;
using namespace coreloss;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Cli {
  std::string config_path;
  std::string out_dir = ".";
  bool plots = false;
  bool verbose = false;
  int cycles = 0;  // 0 = take from config
  std::vector<std::string> overrides;
  std::vector<std::string> fit_inputs;
  std::string fit_material;
  int fit_harmonics = 6;
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

// Round through the 9-significant-digit text form so JSON values match the
// CSV formatting rule.
double j9(double v) { return std::strtod(fmt9(v).c_str(), nullptr); }

Config load_config(const Cli& cli) {
  Config cfg = cli.config_path.empty() ? Config() : Config::from_file(cli.config_path);
  for (const std::string& kv : cli.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("config: --set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::string out_path(const Cli& cli, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cli.out_dir, ec);
  if (ec) throw IoError("output: cannot create directory '" + cli.out_dir + "'");
  return (fs::path(cli.out_dir) / name).string();
}

void write_json(const Cli& cli, const nlohmann::ordered_json& j, const std::string& name) {
  const std::string path = out_path(cli, name);
  std::ofstream out(path);
  if (!out) throw IoError("output: cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("output: failed writing '" + path + "'");
  if (cli.verbose) std::cerr << "wrote " << path << '\n';
}

CoreSpec build_core(const Config& cfg) {
  CoreSpec core;
  if (cfg.has("core.preset")) {
    core = core_preset(cfg.require_string("core.preset"));
  } else {
    core.name = cfg.get_string("core.name", "custom");
    core.n1 = cfg.get_int("core.n1", 0);
    core.n2 = cfg.get_int("core.n2", 0);
    core.ae = cfg.get_double("core.ae_m2", 0.0);
    core.le = cfg.get_double("core.le_m", 0.0);
    core.ve = cfg.get_double("core.ve_m3", 0.0);
  }
  core.validate();
  if (!core.geometry_consistent())
    warn("core: ve deviates from ae*le by more than 20%, check the geometry");
  return core;
}

SpwmConfig build_spwm(const Config& cfg) {
  SpwmConfig c;
  c.vdc = cfg.require_double("excitation.vdc_V");
  c.f0 = cfg.require_double("excitation.f0_hz");
  c.ratio = cfg.get_int("excitation.ratio", 0);
  c.m = cfg.get_double("excitation.m", 0.8);
  c.samples_per_sw_cycle = cfg.get_int("excitation.samples_per_sw_cycle", 1000);
  c.validate();
  return c;
}

SineConfig build_sine(const Config& cfg, int cycles) {
  SineConfig c;
  c.amplitude = cfg.require_double("excitation.amplitude_V");
  c.f = cfg.require_double("excitation.f_hz");
  c.cycles = cycles;
  c.samples_per_cycle = cfg.get_int("excitation.samples_per_cycle", 10000);
  c.validate();
  return c;
}

SteinmetzParams build_se(const Config& cfg) {
  SteinmetzParams p;
  p.k = cfg.require_double("backend.k");
  p.alpha = cfg.require_double("backend.alpha");
  p.beta = cfg.require_double("backend.beta");
  p.f_min = cfg.get_double("backend.f_min_hz", 0.0);
  p.f_max = cfg.get_double("backend.f_max_hz", 0.0);
  p.b_min = cfg.get_double("backend.b_min_T", 0.0);
  p.b_max = cfg.get_double("backend.b_max_T", 0.0);
  p.validate();
  for (const std::string& w : p.sanity_warnings()) warn("backend: " + w);
  return p;
}

std::unique_ptr<LossBackend> build_backend(const Config& cfg) {
  const std::string kind = cfg.get_string("backend.kind", "steinmetz");
  if (kind == "steinmetz") {
    return std::make_unique<SteinmetzIgseBackend>(build_se(cfg));
  }
  if (kind == "lossmap") {
    const std::string path = cfg.require_string("backend.path");
    const std::string policy_s = cfg.get_string("backend.policy", "error");
    if (policy_s != "error" && policy_s != "clamp")
      throw ValidationError("backend.policy: expected 'error' or 'clamp'");
    try {
      return std::make_unique<LossMapBackend>(
          read_lossmap_csv(path),
          policy_s == "clamp" ? LookupPolicy::clamp : LookupPolicy::error);
    } catch (const IoError& e) {
      throw IoError("backend.path: " + std::string(e.what()));
    }
  }
  throw ValidationError("backend.kind: expected 'steinmetz' or 'lossmap', got '" + kind + "'");
}

GenericLossModel build_model(const Config& cfg) {
  GenericLossModel m;
  if (cfg.has("model.path")) {
    m = load_model_json(cfg.require_string("model.path"));
  } else {
    const std::string preset = cfg.get_string("model.preset", "mix26");
    if (preset == "mix26") {
      m = mix26_model();
    } else if (preset == "constant") {
      m.material = "constant";
      m.a0 = 1.0;
      m.normalized = true;
    } else {
      throw ValidationError("model.preset: expected 'mix26' or 'constant', got '" + preset + "'");
    }
  }
  if (cfg.has("model.material")) {
    const std::string msg = material_mismatch_warning(m, cfg.require_string("model.material"));
    if (!msg.empty()) warn(msg);
  }
  return m;
}

LossSource build_source(const Config& cfg, const LossBackend& backend) {
  if (cfg.has("backend.density_mw_per_cm3"))
    return LossSource::from_density_mw_cm3(cfg.require_double("backend.density_mw_per_cm3"));
  if (cfg.has("backend.density_w_per_m3"))
    return LossSource::from_density_w_m3(cfg.require_double("backend.density_w_per_m3"));
  if (const auto* se = dynamic_cast<const SteinmetzIgseBackend*>(&backend))
    return LossSource::from_steinmetz(se->params());
  return LossSource::from_backend(backend);
}

// Exact key registry per section: a typo inside a known section must be
// rejected by name, so no wildcards. A subcommand accepts every key of the
// sections it reads, which lets one config file drive several subcommands.
const std::vector<std::string> kExcitationKeys = {
    "excitation.kind",           "excitation.vdc_V",
    "excitation.f0_hz",          "excitation.ratio",
    "excitation.m",              "excitation.samples_per_sw_cycle",
    "excitation.amplitude_V",    "excitation.f_hz",
    "excitation.samples_per_cycle", "excitation.cycles",
    "excitation.inductance_H",   "excitation.r_series_ohm",
    "excitation.emulation_l_m_H", "excitation.source",
    "excitation.i_pk_A",         "excitation.path",
    "excitation.min_delta_b_T"};
const std::vector<std::string> kCoreKeys = {"core.preset", "core.name", "core.n1", "core.n2",
                                            "core.ae_m2",  "core.le_m", "core.ve_m3"};
const std::vector<std::string> kBackendKeys = {
    "backend.kind",    "backend.k",        "backend.alpha",
    "backend.beta",    "backend.f_min_hz", "backend.f_max_hz",
    "backend.b_min_T", "backend.b_max_T",  "backend.path",
    "backend.policy",  "backend.density_mw_per_cm3", "backend.density_w_per_m3",
    "backend.f_points", "backend.db_points", "backend.db_min_T", "backend.db_max_T"};
const std::vector<std::string> kModelKeys = {"model.path", "model.preset", "model.material"};
const std::vector<std::string> kCircuitKeys = {"circuit.r_c_ohm",  "circuit.l_m1_H",
                                               "circuit.l_m2_H",   "circuit.r_cu1_ohm",
                                               "circuit.r_cu2_ohm", "circuit.l_leak_H",
                                               "circuit.sweep_dl_H"};
const std::vector<std::string> kOutputKeys = {"output.with_current", "output.with_flux"};

std::vector<std::string> cat_keys(std::initializer_list<const std::vector<std::string>*> lists) {
  std::vector<std::string> out;
  for (const auto* l : lists) out.insert(out.end(), l->begin(), l->end());
  return out;
}

// One registry for every subcommand: a config may carry sections the current
// subcommand does not read (so the same file drives synth, estimate, and
// segment), but any key outside this list is rejected by name.
const std::vector<std::string> kKnownKeys =
    cat_keys({&kExcitationKeys, &kCoreKeys, &kBackendKeys, &kModelKeys, &kCircuitKeys,
              &kOutputKeys});

int cmd_synth(const Cli& cli) {
  const Config cfg = load_config(cli);
  cfg.reject_unknown(kKnownKeys);
  const int cycles = cli.cycles > 0 ? cli.cycles : cfg.get_int("excitation.cycles", 1);
  if (cycles < 1) throw ValidationError("excitation.cycles: must be at least 1");

  const std::string kind = cfg.get_string("excitation.kind", "spwm");
  std::vector<TimeSeries> store;
  store.reserve(3);
  if (kind == "spwm") {
    store.push_back(synth_spwm(build_spwm(cfg), cycles));
  } else if (kind == "sine") {
    store.push_back(synth_sine(build_sine(cfg, cycles)));
  } else {
    throw ValidationError("excitation.kind: expected 'spwm' or 'sine', got '" + kind + "'");
  }

  std::vector<std::pair<std::string, const TimeSeries*>> cols;
  cols.emplace_back("v_V", &store[0]);
  const bool with_i = cfg.get_bool("output.with_current", false);
  const bool with_b = cfg.get_bool("output.with_flux", false);
  if (with_i || with_b) {
    const double l = cfg.require_double("excitation.inductance_H");
    const double r = cfg.get_double("excitation.r_series_ohm", 0.0);
    store.push_back(inductor_current(store[0], l, r));
  }
  if (with_i) cols.emplace_back("i_A", &store[1]);
  if (with_b) {
    const CoreSpec core = build_core(cfg);
    store.push_back(to_bh(store[0], store[1], core, true).b);
    cols.emplace_back("b_T", &store.back());
  }

  const std::string path = out_path(cli, "waveform.csv");
  write_waveform_csv(path, cols, /*drop_last=*/true);
  std::cout << path << '\n';
  if (cli.verbose)
    std::cerr << "rows: " << store[0].size() - 1 << ", kernels: " << kernels::isa_name(kernels::active_isa())
              << '\n';
  return 0;
}

int cmd_estimate(const Cli& cli) {
  const Config cfg = load_config(cli);
  cfg.reject_unknown(kKnownKeys);

  const CoreSpec core = build_core(cfg);
  const std::unique_ptr<LossBackend> backend = build_backend(cfg);
  const GenericLossModel model = build_model(cfg);
  const LossSource source = build_source(cfg, *backend);

  WorkflowConfig wf;
  const std::string kind = cfg.get_string("excitation.kind", "spwm");
  if (kind == "spwm") {
    wf.drive = WorkflowConfig::Drive::spwm;
    wf.spwm = build_spwm(cfg);
  } else if (kind == "sine") {
    wf.drive = WorkflowConfig::Drive::sine;
    wf.sine = build_sine(cfg, 1);
  } else {
    throw ValidationError("excitation.kind: expected 'spwm' or 'sine', got '" + kind + "'");
  }
  wf.inductance = cfg.require_double("excitation.inductance_H");
  wf.r_series = cfg.get_double("excitation.r_series_ohm", 0.0);
  wf.emulation_l_m = cfg.get_double("excitation.emulation_l_m_H", 0.0);

  const WorkflowResult res = run_workflow(wf, core, *backend, model, source);

  if (res.low_ratio_warning)
    warn("carrier ratio below 8: fundamental extraction absorbs switching sidebands");
  if (res.comparison.method1_negative)
    warn("minor-loop total exceeds the independent total; major estimate is negative");
  if (!res.comparison.method1_independent)
    warn("no independent total available; method 1 reuses the method-2 total");
  if (res.distribution_degenerate)
    warn("loss shape model is nowhere positive; energy distributed uniformly");

  write_report_csv(out_path(cli, "report.csv"), res.report);

  nlohmann::ordered_json j;
  j["subcommand"] = "estimate";
  j["backend"] = res.report.backend_id;
  j["model"] = res.report.model_id;
  j["f0_hz"] = j9(res.major.f0);
  j["fundamental_amplitude_V"] = j9(res.major.fundamental.amplitude);
  j["b1_T"] = j9(res.major.b1);
  j["q_total_J"] = j9(res.major.q_total);
  j["e_minor_total_J"] = j9(res.report.e_minor_total);
  j["e_major_total_J"] = j9(res.report.e_major_total);
  j["e_grand_total_J"] = j9(res.report.e_grand_total);
  j["method1_J"] = j9(res.comparison.method1_j);
  j["method2_datasheet_J"] = j9(res.comparison.method2_datasheet_j);
  j["method2_emulated_J"] = j9(res.comparison.method2_emulated_j);
  j["method1_independent"] = res.comparison.method1_independent;
  j["method1_negative"] = res.comparison.method1_negative;
  j["max_pairwise_rel"] = j9(res.comparison.max_pairwise_rel());
  j["n_half_loops"] = res.seg.loops.size();
  j["clamp_fraction"] = j9(res.major.dist.clamp_fraction);
  j["distribution_degenerate"] = res.distribution_degenerate;
  j["low_ratio_warning"] = res.low_ratio_warning;
  j["rows"] = res.report.rows.size();
  write_json(cli, j, "summary.json");

  if (cli.plots) {
    PlotOptions bh_opt;
    bh_opt.title = "flux trajectory";
    bh_opt.x_label = "H (A/m)";
    bh_opt.y_label = "B (T)";
    write_svg_plot(out_path(cli, "bh.svg"),
                   {PlotSeries{res.traj.h.values(), res.traj.b.values(), "", ""}}, bh_opt);

    // Modeled instantaneous loss over one fundamental cycle, scaled so its
    // mean is the major-loop power.
    const std::size_t pts = 512;
    PlotSeries shape;
    shape.x.reserve(pts + 1);
    shape.y.reserve(pts + 1);
    const double t1 = 1.0 / res.major.f0;
    const double p_mean = res.major.q_total * res.major.f0;
    for (std::size_t k = 0; k <= pts; ++k) {
      const double frac = static_cast<double>(k) / static_cast<double>(pts);
      shape.x.push_back(frac * t1);
      shape.y.push_back(eval(model, kTwoPi * frac).clamped * p_mean);
    }
    PlotOptions sh_opt;
    sh_opt.title = "instantaneous loss shape";
    sh_opt.x_label = "t (s)";
    sh_opt.y_label = "P (W)";
    write_svg_plot(out_path(cli, "loss_shape.svg"), {shape}, sh_opt);

    StackedBars bars;
    for (const CycleRow& r : res.report.rows) {
      bars.lower.push_back(r.e_minor);
      bars.upper.push_back(r.e_major);
    }
    bars.lower_label = "minor";
    bars.upper_label = "major";
    PlotOptions bar_opt;
    bar_opt.title = "per-cycle loss";
    bar_opt.x_label = "switching cycle";
    bar_opt.y_label = "E (J)";
    write_svg_bars(out_path(cli, "cycles.svg"), bars, bar_opt);
  }

  std::cout << out_path(cli, "report.csv") << '\n';
  return 0;
}

int cmd_cancel(const Cli& cli) {
  const Config cfg = load_config(cli);
  cfg.reject_unknown(kKnownKeys);

  CancellationCircuit circuit;
  circuit.r_c = cfg.require_double("circuit.r_c_ohm");
  circuit.l_m1 = cfg.require_double("circuit.l_m1_H");
  circuit.l_m2 = cfg.get_double("circuit.l_m2_H", circuit.l_m1);
  circuit.r_cu1 = cfg.get_double("circuit.r_cu1_ohm", 0.0);
  circuit.r_cu2 = cfg.get_double("circuit.r_cu2_ohm", 0.0);
  circuit.l_leak = cfg.get_double("circuit.l_leak_H", 0.0);
  circuit.validate();

  const std::string source = cfg.get_string("excitation.source", "sine");
  double omega = 0.0;
  double i_pk_cfg = 0.0;
  std::unique_ptr<TimeSeries> drive;
  if (source == "sine") {
    SineConfig sc;
    sc.amplitude = cfg.require_double("excitation.i_pk_A");
    sc.f = cfg.require_double("excitation.f_hz");
    sc.cycles = cfg.get_int("excitation.cycles", 1);
    sc.samples_per_cycle = cfg.get_int("excitation.samples_per_cycle", 10000);
    sc.validate();
    TimeSeries i = synth_sine(sc);
    drive = std::make_unique<TimeSeries>(i.t0(), i.dt(), i.values(), "A");
    omega = kTwoPi * sc.f;
    i_pk_cfg = sc.amplitude;
  } else if (source == "csv") {
    const CsvTable t = read_csv(cfg.require_string("excitation.path"));
    const std::string col = t.has_col("i_pri_A") ? "i_pri_A" : "i_A";
    drive = std::make_unique<TimeSeries>(series_from_table(t, "time_s", col, "A"));
  } else {
    throw ValidationError("excitation.source: expected 'sine' or 'csv', got '" + source + "'");
  }

  const CancellationTrace trace = run(circuit, *drive);
  write_trace_csv(out_path(cli, "trace.csv"), trace);

  double peak_p = 0.0;
  for (double v : trace.p_inst.values()) peak_p = std::max(peak_p, std::abs(v));
  const std::vector<double> halves = half_loop_energies(trace.p_inst, trace.i);

  nlohmann::ordered_json j;
  j["subcommand"] = "cancel-sim";
  j["matched"] = circuit.matched();
  j["r_c_ohm"] = j9(circuit.r_c);
  j["e_total_J"] = j9(trace.e_total);
  j["e_charge_J"] = j9(trace.e_charge);
  j["e_discharge_J"] = j9(trace.e_discharge);
  j["mean_p_W"] = j9(trace.e_total / trace.p_inst.span());
  j["peak_p_W"] = j9(peak_p);
  {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double e : halves) arr.push_back(j9(e));
    j["half_cycle_energies_J"] = arr;
  }

  if (cfg.has("circuit.sweep_dl_H")) {
    if (source != "sine")
      throw ValidationError("circuit.sweep_dl_H: sweep mode requires the sine source");
    const std::vector<double> dls = cfg.get_double_list("circuit.sweep_dl_H");
    const std::string path = out_path(cli, "sweep.csv");
    std::ofstream out(path);
    if (!out) throw IoError("output: cannot write '" + path + "'");
    out << "delta_l_H,peak_error_W,predicted_peak_W\n";
    CancellationCircuit c_matched = circuit;
    c_matched.l_m2 = c_matched.l_m1;
    const CancellationTrace matched = run(c_matched, *drive);
    for (double dl : dls) {
      CancellationCircuit c2 = circuit;
      c2.l_m2 = circuit.l_m1 - dl;
      c2.validate();
      const CancellationTrace t2 = run(c2, *drive);
      double peak = 0.0;
      for (std::size_t k = 0; k < t2.p_inst.size(); ++k)
        peak = std::max(peak, std::abs(t2.p_inst[k] - matched.p_inst[k]));
      const double predicted = std::abs(dl) * omega * i_pk_cfg * i_pk_cfg / 2.0;
      out << fmt9(dl) << ',' << fmt9(peak) << ',' << fmt9(predicted) << '\n';
    }
    out.flush();
    if (!out) throw IoError("output: failed writing '" + path + "'");
    j["sweep_points"] = dls.size();
  }

  write_json(cli, j, "summary.json");
  std::cout << out_path(cli, "trace.csv") << '\n';
  return 0;
}

int cmd_fit(const Cli& cli) {
  if (cli.fit_inputs.empty())
    throw ValidationError("fit: at least one loss waveform CSV is required");
  if (!cli.config_path.empty() || !cli.overrides.empty())
    throw ValidationError("fit: configuration comes from flags, not --config or --set");

  std::vector<NormalizedLossSet> sets;
  for (const std::string& path : cli.fit_inputs) {
    const CsvTable t = read_csv(path);
    sets.push_back(NormalizedLossSet{path, series_from_table(t, "time_s", "p_W", "W")});
  }
  FitResult res = fit(sets, cli.fit_harmonics);
  res.model.material = cli.fit_material;
  if (res.poor_fit)
    warn("fit quality is low (r^2 = " + fmt9(res.r_squared) + "), more harmonics or cleaner data needed");

  nlohmann::ordered_json j;
  j["material"] = res.model.material;
  j["a0"] = res.model.a0;
  j["a"] = res.model.a;
  j["b"] = res.model.b;
  j["w"] = res.model.w;
  j["phase_offset"] = res.model.phase_offset;
  j["normalized"] = res.model.normalized;
  j["r_squared"] = j9(res.r_squared);
  j["inputs"] = cli.fit_inputs.size();
  write_json(cli, j, "model.json");
  std::cout << out_path(cli, "model.json") << '\n';
  std::cout << "r_squared " << fmt9(res.r_squared) << '\n';
  return 0;
}

int cmd_segment(const Cli& cli) {
  const Config cfg = load_config(cli);
  cfg.reject_unknown(kKnownKeys);

  const CsvTable t = read_csv(cfg.require_string("excitation.path"));
  std::unique_ptr<TimeSeries> b;
  if (t.has_col("b_T")) {
    b = std::make_unique<TimeSeries>(series_from_table(t, "time_s", "b_T", "T"));
  } else {
    const CoreSpec core = build_core(cfg);
    const TimeSeries v = series_from_table(t, "time_s", "v_V", "V");
    const TimeSeries i_zero(v.t0(), v.dt(), std::vector<double>(v.size(), 0.0), "A");
    b = std::make_unique<TimeSeries>(to_bh(v, i_zero, core, true).b);
  }

  const double min_db = cfg.get_double("excitation.min_delta_b_T", 0.0);
  const Segmentation seg = min_db > 0.0 ? segment(*b, min_db) : segment(*b);
  write_segmentation_csv(out_path(cli, "segments.csv"), seg);

  nlohmann::ordered_json j;
  j["subcommand"] = "segment";
  j["n_half_loops"] = seg.loops.size();
  j["min_delta_b_T"] = j9(seg.min_delta_b);
  write_json(cli, j, "summary.json");
  std::cout << out_path(cli, "segments.csv") << '\n';
  return 0;
}

int cmd_lossmap_gen(const Cli& cli) {
  const Config cfg = load_config(cli);
  cfg.reject_unknown(kKnownKeys);

  const SteinmetzParams se = build_se(cfg);
  const double f_min = cfg.require_double("backend.f_min_hz");
  const double f_max = cfg.require_double("backend.f_max_hz");
  const int nf = cfg.get_int("backend.f_points", 8);
  const double db_min = cfg.require_double("backend.db_min_T");
  const double db_max = cfg.require_double("backend.db_max_T");
  const int ndb = cfg.get_int("backend.db_points", 8);
  if (!(f_min > 0.0) || !(f_max > f_min)) throw ValidationError("backend.f_min_hz: need 0 < f_min < f_max");
  if (!(db_min > 0.0) || !(db_max > db_min))
    throw ValidationError("backend.db_min_T: need 0 < db_min < db_max");
  if (nf < 2 || ndb < 2) throw ValidationError("backend.f_points: need at least 2 points per axis");

  // Log-spaced axes match the interpolant's log-log coordinates.
  std::vector<double> f_axis(static_cast<std::size_t>(nf));
  std::vector<double> db_axis(static_cast<std::size_t>(ndb));
  for (int i = 0; i < nf; ++i)
    f_axis[static_cast<std::size_t>(i)] =
        f_min * std::pow(f_max / f_min, static_cast<double>(i) / (nf - 1));
  for (int i = 0; i < ndb; ++i)
    db_axis[static_cast<std::size_t>(i)] =
        db_min * std::pow(db_max / db_min, static_cast<double>(i) / (ndb - 1));

  const LossMapTable map = synth_loss_map(se, f_axis, db_axis);
  write_lossmap_csv(out_path(cli, "lossmap.csv"), map);
  std::cout << out_path(cli, "lossmap.csv") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"cycle-by-cycle core loss analysis for PWM-driven magnetics"};
  app.require_subcommand(1);

  app.add_option("--config", cli.config_path, "configuration file");
  app.add_option("--out-dir", cli.out_dir, "output directory (default .)");
  app.add_flag("--plots", cli.plots, "emit SVG plots");
  app.add_flag("--verbose", cli.verbose, "diagnostics to stderr");
  app.add_option("--set", cli.overrides, "override a config key (key=value, repeatable)");
  app.add_option("--cycles", cli.cycles, "override the synthesized cycle count");

  CLI::App* synth = app.add_subcommand("synth", "synthesize an excitation waveform CSV");
  CLI::App* estimate = app.add_subcommand("estimate", "per-cycle loss report for one setup");
  CLI::App* cancel = app.add_subcommand("cancel-sim", "reactive-cancellation trace simulation");
  CLI::App* fitcmd = app.add_subcommand("fit-model", "fit a loss shape model to P(t) data");
  CLI::App* seg = app.add_subcommand("segment", "half-loop segmentation of a waveform CSV");
  CLI::App* lmg = app.add_subcommand("lossmap-gen", "synthesize a loss map CSV");
  for (CLI::App* sub : {synth, estimate, cancel, fitcmd, seg, lmg}) sub->fallthrough();

  fitcmd->add_option("inputs", cli.fit_inputs, "loss waveform CSVs (time_s,p_W)");
  fitcmd->add_option("--material", cli.fit_material, "material tag for the model file");
  fitcmd->add_option("--harmonics", cli.fit_harmonics, "harmonics to fit (1-6, default 6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(synth)) return cmd_synth(cli);
    if (app.got_subcommand(estimate)) return cmd_estimate(cli);
    if (app.got_subcommand(cancel)) return cmd_cancel(cli);
    if (app.got_subcommand(fitcmd)) return cmd_fit(cli);
    if (app.got_subcommand(seg)) return cmd_segment(cli);
    if (app.got_subcommand(lmg)) return cmd_lossmap_gen(cli);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
