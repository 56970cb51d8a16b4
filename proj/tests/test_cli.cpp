#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coreloss/csv.hpp"
#include "coreloss/generic_model.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using coreloss::CsvTable;
using coreloss::read_csv;

namespace {

std::string cli_binary() {
  const char* env = std::getenv("CORELOSS_CLI");
  REQUIRE_MESSAGE(env != nullptr, "CORELOSS_CLI must point at the tool binary");
  return env;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "coreloss_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  REQUIRE(out.good());
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE_MESSAGE(in.good(), ("missing file: " + p.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the tool with stdout/stderr captured next to the outputs. Returns the
// process exit code.
int run_cli(const std::string& args, const fs::path& dir, std::string* out = nullptr,
            std::string* err = nullptr) {
  const fs::path so = dir / "_stdout.txt";
  const fs::path se = dir / "_stderr.txt";
  const std::string cmd =
      "\"" + cli_binary() + "\" " + args + " > " + so.string() + " 2> " + se.string();
  const int rc = std::system(cmd.c_str());
  if (out) *out = read_text(so);
  if (err) *err = read_text(se);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

// Core and excitation only: accepted by every subcommand.
std::string synth_config(int ratio = 16, int spsc = 400) {
  std::ostringstream ss;
  ss << "[core]\npreset = T300-26D\n"
     << "[excitation]\nkind = spwm\nvdc_V = 20\nf0_hz = 2500\nratio = " << ratio
     << "\nm = 0.8\nsamples_per_sw_cycle = " << spsc << "\ninductance_H = 264e-6\n";
  return ss.str();
}

std::string spwm_config(int ratio = 16, int spsc = 400) {
  return synth_config(ratio, spsc) +
         "[backend]\nkind = steinmetz\nk = 0.15\nalpha = 1.6\nbeta = 2.5\n"
         "[model]\npreset = mix26\n";
}

nlohmann::json summary_of(const fs::path& dir) {
  return nlohmann::json::parse(read_text(dir / "summary.json"));
}

}  // namespace

TEST_CASE("help exits cleanly and no subcommand is an error") {
  const fs::path dir = fresh_dir("help");
  std::string out;
  CHECK(run_cli("--help", dir, &out) == 0);
  CHECK(out.find("synth") != std::string::npos);
  CHECK(out.find("estimate") != std::string::npos);

  CHECK(run_cli("", dir) == 2);
}

TEST_CASE("synth writes one open-span period per cycle") {
  const fs::path dir = fresh_dir("synth");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, synth_config());

  std::string out;
  const int rc =
      run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " synth", dir, &out);
  REQUIRE(rc == 0);
  CHECK(out.find("waveform.csv") != std::string::npos);

  const CsvTable t = read_csv((dir / "waveform.csv").string());
  CHECK(t.columns == std::vector<std::string>{"time_s", "v_V"});
  CHECK(t.rows() == 400 * 16);  // wrap sample dropped

  // --cycles doubles the span.
  const fs::path dir2 = fresh_dir("synth2");
  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir2.string() + " --cycles 2 synth",
                  dir2) == 0);
  CHECK(read_csv((dir2 / "waveform.csv").string()).rows() == 2 * 400 * 16);
}

TEST_CASE("one config file drives subcommands that read different sections") {
  // synth ignores [backend] and [model]; typos are still rejected by name.
  const fs::path dir = fresh_dir("shared_cfg");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, spwm_config());

  CHECK(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " synth", dir) == 0);
  CHECK(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " estimate", dir) == 0);

  std::string err;
  CHECK(run_cli("--config " + cfg.string() + " --set backend.alpah=1.6 --out-dir " + dir.string() +
                    " synth",
                dir, nullptr, &err) == 2);
  CHECK(err.find("backend.alpah") != std::string::npos);
}

TEST_CASE("synth optionally emits current and flux columns") {
  const fs::path dir = fresh_dir("synth_cols");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, synth_config() + "[output]\nwith_current = true\nwith_flux = true\n");

  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " synth", dir) == 0);
  const CsvTable t = read_csv((dir / "waveform.csv").string());
  CHECK(t.columns == std::vector<std::string>{"time_s", "v_V", "i_A", "b_T"});
  // The flux trajectory is periodic, so its column straddles zero.
  const auto& b = t.col("b_T");
  CHECK(*std::min_element(b.begin(), b.end()) < 0.0);
  CHECK(*std::max_element(b.begin(), b.end()) > 0.0);
}

TEST_CASE("estimate produces the per-cycle report and a full summary") {
  const fs::path dir = fresh_dir("estimate");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, spwm_config());

  std::string out;
  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " estimate", dir,
                  &out) == 0);
  CHECK(out.find("report.csv") != std::string::npos);

  const CsvTable rep = read_csv((dir / "report.csv").string());
  CHECK(rep.columns ==
        std::vector<std::string>{"cycle", "t_start_s", "e_minor_J", "e_major_J", "e_total_J"});
  REQUIRE(rep.rows() == 16);
  for (std::size_t i = 0; i < rep.rows(); ++i) {
    CHECK(rep.col("e_minor_J")[i] >= 0.0);
    CHECK(rep.col("e_major_J")[i] >= 0.0);
  }

  const nlohmann::json j = summary_of(dir);
  for (const char* key :
       {"subcommand", "backend", "model", "f0_hz", "fundamental_amplitude_V", "b1_T", "q_total_J",
        "e_minor_total_J", "e_major_total_J", "e_grand_total_J", "method1_J",
        "method2_datasheet_J", "method2_emulated_J", "method1_independent", "method1_negative",
        "max_pairwise_rel", "n_half_loops", "clamp_fraction", "distribution_degenerate",
        "low_ratio_warning", "rows"}) {
    CAPTURE(key);
    CHECK(j.contains(key));
  }
  CHECK(j["subcommand"] == "estimate");
  CHECK(j["backend"] == "steinmetz-igse");
  CHECK(j["model"] == "Mix-26");
  CHECK(j["rows"] == 16);
  CHECK(j["n_half_loops"] == 32);
  CHECK(j["method1_independent"] == true);
  CHECK(j["low_ratio_warning"] == false);
  CHECK(j["f0_hz"].get<double>() == doctest::Approx(2500.0).epsilon(1e-9));
  CHECK(j["e_grand_total_J"].get<double>() ==
        doctest::Approx(j["e_minor_total_J"].get<double>() + j["e_major_total_J"].get<double>())
            .epsilon(1e-9));
}

TEST_CASE("estimate validation failures name the config key and exit 2") {
  const fs::path dir = fresh_dir("estimate_bad");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, spwm_config());

  std::string err;
  CHECK(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() +
                    " --set excitation.ratio=1 estimate",
                dir, nullptr, &err) == 2);
  CHECK(err.find("excitation.ratio") != std::string::npos);

  CHECK(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() +
                    " --set excitation.bogus=1 estimate",
                dir, nullptr, &err) == 2);
  CHECK(err.find("excitation.bogus") != std::string::npos);
}

TEST_CASE("missing backend table exits with the I/O code") {
  const fs::path dir = fresh_dir("estimate_io");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, spwm_config());

  std::string err;
  const int rc = run_cli("--config " + cfg.string() + " --out-dir " + dir.string() +
                             " --set backend.kind=lossmap --set backend.path=/nonexistent/m.csv" +
                             " --set backend.density_mw_per_cm3=109.3 estimate",
                         dir, nullptr, &err);
  CHECK(rc == 4);
  CHECK(err.find("backend.path") != std::string::npos);
}

TEST_CASE("plots appear only when requested") {
  const fs::path dir = fresh_dir("plots_off");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, spwm_config(16, 200));

  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " estimate", dir) ==
          0);
  CHECK(!fs::exists(dir / "bh.svg"));
  CHECK(!fs::exists(dir / "loss_shape.svg"));
  CHECK(!fs::exists(dir / "cycles.svg"));

  const fs::path dir2 = fresh_dir("plots_on");
  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir2.string() + " --plots estimate",
                  dir2) == 0);
  for (const char* name : {"bh.svg", "loss_shape.svg", "cycles.svg"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir2 / name));
    CHECK(read_text(dir2 / name).find("<svg") != std::string::npos);
  }
}

TEST_CASE("repeated estimates are byte-identical") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const fs::path cfg = a / "run.cfg";
  write_text(cfg, spwm_config());

  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + a.string() + " estimate", a) == 0);
  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + b.string() + " estimate", b) == 0);
  CHECK(read_text(a / "report.csv") == read_text(b / "report.csv"));
  CHECK(read_text(a / "summary.json") == read_text(b / "summary.json"));
}

TEST_CASE("cancel-sim writes the bridge trace and conserves split energies") {
  const fs::path dir = fresh_dir("cancel");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg,
             "[circuit]\nr_c_ohm = 1.0\nl_m1_H = 264e-6\n"
             "[excitation]\nsource = sine\ni_pk_A = 0.76\nf_hz = 2500\n");

  std::string out;
  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " cancel-sim", dir,
                  &out) == 0);
  CHECK(out.find("trace.csv") != std::string::npos);

  const CsvTable t = read_csv((dir / "trace.csv").string());
  CHECK(t.columns == std::vector<std::string>{"time_s", "i_pri_A", "v_iut_V", "v_ref_V",
                                              "v_diff_V", "p_W"});
  // Matched bridge: the reactive drops cancel, leaving only the loss-sensing
  // voltage r_c * i, and the instantaneous power stays nonnegative.
  for (std::size_t k = 0; k < t.rows(); ++k) {
    CHECK(t.col("v_diff_V")[k] ==
          doctest::Approx(1.0 * t.col("i_pri_A")[k]).epsilon(1e-9).scale(1.0));
    CHECK(t.col("p_W")[k] >= 0.0);
  }

  const nlohmann::json j = summary_of(dir);
  CHECK(j["matched"] == true);
  const double e_total = j["e_total_J"].get<double>();
  const double split = j["e_charge_J"].get<double>() + j["e_discharge_J"].get<double>();
  CHECK(split == doctest::Approx(e_total).epsilon(1e-9));
  // 0.5 * r_c * i_pk^2 at 2.5 kHz.
  CHECK(j["mean_p_W"].get<double>() == doctest::Approx(0.5 * 0.76 * 0.76).epsilon(1e-3));
  CHECK(j["half_cycle_energies_J"].size() >= 2);
}

TEST_CASE("cancel-sim sweep grows the peak error with the mismatch") {
  const fs::path dir = fresh_dir("cancel_sweep");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg,
             "[circuit]\nr_c_ohm = 1.0\nl_m1_H = 264e-6\n"
             "sweep_dl_H = 0, 0.4e-6, 4e-6\n"
             "[excitation]\nsource = sine\ni_pk_A = 0.76\nf_hz = 2500\n");

  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " cancel-sim",
                  dir) == 0);
  const CsvTable t = read_csv((dir / "sweep.csv").string());
  CHECK(t.columns == std::vector<std::string>{"delta_l_H", "peak_error_W", "predicted_peak_W"});
  REQUIRE(t.rows() == 3);
  CHECK(t.col("peak_error_W")[0] == 0.0);
  CHECK(t.col("predicted_peak_W")[0] == 0.0);
  CHECK(t.col("peak_error_W")[1] < t.col("peak_error_W")[2]);
  // Measured peak tracks the small-mismatch prediction.
  for (std::size_t i = 1; i < 3; ++i)
    CHECK(t.col("peak_error_W")[i] ==
          doctest::Approx(t.col("predicted_peak_W")[i]).epsilon(0.02));
  CHECK(summary_of(dir)["sweep_points"] == 3);
}

TEST_CASE("fit-model recovers a generated loss shape") {
  const fs::path dir = fresh_dir("fit");

  // Two scaled copies of the bundled shape, sampled over one period.
  const coreloss::GenericLossModel truth = coreloss::mix26_model();
  for (int set = 0; set < 2; ++set) {
    std::ostringstream ss;
    ss << "time_s,p_W\n";
    const int n = 400;
    const double scale = set == 0 ? 1.0 : 7.5;
    for (int i = 0; i <= n; ++i) {
      const double th = 2.0 * 3.14159265358979323846 * i / n;
      ss << coreloss::fmt9(1e-3 * i) << ','
         << coreloss::fmt9(scale * coreloss::eval(truth, th).clamped) << '\n';
    }
    write_text(dir / ("p" + std::to_string(set) + ".csv"), ss.str());
  }

  std::string out;
  const int rc = run_cli("--out-dir " + dir.string() + " fit-model " +
                             (dir / "p0.csv").string() + " " + (dir / "p1.csv").string() +
                             " --material mix26",
                         dir, &out);
  REQUIRE(rc == 0);
  CHECK(out.find("model.json") != std::string::npos);
  CHECK(out.find("r_squared") != std::string::npos);

  const nlohmann::json j = nlohmann::json::parse(read_text(dir / "model.json"));
  CHECK(j["material"] == "mix26");
  CHECK(j["r_squared"].get<double>() > 0.999);
  CHECK(j["a"].size() == 6);
  CHECK(j["normalized"] == true);

  // The fitted model file drives an estimate run directly.
  const fs::path dir2 = fresh_dir("fit_use");
  const fs::path cfg = dir2 / "run.cfg";
  write_text(cfg, spwm_config() + "[model]\npath = " + (dir / "model.json").string() + "\n");
  CHECK(run_cli("--config " + cfg.string() + " --out-dir " + dir2.string() + " estimate", dir2) ==
        0);
  CHECK(summary_of(dir2)["model"] == "mix26");
}

TEST_CASE("fit-model without inputs is a usage error") {
  const fs::path dir = fresh_dir("fit_bad");
  std::string err;
  CHECK(run_cli("--out-dir " + dir.string() + " fit-model", dir, nullptr, &err) == 2);
  CHECK(!err.empty());
}

TEST_CASE("segment decomposes a synthesized flux waveform") {
  const fs::path dir = fresh_dir("segment");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, synth_config(4, 200) + "[output]\nwith_current = true\nwith_flux = true\n");
  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " synth", dir) == 0);

  const fs::path segcfg = dir / "seg.cfg";
  write_text(segcfg, "[excitation]\npath = " + (dir / "waveform.csv").string() + "\n");
  std::string out;
  REQUIRE(run_cli("--config " + segcfg.string() + " --out-dir " + dir.string() + " segment", dir,
                  &out) == 0);
  CHECK(out.find("segments.csv") != std::string::npos);

  const CsvTable t = read_csv((dir / "segments.csv").string());
  CHECK(t.columns == std::vector<std::string>{"idx_start", "idx_end", "direction", "delta_b_T",
                                              "duration_s", "f_eq_hz", "b_bias_T"});
  // Two half loops per switching cycle at ratio 4.
  CHECK(t.rows() == 8);
  CHECK(summary_of(dir)["n_half_loops"] == 8);
  for (double d : t.col("direction")) CHECK(std::abs(d) == 1.0);
  for (double db : t.col("delta_b_T")) CHECK(db > 0.0);
}

TEST_CASE("segment reports a numeric error for a flat trajectory") {
  const fs::path dir = fresh_dir("segment_flat");
  write_text(dir / "flat.csv", "time_s,b_T\n0,0.1\n1e-5,0.1\n2e-5,0.1\n3e-5,0.1\n");
  const fs::path cfg = dir / "seg.cfg";
  write_text(cfg, "[excitation]\npath = " + (dir / "flat.csv").string() + "\n");
  std::string err;
  CHECK(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " segment", dir,
                nullptr, &err) == 3);
  CHECK(!err.empty());
}

TEST_CASE("a generated loss map feeds the estimator") {
  const fs::path dir = fresh_dir("lossmap");
  const fs::path gencfg = dir / "gen.cfg";
  write_text(gencfg,
             "[backend]\nk = 0.15\nalpha = 1.6\nbeta = 2.5\n"
             "f_min_hz = 1e3\nf_max_hz = 2e5\nf_points = 12\n"
             "db_min_T = 1e-3\ndb_max_T = 0.8\ndb_points = 12\n");
  std::string out;
  REQUIRE(run_cli("--config " + gencfg.string() + " --out-dir " + dir.string() + " lossmap-gen",
                  dir, &out) == 0);
  CHECK(out.find("lossmap.csv") != std::string::npos);
  CHECK(read_csv((dir / "lossmap.csv").string()).rows() == 12 * 12);

  // The lossmap backend drives both flows; the datasheet density prices the
  // major loop.
  const fs::path estcfg = dir / "est.cfg";
  std::ostringstream ss;
  ss << "[core]\npreset = T300-26D\n"
     << "[excitation]\nkind = spwm\nvdc_V = 20\nf0_hz = 2500\nratio = 16\nm = 0.8\n"
     << "samples_per_sw_cycle = 400\ninductance_H = 264e-6\n"
     << "[backend]\nkind = lossmap\npath = " << (dir / "lossmap.csv").string()
     << "\npolicy = clamp\ndensity_mw_per_cm3 = 109.3\n"
     << "[model]\npreset = mix26\n";
  write_text(estcfg, ss.str());

  REQUIRE(run_cli("--config " + estcfg.string() + " --out-dir " + dir.string() + " estimate",
                  dir) == 0);
  const nlohmann::json j = summary_of(dir);
  CHECK(j["backend"] == "lossmap");
  CHECK(j["rows"] == 16);
  CHECK(j["e_minor_total_J"].get<double>() > 0.0);
}

TEST_CASE("verbose mode reports progress on stderr") {
  const fs::path dir = fresh_dir("verbose");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, synth_config(4, 200));
  std::string err;
  REQUIRE(run_cli("--config " + cfg.string() + " --out-dir " + dir.string() + " --verbose synth",
                  dir, nullptr, &err) == 0);
  CHECK(err.find("rows") != std::string::npos);
}
