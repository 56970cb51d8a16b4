#include "coreloss/generic_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>

#include "coreloss/errors.hpp"
#include "json.hpp"

namespace coreloss {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string("model: ") + what + " must be finite");
}

}  // namespace

void GenericLossModel::validate() const {
  require_finite(a0, "a0");
  require_finite(w, "w");
  require_finite(phase_offset, "phase_offset");
  for (std::size_t n = 0; n < 6; ++n) {
    require_finite(a[n], "a[n]");
    require_finite(b[n], "b[n]");
  }
}

ModelEval eval(const GenericLossModel& m, double theta) {
  const double t = theta + m.phase_offset;
  // Incremental rotation: cos/sin of n*t from the n-1 term, one sincos total.
  const double c1 = std::cos(t);
  const double s1 = std::sin(t);
  double cn = c1;
  double sn = s1;
  double acc = m.a0;
  for (std::size_t n = 0; n < 6; ++n) {
    acc += m.a[n] * cn + m.b[n] * sn;
    const double cnext = cn * c1 - sn * s1;
    sn = sn * c1 + cn * s1;
    cn = cnext;
  }
  ModelEval out;
  out.raw = acc;
  out.clamped = acc > 0.0 ? acc : 0.0;
  return out;
}

TimeSeries normalize(const TimeSeries& p) {
  const double mean = trapezoid_mean(p);
  if (!(mean > 0.0)) throw ValidationError("model: loss series mean must be positive to normalize");
  return scaled(p, 1.0 / mean, "");
}

FitResult fit(const std::vector<NormalizedLossSet>& sets, int n_harmonics) {
  if (sets.empty()) throw ValidationError("model: fit requires at least one loss set");
  if (n_harmonics < 1 || n_harmonics > 6)
    throw ValidationError("model: harmonic count must be between 1 and 6");

  // Uniform phase grid over one cycle, wrap sample excluded. Each set is
  // normalized to unit mean first so every operating point carries the same
  // weight in the average regardless of its absolute loss.
  constexpr std::size_t kGrid = 4096;
  std::vector<double> avg(kGrid, 0.0);
  for (const NormalizedLossSet& set : sets) {
    const TimeSeries norm = normalize(set.p);
    const std::size_t n = norm.size();
    const double span = norm.span();
    for (std::size_t k = 0; k < kGrid; ++k) {
      const double t = span * static_cast<double>(k) / static_cast<double>(kGrid);
      const double j = t / norm.dt();
      std::size_t lo = static_cast<std::size_t>(j);
      if (lo >= n - 1) lo = n - 2;
      const double frac = j - static_cast<double>(lo);
      avg[k] += norm[lo] + frac * (norm[lo + 1] - norm[lo]);
    }
  }
  const double inv_sets = 1.0 / static_cast<double>(sets.size());
  for (double& v : avg) v *= inv_sets;

  GenericLossModel m;
  m.w = kTwoPi / sets.front().p.span();
  m.normalized = true;

  // Discrete Fourier projection. The uniform periodic grid makes the sampled
  // harmonics exactly orthogonal, so this is the least-squares solution.
  double a0 = 0.0;
  for (double v : avg) a0 += v;
  a0 /= static_cast<double>(kGrid);
  m.a0 = a0;
  for (int n = 1; n <= n_harmonics; ++n) {
    double ca = 0.0;
    double sb = 0.0;
    for (std::size_t k = 0; k < kGrid; ++k) {
      const double th = kTwoPi * static_cast<double>(n) * static_cast<double>(k) /
                        static_cast<double>(kGrid);
      ca += avg[k] * std::cos(th);
      sb += avg[k] * std::sin(th);
    }
    m.a[static_cast<std::size_t>(n - 1)] = 2.0 * ca / static_cast<double>(kGrid);
    m.b[static_cast<std::size_t>(n - 1)] = 2.0 * sb / static_cast<double>(kGrid);
  }

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t k = 0; k < kGrid; ++k) {
    const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(kGrid);
    const double fitted = eval(m, th).raw;
    const double r = avg[k] - fitted;
    const double d = avg[k] - a0;
    ss_res += r * r;
    ss_tot += d * d;
  }

  FitResult out;
  out.model = m;
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  out.poor_fit = out.r_squared < 0.9;
  return out;
}

Distribution distribute(const GenericLossModel& m, double q_total, int n_cycles) {
  m.validate();
  if (!std::isfinite(q_total) || q_total < 0.0)
    throw ValidationError("model: total energy must be finite and non-negative");
  if (n_cycles < 1) throw ValidationError("model: cycle count must be at least 1");

  // Midpoint quadrature of the clamped shape over each cycle's phase window.
  constexpr std::size_t kPtsPerCycle = 512;
  const std::size_t nc = static_cast<std::size_t>(n_cycles);
  std::vector<double> weight(nc, 0.0);
  std::size_t clamped_pts = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < kPtsPerCycle; ++j) {
      const double frac = (static_cast<double>(i) +
                           (static_cast<double>(j) + 0.5) / static_cast<double>(kPtsPerCycle)) /
                          static_cast<double>(nc);
      const ModelEval e = eval(m, kTwoPi * frac);
      if (e.raw <= 0.0) ++clamped_pts;
      acc += e.clamped;
    }
    weight[i] = acc;
  }

  Distribution out;
  out.clamp_fraction =
      static_cast<double>(clamped_pts) / static_cast<double>(nc * kPtsPerCycle);
  double total_w = 0.0;
  for (double w : weight) total_w += w;
  if (total_w <= 0.0) {
    // Model never positive: no shape information, fall back to a uniform split.
    out.degenerate = true;
    for (double& w : weight) w = 1.0;
    total_w = static_cast<double>(nc);
  }

  out.e_cycle.resize(nc);
  double sum = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    out.e_cycle[i] = q_total * (weight[i] / total_w);
    sum += out.e_cycle[i];
    if (std::abs(out.e_cycle[i]) > std::abs(out.e_cycle[largest])) largest = i;
  }
  // Fold rounding residue into the largest share: conservation becomes exact
  // to the last ulp instead of merely close.
  out.e_cycle[largest] += q_total - sum;
  return out;
}

GenericLossModel rescaled_to_unit_mean(const GenericLossModel& m) {
  m.validate();
  if (!(m.a0 > 0.0))
    throw ValidationError("model: mean term a0 must be positive to rescale to unit mean");
  GenericLossModel out = m;
  const double inv = 1.0 / m.a0;
  out.a0 = 1.0;
  for (std::size_t n = 0; n < 6; ++n) {
    out.a[n] = m.a[n] * inv;
    out.b[n] = m.b[n] * inv;
  }
  out.normalized = true;
  return out;
}

GenericLossModel mix26_model() {
  GenericLossModel m;
  m.material = "Mix-26";
  m.a0 = 0.98;
  m.a = {-0.25, 0.51, 0.038, -0.63, 0.017, -0.21};
  m.b = {-0.018, 0.54, -0.0438, 0.43, -0.029, 0.041};
  m.w = 0.61;
  m.phase_offset = 0.0;
  m.normalized = true;
  return m;
}

GenericLossModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("model: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("model: '" + path + "' is not valid JSON: " + e.what());
  }
  GenericLossModel m;
  try {
    m.material = j.at("material").get<std::string>();
    m.a0 = j.at("a0").get<double>();
    const auto& ja = j.at("a");
    const auto& jb = j.at("b");
    if (ja.size() != 6 || jb.size() != 6)
      throw ValidationError("model: '" + path + "' coefficient arrays must have 6 entries");
    for (std::size_t n = 0; n < 6; ++n) {
      m.a[n] = ja.at(n).get<double>();
      m.b[n] = jb.at(n).get<double>();
    }
    m.w = j.at("w").get<double>();
    m.phase_offset = j.value("phase_offset", 0.0);
    m.normalized = j.value("normalized", false);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("model: '" + path + "' has a missing or mistyped field: " + e.what());
  }
  m.validate();
  return m;
}

void save_model_json(const GenericLossModel& m, const std::string& path) {
  m.validate();
  nlohmann::ordered_json j;
  j["material"] = m.material;
  j["a0"] = m.a0;
  j["a"] = m.a;
  j["b"] = m.b;
  j["w"] = m.w;
  j["phase_offset"] = m.phase_offset;
  j["normalized"] = m.normalized;
  std::ofstream out(path);
  if (!out) throw IoError("model: cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("model: failed writing '" + path + "'");
}

namespace {

// Tag comparison ignores case and punctuation so "Mix-26" matches "mix26".
std::string canonical_tag(const std::string& s) {
  std::string out;
  for (char c : s) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

}  // namespace

std::string material_mismatch_warning(const GenericLossModel& m, const std::string& material) {
  if (m.material.empty() || material.empty()) return "";
  if (canonical_tag(m.material) == canonical_tag(material)) return "";
  return "model material '" + m.material + "' does not match requested material '" + material +
         "'";
}

}  // namespace coreloss
