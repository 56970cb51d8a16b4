#include "coreloss/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "coreloss/errors.hpp"

namespace coreloss {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, const std::string& path, std::size_t line_no) {
  const std::string s = trimmed(raw);
  if (s.empty())
    throw ValidationError("csv: '" + path + "' line " + std::to_string(line_no) + ": empty cell");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ValidationError("csv: '" + path + "' line " + std::to_string(line_no) +
                          ": not a number: '" + s + "'");
  return v;
}

void write_line(std::ofstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("csv: cannot write '" + path + "'");
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("csv: failed writing '" + path + "'");
}

}  // namespace

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

bool CsvTable::has_col(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

const std::vector<double>& CsvTable::col(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return data[c];
  throw ValidationError("csv: missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("csv: cannot open '" + path + "'");

  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (t.columns.empty()) {
      for (const std::string& c : cells) {
        const std::string name = trimmed(c);
        if (name.empty())
          throw ValidationError("csv: '" + path + "': empty column name in header");
        t.columns.push_back(name);
      }
      t.data.resize(t.columns.size());
      continue;
    }
    if (cells.size() != t.columns.size())
      throw ValidationError("csv: '" + path + "' line " + std::to_string(line_no) + ": expected " +
                            std::to_string(t.columns.size()) + " cells, got " +
                            std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c)
      t.data[c].push_back(parse_cell(cells[c], path, line_no));
  }
  if (t.columns.empty()) throw ValidationError("csv: '" + path + "': no header row");
  if (t.rows() < 2) throw ValidationError("csv: '" + path + "': need at least 2 data rows");
  return t;
}

TimeSeries series_from_table(const CsvTable& t, const std::string& time_col,
                             const std::string& value_col, std::string unit) {
  const std::vector<double>& tt = t.col(time_col);
  const std::vector<double>& vv = t.col(value_col);
  const std::size_t n = tt.size();
  const double t0 = tt.front();
  const double span = tt.back() - t0;
  if (!(span > 0.0)) throw ValidationError("csv: time column must be increasing");
  const double dt = span / static_cast<double>(n - 1);
  const double tol = 1e-6 * span;
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = t0 + dt * static_cast<double>(i);
    if (std::abs(tt[i] - expected) > tol)
      throw ValidationError("csv: time grid not uniform at row " + std::to_string(i + 1));
  }
  return TimeSeries(t0, dt, vv, std::move(unit));
}

void write_waveform_csv(const std::string& path,
                        const std::vector<std::pair<std::string, const TimeSeries*>>& cols,
                        bool drop_last) {
  if (cols.empty()) throw ValidationError("csv: no columns to write");
  const TimeSeries& first = *cols.front().second;
  for (const auto& [name, s] : cols) require_aligned(first, *s, name.c_str());

  std::ofstream out = open_out(path);
  std::vector<std::string> cells;
  cells.emplace_back("time_s");
  for (const auto& [name, s] : cols) cells.push_back(name);
  write_line(out, cells);

  const std::size_t n = first.size() - (drop_last ? 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    cells.clear();
    cells.push_back(fmt9(first.time_at(i)));
    for (const auto& [name, s] : cols) cells.push_back(fmt9((*s)[i]));
    write_line(out, cells);
  }
  finish_out(out, path);
}

void write_report_csv(const std::string& path, const CycleLossReport& report) {
  std::ofstream out = open_out(path);
  out << "cycle,t_start_s,e_minor_J,e_major_J,e_total_J\n";
  for (const CycleRow& r : report.rows) {
    out << r.cycle << ',' << fmt9(r.t_start) << ',' << fmt9(r.e_minor) << ',' << fmt9(r.e_major)
        << ',' << fmt9(r.e_total) << '\n';
  }
  finish_out(out, path);
}

void write_trace_csv(const std::string& path, const CancellationTrace& trace) {
  std::ofstream out = open_out(path);
  out << "time_s,i_pri_A,v_iut_V,v_ref_V,v_diff_V,p_W\n";
  for (std::size_t i = 0; i < trace.i.size(); ++i) {
    out << fmt9(trace.i.time_at(i)) << ',' << fmt9(trace.i[i]) << ',' << fmt9(trace.v_iut[i])
        << ',' << fmt9(trace.v_ref[i]) << ',' << fmt9(trace.v_diff[i]) << ','
        << fmt9(trace.p_inst[i]) << '\n';
  }
  finish_out(out, path);
}

void write_segmentation_csv(const std::string& path, const Segmentation& seg) {
  std::ofstream out = open_out(path);
  out << "idx_start,idx_end,direction,delta_b_T,duration_s,f_eq_hz,b_bias_T\n";
  for (const HalfLoop& l : seg.loops) {
    out << l.start_idx << ',' << l.end_idx << ',' << l.direction << ',' << fmt9(l.delta_b) << ','
        << fmt9(l.duration) << ',' << fmt9(l.f_eq) << ',' << fmt9(loop_coordinates(l).b_bias)
        << '\n';
  }
  finish_out(out, path);
}

void write_lossmap_csv(const std::string& path, const LossMapTable& map) {
  std::ofstream out = open_out(path);
  const bool with_bias = !map.b_bias().empty();
  out << (with_bias ? "f_hz,delta_b_T,e_density_J_m3,b_bias_T\n"
                    : "f_hz,delta_b_T,e_density_J_m3\n");
  const std::vector<double>& fs = map.f_axis();
  const std::vector<double>& dbs = map.db_axis();
  for (std::size_t fi = 0; fi < fs.size(); ++fi) {
    for (std::size_t di = 0; di < dbs.size(); ++di) {
      out << fmt9(fs[fi]) << ',' << fmt9(dbs[di]) << ',' << fmt9(map.at(fi, di));
      if (with_bias) out << ',' << fmt9(map.b_bias()[fi * dbs.size() + di]);
      out << '\n';
    }
  }
  finish_out(out, path);
}

LossMapTable read_lossmap_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::vector<double>& f = t.col("f_hz");
  const std::vector<double>& db = t.col("delta_b_T");
  const std::vector<double>& e = t.col("e_density_J_m3");

  // Reconstruct the rectangular grid from the long format: delta_b axis from
  // the first frequency block, then every block must repeat it exactly.
  std::vector<double> db_axis;
  for (std::size_t i = 0; i < db.size() && f[i] == f[0]; ++i) db_axis.push_back(db[i]);
  const std::size_t ndb = db_axis.size();
  if (ndb == 0 || f.size() % ndb != 0)
    throw ValidationError("csv: '" + path + "': rows do not form a complete (f, delta_b) grid");
  const std::size_t nf = f.size() / ndb;
  std::vector<double> f_axis(nf);
  for (std::size_t fi = 0; fi < nf; ++fi) {
    f_axis[fi] = f[fi * ndb];
    for (std::size_t di = 0; di < ndb; ++di) {
      const std::size_t r = fi * ndb + di;
      if (f[r] != f_axis[fi] || db[r] != db_axis[di])
        throw ValidationError("csv: '" + path + "': rows do not form a complete (f, delta_b) " +
                              "grid at row " + std::to_string(r + 2));
    }
  }
  std::vector<double> bias;
  if (t.has_col("b_bias_T")) bias = t.col("b_bias_T");
  return LossMapTable(std::move(f_axis), std::move(db_axis), e, std::move(bias));
}

}  // namespace coreloss
