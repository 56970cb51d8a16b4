#pragma once

#include <string>
#include <utility>
#include <vector>

#include "coreloss/cancellation.hpp"
#include "coreloss/cwh.hpp"
#include "coreloss/loss.hpp"
#include "coreloss/pipeline.hpp"
#include "coreloss/timeseries.hpp"

namespace coreloss {

// All numeric output is rendered with %.9g: fixed 9 significant digits makes
// repeated runs byte-identical.
std::string fmt9(double v);

// Header row plus numeric columns. Ragged rows, empty cells, and non-numeric
// payloads are validation errors; an unreadable file is an I/O error.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // column major, data[c].size() == rows()

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  bool has_col(const std::string& name) const;
  const std::vector<double>& col(const std::string& name) const;  // throws ValidationError
};

CsvTable read_csv(const std::string& path);

// Builds a TimeSeries from a time column and a value column. The time grid
// must be uniform within 1 ppm of the span.
TimeSeries series_from_table(const CsvTable& t, const std::string& time_col,
                             const std::string& value_col, std::string unit);

// time_s plus the named series, all sharing one grid. drop_last omits the
// final row so a closed (wrap-sample) span writes exactly one period's rows.
void write_waveform_csv(const std::string& path,
                        const std::vector<std::pair<std::string, const TimeSeries*>>& cols,
                        bool drop_last);

// cycle,t_start_s,e_minor_J,e_major_J,e_total_J
void write_report_csv(const std::string& path, const CycleLossReport& report);

// time_s,i_pri_A,v_iut_V,v_ref_V,v_diff_V,p_W
void write_trace_csv(const std::string& path, const CancellationTrace& trace);

// idx_start,idx_end,direction,delta_b_T,duration_s,f_eq_hz,b_bias_T
// direction is +1 rising, -1 falling; b_bias is the loop-center flux.
void write_segmentation_csv(const std::string& path, const Segmentation& seg);

// Long format, f outer: f_hz,delta_b_T,e_density_J_m3[,b_bias_T].
void write_lossmap_csv(const std::string& path, const LossMapTable& map);
LossMapTable read_lossmap_csv(const std::string& path);

}  // namespace coreloss
