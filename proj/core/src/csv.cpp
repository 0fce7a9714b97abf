#include "qdsim/csv.hpp"

#include <cstdio>

namespace qdsim {

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os_ << ',';
    os_ << names[i];
  }
  os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os_ << ',';
    os_ << format(values[i]);
  }
  os_ << '\n';
}

void write_trace_csv(std::ostream& os, const ChargeTrace& trace,
                     double time_scale) {
  CsvWriter w(os);
  w.header({"t", "sz_a", "sz_b", "p00", "p01", "p10", "p11", "norm"});
  for (std::size_t k = 0; k < trace.size(); ++k)
    w.row({trace.t[k] * time_scale, trace.sz_a[k], trace.sz_b[k], trace.p00[k],
           trace.p01[k], trace.p10[k], trace.p11[k], trace.norm[k]});
}

}  // namespace qdsim
