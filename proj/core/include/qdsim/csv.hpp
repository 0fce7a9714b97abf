#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qdsim/dynamics.hpp"

namespace qdsim {

/// Deterministic CSV: comma separator, '.' decimal point, header row,
/// LF line endings, floats at 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);

  static std::string format(double v);

 private:
  std::ostream& os_;
};

/// Columns: t, sz_a, sz_b, p00, p01, p10, p11, norm.
void write_trace_csv(std::ostream& os, const ChargeTrace& trace,
                     double time_scale = 1.0);

}  // namespace qdsim
