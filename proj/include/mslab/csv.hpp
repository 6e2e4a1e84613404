#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "mslab/error.hpp"

namespace mslab {

// Deterministic CSV writer: doubles formatted with %.17g so identical runs
// produce bit-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw NumericalError("CsvWriter: cannot open " + path);
  }
  void header(const std::vector<std::string>& cols) { row_strings(cols); }
  void row_strings(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

}  // namespace mslab
