#include "effcap/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace effcap {

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& metadata,
                     const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
  for (const auto& line : metadata) out_ << "# " << line << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_columns_)
    throw std::runtime_error("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << format(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_with_label(const std::string& label, const std::vector<double>& values) {
  if (values.size() + 1 != n_columns_)
    throw std::runtime_error("CsvWriter: row width mismatch");
  out_ << label;
  for (double v : values) out_ << "," << format(v);
  out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_)
    throw std::runtime_error("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

}  // namespace effcap
