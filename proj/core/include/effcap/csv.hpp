#ifndef EFFCAP_CSV_HPP
#define EFFCAP_CSV_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace effcap {

/// CSV emitter: '#'-prefixed metadata lines, a column-name row, then data
/// rows. Number formatting is fixed (%.12g) so identical inputs produce
/// byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& metadata,
            const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void row_with_label(const std::string& label, const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

  static std::string format(double v);

 private:
  std::ofstream out_;
  std::size_t n_columns_;
};

}  // namespace effcap

#endif
