#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dissiplab {

/// 17 significant digits, '.' decimal, independent of the locale.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::string& path, std::string_view content);

}  // namespace dissiplab
