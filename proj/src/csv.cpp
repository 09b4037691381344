#include "dissiplab/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "dissiplab/errors.hpp"

namespace dissiplab {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw Error("csv row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

void write_text_file(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory for " + path + ": " + ec.message());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace dissiplab
