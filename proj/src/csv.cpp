#include "smcrep/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace smcrep {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, end);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CsvWriter: empty header");
  row_fields(header);
}

CsvWriter& CsvWriter::row_fields(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) put(i, fields[i]);
  end_row(fields.size());
  return *this;
}

void CsvWriter::separator(std::size_t column) {
  if (column > 0) out_ << ',';
}

void CsvWriter::end_row(std::size_t cells) {
  if (cells != columns_) {
    throw std::logic_error("CsvWriter: row has " + std::to_string(cells) + " cells, header has " +
                           std::to_string(columns_));
  }
  out_ << '\n';
}

}  // namespace smcrep
