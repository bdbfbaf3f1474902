#pragma once

// RFC 4180 CSV text with LF line endings and locale-free number formatting.

#include <concepts>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace smcrep {

/// Shortest decimal that round-trips; "nan", "inf" and "-inf" otherwise.
std::string format_double(double x);

/// Quotes a field when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  template <class... Cells>
  CsvWriter& row(const Cells&... cells) {
    std::size_t column = 0;
    (put(column++, cells), ...);
    end_row(column);
    return *this;
  }

  /// Row from pre-formatted fields.
  CsvWriter& row_fields(const std::vector<std::string>& fields);

  std::size_t columns() const noexcept { return columns_; }
  std::string str() const { return out_.str(); }

 private:
  void separator(std::size_t column);
  void end_row(std::size_t cells);

  void put(std::size_t column, std::string_view text) { separator(column), out_ << csv_field(text); }
  void put(std::size_t column, const std::string& text) { put(column, std::string_view(text)); }
  void put(std::size_t column, const char* text) { put(column, std::string_view(text)); }
  void put(std::size_t column, double x) { separator(column), out_ << format_double(x); }
  void put(std::size_t column, bool x) { separator(column), out_ << (x ? "true" : "false"); }
  template <std::integral T>
  void put(std::size_t column, T x) {
    separator(column), out_ << std::to_string(x);
  }
  template <class T>
  void put(std::size_t column, const std::optional<T>& x) {
    if (x) {
      put(column, *x);
    } else {
      separator(column);
    }
  }

  std::size_t columns_;
  std::ostringstream out_;
};

}  // namespace smcrep
