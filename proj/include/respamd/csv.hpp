#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "respamd/types.hpp"

namespace respamd {

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Comma-separated file with a fixed header. Fields are written verbatim.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value) { return field(format_double(value)); }
  CsvWriter& field(long value) { return field(std::to_string(value)); }
  CsvWriter& field(int value) { return field(std::to_string(value)); }
  void end_row();

  /// Flushes and reports write failures.
  void close();

 private:
  template <typename Header>
  void open(const Header& header);
  void check() const;

  std::filesystem::path path_;
  std::ofstream out_;
  std::string row_;
  std::size_t columns_;
  std::size_t pending_{0};
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws ValidationError naming the column.
  std::size_t column(std::string_view name) const;
  std::vector<double> numbers(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace respamd
