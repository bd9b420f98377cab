#include "respamd/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

namespace respamd {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error("could not format a double");
  return std::string(buf, end);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : path_(path), columns_(header.size()) {
  open(header);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  open(header);
}

template <typename Header>
void CsvWriter::open(const Header& header) {
  out_.open(path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open " + path_.string() + " for writing");
  for (std::string_view h : header) field(h);
  end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
  if (pending_ == columns_) throw Error("too many fields in a row of " + path_.string());
  if (pending_ > 0) row_ += ',';
  row_ += text;
  ++pending_;
  return *this;
}

// A rejected row is discarded so the file never holds a malformed line.
void CsvWriter::end_row() {
  const std::size_t fields = pending_;
  pending_ = 0;
  if (fields != columns_) {
    row_.clear();
    throw Error("incomplete row in " + path_.string());
  }
  row_ += '\n';
  out_ << row_;
  row_.clear();
  check();
}

void CsvWriter::close() {
  out_.flush();
  check();
  out_.close();
}

void CsvWriter::check() const {
  if (!out_) throw IoError("write failed for " + path_.string());
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return c;
  throw ValidationError("missing CSV column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numbers(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const std::string& text = row.at(c);
    double v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size())
      throw ValidationError("non-numeric value '" + text + "' in column '" + std::string(name) + "'");
    out.push_back(v);
  }
  return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + " is empty");
  table.header = split_fields(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_fields(line);
    if (row.size() != table.header.size())
      throw ValidationError(path.string() + ": row has " + std::to_string(row.size()) + " fields, header has " +
                            std::to_string(table.header.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace respamd
