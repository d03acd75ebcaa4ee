#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace peg {

// Shortest decimal that round-trips the exact 64-bit value.
std::string format_double(double value);

// CSV content accumulator: one leading comment line, a header row, then
// data rows. Cells are joined with commas and never quoted (no cell in this
// project contains a comma).
class CsvBuilder {
 public:
  CsvBuilder(const std::string& comment,
             const std::vector<std::string>& columns);

  void add_row(const std::vector<std::string>& cells);
  const std::string& content() const { return content_; }

 private:
  std::size_t columns_;
  std::string content_;
};

// Writes via a temp file in the same directory followed by rename, so the
// target is either fully written or absent.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace peg
