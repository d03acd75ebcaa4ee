#include "peg/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "peg/common.hpp"

namespace peg {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

CsvBuilder::CsvBuilder(const std::string& comment,
                       const std::vector<std::string>& columns)
    : columns_(columns.size()) {
  content_ = "# " + comment + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) content_ += ',';
    content_ += columns[i];
  }
  content_ += '\n';
}

void CsvBuilder::add_row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_, ErrorCode::LengthMismatch,
          "row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) content_ += ',';
    content_ += cells[i];
  }
  content_ += '\n';
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::ValidationError,
            "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    require(out.good(), ErrorCode::ValidationError,
            "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::ValidationError,
          "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace peg
