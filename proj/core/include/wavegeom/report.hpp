#ifndef WAVEGEOM_REPORT_HPP
#define WAVEGEOM_REPORT_HPP

// Reporting plumbing shared by the pipelines: deterministic JSON (stable key
// order, newline-terminated dump), the CSV dialect (comma, UTF-8, header
// row) and a stable config hash.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace wavegeom {

using Json = nlohmann::ordered_json;

std::string json_dump(const Json& j);
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::uint64_t fnv1a_hash(const std::string& text);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  static std::string cell(double v);
  static std::string cell(int v);
  const std::string& str() const { return buffer_; }
  void write(const std::string& path) const;
  std::size_t rows() const { return rows_; }

 private:
  std::string buffer_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace wavegeom

#endif
