#include "wavegeom/report.hpp"

#include <fstream>
#include <sstream>

#include "wavegeom/errors.hpp"

namespace wavegeom {

std::string json_dump(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  std::string line;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) line += ",";
    line += header[i];
  }
  buffer_ = line + "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw SchemaMismatchError("csv row width " + std::to_string(cells.size()) +
                              " does not match header width " + std::to_string(columns_));
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ",";
    line += cells[i];
  }
  buffer_ += line + "\n";
  ++rows_;
}

std::string CsvWriter::cell(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string CsvWriter::cell(int v) { return std::to_string(v); }

void CsvWriter::write(const std::string& path) const { write_text_file(path, buffer_); }

CsvTable read_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  CsvTable table;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (first) {
      table.header = cells;
      first = false;
    } else {
      if (cells.size() != table.header.size())
        throw SchemaMismatchError("csv row width mismatch in '" + path + "'");
      table.rows.push_back(cells);
    }
  }
  if (first) throw SchemaMismatchError("csv file '" + path + "' has no header row");
  return table;
}

}  // namespace wavegeom
