#include "qball/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qball::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<ArrayXd>& columns) {
  if (header.size() != columns.size())
    throw std::invalid_argument("csv header/column count mismatch");
  const Index rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw std::invalid_argument("csv columns differ in length");

  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << "\n";
  for (Index i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      out << (j ? "," : "") << format_double(columns[j](i));
    out << "\n";
  }
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

const ArrayXd& CsvData::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return columns[j];
  throw std::invalid_argument("csv column not found: " + name);
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  CsvData data;
  std::string line;
  if (!std::getline(in, line)) throw std::ios_base::failure("empty csv: " + path.string());
  {
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) data.header.push_back(cell);
  }
  std::vector<std::vector<double>> cols(data.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::size_t j = 0;
    while (std::getline(ss, cell, ',')) {
      if (j >= cols.size()) throw std::ios_base::failure("ragged csv row in " + path.string());
      cols[j++].push_back(std::stod(cell));
    }
    if (j != cols.size()) throw std::ios_base::failure("short csv row in " + path.string());
  }
  data.rows = cols.empty() ? 0 : static_cast<Index>(cols.front().size());
  for (auto& c : cols) {
    ArrayXd a(static_cast<Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) a(static_cast<Index>(i)) = c[i];
    data.columns.push_back(std::move(a));
  }
  return data;
}

void Manifest::add(const std::string& key, const std::string& value) {
  lines_.push_back(key + " = " + value);
}
void Manifest::add(const std::string& key, double value) {
  lines_.push_back(key + " = " + format_double(value));
}
void Manifest::add(const std::string& key, long value) {
  lines_.push_back(key + " = " + std::to_string(value));
}
void Manifest::add(const std::string& key, bool value) {
  lines_.push_back(key + " = " + (value ? "true" : "false"));
}
void Manifest::note(const std::string& text) { lines_.push_back("# " + text); }

void Manifest::add_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot checksum " + path.string());
  std::ostringstream bytes;
  bytes << in.rdbuf();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes.str())));
  lines_.push_back("file." + path.filename().string() + ".fnv1a64 = " + buf);
}

void Manifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  for (const auto& l : lines_) out << l << "\n";
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

}  // namespace qball::io
