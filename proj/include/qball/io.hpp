#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qball/common.hpp"

namespace qball::io {

/// Full-precision text form of a double ("%.17g"), enough to round-trip.
std::string format_double(double v);

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

/// CSV with a header row and 17-significant-digit values, written column by
/// column in a fixed order so identical data gives identical bytes.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<ArrayXd>& columns);

struct CsvData {
  std::vector<std::string> header;
  std::vector<ArrayXd> columns;
  Index rows = 0;
  const ArrayXd& column(const std::string& name) const;
};

/// Re-parses a CSV written by write_csv.
CsvData read_csv(const std::filesystem::path& path);

/// Ordered key = value manifest with a checksum line per emitted data file.
class Manifest {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long value);
  void add(const std::string& key, bool value);
  void note(const std::string& text);
  void add_file(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> lines_;
};

}  // namespace qball::io
