#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ek {

// EKF1 container: 8-byte magic "EKFLD1\0\0", u64-LE header length, UTF-8 JSON
// header {dims, spacing, fields, t?, c?}, then row-major little-endian f64
// payload per field in declared order. Round trips are bit identical.
struct FieldFile {
  std::vector<long long> dims;
  std::vector<double> spacing;
  std::vector<std::string> field_names;
  std::vector<std::vector<double>> payload;  // one flat array per field
  std::optional<double> t;
  std::optional<double> c;
};

void write_field_ekf1(const FieldFile& f, const std::string& path);
FieldFile read_field_ekf1(const std::string& path);

}  // namespace ek
