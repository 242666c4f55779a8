#include "ek/ekf1.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "ek/errors.hpp"

namespace ek {

namespace {
constexpr char kMagic[8] = {'E', 'K', 'F', 'L', 'D', '1', '\0', '\0'};

void put_u64le(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw Error(Err::TruncatedPayload, "file ends inside the header length");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

bool little_endian() {
  const std::uint16_t probe = 1;
  return *reinterpret_cast<const unsigned char*>(&probe) == 1;
}

void write_doubles_le(std::ostream& os, const std::vector<double>& v) {
  if (little_endian()) {
    os.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * 8));
    return;
  }
  for (double d : v) {
    std::uint64_t u;
    std::memcpy(&u, &d, 8);
    put_u64le(os, u);
  }
}

void read_doubles_le(std::istream& is, std::vector<double>& v) {
  if (little_endian()) {
    is.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * 8));
    if (!is) throw Error(Err::TruncatedPayload, "file ends inside the payload");
    return;
  }
  for (auto& d : v) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw Error(Err::TruncatedPayload, "file ends inside the payload");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= std::uint64_t(b[i]) << (8 * i);
    std::memcpy(&d, &u, 8);
  }
}
}  // namespace

void write_field_ekf1(const FieldFile& f, const std::string& path) {
  if (f.field_names.size() != f.payload.size())
    throw Error(Err::ValidationError, "field list and payload count differ");
  std::size_t cells = 1;
  for (auto d : f.dims) cells *= std::size_t(d);
  for (const auto& arr : f.payload)
    if (arr.size() != cells)
      throw Error(Err::ValidationError, "payload size does not match dims");

  nlohmann::json hdr;
  hdr["dims"] = f.dims;
  hdr["spacing"] = f.spacing;
  hdr["fields"] = f.field_names;
  if (f.t) hdr["t"] = *f.t;
  if (f.c) hdr["c"] = *f.c;
  const std::string hs = hdr.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Err::IoError, "cannot open for writing: " + path);
  os.write(kMagic, 8);
  put_u64le(os, hs.size());
  os.write(hs.data(), std::streamsize(hs.size()));
  for (const auto& arr : f.payload) write_doubles_le(os, arr);
  if (!os) throw Error(Err::IoError, "short write: " + path);
}

FieldFile read_field_ekf1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Err::IoError, "cannot open for reading: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw Error(Err::BadMagic, "not an EKF1 file: " + path);
  const auto hlen = get_u64le(is);
  std::string hs(hlen, '\0');
  is.read(hs.data(), std::streamsize(hlen));
  if (!is) throw Error(Err::TruncatedPayload, "file ends inside the JSON header");
  nlohmann::json hdr;
  try {
    hdr = nlohmann::json::parse(hs);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Err::HeaderMismatch, std::string("bad EKF1 header: ") + e.what());
  }
  FieldFile f;
  try {
    f.dims = hdr.at("dims").get<std::vector<long long>>();
    f.spacing = hdr.at("spacing").get<std::vector<double>>();
    f.field_names = hdr.at("fields").get<std::vector<std::string>>();
    if (hdr.contains("t")) f.t = hdr["t"].get<double>();
    if (hdr.contains("c")) f.c = hdr["c"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Err::HeaderMismatch, std::string("bad EKF1 header: ") + e.what());
  }
  std::size_t cells = 1;
  for (auto d : f.dims) {
    if (d <= 0) throw Error(Err::HeaderMismatch, "nonpositive dimension");
    cells *= std::size_t(d);
  }
  f.payload.resize(f.field_names.size());
  for (auto& arr : f.payload) {
    arr.resize(cells);
    read_doubles_le(is, arr);
  }
  // must be exactly at EOF now
  char probe;
  is.read(&probe, 1);
  if (!is.eof()) throw Error(Err::TruncatedPayload, "trailing bytes after payload");
  return f;
}

}  // namespace ek
