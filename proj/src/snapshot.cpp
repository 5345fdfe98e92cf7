#include "kgh/snapshot.hpp"

#include <cstring>
#include <fstream>

namespace kgh {

namespace {

constexpr char kMagic[4] = {'K', 'G', 'H', '1'};

// Explicit little-endian encoding keeps files portable across hosts.
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

double get_f64(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const RealField& f, double t, SnapshotKind kind) {
  std::string header;
  header.append(kMagic, 4);
  put_u32(header, static_cast<std::uint32_t>(f.grid().n()));
  put_f64(header, f.grid().box_length());
  put_f64(header, f.grid().gamma());
  put_f64(header, t);
  header.push_back(static_cast<char>(kind));

  std::string body;
  body.reserve(f.values().size() * 8);
  for (double v : f.values()) put_f64(body, v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("write_snapshot: short write to " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  constexpr std::size_t header_size = 4 + 4 + 8 + 8 + 8 + 1;
  if (data.size() < header_size)
    throw std::runtime_error("read_snapshot: truncated header in " + path);
  if (std::memcmp(data.data(), kMagic, 4) != 0)
    throw std::runtime_error("read_snapshot: bad magic in " + path);

  const std::uint32_t n = get_u32(data.data() + 4);
  const double L = get_f64(data.data() + 8);
  const double gamma = get_f64(data.data() + 16);
  const double t = get_f64(data.data() + 24);
  const std::uint8_t kind = static_cast<std::uint8_t>(data[32]);
  if (kind > 1) throw std::runtime_error("read_snapshot: unknown field kind in " + path);

  GridSpec grid(static_cast<int>(n), L, gamma);
  const std::size_t count = static_cast<std::size_t>(grid.point_count());
  if (data.size() != header_size + 8 * count)
    throw std::runtime_error("read_snapshot: truncated payload in " + path);

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i)
    values[i] = get_f64(data.data() + header_size + 8 * i);
  return Snapshot{RealField(grid, std::move(values)), t, static_cast<SnapshotKind>(kind)};
}

}  // namespace kgh
