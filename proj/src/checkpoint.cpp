#include "imaginenet/nn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

namespace imagine::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'I', 'M', 'N', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_str(std::ostream& os, const std::string& s) {
  write_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::string read_str(std::istream& is) {
  const std::uint64_t n = read_u64(is);
  if (n > (1ull << 32)) throw ValidationError("checkpoint: implausible string length");
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  return s;
}

}  // namespace

const ParamTensor* Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ValidationError("checkpoint: cannot open " + path + " for writing");
  os.write(kMagic, sizeof kMagic);
  write_u32(os, kVersion);
  write_str(os, ckpt.meta);
  write_u64(os, ckpt.tensors.size());
  for (const auto& t : ckpt.tensors) {
    write_str(os, t.name);
    write_u64(os, static_cast<std::uint64_t>(t.value.rows()));
    write_u64(os, static_cast<std::uint64_t>(t.value.cols()));
    os.write(reinterpret_cast<const char*>(t.value.data()),
             static_cast<std::streamsize>(sizeof(double) * t.value.size()));
  }
  if (!os) throw ValidationError("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || !std::equal(magic, magic + 8, kMagic))
    throw ValidationError("checkpoint: bad magic in " + path);
  if (read_u32(is) != kVersion) throw ValidationError("checkpoint: unsupported version");
  Checkpoint ckpt;
  ckpt.meta = read_str(is);
  const std::uint64_t count = read_u64(is);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = read_str(is);
    const auto rows = static_cast<Eigen::Index>(read_u64(is));
    const auto cols = static_cast<Eigen::Index>(read_u64(is));
    ParamTensor t(std::move(name), rows, cols);
    is.read(reinterpret_cast<char*>(t.value.data()),
            static_cast<std::streamsize>(sizeof(double) * t.value.size()));
    if (!is) throw ValidationError("checkpoint: truncated tensor data in " + path);
    ckpt.tensors.push_back(std::move(t));
  }
  return ckpt;
}

std::uint64_t file_hash(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("file_hash: cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (is.read(buf, sizeof buf) || is.gcount() > 0)
    h = fnv1a64(buf, static_cast<std::size_t>(is.gcount()), h);
  return h;
}

}  // namespace imagine::nn
