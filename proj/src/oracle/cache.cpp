#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "diamag/errors.hpp"
#include "diamag/oracle.hpp"

namespace diamag {

namespace {

constexpr char kMagic[8] = {'D', 'I', 'A', 'M', 'A', 'G', 'S', 'D'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  void u(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) os_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f(double v) { u(std::bit_cast<std::uint64_t>(v), 8); }

 private:
  std::ostream& os_;
};

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}
  std::uint64_t u(int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      const int c = is_.get();
      if (c == EOF) throw NumericalError("truncated spectral cache file");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
  }
  double f() { return std::bit_cast<double>(u(8)); }

 private:
  std::istream& is_;
};

}  // namespace

SpectralCache::SpectralCache(std::filesystem::path dir, std::uint64_t stencil_hash)
    : dir_(std::move(dir)), stencil_hash_(stencil_hash) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SpectralCache::path_for(const BoxSpec& b, double omega, bool vectors) const {
  std::ostringstream key;
  key << std::bit_cast<std::uint64_t>(b.side) << ':' << b.transverse_grid << ':'
      << b.longitudinal_modes << ':' << std::bit_cast<std::uint64_t>(omega) << ':' << vectors << ':'
      << stencil_hash_ << ':' << kVersion;
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.spd", static_cast<unsigned long long>(fnv1a(key.str())));
  return dir_ / name;
}

std::optional<SpectralData> SpectralCache::load(const BoxSpec& b, double omega, bool vectors) const {
  const auto file = path_for(b, omega, vectors);
  if (!std::filesystem::exists(file)) return std::nullopt;
  SpectralData s = read(file);
  if (s.box.side != b.side || s.box.transverse_grid != b.transverse_grid ||
      s.box.longitudinal_modes != b.longitudinal_modes || s.omega != omega ||
      s.has_vectors() != vectors)
    return std::nullopt;
  return s;
}

void SpectralCache::store(const SpectralData& s) const {
  const auto file = path_for(s.box, s.omega, s.has_vectors());
  const auto tmp = file.string() + ".tmp";
  write(tmp, s, stencil_hash_);
  std::filesystem::rename(tmp, file);
}

void SpectralCache::write(const std::filesystem::path& file, const SpectralData& s,
                          std::uint64_t stencil_hash) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw ValidationError("cannot open cache file " + file.string());
  os.write(kMagic, sizeof kMagic);
  Writer w(os);
  w.u(kVersion, 4);
  w.f(s.box.side);
  w.u(static_cast<std::uint64_t>(s.box.transverse_grid), 4);
  w.u(static_cast<std::uint64_t>(s.box.longitudinal_modes), 4);
  w.f(s.omega);
  w.f(s.spacing);
  w.u(stencil_hash, 8);
  w.u(static_cast<std::uint64_t>(s.eigenvalues.size()), 8);
  w.u(static_cast<std::uint64_t>(s.eigenvectors.rows()), 8);
  w.u(static_cast<std::uint64_t>(s.eigenvectors.cols()), 8);
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) w.f(s.eigenvalues(i));
  for (Eigen::Index i = 0; i < s.longitudinal.size(); ++i) w.f(s.longitudinal(i));
  for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c)
    for (Eigen::Index r = 0; r < s.eigenvectors.rows(); ++r) {
      w.f(s.eigenvectors(r, c).real());
      w.f(s.eigenvectors(r, c).imag());
    }
  if (!os) throw NumericalError("failed writing cache file " + file.string());
}

SpectralData SpectralCache::read(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw ValidationError("cannot open cache file " + file.string());
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw ValidationError("not a spectral cache file: " + file.string());
  Reader r(is);
  if (r.u(4) != kVersion) throw ValidationError("unsupported spectral cache version");
  SpectralData s;
  s.box.side = r.f();
  s.box.transverse_grid = static_cast<int>(r.u(4));
  s.box.longitudinal_modes = static_cast<int>(r.u(4));
  s.omega = r.f();
  s.spacing = r.f();
  r.u(8);
  const auto ne = static_cast<Eigen::Index>(r.u(8));
  const auto rows = static_cast<Eigen::Index>(r.u(8));
  const auto cols = static_cast<Eigen::Index>(r.u(8));
  s.eigenvalues.resize(ne);
  for (Eigen::Index i = 0; i < ne; ++i) s.eigenvalues(i) = r.f();
  s.longitudinal.resize(s.box.longitudinal_modes);
  for (Eigen::Index i = 0; i < s.longitudinal.size(); ++i) s.longitudinal(i) = r.f();
  s.eigenvectors.resize(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index q = 0; q < rows; ++q) {
      const double re = r.f();
      s.eigenvectors(q, c) = {re, r.f()};
    }
  return s;
}

}  // namespace diamag
