#include "hkframe/frame_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "hkframe/errors.hpp"

namespace hkframe {

namespace {

constexpr char kMagic[4] = {'H', 'K', 'F', '1'};

struct Writer {
  std::ofstream out;
  explicit Writer(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw FormatError("cannot open frame file for writing: " + path);
  }
  template <typename T>
  void pod(const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void f64s(const double* p, std::size_t n) {
    if (n) out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  }
  void i32s(const int* p, std::size_t n) {
    if (n) out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(int)));
  }
};

struct Reader {
  std::ifstream in;
  explicit Reader(const std::string& path) : in(path, std::ios::binary) {
    if (!in) throw FormatError("cannot open frame file: " + path);
  }
  template <typename T>
  T pod() {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw FormatError("frame file truncated");
    return v;
  }
  void f64s(double* p, std::size_t n) {
    if (!n) return;
    in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw FormatError("frame file truncated");
  }
  void i32s(int* p, std::size_t n) {
    if (!n) return;
    in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(int)));
    if (!in) throw FormatError("frame file truncated");
  }
};

}  // namespace

void FrameIO::save(const FrameSystem& frame, const std::string& path) {
  Writer w(path);
  w.out.write(kMagic, 4);
  w.pod<std::uint32_t>(kVersion);

  const SpectralModel& m = frame.model();
  w.pod<std::uint8_t>(static_cast<std::uint8_t>(m.kind()));
  w.pod<double>(m.alpha());
  w.pod<double>(m.beta());
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(m.truncation()));
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(m.grid_size()));

  w.pod<std::uint8_t>(static_cast<std::uint8_t>(frame.variant()));
  w.pod<double>(frame.b());
  w.pod<double>(frame.gamma());
  w.pod<double>(frame.cutoff_eps());
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(frame.levels() + 1));

  for (int j = 0; j <= frame.levels(); ++j) {
    const FrameLevel& lvl = frame.level(j);
    w.pod<std::int32_t>(lvl.j);
    w.pod<double>(lvl.delta);
    const std::uint32_t nc = static_cast<std::uint32_t>(lvl.net.size());
    const std::uint32_t gq = static_cast<std::uint32_t>(lvl.net.cell_of_node.size());
    w.pod(nc);
    w.pod(gq);
    w.i32s(lvl.net.center_nodes.data(), nc);
    w.i32s(lvl.net.cell_of_node.data(), gq);
    w.f64s(lvl.net.cell_measures.data(), nc);
    w.pod<std::uint8_t>(lvl.net.weights.empty() ? 0 : 1);
    if (!lvl.net.weights.empty()) w.f64s(lvl.net.weights.data(), nc);
    w.pod<std::int32_t>(lvl.band_lo);
    w.pod<std::int32_t>(lvl.band_hi);
    w.f64s(lvl.psi_mult.data(), static_cast<std::size_t>(lvl.psi_mult.size()));
    w.f64s(lvl.scale.data(), static_cast<std::size_t>(lvl.scale.size()));
    const bool dual = lvl.dual_coeffs.size() > 0;
    w.pod<std::uint8_t>(dual ? 1 : 0);
    if (dual) {
      w.pod<std::int32_t>(lvl.gband_lo);
      w.pod<std::int32_t>(lvl.gband_hi);
      w.f64s(lvl.gamma_mult.data(), static_cast<std::size_t>(lvl.gamma_mult.size()));
      w.f64s(lvl.dual_coeffs.data(), static_cast<std::size_t>(lvl.dual_coeffs.size()));
      w.pod<double>(lvl.r_norm);
      w.pod<double>(lvl.eps_meas);
    }
  }
  if (!w.out) throw FormatError("frame file write failed: " + path);
}

FrameSystem FrameIO::load(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.in.read(magic, 4);
  if (!r.in || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("not a frame file (bad magic): " + path);
  const auto version = r.pod<std::uint32_t>();
  if (version != kVersion)
    throw FormatError("unsupported frame file version " + std::to_string(version));

  const auto kind = static_cast<ModelKind>(r.pod<std::uint8_t>());
  const double alpha = r.pod<double>();
  const double beta = r.pod<double>();
  const int truncation = static_cast<int>(r.pod<std::uint32_t>());
  const int resolution = static_cast<int>(r.pod<std::uint32_t>());
  SpectralModel model = (kind == ModelKind::Torus)
                            ? SpectralModel::torus(truncation, resolution)
                            : SpectralModel::jacobi(alpha, beta, truncation, resolution);

  FrameSystem frame;
  frame.model_ = model;
  frame.variant_ = static_cast<FrameVariant>(r.pod<std::uint8_t>());
  frame.b_ = r.pod<double>();
  frame.gamma_ = r.pod<double>();
  frame.cutoff_eps_ = r.pod<double>();
  const auto nlevels = r.pod<std::uint32_t>();
  frame.levels_.resize(nlevels);
  for (auto& lvl : frame.levels_) {
    lvl.j = r.pod<std::int32_t>();
    lvl.delta = r.pod<double>();
    const auto nc = r.pod<std::uint32_t>();
    const auto gq = r.pod<std::uint32_t>();
    lvl.net.delta = lvl.delta;
    lvl.net.center_nodes.resize(nc);
    lvl.net.cell_of_node.resize(gq);
    lvl.net.cell_measures.resize(nc);
    r.i32s(lvl.net.center_nodes.data(), nc);
    r.i32s(lvl.net.cell_of_node.data(), gq);
    r.f64s(lvl.net.cell_measures.data(), nc);
    lvl.net.centers.resize(nc);
    for (std::uint32_t k = 0; k < nc; ++k)
      lvl.net.centers[k] = model.grid().nodes[static_cast<std::size_t>(lvl.net.center_nodes[k])];
    if (r.pod<std::uint8_t>() != 0) {
      lvl.net.weights.resize(nc);
      r.f64s(lvl.net.weights.data(), nc);
    }
    lvl.band_lo = r.pod<std::int32_t>();
    lvl.band_hi = r.pod<std::int32_t>();
    lvl.psi_mult.resize(lvl.band_hi - lvl.band_lo + 1);
    r.f64s(lvl.psi_mult.data(), static_cast<std::size_t>(lvl.psi_mult.size()));
    lvl.scale.resize(nc);
    r.f64s(lvl.scale.data(), nc);
    if (r.pod<std::uint8_t>() != 0) {
      lvl.gband_lo = r.pod<std::int32_t>();
      lvl.gband_hi = r.pod<std::int32_t>();
      const int glen = lvl.gband_hi - lvl.gband_lo + 1;
      lvl.gamma_mult.resize(glen);
      r.f64s(lvl.gamma_mult.data(), static_cast<std::size_t>(glen));
      lvl.dual_coeffs.resize(glen, nc);
      r.f64s(lvl.dual_coeffs.data(), static_cast<std::size_t>(lvl.dual_coeffs.size()));
      lvl.r_norm = r.pod<double>();
      lvl.eps_meas = r.pod<double>();
    }
  }
  frame.rebuild_offsets();
  return frame;
}

}  // namespace hkframe
