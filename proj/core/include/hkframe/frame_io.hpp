#ifndef HKFRAME_FRAME_IO_HPP
#define HKFRAME_FRAME_IO_HPP

#include <string>

#include "hkframe/frames.hpp"

namespace hkframe {

/// Versioned binary container (.hkf): model descriptor, frame parameters,
/// per-level nets/measures/weights and the spectral data of every element.
/// Round trips are bit-exact (raw IEEE-754, little-endian host assumed).
/// Throws FormatError on a bad magic/version or a short read; a failed load
/// leaves no partial state behind.
struct FrameIO {
  static constexpr std::uint32_t kVersion = 1;
  static void save(const FrameSystem& frame, const std::string& path);
  static FrameSystem load(const std::string& path);
};

inline void save_frame(const FrameSystem& frame, const std::string& path) {
  FrameIO::save(frame, path);
}
inline FrameSystem load_frame(const std::string& path) { return FrameIO::load(path); }

}  // namespace hkframe

#endif
