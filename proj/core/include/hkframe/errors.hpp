#ifndef HKFRAME_ERRORS_HPP
#define HKFRAME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hkframe {

/// Invalid parameters or configuration (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A multiplier or function was evaluated outside its domain.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Input with zero norm where a ratio is requested.
struct DegenerateInputError : std::runtime_error {
  explicit DegenerateInputError(const std::string& what) : std::runtime_error(what) {}
};

/// Cubature weight solve produced a nonpositive weight or violated the
/// two-sided bracket; carries the offending center index.
struct CubatureError : std::runtime_error {
  CubatureError(const std::string& what, int center) : std::runtime_error(what), offending_center(center) {}
  int offending_center;
};

/// Dual construction aborted because the measured operator norm of R
/// reached 1/2; retry with a smaller gamma.
struct DualConstructionError : std::runtime_error {
  DualConstructionError(const std::string& what, double r_norm) : std::runtime_error(what), r_norm(r_norm) {}
  double r_norm;
};

/// Mismatched index sets between a frame and a coefficient set.
struct ContractError : std::runtime_error {
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

/// Corrupt or incompatible frame file.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

struct ConstructionError : std::runtime_error {
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hkframe

#endif
