#pragma once

#include <stdexcept>
#include <string>

namespace affract {

/// Frame or neighborhood whose defining vectors are linearly dependent.
struct degenerate_frame_error : std::domain_error {
  explicit degenerate_frame_error(const std::string& what)
      : std::domain_error(what) {}
};

/// Malformed input document (JSON frames, meshes, matrix files).
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure while writing or reading artifacts.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace affract
