#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace jiffy {

enum class Errc {
  invalid_argument,
  shape_mismatch,
  truncated,
  corrupt,
  bad_magic,
  unsupported_version,
  crc_mismatch,
  unknown_codec,
  missing_reference,
  io,
};

const char* to_string(Errc code) noexcept;

// Every failure in the library is reported through this type. Stream-level
// errors carry the index of the frame where they were detected.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Error(Errc code, const std::string& what, std::size_t frame)
      : std::runtime_error(what), code_(code), frame_(frame) {}

  Errc code() const noexcept { return code_; }
  const std::optional<std::size_t>& frame() const noexcept { return frame_; }

  Error at_frame(std::size_t frame) const {
    return Error(code_, std::string(what()), frame);
  }

 private:
  Errc code_;
  std::optional<std::size_t> frame_;
};

}  // namespace jiffy
