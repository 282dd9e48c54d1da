#include "jiffy/error.hpp"

namespace jiffy {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::truncated: return "truncated";
    case Errc::corrupt: return "corrupt stream";
    case Errc::bad_magic: return "bad magic";
    case Errc::unsupported_version: return "unsupported version";
    case Errc::crc_mismatch: return "checksum mismatch";
    case Errc::unknown_codec: return "unknown codec";
    case Errc::missing_reference: return "missing reference scan";
    case Errc::io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace jiffy
