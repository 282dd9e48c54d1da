#include "jiffy/container.hpp"

#include <zlib.h>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace jiffy {

std::uint32_t crc32(ByteView bytes) noexcept {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
    crc = ::crc32(crc, bytes.data() + pos, n);
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::size_t max_frame_payload(const StreamHeader& header) noexcept {
  return 16 * std::size_t{header.rows} * header.cols + 4096;
}

void StreamHeader::validate() const {
  if (rows == 0 || cols == 0) throw Error(Errc::invalid_argument, "stream shape must be nonzero");
  if (!scan_type_from_u8(static_cast<std::uint8_t>(scan_type)))
    throw Error(Errc::invalid_argument, "unknown scan type");
  if (!sample_width_from_u8(static_cast<std::uint8_t>(width)))
    throw Error(Errc::invalid_argument, "sample width must be 1, 2 or 4");
  if (precision_um == 0) throw Error(Errc::invalid_argument, "precision must be at least 1 um");
  if (!codec_available(mask_codec)) throw Error(Errc::unknown_codec, "mask codec is not available");
}

Bytes StreamHeader::serialize() const {
  validate();
  Bytes out(kStreamMagic.begin(), kStreamMagic.end());
  out.push_back(kStreamVersion);
  out.push_back(static_cast<std::uint8_t>(scan_type));
  put_u16le(out, rows);
  put_u16le(out, cols);
  out.push_back(static_cast<std::uint8_t>(width));
  put_u32le(out, precision_um);
  out.push_back(static_cast<std::uint8_t>(mask_codec));
  put_u32le(out, frame_count);
  put_u32le(out, crc32(out));
  return out;
}

StreamHeader StreamHeader::parse(ByteView bytes) {
  ByteReader in(bytes);
  const ByteView magic = in.bytes(kStreamMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kStreamMagic.begin()))
    throw Error(Errc::bad_magic, "not a jiffy stream (bad magic)");
  const std::uint8_t version = in.u8();
  if (version != kStreamVersion)
    throw Error(Errc::unsupported_version, "unsupported stream version " + std::to_string(version));
  if (bytes.size() >= kStreamHeaderSize) {
    ByteReader tail(bytes.subspan(kStreamHeaderSize - 4, 4));
    if (crc32(bytes.first(kStreamHeaderSize - 4)) != tail.u32le())
      throw Error(Errc::crc_mismatch, "stream header checksum mismatch");
  }
  StreamHeader h;
  const auto type = scan_type_from_u8(in.u8());
  if (!type) throw Error(Errc::corrupt, "unknown scan type in header");
  h.scan_type = *type;
  h.rows = in.u16le();
  h.cols = in.u16le();
  if (h.rows == 0 || h.cols == 0) throw Error(Errc::corrupt, "zero-sized shape in header");
  const auto width = sample_width_from_u8(in.u8());
  if (!width) throw Error(Errc::corrupt, "invalid sample width in header");
  h.width = *width;
  h.precision_um = in.u32le();
  if (h.precision_um == 0) throw Error(Errc::corrupt, "zero precision in header");
  const std::uint8_t codec_id = in.u8();
  const auto codec = byte_codec_from_u8(codec_id);
  if (!codec) throw Error(Errc::unknown_codec, "unknown mask codec id " + std::to_string(codec_id));
  h.mask_codec = *codec;
  h.frame_count = in.u32le();
  in.u32le();  // checksum, verified above
  return h;
}

// ---------------------------------------------------------------------------

StreamWriter::StreamWriter(std::ostream& out, const StreamHeader& header)
    : out_(out), header_(header) {
  const Bytes bytes = header_.serialize();
  out_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out_) throw Error(Errc::io, "failed to write stream header");
  bytes_ = bytes.size();
}

void StreamWriter::write(const EncodedScan& scan) { write_payload(scan.serialize()); }

void StreamWriter::write_payload(ByteView payload) {
  if (header_.frame_count != kUnknownFrameCount && frames_ >= header_.frame_count)
    throw Error(Errc::invalid_argument, "more frames than the header declares");
  if (payload.size() > max_frame_payload(header_))
    throw Error(Errc::invalid_argument, "frame payload exceeds the format limit");
  Bytes record;
  record.reserve(kFrameRecordOverhead);
  put_u32le(record, static_cast<std::uint32_t>(payload.size()));
  put_u32le(record, crc32(payload));
  out_.write(reinterpret_cast<const char*>(record.data()), static_cast<std::streamsize>(record.size()));
  out_.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!out_) throw Error(Errc::io, "failed to write frame", frames_);
  ++frames_;
  bytes_ += record.size() + payload.size();
}

void StreamWriter::finish() {
  if (header_.frame_count != kUnknownFrameCount && frames_ != header_.frame_count)
    throw Error(Errc::invalid_argument, "header declares " + std::to_string(header_.frame_count) +
                                            " frames but " + std::to_string(frames_) +
                                            " were written");
  out_.flush();
  if (!out_) throw Error(Errc::io, "failed to flush stream");
}

// ---------------------------------------------------------------------------

StreamReader::StreamReader(std::istream& in) : in_(in) {
  Bytes buf(kStreamHeaderSize);
  in_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  buf.resize(static_cast<std::size_t>(in_.gcount()));
  header_ = StreamHeader::parse(buf);
}

std::optional<Bytes> StreamReader::next_payload() {
  if (header_.frame_count != kUnknownFrameCount && frames_ >= header_.frame_count)
    return std::nullopt;

  Bytes record(kFrameRecordOverhead);
  in_.read(reinterpret_cast<char*>(record.data()), static_cast<std::streamsize>(record.size()));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0 && header_.frame_count == kUnknownFrameCount) return std::nullopt;
  if (got < record.size())
    throw Error(Errc::truncated, "stream ends inside frame " + std::to_string(frames_) + " header",
                frames_);

  ByteReader rec(record);
  const std::uint32_t len = rec.u32le();
  const std::uint32_t expected_crc = rec.u32le();
  if (len > max_frame_payload(header_))
    throw Error(Errc::corrupt, "frame " + std::to_string(frames_) + " length " +
                                   std::to_string(len) + " exceeds the format limit",
                frames_);

  Bytes payload(len);
  in_.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in_.gcount()) < len)
    throw Error(Errc::truncated, "stream ends inside frame " + std::to_string(frames_), frames_);
  if (crc32(payload) != expected_crc)
    throw Error(Errc::crc_mismatch, "checksum mismatch in frame " + std::to_string(frames_),
                frames_);
  ++frames_;
  return payload;
}

std::optional<EncodedScan> StreamReader::next() {
  const std::size_t index = frames_;
  auto payload = next_payload();
  if (!payload) return std::nullopt;
  try {
    return EncodedScan::parse(*payload);
  } catch (const Error& e) {
    throw e.at_frame(index);
  }
}

// ---------------------------------------------------------------------------

Bytes write_stream(const StreamHeader& header, std::span<const EncodedScan> frames) {
  std::ostringstream os(std::ios::binary);
  StreamWriter writer(os, header);
  for (const EncodedScan& f : frames) writer.write(f);
  writer.finish();
  const std::string s = std::move(os).str();
  return Bytes(s.begin(), s.end());
}

StreamContents read_stream(ByteView bytes) {
  std::istringstream is(std::string(bytes.begin(), bytes.end()), std::ios::binary);
  StreamReader reader(is);
  StreamContents contents{reader.header(), {}};
  while (auto frame = reader.next()) contents.frames.push_back(std::move(*frame));
  if (is.peek() != std::char_traits<char>::eof())
    throw Error(Errc::corrupt, "trailing bytes after the last declared frame");
  return contents;
}

}  // namespace jiffy
