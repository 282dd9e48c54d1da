#pragma once

// Declarations for the stable subset of the Zstandard API, used when the
// runtime library is present without its development header.
#if defined(JIFFY_ZSTD_HEADER)
#include <zstd.h>
#elif defined(JIFFY_ZSTD_RUNTIME)
#include <cstddef>
extern "C" {
std::size_t ZSTD_compress(void* dst, std::size_t dst_capacity, const void* src,
                          std::size_t src_size, int level);
std::size_t ZSTD_decompress(void* dst, std::size_t dst_capacity, const void* src,
                            std::size_t compressed_size);
std::size_t ZSTD_compressBound(std::size_t src_size);
unsigned ZSTD_isError(std::size_t code);
const char* ZSTD_getErrorName(std::size_t code);
}
#endif
