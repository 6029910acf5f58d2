#pragma once

#include <filesystem>

#include "ariel/encoder.hpp"

namespace ariel {

/// Binary checkpoint layout (little-endian):
///   magic "ARIELCKP", u32 version (= 1), u64 × 4 architecture dims
///   (input, hidden, embed, proj), then for each of w1, w2, p1, b1, p2, b2:
///   u64 rows, u64 cols, rows·cols IEEE-754 doubles.
/// Round trips are bit-exact.
void save_checkpoint(const EncoderParams& params, const std::filesystem::path& path);
EncoderParams load_checkpoint(const std::filesystem::path& path);

/// JSON form {"architecture": {...}, "format": "ariel-checkpoint", "version": 1,
/// "tensors": {"w1": {"rows":…, "cols":…, "data": [...]}, ...}}.
void save_checkpoint_json(const EncoderParams& params, const std::filesystem::path& path);
EncoderParams load_checkpoint_json(const std::filesystem::path& path);

/// Dispatches on the file's leading bytes.
EncoderParams load_checkpoint_any(const std::filesystem::path& path);

}  // namespace ariel
