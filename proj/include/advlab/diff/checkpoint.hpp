#pragma once

#include "advlab/diff/param_store.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace advlab::diff {

/// Binary checkpoint container:
///   magic "ADVLCKPT", u32 version, u64 step_count, u32 metadata length + bytes,
///   u32 entry count, then per entry: u32 name length + name, u32 rank,
///   u64 dims[rank], f64 values (column-major, little-endian).
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const ParamStore& params, const std::string& metadata);
void save_checkpoint(const std::filesystem::path& path, const ParamStore& params, const std::string& metadata);

/// Loads values into an existing store with matching names and shapes.
/// Returns the metadata string.
std::string read_checkpoint(std::istream& in, ParamStore& params);
std::string load_checkpoint(const std::filesystem::path& path, ParamStore& params);

/// Reads only the metadata block.
std::string read_checkpoint_metadata(const std::filesystem::path& path);

}  // namespace advlab::diff
