#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace bibscreen::io {

/// Write `contents` to `path` through a temporary sibling file and a rename,
/// so readers never observe a partially written file.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace bibscreen::io
