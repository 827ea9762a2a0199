#pragma once

#include <filesystem>
#include <string_view>

namespace tdabm {

/// Writes `content` to a sibling temporary file and renames it over `path`.
/// On failure the temporary file is removed and the target is left untouched.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace tdabm
