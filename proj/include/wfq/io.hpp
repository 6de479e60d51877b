// =============================================================================
// io.hpp — Output helpers shared by the CLI and the acceptance suite.
//
// Numbers are printed with %.17g so repeated runs produce byte-identical
// files; writes go through a temp file plus rename.
// =============================================================================
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace wfq {

std::string format_double(double v);

// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace wfq
