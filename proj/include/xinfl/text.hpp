#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace xinfl {

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Splits text into lines. CRLF is normalized to LF, a leading UTF-8 BOM is
// dropped, and a trailing newline does not produce an extra empty line.
std::vector<std::string> split_lines(std::string_view text);

bool iless(std::string_view a, std::string_view b);

// Whole-file I/O. The path "-" means stdin/stdout.
std::string read_text(const std::string& path);
void write_text(const std::string& path, std::string_view data);

// Number of bytes of the longest common prefix of a and b that ends on a
// UTF-8 code point boundary.
std::size_t common_prefix_bytes(std::string_view a, std::string_view b);

bool starts_upper(std::string_view s);
bool starts_lower(std::string_view s);
std::string capitalize_first(std::string_view s);
std::string lowercase(std::string_view s);
// Last / first `count` code points (the whole string when shorter).
std::string utf8_suffix(std::string_view s, std::size_t count);
std::string utf8_prefix(std::string_view s, std::size_t count);

// Warnings go to stderr unless silenced (tests silence them).
void warn(std::string_view message);
void set_warnings_enabled(bool enabled);

}  // namespace xinfl
