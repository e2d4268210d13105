#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace af::io {

// shortest decimal representation that round-trips a double (%.17g)
std::string fmt_g17(double v);

// fixed-size integer fields
std::string fmt_u(std::uint64_t v);
std::string fmt_i(std::int64_t v);

// writes content atomically-ish (truncate + write + flush); throws af::Error
// on failure
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

// FNV-1a 64-bit hash, used to fingerprint configurations in run manifests
std::uint64_t fnv1a(std::string_view s);

// join CSV cells with commas; no quoting (cells are numeric or simple labels)
std::string csv_row(const std::vector<std::string>& cells);

} // namespace af::io
