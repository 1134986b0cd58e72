#pragma once

#include <json.hpp>

#include <string>

namespace fracspec {

inline constexpr const char* kVersion = "0.1.0";

// 17 significant digits, C locale; non-finite values become "inf", "-inf",
// or "nan" tokens.
std::string format_sci(double v);

// Writes bytes as-is (binary mode, LF endings preserved); throws
// std::runtime_error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

// some/table.csv -> some/table.meta.json
std::string meta_path_for(const std::string& csv_path);

// Writes the sibling metadata file: the parameter echo plus the artifact
// version, pretty-printed with sorted keys and a trailing newline.
void write_meta(const std::string& csv_path, nlohmann::json params);

}  // namespace fracspec
