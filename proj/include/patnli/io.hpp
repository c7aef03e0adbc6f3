/*
 * Copyright 2026 The patnli Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PATNLI_IO_HPP_
#define PATNLI_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace patnli {

// Throws Error when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it over `path`, so readers never
// see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

// RFC 4180 style CSV: quoted fields may contain commas, quotes ("") and
// newlines. Throws ParseError on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_field(std::string_view value);

}  // namespace patnli

#endif  // PATNLI_IO_HPP_
