// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_HASHING_HPP_
#define MEDIFACT_HASHING_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace medifact {

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
// Throws Error(kIo) if the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace medifact

#endif  // MEDIFACT_HASHING_HPP_
