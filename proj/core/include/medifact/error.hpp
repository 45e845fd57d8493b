// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_ERROR_HPP_
#define MEDIFACT_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace medifact {

enum class ErrorKind {
  kParse,
  kValidation,
  kSchema,
  kConfig,
  kIo,
  kRegistry,
  kInput,
  kTrainingData,
  kDegenerateData,
  kState,
  kRetrieval,
  kSelection,
  kMetric,
  kGeneration,
  kTranslation,
  kProvider,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> byte_offset = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  // Set for parse errors only.
  std::optional<std::size_t> byte_offset() const noexcept { return byte_offset_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> byte_offset_;
};

// CLI exit codes: 0 success, 1 validation, 2 I/O, 3 provider failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitProvider = 3;

int exit_code_for(ErrorKind kind);

}  // namespace medifact

#endif  // MEDIFACT_ERROR_HPP_
