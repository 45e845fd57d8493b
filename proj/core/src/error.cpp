// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#include "medifact/error.hpp"

namespace medifact {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kSchema: return "schema error";
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kRegistry: return "registry error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kTrainingData: return "training-data error";
    case ErrorKind::kDegenerateData: return "degenerate-data error";
    case ErrorKind::kState: return "state error";
    case ErrorKind::kRetrieval: return "retrieval error";
    case ErrorKind::kSelection: return "selection error";
    case ErrorKind::kMetric: return "metric error";
    case ErrorKind::kGeneration: return "generation error";
    case ErrorKind::kTranslation: return "translation error";
    case ErrorKind::kProvider: return "provider error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> byte_offset)
    : std::runtime_error(message), kind_(kind), byte_offset_(byte_offset) {}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kGeneration:
    case ErrorKind::kTranslation:
    case ErrorKind::kProvider:
      return kExitProvider;
    default:
      return kExitValidation;
  }
}

}  // namespace medifact
