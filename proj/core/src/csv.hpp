// Copyright 2026 The MediFact Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MEDIFACT_SRC_CSV_HPP_
#define MEDIFACT_SRC_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace medifact::csv {

// RFC 4180 records: quoted fields, "" escapes, CRLF or LF line ends. A UTF-8
// BOM is skipped and blank lines are dropped. Throws Error(kParse) on an
// unterminated quote.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace medifact::csv

#endif  // MEDIFACT_SRC_CSV_HPP_
