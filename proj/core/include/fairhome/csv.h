// Copyright 2026 The FairHOME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRHOME_CSV_H_
#define FAIRHOME_CSV_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fairhome::csv {

// Reads one record. Handles double-quoted fields with "" escapes and both
// \n and \r\n line ends. Returns nullopt at end of input.
std::optional<std::vector<std::string>> ReadRow(std::istream& in);

// Quotes a field only when it contains a comma, quote or line break.
std::string Escape(std::string_view field);

void WriteRow(std::ostream& out, const std::vector<std::string>& fields);

std::string_view Trim(std::string_view text);

}  // namespace fairhome::csv

#endif  // FAIRHOME_CSV_H_
