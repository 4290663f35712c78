// Copyright 2026 The adascal Authors
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

#ifndef ADASCAL_HISTORY_IO_H_
#define ADASCAL_HISTORY_IO_H_

#include <string>
#include <string_view>

#include "adascal/bilevel.h"

namespace adascal {

// JSON document with "format": "adascal.run_history/1". Doubles are written
// in shortest round-trip form, so a reloaded history is bit-identical.
std::string RunHistoryToJson(const RunHistory& history);

// Throws std::invalid_argument on malformed input, naming the offending
// field.
RunHistory RunHistoryFromJson(std::string_view text);

void WriteRunHistory(const RunHistory& history, const std::string& path);
RunHistory ReadRunHistory(const std::string& path);

}  // namespace adascal

#endif  // ADASCAL_HISTORY_IO_H_
