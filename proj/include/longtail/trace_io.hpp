// Copyright 2026 The longtail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LONGTAIL__TRACE_IO_HPP_
#define LONGTAIL__TRACE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "longtail/simulation.hpp"

namespace longtail
{

inline constexpr const char * kTraceSchemaVersion = "v1";

nlohmann::json trace_to_json(const SimTrace & trace);
/// Throws MalformedFile or VersionMismatch.
SimTrace trace_from_json(const nlohmann::json & j);

std::string dump_trace(const SimTrace & trace);
SimTrace parse_trace(const std::string & text);

/// Same logical content as the text form, CBOR encoded.
std::vector<std::uint8_t> trace_to_cbor(const SimTrace & trace);
SimTrace trace_from_cbor(const std::vector<std::uint8_t> & bytes);

/// FNV-1a of the text form.
std::uint64_t trace_hash(const SimTrace & trace);
std::string hash_hex(std::uint64_t hash);

/// Format chosen by extension: ".cbor" binary, anything else text.
void save_trace(const SimTrace & trace, const std::filesystem::path & path);
SimTrace load_trace(const std::filesystem::path & path);

}  // namespace longtail

#endif  // LONGTAIL__TRACE_IO_HPP_
