// Copyright 2026 The HELM Eval Authors.
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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace helm {

// Lowercases ASCII, trims, and collapses internal whitespace runs to a single
// space. This is the matching key for attribute values everywhere.
std::string normalize_value(std::string_view raw);

// Whitespace-delimited token count.
std::size_t word_count(std::string_view text);

// ASCII lowercase copy; multibyte UTF-8 sequences pass through unchanged.
std::string ascii_lower(std::string_view text);

}  // namespace helm
