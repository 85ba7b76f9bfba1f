// Copyright 2026 The Star Forge Authors.
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

// Text helpers shared by the codec, pools and exporters. Passages are stored
// as UTF-8; all offsets exposed by the library count Unicode scalar values.

#ifndef STAR_FORGE_CORE_TEXT_H_
#define STAR_FORGE_CORE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace starforge {

// Invalid byte sequences decode to U+FFFD, one per offending byte.
std::u32string Utf8ToCodepoints(std::string_view utf8);
std::string CodepointsToUtf8(std::u32string_view text);

// Length of a UTF-8 string in scalar values.
size_t CodepointLength(std::string_view utf8);

bool IsUnicodeSpace(char32_t c);

// Trims Unicode whitespace at both ends.
std::string Trim(std::string_view text);

// Trim + collapse internal whitespace runs to a single ASCII space.
std::string CollapseWhitespace(std::string_view text);

// Dedup key for candidate mentions: full Unicode case fold, whitespace
// collapse and trim.
std::string NormalizeMention(std::string_view text);

// Removes all whitespace; used to compare texts modulo tokenization.
std::string StripAllWhitespace(std::string_view text);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string> SplitLines(std::string_view text);

bool StartsWith(std::string_view text, std::string_view prefix);

// Lower-cases ASCII letters only.
std::string AsciiLower(std::string_view text);

// Joins with `separator` between items.
std::string Join(const std::vector<std::string> &items,
                 std::string_view separator);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_TEXT_H_
