// Copyright 2026 The tclme Authors
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

#ifndef TCLME_IO_HPP_
#define TCLME_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace tclme {

// 17 significant digits; enough to reconstruct the double bit for bit.
std::string format_full(double x);

// Write through a sibling temp file and rename it into place, so a reader
// never sees a half-written file.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace tclme

#endif  // TCLME_IO_HPP_
