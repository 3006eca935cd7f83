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

#include <stdexcept>

#include "tclme/tcl.hpp"

namespace tclme {

namespace {

void compositions_rec(int remaining, std::vector<int>& parts,
                      std::vector<Composition>& out) {
  if (remaining == 0) {
    Composition c;
    c.parts = parts;
    c.sign = (parts.size() % 2 == 1) ? 1 : -1;
    out.push_back(std::move(c));
    return;
  }
  // Largest first part first gives the (n), (n-1,1), ... ordering.
  for (int first = remaining; first >= 1; --first) {
    parts.push_back(first);
    compositions_rec(remaining - first, parts, out);
    parts.pop_back();
  }
}

}  // namespace

std::vector<Composition> enumerate_compositions(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_compositions: n must be positive");
  if (n > 12) throw std::invalid_argument("enumerate_compositions: n must be <= 12");
  std::vector<Composition> out;
  out.reserve(std::size_t{1} << (n - 1));
  std::vector<int> parts;
  compositions_rec(n, parts, out);
  return out;
}

}  // namespace tclme
