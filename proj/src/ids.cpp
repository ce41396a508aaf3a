// Copyright (c) The farmrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License.  You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied.  See the License for the specific language governing permissions and limitations
// under the License.
//

#include "farmrec/ids.hpp"

#include <array>
#include <mutex>
#include <random>

namespace farmrec {

std::string random_hex(std::size_t bytes) {
  static std::mutex mu;
  static std::random_device device("/dev/urandom");
  static constexpr std::string_view kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes * 2);
  std::lock_guard lock(mu);
  for (std::size_t i = 0; i < bytes; i += 4) {
    auto word = device();
    for (std::size_t j = 0; j < 4 && i + j < bytes; ++j) {
      auto byte = static_cast<unsigned>((word >> (8 * j)) & 0xffu);
      out.push_back(kDigits[byte >> 4]);
      out.push_back(kDigits[byte & 0xfu]);
    }
  }
  return out;
}

}  // namespace farmrec
