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

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>

namespace farmrec {

// Opaque string identifier, distinct per domain so a FieldId cannot be passed where a
// RecordId is expected.
template <class Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;

 private:
  std::string value_;
};

using BaseId = Id<struct BaseTag>;
using TableId = Id<struct TableTag>;
using FieldId = Id<struct FieldTag>;
using OptionId = Id<struct OptionTag>;
using FormId = Id<struct FormTag>;
using RecordId = Id<struct RecordTag>;
using CommentId = Id<struct CommentTag>;
using PrincipalId = Id<struct PrincipalTag>;

// Hex string of `bytes` bytes from the OS entropy source.
std::string random_hex(std::size_t bytes);

// Fresh opaque id such as "fld_3f9a0c12d4e5b6a7". Ids are never reused.
template <class IdType>
IdType fresh_id(std::string_view prefix) {
  return IdType(std::string(prefix) + "_" + random_hex(8));
}

}  // namespace farmrec

template <class Tag>
struct std::hash<farmrec::Id<Tag>> {
  std::size_t operator()(const farmrec::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
