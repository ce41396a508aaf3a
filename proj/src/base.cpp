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

#include "farmrec/base.hpp"

#include <algorithm>

namespace farmrec {

TableData* Base::find_table(const TableId& id) {
  auto it = std::find_if(tables.begin(), tables.end(), [&](const TableData& t) { return t.spec().id == id; });
  return it == tables.end() ? nullptr : &*it;
}

const TableData* Base::find_table(const TableId& id) const {
  auto it = std::find_if(tables.begin(), tables.end(), [&](const TableData& t) { return t.spec().id == id; });
  return it == tables.end() ? nullptr : &*it;
}

const TableData& Base::resolve_table(std::string_view key) const {
  if (const auto* by_id = find_table(TableId(std::string(key)))) return *by_id;
  const TableData* match = nullptr;
  auto wanted = trim(key);
  for (const auto& table : tables) {
    if (table.spec().name != wanted) continue;
    if (match) throw Error(ErrorCode::ambiguous_name, "more than one table is named '" + wanted + "'");
    match = &table;
  }
  if (!match) throw Error(ErrorCode::unknown_table, "base '" + name + "' has no table '" + wanted + "'");
  return *match;
}

const FormSpec* Base::find_form(const FormId& id) const {
  auto it = std::find_if(forms.begin(), forms.end(), [&](const FormSpec& f) { return f.id == id; });
  return it == forms.end() ? nullptr : &*it;
}

Base create_base(std::string name, PrincipalId owner) {
  auto cleaned = trim(name);
  if (cleaned.empty()) throw Error(ErrorCode::empty_name, "base name must not be empty");
  Base base;
  base.id = fresh_id<BaseId>("bas");
  base.name = std::move(cleaned);
  base.access = AccessList::with_owner(std::move(owner));
  return base;
}

}  // namespace farmrec
