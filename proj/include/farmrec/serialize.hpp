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

#include <nlohmann/json.hpp>

#include "farmrec/base.hpp"

// Canonical JSON documents. Key order is fixed and arrays keep their domain order
// (column order, option definition order, entry order), so equal state always
// serializes to identical bytes.
namespace farmrec {

using Json = nlohmann::ordered_json;

Json to_json(const Option& option);
Json to_json(const FieldSpec& field);
Json to_json(const TableSpec& table);
Json to_json(const VisibilityRule& rule);
Json to_json(const FormField& entry);
Json to_json(const FormSpec& form);
Json to_json(const Grant& grant);
Json to_json(const FormToken& token);
Json to_json(const Comment& comment);
Json to_json(const FormView& view);

// Typed cell encoding, interpreted against the field's kind: dates and timestamps as ISO
// strings, numbers as numbers, option refs as option ids, multi-select as an array of ids.
Json cell_to_json(const FieldSpec& field, const CellValue& value);
CellValue cell_from_json(const FieldSpec& field, const Json& json);

Json record_to_json(const TableSpec& table, const Record& record);
Record record_from_json(const TableSpec& table, const Json& json);

// Record for API consumers: the canonical record plus "values", display strings keyed
// by field display name in column order.
Json record_view_json(const TableSpec& table, const Record& record);

Option option_from_json(const Json& json);
FieldSpec field_from_json(const Json& json);
TableSpec table_from_json(const Json& json);
VisibilityRule visibility_from_json(const Json& json);
FormSpec form_from_json(const Json& json);
Grant grant_from_json(const Json& json);
FormToken token_from_json(const Json& json);
Comment comment_from_json(const Json& json);

// Schema document: base identity, tables (schema only), forms, grants. Form tokens are
// secrets and never appear here.
Json base_document(const Base& base);

// Complete state including records, tokens, comments and counters.
Json state_to_json(const Base& base);
Base state_from_json(const Json& json);

// Raw input from JSON: strings stay text, arrays become item lists, numbers and booleans
// are stringified. Errors: invalid-request.
RawValue raw_from_json(const Json& json);

}  // namespace farmrec
