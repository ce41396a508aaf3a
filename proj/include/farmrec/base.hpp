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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "farmrec/access.hpp"
#include "farmrec/form.hpp"
#include "farmrec/record_store.hpp"

namespace farmrec {

// Append-only note on a record; the commenter role's capability.
struct Comment {
  CommentId id;
  TableId table;
  RecordId record;
  PrincipalId author;
  std::string text;
  Timestamp at;

  friend bool operator==(const Comment&, const Comment&) = default;
};

// Remembered submission for an idempotency key.
struct IdempotentSubmission {
  FormId form;
  TableId table;
  RecordId record;
  Timestamp at;

  friend bool operator==(const IdempotentSubmission&, const IdempotentSubmission&) = default;
};

// A base: the unit of sharing. Tables hold their records.
struct Base {
  BaseId id;
  std::string name;
  std::string template_id;  // empty when created blank
  std::vector<TableData> tables;
  std::vector<FormSpec> forms;
  AccessList access;
  std::vector<Comment> comments;
  std::map<std::string, IdempotentSubmission> idempotency;
  std::uint64_t option_use_seq = 0;
  std::uint64_t journal_seq = 0;

  TableData* find_table(const TableId& id);
  const TableData* find_table(const TableId& id) const;
  // By id or name. Errors: unknown-table, ambiguous-name.
  const TableData& resolve_table(std::string_view key) const;
  const FormSpec* find_form(const FormId& id) const;

  friend bool operator==(const Base&, const Base&) = default;
};

// Errors: empty-name.
Base create_base(std::string name, PrincipalId owner);

}  // namespace farmrec
