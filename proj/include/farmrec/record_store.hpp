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
#include <optional>
#include <string>
#include <vector>

#include "farmrec/schema.hpp"

namespace farmrec {

// One observation. Empty cells are not stored.
struct Record {
  RecordId id;
  TableId table;
  std::map<FieldId, CellValue> cells;
  Timestamp created_time;
  // Per-table insertion sequence; (created_time, seq) is strictly increasing.
  std::uint64_t seq = 0;

  const CellValue& cell(const FieldId& field) const;

  friend bool operator==(const Record&, const Record&) = default;
};

using RawCells = std::map<FieldId, RawValue>;

enum class Predicate { equals, contains, is_empty, not_empty, less, less_equal, greater, greater_equal };

std::string_view to_string(Predicate predicate);
std::optional<Predicate> parse_predicate(std::string_view text);

struct Filter {
  FieldId field;
  Predicate predicate = Predicate::equals;
  std::string operand;
};

struct SortKey {
  FieldId field;
  bool ascending = true;
};

struct Query {
  std::vector<Filter> filters;  // conjunction
  std::optional<SortKey> sort;
};

// A table's schema plus its grid of records. Mutations follow a prepare/commit split:
// prepare_* validate and build the new row without touching state, commit_* apply it.
class TableData {
 public:
  TableData() = default;
  explicit TableData(TableSpec spec) : spec_(std::move(spec)) {}

  const TableSpec& spec() const noexcept { return spec_; }
  TableSpec& mutable_spec() noexcept { return spec_; }
  const std::vector<Record>& records() const noexcept { return records_; }
  std::uint64_t next_seq() const noexcept { return next_seq_; }
  Timestamp last_created() const noexcept { return last_created_; }

  // Rebuilds a table from persisted state.
  static TableData restore(TableSpec spec, std::vector<Record> records, std::uint64_t next_seq,
                           Timestamp last_created);

  const Record* find(const RecordId& id) const;

  // Errors: client-set-created-time, unknown-field, any validate_cell error.
  Record prepare_insert(const RawCells& cells, Timestamp now, RecordId id) const;
  // Same as prepare_insert against an explicit schema (used when a submission adds options).
  Record prepare_insert(const TableSpec& spec, const RawCells& cells, Timestamp now, RecordId id) const;
  void commit_insert(Record record);

  // Errors: unknown-record, client-set-created-time, validation errors. Blank values clear cells.
  Record prepare_update(const RecordId& id, const RawCells& cells) const;
  void commit_update(Record record);

  // Errors: unknown-record.
  void erase(const RecordId& id);

  // Default order is created-time ascending. Errors: unknown-field, predicate-kind-mismatch,
  // plus validation errors for the operand.
  std::vector<const Record*> query(const Query& query) const;

  // Tidy-grid audit: every cell matches its column kind and resolves; created times ordered.
  std::vector<std::string> audit() const;

  friend bool operator==(const TableData&, const TableData&) = default;

 private:
  TableSpec spec_;
  std::vector<Record> records_;
  std::uint64_t next_seq_ = 1;
  Timestamp last_created_{};
};

}  // namespace farmrec
