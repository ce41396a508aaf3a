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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "farmrec/error.hpp"
#include "farmrec/ids.hpp"
#include "farmrec/time.hpp"

namespace farmrec {

enum class FieldKind {
  date,
  created_time,
  short_text,
  long_text,
  integer,
  real,
  url,
  single_select,
  multi_select,
  attachment_ref,
};

std::string_view to_string(FieldKind kind);
std::optional<FieldKind> parse_field_kind(std::string_view text);
constexpr bool is_select(FieldKind kind) {
  return kind == FieldKind::single_select || kind == FieldKind::multi_select;
}
constexpr bool is_numeric(FieldKind kind) {
  return kind == FieldKind::integer || kind == FieldKind::real;
}
constexpr bool is_textual(FieldKind kind) {
  return kind == FieldKind::short_text || kind == FieldKind::long_text || kind == FieldKind::url ||
         kind == FieldKind::attachment_ref;
}

struct Option {
  OptionId id;
  std::string label;
  std::optional<Timestamp> last_used_at;
  // Base-wide monotone counter value at last use; 0 = never used. Breaks ties between
  // options used within the same second.
  std::uint64_t use_seq = 0;

  friend bool operator==(const Option&, const Option&) = default;
};

// Option list in definition order. Render order (most recently used first) is derived,
// the stored order never changes except by appending.
class OptionList {
 public:
  OptionList() = default;
  explicit OptionList(std::vector<Option> entries) : entries_(std::move(entries)) {}

  const std::vector<Option>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const Option* find(const OptionId& id) const;
  // Case-insensitive (ASCII) label match after trimming.
  const Option* find_label(std::string_view label) const;

  // Appends `label` unless an equal label exists. Returns the option and whether it was new.
  std::pair<const Option*, bool> add(std::string_view label);
  std::pair<const Option*, bool> add(std::string_view label, OptionId id);

  void mark_used(const OptionId& id, Timestamp at, std::uint64_t use_seq);

  // Last-used descending, never-used options after in definition order.
  std::vector<const Option*> mru_order() const;

  friend bool operator==(const OptionList&, const OptionList&) = default;

 private:
  std::vector<Option> entries_;
};

struct FieldSpec {
  FieldId id;
  std::string name;
  FieldKind kind = FieldKind::short_text;
  std::optional<std::string> unit;
  // Present iff the kind is single- or multi-select.
  std::optional<OptionList> options;

  // Header / display name: the name with the unit in parentheses, e.g. "Seeding Rate (seeds/ac)".
  std::string display_name() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

FieldSpec make_field(std::string name, FieldKind kind, std::optional<std::string> unit = {});

struct TableSpec {
  TableId id;
  std::string name;
  std::vector<FieldSpec> fields;

  const FieldSpec* find(const FieldId& id) const;
  FieldSpec* find(const FieldId& id);
  // Matches the field id, the trimmed name, or the display name.
  const FieldSpec* resolve(std::string_view key) const;
  const FieldSpec& created_time_field() const;

  friend bool operator==(const TableSpec&, const TableSpec&) = default;
};

// New table with its created-time column ("created time").
TableSpec make_table(std::string name);
// New table from a field list; a created-time column is appended unless one is present.
TableSpec make_table(std::string name, std::vector<FieldSpec> fields);

// Appends `spec` to the column order. Errors: empty-name, duplicate-name,
// second-created-time-field, options-on-non-select.
TableSpec add_field(TableSpec table, FieldSpec spec);

struct AddOptionResult {
  FieldSpec field;
  OptionId option;
  bool created = false;
};

// Errors: non-select-field, empty-label, invalid-label.
AddOptionResult add_option(FieldSpec spec, std::string_view label);

// Raw user input: text, or a list of items for multi-select entry.
class RawValue {
 public:
  RawValue() = default;
  RawValue(std::string text) : value_(std::move(text)) {}
  RawValue(const char* text) : value_(std::string(text)) {}
  RawValue(std::string_view text) : value_(std::string(text)) {}
  RawValue(std::vector<std::string> items) : value_(std::move(items)) {}
  RawValue(std::initializer_list<std::string> items) : value_(std::vector<std::string>(items)) {}

  bool is_list() const noexcept { return std::holds_alternative<std::vector<std::string>>(value_); }
  const std::string& text() const { return std::get<std::string>(value_); }
  const std::vector<std::string>& items() const { return std::get<std::vector<std::string>>(value_); }
  // True for empty or whitespace-only text, or a list of blank items.
  bool blank() const;

  friend bool operator==(const RawValue&, const RawValue&) = default;

 private:
  std::variant<std::string, std::vector<std::string>> value_;
};

struct Text {
  std::string value;
  friend bool operator==(const Text&, const Text&) = default;
};
struct Url {
  std::string value;
  friend bool operator==(const Url&, const Url&) = default;
};
struct AttachmentRef {
  std::string value;
  friend bool operator==(const AttachmentRef&, const AttachmentRef&) = default;
};
struct OptionRef {
  OptionId id;
  friend bool operator==(const OptionRef&, const OptionRef&) = default;
};
struct OptionRefList {
  std::vector<OptionId> ids;
  friend bool operator==(const OptionRefList&, const OptionRefList&) = default;
};

using CellValue = std::variant<std::monostate, Date, Timestamp, Text, std::int64_t, double, Url,
                               OptionRef, OptionRefList, AttachmentRef>;

inline bool is_empty(const CellValue& v) { return std::holds_alternative<std::monostate>(v); }

// Whether the alternative held by `value` is the one `spec`'s kind produces (empty always
// matches); option refs must resolve to live options.
bool cell_matches(const FieldSpec& spec, const CellValue& value);

// Trimmed input to typed value. Blank input gives the empty cell.
// Errors: type-mismatch, unknown-option, malformed-date, malformed-url,
// client-set-created-time (created-time fields are never user-writable).
CellValue validate_cell(const FieldSpec& spec, const RawValue& raw);

struct RenderStyle {
  std::string date_pattern{kIsoDatePattern};
  std::string timestamp_pattern{kIsoTimestampPattern};
  std::string joiner = "; ";
};

// Human-readable rendering; option refs become labels. validate_cell on the rendering
// yields the same value.
std::string render_cell(const FieldSpec& spec, const CellValue& value, const RenderStyle& style = {});

std::string trim(std::string_view text);
bool iequals(std::string_view a, std::string_view b);

}  // namespace farmrec
