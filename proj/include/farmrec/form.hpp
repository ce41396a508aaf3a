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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "farmrec/record_store.hpp"
#include "farmrec/schema.hpp"

namespace farmrec {

struct VisibilityRule {
  enum class Kind { always, when_equals, when_one_of };

  Kind kind = Kind::always;
  FieldId controller;              // single-select field earlier in the form
  std::vector<OptionId> options;   // one entry for when_equals

  static VisibilityRule always() { return {}; }
  static VisibilityRule when_equals(FieldId controller, OptionId option);
  static VisibilityRule when_one_of(FieldId controller, std::vector<OptionId> options);

  friend bool operator==(const VisibilityRule&, const VisibilityRule&) = default;
};

std::string_view to_string(VisibilityRule::Kind kind);
std::optional<VisibilityRule::Kind> parse_visibility_kind(std::string_view text);

struct FormField {
  FieldId field;
  std::string prompt;  // empty = use the field name
  bool required = false;
  VisibilityRule visibility;
  bool allow_add_option = false;

  friend bool operator==(const FormField&, const FormField&) = default;
};

struct FormSpec {
  FormId id;
  TableId table;
  std::string title;
  std::string description;
  std::vector<FormField> entries;

  const FormField* entry(const FieldId& field) const;

  friend bool operator==(const FormSpec&, const FormSpec&) = default;
};

using Draft = std::map<FieldId, RawValue>;

// Static checks run when a form is saved. Empty result = valid form.
std::vector<Issue> lint_form(const FormSpec& form, const TableSpec& table);

// Field ids visible for `draft`, in entry order. Controlling values that are absent, invalid,
// or belong to a hidden field count as unset.
std::vector<FieldId> visible_fields(const FormSpec& form, const TableSpec& table, const Draft& draft);

struct FormViewEntry {
  FieldId field;
  std::string name;
  std::string prompt;
  FieldKind kind = FieldKind::short_text;
  std::optional<std::string> unit;
  bool required = false;
  bool allow_add_option = false;
  // Select fields only, most recently used first.
  std::vector<OptionId> option_ids;
  std::vector<std::string> option_labels;
};

struct FormView {
  FormId form;
  std::string title;
  std::string description;
  std::vector<FormViewEntry> entries;
};

FormView render_form(const FormSpec& form, const TableSpec& table, const Draft& draft);

struct NewOption {
  FieldId field;
  std::string label;
};

// Everything a submission changes, computed without touching state.
struct SubmissionPlan {
  Record record;
  // Select fields whose options changed (new options and/or last-used updates).
  std::vector<FieldSpec> changed_fields;
  // Base-wide option use counter after this submission.
  std::uint64_t use_seq = 0;
};

// Errors: missing-required, hidden-field-answer, add-not-allowed, unknown-field,
// client-set-created-time, and validation errors. All issues are reported together.
SubmissionPlan plan_submission(const FormSpec& form, const TableData& table, const Draft& answers,
                               const std::vector<NewOption>& new_options, Timestamp now,
                               std::uint64_t use_seq, RecordId id);

// Applies a plan: field specs replaced, record inserted.
void apply_submission(TableData& table, const SubmissionPlan& plan);

}  // namespace farmrec
