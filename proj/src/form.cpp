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

#include "farmrec/form.hpp"

#include <algorithm>
#include <set>

namespace farmrec {

VisibilityRule VisibilityRule::when_equals(FieldId controller, OptionId option) {
  return VisibilityRule{Kind::when_equals, std::move(controller), {std::move(option)}};
}

VisibilityRule VisibilityRule::when_one_of(FieldId controller, std::vector<OptionId> options) {
  return VisibilityRule{Kind::when_one_of, std::move(controller), std::move(options)};
}

std::string_view to_string(VisibilityRule::Kind kind) {
  switch (kind) {
    case VisibilityRule::Kind::always: return "always";
    case VisibilityRule::Kind::when_equals: return "when-equals";
    case VisibilityRule::Kind::when_one_of: return "when-one-of";
  }
  return "always";
}

std::optional<VisibilityRule::Kind> parse_visibility_kind(std::string_view text) {
  if (text == "always") return VisibilityRule::Kind::always;
  if (text == "when-equals") return VisibilityRule::Kind::when_equals;
  if (text == "when-one-of") return VisibilityRule::Kind::when_one_of;
  return std::nullopt;
}

const FormField* FormSpec::entry(const FieldId& field) const {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const FormField& e) { return e.field == field; });
  return it == entries.end() ? nullptr : &*it;
}

std::vector<Issue> lint_form(const FormSpec& form, const TableSpec& table) {
  std::vector<Issue> issues;
  auto report = [&](std::string field, std::string message) {
    issues.push_back({ErrorCode::invalid_form, std::move(field), std::move(message)});
  };
  if (form.table != table.id) report({}, "form targets table '" + form.table.str() + "'");
  std::set<FieldId> seen;
  for (const auto& entry : form.entries) {
    const auto* field = table.find(entry.field);
    if (!field) {
      report(entry.field.str(), "form references unknown field '" + entry.field.str() + "'");
      continue;
    }
    if (!seen.insert(entry.field).second) report(field->name, "field '" + field->name + "' appears twice");
    if (field->kind == FieldKind::created_time) {
      report(field->name, "created-time field cannot appear on a form");
    }
    if (entry.allow_add_option && !is_select(field->kind)) {
      report(field->name, "'+ Add' is only available on select fields");
    }
    if (entry.visibility.kind == VisibilityRule::Kind::always) continue;
    const auto* controller = table.find(entry.visibility.controller);
    bool earlier = controller && seen.count(controller->id) && controller->id != entry.field;
    if (!controller || !earlier) {
      report(field->name, "visibility of '" + field->name + "' must depend on an earlier field");
      continue;
    }
    if (controller->kind != FieldKind::single_select) {
      report(field->name, "visibility of '" + field->name + "' must depend on a single-select field");
      continue;
    }
    if (entry.visibility.options.empty() ||
        (entry.visibility.kind == VisibilityRule::Kind::when_equals &&
         entry.visibility.options.size() != 1)) {
      report(field->name, "visibility rule of '" + field->name + "' has the wrong number of options");
    }
    for (const auto& option : entry.visibility.options) {
      if (!controller->options->find(option)) {
        report(field->name, "visibility rule of '" + field->name + "' names unknown option '" +
                                option.str() + "'");
      }
    }
  }
  return issues;
}

std::vector<FieldId> visible_fields(const FormSpec& form, const TableSpec& table, const Draft& draft) {
  std::vector<FieldId> visible;
  std::map<FieldId, OptionId> chosen;  // visible single-select fields with a valid value
  for (const auto& entry : form.entries) {
    const auto* field = table.find(entry.field);
    if (!field || field->kind == FieldKind::created_time) continue;
    bool shown = true;
    if (entry.visibility.kind != VisibilityRule::Kind::always) {
      auto it = chosen.find(entry.visibility.controller);
      shown = it != chosen.end() &&
              std::find(entry.visibility.options.begin(), entry.visibility.options.end(),
                        it->second) != entry.visibility.options.end();
    }
    if (!shown) continue;
    visible.push_back(field->id);
    if (field->kind != FieldKind::single_select) continue;
    auto answer = draft.find(field->id);
    if (answer == draft.end()) continue;
    try {
      auto value = validate_cell(*field, answer->second);
      if (const auto* ref = std::get_if<OptionRef>(&value)) chosen.emplace(field->id, ref->id);
    } catch (const Error&) {
      // invalid drafts count as unset
    }
  }
  return visible;
}

FormView render_form(const FormSpec& form, const TableSpec& table, const Draft& draft) {
  FormView view{form.id, form.title, form.description, {}};
  for (const auto& field_id : visible_fields(form, table, draft)) {
    const auto& field = *table.find(field_id);
    const auto& entry = *form.entry(field_id);
    FormViewEntry out;
    out.field = field.id;
    out.name = field.name;
    out.prompt = entry.prompt.empty() ? field.display_name() : entry.prompt;
    out.kind = field.kind;
    out.unit = field.unit;
    out.required = entry.required;
    out.allow_add_option = entry.allow_add_option && is_select(field.kind);
    if (field.options) {
      for (const auto* option : field.options->mru_order()) {
        out.option_ids.push_back(option->id);
        out.option_labels.push_back(option->label);
      }
    }
    view.entries.push_back(std::move(out));
  }
  return view;
}

SubmissionPlan plan_submission(const FormSpec& form, const TableData& table, const Draft& answers,
                               const std::vector<NewOption>& new_options, Timestamp now,
                               std::uint64_t use_seq, RecordId id) {
  TableSpec working = table.spec();
  std::vector<Issue> structural;
  std::set<FieldId> touched;

  for (const auto& [field_id, raw] : answers) {
    const auto* field = working.find(field_id);
    if (!field) {
      structural.push_back({ErrorCode::unknown_field, field_id.str(),
                            "form table has no field '" + field_id.str() + "'"});
    } else if (field->kind == FieldKind::created_time) {
      structural.push_back({ErrorCode::client_set_created_time, field->name,
                            "field '" + field->name + "' is assigned by the server"});
    } else if (!form.entry(field_id) && !raw.blank()) {
      structural.push_back({ErrorCode::hidden_field_answer, field->name,
                            "field '" + field->name + "' is not on this form"});
    }
  }

  for (const auto& request : new_options) {
    auto* field = working.find(request.field);
    const auto* entry = form.entry(request.field);
    if (!field || !entry || !entry->allow_add_option || !is_select(field->kind)) {
      auto name = field ? field->name : request.field.str();
      structural.push_back({ErrorCode::add_not_allowed, name,
                            "adding options to '" + name + "' is not allowed on this form"});
      continue;
    }
    try {
      auto result = add_option(*field, request.label);
      if (result.created) touched.insert(field->id);
      *field = std::move(result.field);
    } catch (const Error& e) {
      structural.push_back(e.issues().front());
    }
  }

  auto visible = visible_fields(form, working, answers);
  auto is_visible = [&](const FieldId& f) {
    return std::find(visible.begin(), visible.end(), f) != visible.end();
  };
  for (const auto& [field_id, raw] : answers) {
    const auto* field = working.find(field_id);
    if (field && form.entry(field_id) && !is_visible(field_id) && !raw.blank()) {
      structural.push_back({ErrorCode::hidden_field_answer, field->name,
                            "field '" + field->name + "' is not requested for this operation"});
    }
  }

  std::vector<Issue> validation;
  RawCells cells;
  for (const auto& field_id : visible) {
    auto answer = answers.find(field_id);
    if (answer == answers.end()) continue;
    const auto& field = *working.find(field_id);
    try {
      validate_cell(field, answer->second);
      cells.emplace(field_id, answer->second);
    } catch (const Error& e) {
      validation.push_back(e.issues().front());
    }
  }

  std::vector<Issue> missing;
  for (const auto& field_id : visible) {
    const auto* entry = form.entry(field_id);
    auto answer = answers.find(field_id);
    if (entry->required && (answer == answers.end() || answer->second.blank())) {
      const auto& field = *working.find(field_id);
      missing.push_back({ErrorCode::missing_required, field.name,
                         "'" + (entry->prompt.empty() ? field.name : entry->prompt) + "' is required"});
    }
  }

  std::vector<Issue> issues = std::move(structural);
  issues.insert(issues.end(), validation.begin(), validation.end());
  issues.insert(issues.end(), missing.begin(), missing.end());
  if (!issues.empty()) {
    auto first = issues.front();
    throw Error(first.code, first.message, std::move(issues));
  }

  SubmissionPlan plan;
  plan.record = table.prepare_insert(working, cells, now, std::move(id));
  plan.use_seq = use_seq;
  bool any_used = false;
  for (const auto& [field_id, value] : plan.record.cells) {
    auto* field = working.find(field_id);
    if (!field || !field->options) continue;
    if (!any_used) {
      ++plan.use_seq;
      any_used = true;
    }
    if (const auto* ref = std::get_if<OptionRef>(&value)) {
      field->options->mark_used(ref->id, now, plan.use_seq);
    } else if (const auto* refs = std::get_if<OptionRefList>(&value)) {
      for (const auto& option : refs->ids) field->options->mark_used(option, now, plan.use_seq);
    }
    touched.insert(field_id);
  }
  for (const auto& field : working.fields) {
    if (touched.count(field.id)) plan.changed_fields.push_back(field);
  }
  return plan;
}

void apply_submission(TableData& table, const SubmissionPlan& plan) {
  for (const auto& changed : plan.changed_fields) {
    if (auto* field = table.mutable_spec().find(changed.id)) *field = changed;
  }
  table.commit_insert(plan.record);
}

}  // namespace farmrec
