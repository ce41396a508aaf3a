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

#include "farmrec/serialize.hpp"

namespace farmrec {

namespace {

Timestamp timestamp_from(const Json& json) {
  auto ts = parse_timestamp(json.get<std::string>());
  if (!ts) throw Error(ErrorCode::invalid_request, "bad timestamp '" + json.get<std::string>() + "'");
  return *ts;
}

Date date_from(const Json& json) {
  auto date = parse_date(json.get<std::string>());
  if (!date) throw Error(ErrorCode::invalid_request, "bad date '" + json.get<std::string>() + "'");
  return *date;
}

template <class T, class F>
std::vector<T> list_from(const Json& json, F&& convert) {
  std::vector<T> out;
  if (json.is_array()) {
    for (const auto& item : json) out.push_back(convert(item));
  }
  return out;
}

}  // namespace

Json to_json(const Option& option) {
  Json json{{"id", option.id.str()}, {"label", option.label}};
  if (option.last_used_at) json["last_used_at"] = to_iso(*option.last_used_at);
  if (option.use_seq) json["use_seq"] = option.use_seq;
  return json;
}

Json to_json(const FieldSpec& field) {
  Json json{{"id", field.id.str()}, {"name", field.name}, {"kind", to_string(field.kind)}};
  if (field.unit) json["unit"] = *field.unit;
  if (field.options) {
    Json options = Json::array();
    for (const auto& option : field.options->entries()) options.push_back(to_json(option));
    json["options"] = std::move(options);
  }
  return json;
}

Json to_json(const TableSpec& table) {
  Json fields = Json::array();
  for (const auto& field : table.fields) fields.push_back(to_json(field));
  return Json{{"id", table.id.str()}, {"name", table.name}, {"fields", std::move(fields)}};
}

Json to_json(const VisibilityRule& rule) {
  Json json{{"kind", to_string(rule.kind)}};
  switch (rule.kind) {
    case VisibilityRule::Kind::always: break;
    case VisibilityRule::Kind::when_equals:
      json["field"] = rule.controller.str();
      json["option"] = rule.options.empty() ? std::string() : rule.options.front().str();
      break;
    case VisibilityRule::Kind::when_one_of: {
      json["field"] = rule.controller.str();
      Json options = Json::array();
      for (const auto& option : rule.options) options.push_back(option.str());
      json["options"] = std::move(options);
      break;
    }
  }
  return json;
}

Json to_json(const FormField& entry) {
  return Json{{"field", entry.field.str()},
              {"prompt", entry.prompt},
              {"required", entry.required},
              {"allow_add_option", entry.allow_add_option},
              {"visibility", to_json(entry.visibility)}};
}

Json to_json(const FormSpec& form) {
  Json entries = Json::array();
  for (const auto& entry : form.entries) entries.push_back(to_json(entry));
  return Json{{"id", form.id.str()},
              {"table", form.table.str()},
              {"title", form.title},
              {"description", form.description},
              {"entries", std::move(entries)}};
}

Json to_json(const Grant& grant) {
  return Json{{"principal", grant.principal.str()}, {"role", to_string(grant.role)}};
}

Json to_json(const FormToken& token) {
  return Json{{"token", token.token}, {"form", token.form.str()}, {"revoked", token.revoked}};
}

Json to_json(const Comment& comment) {
  return Json{{"id", comment.id.str()},       {"table", comment.table.str()},
              {"record", comment.record.str()}, {"author", comment.author.str()},
              {"text", comment.text},           {"at", to_iso(comment.at)}};
}

Json to_json(const FormView& view) {
  Json entries = Json::array();
  for (const auto& entry : view.entries) {
    Json json{{"field", entry.field.str()},
              {"name", entry.name},
              {"prompt", entry.prompt},
              {"kind", to_string(entry.kind)},
              {"required", entry.required}};
    if (entry.unit) json["unit"] = *entry.unit;
    if (is_select(entry.kind)) {
      Json options = Json::array();
      for (std::size_t i = 0; i < entry.option_ids.size(); ++i) {
        options.push_back(Json{{"id", entry.option_ids[i].str()}, {"label", entry.option_labels[i]}});
      }
      json["options"] = std::move(options);
      json["allow_add_option"] = entry.allow_add_option;
    }
    entries.push_back(std::move(json));
  }
  return Json{{"form", view.form.str()},
              {"title", view.title},
              {"description", view.description},
              {"entries", std::move(entries)}};
}

Json cell_to_json(const FieldSpec& field, const CellValue& value) {
  if (is_empty(value)) return nullptr;
  if (const auto* d = std::get_if<Date>(&value)) return to_iso(*d);
  if (const auto* t = std::get_if<Timestamp>(&value)) return to_iso(*t);
  if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
  if (const auto* r = std::get_if<double>(&value)) return *r;
  if (const auto* ref = std::get_if<OptionRef>(&value)) return ref->id.str();
  if (const auto* refs = std::get_if<OptionRefList>(&value)) {
    Json ids = Json::array();
    for (const auto& id : refs->ids) ids.push_back(id.str());
    return ids;
  }
  return render_cell(field, value);
}

CellValue cell_from_json(const FieldSpec& field, const Json& json) {
  if (json.is_null()) return std::monostate{};
  switch (field.kind) {
    case FieldKind::date: return date_from(json);
    case FieldKind::created_time: return timestamp_from(json);
    case FieldKind::short_text:
    case FieldKind::long_text: return Text{json.get<std::string>()};
    case FieldKind::integer: return json.get<std::int64_t>();
    case FieldKind::real: return json.get<double>();
    case FieldKind::url: return Url{json.get<std::string>()};
    case FieldKind::attachment_ref: return AttachmentRef{json.get<std::string>()};
    case FieldKind::single_select: return OptionRef{OptionId(json.get<std::string>())};
    case FieldKind::multi_select: {
      OptionRefList refs;
      for (const auto& id : json) refs.ids.emplace_back(id.get<std::string>());
      return refs;
    }
  }
  return std::monostate{};
}

Json record_to_json(const TableSpec& table, const Record& record) {
  Json cells = Json::object();
  for (const auto& [field_id, value] : record.cells) {
    const auto* field = table.find(field_id);
    if (field) cells[field_id.str()] = cell_to_json(*field, value);
  }
  return Json{{"id", record.id.str()},
              {"table", record.table.str()},
              {"created_time", to_iso(record.created_time)},
              {"seq", record.seq},
              {"cells", std::move(cells)}};
}

Record record_from_json(const TableSpec& table, const Json& json) {
  Record record;
  record.id = RecordId(json.at("id").get<std::string>());
  record.table = TableId(json.at("table").get<std::string>());
  record.created_time = timestamp_from(json.at("created_time"));
  record.seq = json.at("seq").get<std::uint64_t>();
  for (const auto& [key, value] : json.at("cells").items()) {
    const auto* field = table.find(FieldId(key));
    if (!field) throw Error(ErrorCode::unknown_field, "record references unknown field '" + key + "'");
    record.cells.emplace(field->id, cell_from_json(*field, value));
  }
  return record;
}

Json record_view_json(const TableSpec& table, const Record& record) {
  Json json = record_to_json(table, record);
  Json values = Json::object();
  for (const auto& field : table.fields) {
    if (field.kind == FieldKind::created_time) {
      values[field.display_name()] = to_iso(record.created_time);
    } else {
      values[field.display_name()] = render_cell(field, record.cell(field.id));
    }
  }
  json["values"] = std::move(values);
  return json;
}

Option option_from_json(const Json& json) {
  Option option;
  option.id = OptionId(json.at("id").get<std::string>());
  option.label = json.at("label").get<std::string>();
  if (json.contains("last_used_at")) option.last_used_at = timestamp_from(json.at("last_used_at"));
  option.use_seq = json.value("use_seq", std::uint64_t{0});
  return option;
}

FieldSpec field_from_json(const Json& json) {
  FieldSpec field;
  field.id = FieldId(json.value("id", std::string()));
  field.name = json.at("name").get<std::string>();
  auto kind_text = json.at("kind").get<std::string>();
  auto kind = parse_field_kind(kind_text);
  if (!kind) throw Error(ErrorCode::invalid_kind, "unknown field kind '" + kind_text + "'", field.name);
  field.kind = *kind;
  if (json.contains("unit") && !json.at("unit").is_null()) field.unit = json.at("unit").get<std::string>();
  if (json.contains("options")) {
    if (!is_select(field.kind)) {
      throw Error(ErrorCode::options_on_non_select, "field '" + field.name + "' cannot have options",
                  field.name);
    }
    field.options = OptionList(list_from<Option>(json.at("options"), option_from_json));
  } else if (is_select(field.kind)) {
    field.options = OptionList{};
  }
  return field;
}

TableSpec table_from_json(const Json& json) {
  TableSpec table;
  table.id = TableId(json.value("id", std::string()));
  table.name = json.at("name").get<std::string>();
  table.fields = list_from<FieldSpec>(json.at("fields"), field_from_json);
  return table;
}

VisibilityRule visibility_from_json(const Json& json) {
  if (json.is_null()) return VisibilityRule::always();
  auto kind_text = json.value("kind", std::string("always"));
  auto kind = parse_visibility_kind(kind_text);
  if (!kind) throw Error(ErrorCode::invalid_form, "unknown visibility kind '" + kind_text + "'");
  VisibilityRule rule;
  rule.kind = *kind;
  if (rule.kind == VisibilityRule::Kind::always) return rule;
  rule.controller = FieldId(json.at("field").get<std::string>());
  if (rule.kind == VisibilityRule::Kind::when_equals) {
    rule.options.emplace_back(json.at("option").get<std::string>());
  } else {
    for (const auto& option : json.at("options")) rule.options.emplace_back(option.get<std::string>());
  }
  return rule;
}

FormSpec form_from_json(const Json& json) {
  FormSpec form;
  form.id = FormId(json.value("id", std::string()));
  form.table = TableId(json.at("table").get<std::string>());
  form.title = json.value("title", std::string());
  form.description = json.value("description", std::string());
  for (const auto& item : json.at("entries")) {
    FormField entry;
    entry.field = FieldId(item.at("field").get<std::string>());
    entry.prompt = item.value("prompt", std::string());
    entry.required = item.value("required", false);
    entry.allow_add_option = item.value("allow_add_option", false);
    entry.visibility = visibility_from_json(item.value("visibility", Json()));
    form.entries.push_back(std::move(entry));
  }
  return form;
}

Grant grant_from_json(const Json& json) {
  auto role_text = json.at("role").get<std::string>();
  auto role = parse_role(role_text);
  if (!role) throw Error(ErrorCode::invalid_request, "unknown role '" + role_text + "'");
  return Grant{PrincipalId(json.at("principal").get<std::string>()), *role};
}

FormToken token_from_json(const Json& json) {
  return FormToken{json.at("token").get<std::string>(), FormId(json.at("form").get<std::string>()),
                   json.value("revoked", false)};
}

Comment comment_from_json(const Json& json) {
  return Comment{CommentId(json.at("id").get<std::string>()),
                 TableId(json.at("table").get<std::string>()),
                 RecordId(json.at("record").get<std::string>()),
                 PrincipalId(json.at("author").get<std::string>()),
                 json.at("text").get<std::string>(),
                 timestamp_from(json.at("at"))};
}

Json base_document(const Base& base) {
  Json tables = Json::array();
  for (const auto& table : base.tables) tables.push_back(to_json(table.spec()));
  Json forms = Json::array();
  for (const auto& form : base.forms) forms.push_back(to_json(form));
  Json grants = Json::array();
  for (const auto& grant : base.access.grants()) grants.push_back(to_json(grant));
  return Json{{"id", base.id.str()},     {"name", base.name},        {"template", base.template_id},
              {"tables", std::move(tables)}, {"forms", std::move(forms)}, {"grants", std::move(grants)}};
}

Json state_to_json(const Base& base) {
  Json tables = Json::array();
  for (const auto& table : base.tables) {
    Json records = Json::array();
    for (const auto& record : table.records()) records.push_back(record_to_json(table.spec(), record));
    tables.push_back(Json{{"spec", to_json(table.spec())},
                          {"next_seq", table.next_seq()},
                          {"last_created", to_iso(table.last_created())},
                          {"records", std::move(records)}});
  }
  Json forms = Json::array();
  for (const auto& form : base.forms) forms.push_back(to_json(form));
  Json grants = Json::array();
  for (const auto& grant : base.access.grants()) grants.push_back(to_json(grant));
  Json tokens = Json::array();
  for (const auto& token : base.access.tokens()) tokens.push_back(to_json(token));
  Json comments = Json::array();
  for (const auto& comment : base.comments) comments.push_back(to_json(comment));
  Json idempotency = Json::object();
  for (const auto& [key, entry] : base.idempotency) {
    idempotency[key] = Json{{"form", entry.form.str()},
                            {"table", entry.table.str()},
                            {"record", entry.record.str()},
                            {"at", to_iso(entry.at)}};
  }
  return Json{{"id", base.id.str()},
              {"name", base.name},
              {"template", base.template_id},
              {"journal_seq", base.journal_seq},
              {"option_use_seq", base.option_use_seq},
              {"tables", std::move(tables)},
              {"forms", std::move(forms)},
              {"grants", std::move(grants)},
              {"tokens", std::move(tokens)},
              {"comments", std::move(comments)},
              {"idempotency", std::move(idempotency)}};
}

Base state_from_json(const Json& json) {
  Base base;
  base.id = BaseId(json.at("id").get<std::string>());
  base.name = json.at("name").get<std::string>();
  base.template_id = json.value("template", std::string());
  base.journal_seq = json.value("journal_seq", std::uint64_t{0});
  base.option_use_seq = json.value("option_use_seq", std::uint64_t{0});
  for (const auto& item : json.at("tables")) {
    auto spec = table_from_json(item.at("spec"));
    std::vector<Record> records;
    for (const auto& record : item.at("records")) records.push_back(record_from_json(spec, record));
    base.tables.push_back(TableData::restore(std::move(spec), std::move(records),
                                             item.at("next_seq").get<std::uint64_t>(),
                                             timestamp_from(item.at("last_created"))));
  }
  base.forms = list_from<FormSpec>(json.at("forms"), form_from_json);
  base.access = AccessList(list_from<Grant>(json.at("grants"), grant_from_json),
                           list_from<FormToken>(json.value("tokens", Json::array()), token_from_json));
  base.comments = list_from<Comment>(json.value("comments", Json::array()), comment_from_json);
  const auto idempotency = json.value("idempotency", Json::object());
  for (const auto& [key, entry] : idempotency.items()) {
    base.idempotency.emplace(key, IdempotentSubmission{FormId(entry.at("form").get<std::string>()),
                                                       TableId(entry.at("table").get<std::string>()),
                                                       RecordId(entry.at("record").get<std::string>()),
                                                       timestamp_from(entry.at("at"))});
  }
  return base;
}

RawValue raw_from_json(const Json& json) {
  if (json.is_null()) return RawValue(std::string());
  if (json.is_string()) return RawValue(json.get<std::string>());
  if (json.is_array()) {
    std::vector<std::string> items;
    for (const auto& item : json) {
      if (!item.is_string()) throw Error(ErrorCode::invalid_request, "list items must be strings");
      items.push_back(item.get<std::string>());
    }
    return RawValue(std::move(items));
  }
  if (json.is_number_integer()) return RawValue(std::to_string(json.get<std::int64_t>()));
  if (json.is_number()) return RawValue(json.dump());
  if (json.is_boolean()) return RawValue(std::string(json.get<bool>() ? "true" : "false"));
  throw Error(ErrorCode::invalid_request, "unsupported value " + json.dump());
}

}  // namespace farmrec
