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

#include "farmrec/tidy_io.hpp"

#include <algorithm>
#include <set>

namespace farmrec {

namespace csv {

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string write_row(const Row& row, std::string_view line_ending) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(row[i]);
  }
  out += line_ending;
  return out;
}

std::vector<Row> parse(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  std::vector<Row> rows;
  Row row;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool row_open = false;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::malformed_csv, "line " + std::to_string(line) + ": " + what);
  };
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    rows.push_back(std::move(row));
    row.clear();
    row_open = false;
  };
  while (i < bytes.size()) {
    row_open = true;
    if (bytes[i] == '"') {
      ++i;
      while (true) {
        if (i >= bytes.size()) fail("unterminated quoted field");
        char c = bytes[i++];
        if (c == '"') {
          if (i < bytes.size() && bytes[i] == '"') {
            field.push_back('"');
            ++i;
            continue;
          }
          break;
        }
        if (c == '\n') ++line;
        field.push_back(c);
      }
      if (i < bytes.size() && bytes[i] != ',' && bytes[i] != '\r' && bytes[i] != '\n') {
        fail("unexpected character after closing quote");
      }
    } else {
      while (i < bytes.size() && bytes[i] != ',' && bytes[i] != '\r' && bytes[i] != '\n') {
        if (bytes[i] == '"') fail("quote inside unquoted field");
        field.push_back(bytes[i++]);
      }
    }
    if (i >= bytes.size()) break;
    char c = bytes[i++];
    if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      if (i >= bytes.size()) {
        end_row();  // trailing comma: final empty field
      }
      continue;
    }
    if (c == '\r' && i < bytes.size() && bytes[i] == '\n') ++i;
    ++line;
    end_row();
  }
  if (row_open) end_row();
  return rows;
}

}  // namespace csv

ExportConfig ExportConfig::iso() { return ExportConfig{}; }

ExportConfig ExportConfig::table1() {
  ExportConfig config;
  config.datetime_format = std::string(kTable1TimestampPattern);
  config.date_format = std::string(kTable1DatePattern);
  return config;
}

ExportConfig ExportConfig::preset(std::string_view name) {
  if (name.empty() || name == "iso") return iso();
  if (name == "table1") return table1();
  if (name.find('%') != std::string_view::npos) {
    ExportConfig config;
    config.datetime_format = std::string(name);
    return config;
  }
  throw Error(ErrorCode::invalid_request, "unknown datetime format '" + std::string(name) + "'");
}

RenderStyle ExportConfig::style() const {
  return RenderStyle{date_format, datetime_format, multi_value_joiner};
}

std::string export_csv(const TableData& table, const ExportConfig& config) {
  if (config.multi_value_joiner.empty()) {
    throw Error(ErrorCode::invalid_request, "multi-value joiner must not be empty");
  }
  const auto& fields = table.spec().fields;
  auto style = config.style();
  std::string out;
  if (config.byte_order_mark) out += "\xEF\xBB\xBF";
  if (config.include_header) {
    csv::Row header;
    for (const auto& field : fields) header.push_back(field.display_name());
    out += csv::write_row(header, config.line_ending);
  }
  for (const auto* record : table.query({})) {
    csv::Row row;
    row.reserve(fields.size());
    for (const auto& field : fields) {
      if (field.kind == FieldKind::created_time) {
        row.push_back(format_timestamp(record->created_time, config.datetime_format));
      } else {
        row.push_back(render_cell(field, record->cell(field.id), style));
      }
    }
    out += csv::write_row(row, config.line_ending);
  }
  return out;
}

namespace {

std::vector<std::string> split_joined(std::string_view text, std::string_view joiner) {
  auto separator = trim(joiner);
  if (separator.empty()) separator = std::string(joiner);
  std::vector<std::string> items;
  std::size_t start = 0;
  while (true) {
    auto end = text.find(separator, start);
    items.push_back(trim(text.substr(start, end == std::string_view::npos ? end : end - start)));
    if (end == std::string_view::npos) break;
    start = end + separator.size();
  }
  return items;
}

}  // namespace

ImportPlan plan_import(const TableData& table, std::string_view bytes, ImportMode mode, Timestamp now,
                       std::string_view joiner) {
  auto rows = csv::parse(bytes);
  if (rows.empty()) throw Error(ErrorCode::empty_input, "CSV input has no header row");

  const auto& original = table.spec();
  std::vector<const FieldSpec*> columns;
  std::set<FieldId> seen;
  std::vector<Issue> header_issues;
  for (const auto& name : rows.front()) {
    const auto* field = original.resolve(name);
    if (!field) {
      header_issues.push_back({ErrorCode::header_mismatch, name, "unknown column '" + name + "'"});
    } else if (!seen.insert(field->id).second) {
      header_issues.push_back({ErrorCode::header_mismatch, name, "column '" + name + "' appears twice"});
    }
    columns.push_back(field);
  }
  for (const auto& field : original.fields) {
    if (field.kind != FieldKind::created_time && !seen.count(field.id)) {
      header_issues.push_back(
          {ErrorCode::header_mismatch, field.display_name(), "missing column '" + field.display_name() + "'"});
    }
  }
  if (!header_issues.empty()) {
    auto first = header_issues.front();
    throw Error(first.code, "CSV header does not match table '" + original.name + "': " + first.message,
                std::move(header_issues));
  }

  ImportPlan plan;
  plan.spec = original;
  std::set<FieldId> grown;
  Timestamp created = std::max(now, table.last_created());
  std::uint64_t seq = table.next_seq();

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != columns.size()) {
      plan.errors.push_back({r, {}, ErrorCode::malformed_csv,
                             "expected " + std::to_string(columns.size()) + " fields, got " +
                                 std::to_string(row.size())});
      continue;
    }
    TableSpec working = plan.spec;
    std::set<FieldId> row_grown;
    Record record;
    record.table = working.id;
    bool ok = true;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      auto* field = working.find(columns[c]->id);
      if (field->kind == FieldKind::created_time) continue;
      RawValue raw = field->kind == FieldKind::multi_select
                         ? RawValue(trim(row[c]).empty() ? std::vector<std::string>{}
                                                         : split_joined(row[c], joiner))
                         : RawValue(row[c]);
      try {
        if (mode == ImportMode::lenient && is_select(field->kind)) {
          std::vector<std::string> labels = raw.is_list() ? raw.items() : std::vector<std::string>{row[c]};
          for (const auto& label : labels) {
            if (trim(label).empty() || field->options->find_label(label)) continue;
            auto result = add_option(*field, label);
            *field = std::move(result.field);
            row_grown.insert(field->id);
          }
        }
        auto value = validate_cell(*field, raw);
        if (!is_empty(value)) record.cells.emplace(field->id, std::move(value));
      } catch (const Error& e) {
        plan.errors.push_back({r, field->display_name(), e.code(), e.what()});
        ok = false;
      }
    }
    if (!ok) continue;
    plan.spec = std::move(working);
    grown.insert(row_grown.begin(), row_grown.end());
    record.id = fresh_id<RecordId>("rec");
    record.created_time = created;
    record.seq = seq++;
    plan.records.push_back(std::move(record));
  }

  if (mode == ImportMode::strict && !plan.errors.empty()) {
    plan.records.clear();
    plan.spec = original;
    grown.clear();
  }
  plan.grown_fields.assign(grown.begin(), grown.end());
  return plan;
}

void apply_import(TableData& table, const ImportPlan& plan) {
  for (const auto& field_id : plan.grown_fields) {
    if (auto* field = table.mutable_spec().find(field_id)) *field = *plan.spec.find(field_id);
  }
  for (const auto& record : plan.records) table.commit_insert(record);
}

namespace {

enum class Inferred { integer, real, date, datetime, url, select, text };

bool all_of_kind(const std::vector<std::string>& values, FieldKind kind) {
  auto probe = make_field("probe", kind);
  return std::all_of(values.begin(), values.end(), [&](const std::string& v) {
    try {
      validate_cell(probe, RawValue(v));
      return true;
    } catch (const Error&) {
      return false;
    }
  });
}

bool looks_like_url(const std::string& value) {
  return value.find("://") != std::string::npos || value.rfind("mailto:", 0) == 0;
}

Inferred classify(const std::vector<std::string>& values, std::size_t& distinct_out) {
  std::vector<std::string> distinct;
  for (const auto& v : values) {
    if (std::none_of(distinct.begin(), distinct.end(), [&](const std::string& d) { return iequals(d, v); })) {
      distinct.push_back(v);
    }
  }
  distinct_out = distinct.size();
  if (all_of_kind(values, FieldKind::integer)) return Inferred::integer;
  if (all_of_kind(values, FieldKind::real)) return Inferred::real;
  if (all_of_kind(values, FieldKind::date)) return Inferred::date;
  if (std::all_of(values.begin(), values.end(),
                  [](const std::string& v) { return parse_timestamp(v).has_value(); })) {
    return Inferred::datetime;
  }
  if (std::all_of(values.begin(), values.end(), looks_like_url) && all_of_kind(values, FieldKind::url)) {
    return Inferred::url;
  }
  auto threshold = std::max<std::size_t>(10, values.size() / 5);
  bool single_line = std::none_of(values.begin(), values.end(),
                                  [](const std::string& v) { return v.find('\n') != std::string::npos; });
  if (single_line && distinct.size() <= threshold && distinct.size() < values.size()) {
    return Inferred::select;
  }
  return Inferred::text;
}

// "Seeding Rate (seeds/ac)" -> ("Seeding Rate", "seeds/ac")
std::pair<std::string, std::optional<std::string>> split_unit(const std::string& header) {
  if (header.size() < 4 || header.back() != ')') return {header, std::nullopt};
  auto open = header.rfind(" (");
  if (open == std::string::npos || open == 0) return {header, std::nullopt};
  auto unit = header.substr(open + 2, header.size() - open - 3);
  if (unit.empty()) return {header, std::nullopt};
  return {header.substr(0, open), unit};
}

}  // namespace

TableSpec infer_schema(std::string_view bytes, std::string table_name) {
  auto rows = csv::parse(bytes);
  if (rows.empty()) throw Error(ErrorCode::empty_input, "CSV input has no header row");
  const auto& header = rows.front();
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    auto name = trim(header[c]);
    if (name.empty()) name = "Column " + std::to_string(c + 1);
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      throw Error(ErrorCode::duplicate_header, "column '" + name + "' appears twice", name);
    }
    names.push_back(name);
  }

  std::vector<FieldSpec> fields;
  bool have_created = false;
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::vector<std::string> values;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (c < rows[r].size()) {
        auto v = trim(rows[r][c]);
        if (!v.empty()) values.push_back(std::move(v));
      }
    }
    if (values.empty()) {
      fields.push_back(make_field(names[c], FieldKind::short_text));
      continue;
    }
    std::size_t distinct = 0;
    switch (classify(values, distinct)) {
      case Inferred::integer:
      case Inferred::real: {
        auto [name, unit] = split_unit(names[c]);
        auto kind = all_of_kind(values, FieldKind::integer) ? FieldKind::integer : FieldKind::real;
        fields.push_back(make_field(name, kind, unit));
        break;
      }
      case Inferred::date: fields.push_back(make_field(names[c], FieldKind::date)); break;
      case Inferred::datetime:
        fields.push_back(make_field(names[c], have_created ? FieldKind::short_text : FieldKind::created_time));
        have_created = true;
        break;
      case Inferred::url: fields.push_back(make_field(names[c], FieldKind::url)); break;
      case Inferred::select: {
        auto field = make_field(names[c], FieldKind::single_select);
        for (const auto& v : values) field.options->add(v);
        fields.push_back(std::move(field));
        break;
      }
      case Inferred::text: {
        bool multiline = std::any_of(values.begin(), values.end(),
                                     [](const std::string& v) { return v.find('\n') != std::string::npos; });
        fields.push_back(make_field(names[c], multiline ? FieldKind::long_text : FieldKind::short_text));
        break;
      }
    }
  }
  if (!have_created) {
    std::string name = "created time";
    for (int n = 2; std::any_of(fields.begin(), fields.end(), [&](const FieldSpec& f) { return f.name == name; });
         ++n) {
      name = "created time " + std::to_string(n);
    }
    fields.push_back(make_field(name, FieldKind::created_time));
  }
  return make_table(std::move(table_name), std::move(fields));
}

}  // namespace farmrec
