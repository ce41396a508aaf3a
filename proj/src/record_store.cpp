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

#include "farmrec/record_store.hpp"

#include <algorithm>
#include <array>

namespace farmrec {

namespace {

constexpr std::array<std::pair<Predicate, std::string_view>, 8> kPredicateNames = {{
    {Predicate::equals, "eq"},
    {Predicate::contains, "contains"},
    {Predicate::is_empty, "empty"},
    {Predicate::not_empty, "notempty"},
    {Predicate::less, "lt"},
    {Predicate::less_equal, "le"},
    {Predicate::greater, "gt"},
    {Predicate::greater_equal, "ge"},
}};

const CellValue kEmptyCell{};

bool orderable(FieldKind kind) {
  return is_numeric(kind) || kind == FieldKind::date || kind == FieldKind::created_time;
}

double numeric_key(const CellValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  if (const auto* r = std::get_if<double>(&value)) return *r;
  if (const auto* d = std::get_if<Date>(&value)) return d->days;
  if (const auto* t = std::get_if<Timestamp>(&value)) return static_cast<double>(t->seconds);
  return 0;
}

std::string lowered(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

// Cell value as seen by filters: created-time lives on the record, not in cells.
const CellValue& value_of(const Record& record, const FieldSpec& field, CellValue& scratch) {
  if (field.kind == FieldKind::created_time) {
    scratch = record.created_time;
    return scratch;
  }
  return record.cell(field.id);
}

CellValue parse_operand(const FieldSpec& field, const std::string& operand) {
  if (field.kind == FieldKind::created_time) {
    if (auto ts = parse_timestamp(trim(operand))) return *ts;
    if (auto date = parse_date(trim(operand))) return Timestamp{static_cast<std::int64_t>(date->days) * 86400};
    throw Error(ErrorCode::malformed_date, "'" + operand + "' is not a timestamp", field.name);
  }
  if (field.kind == FieldKind::multi_select) {
    return validate_cell(field, RawValue(std::vector<std::string>{operand}));
  }
  return validate_cell(field, RawValue(operand));
}

bool matches(const Filter& filter, const FieldSpec& field, const CellValue& operand,
             const Record& record) {
  CellValue scratch;
  const auto& value = value_of(record, field, scratch);
  switch (filter.predicate) {
    case Predicate::is_empty: return is_empty(value);
    case Predicate::not_empty: return !is_empty(value);
    case Predicate::equals: {
      if (field.kind == FieldKind::multi_select) {
        const auto* refs = std::get_if<OptionRefList>(&value);
        const auto* wanted = std::get_if<OptionRefList>(&operand);
        if (!refs || !wanted) return is_empty(value) && is_empty(operand);
        return std::all_of(wanted->ids.begin(), wanted->ids.end(), [&](const OptionId& id) {
          return std::find(refs->ids.begin(), refs->ids.end(), id) != refs->ids.end();
        });
      }
      if (is_numeric(field.kind) && !is_empty(value) && !is_empty(operand)) {
        return numeric_key(value) == numeric_key(operand);
      }
      return value == operand;
    }
    case Predicate::contains: {
      auto haystack = lowered(render_cell(field, value));
      return !is_empty(value) && haystack.find(lowered(filter.operand)) != std::string::npos;
    }
    case Predicate::less:
    case Predicate::less_equal:
    case Predicate::greater:
    case Predicate::greater_equal: {
      if (is_empty(value)) return false;
      double lhs = numeric_key(value);
      double rhs = numeric_key(operand);
      switch (filter.predicate) {
        case Predicate::less: return lhs < rhs;
        case Predicate::less_equal: return lhs <= rhs;
        case Predicate::greater: return lhs > rhs;
        default: return lhs >= rhs;
      }
    }
  }
  return false;
}

// Three-way comparison used by sort; empties first.
int compare_cells(const FieldSpec& field, const CellValue& a, const CellValue& b) {
  bool ea = is_empty(a);
  bool eb = is_empty(b);
  if (ea || eb) return ea == eb ? 0 : (ea ? -1 : 1);
  if (orderable(field.kind)) {
    double x = numeric_key(a);
    double y = numeric_key(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  auto x = render_cell(field, a);
  auto y = render_cell(field, b);
  if (is_select(field.kind)) {
    x = lowered(x);
    y = lowered(y);
  }
  return x.compare(y) < 0 ? -1 : (x == y ? 0 : 1);
}

}  // namespace

std::string_view to_string(Predicate predicate) {
  for (const auto& [p, name] : kPredicateNames) {
    if (p == predicate) return name;
  }
  return "eq";
}

std::optional<Predicate> parse_predicate(std::string_view text) {
  for (const auto& [p, name] : kPredicateNames) {
    if (name == text) return p;
  }
  if (text == "equals") return Predicate::equals;
  if (text == "is-empty") return Predicate::is_empty;
  if (text == "not-empty") return Predicate::not_empty;
  return std::nullopt;
}

const CellValue& Record::cell(const FieldId& field) const {
  auto it = cells.find(field);
  return it == cells.end() ? kEmptyCell : it->second;
}

TableData TableData::restore(TableSpec spec, std::vector<Record> records, std::uint64_t next_seq,
                             Timestamp last_created) {
  TableData table(std::move(spec));
  table.records_ = std::move(records);
  table.next_seq_ = next_seq;
  table.last_created_ = last_created;
  return table;
}

const Record* TableData::find(const RecordId& id) const {
  auto it = std::find_if(records_.begin(), records_.end(), [&](const Record& r) { return r.id == id; });
  return it == records_.end() ? nullptr : &*it;
}

Record TableData::prepare_insert(const RawCells& cells, Timestamp now, RecordId id) const {
  return prepare_insert(spec_, cells, now, std::move(id));
}

Record TableData::prepare_insert(const TableSpec& spec, const RawCells& cells, Timestamp now,
                                 RecordId id) const {
  Record record;
  record.id = std::move(id);
  record.table = spec.id;
  std::vector<Issue> issues;
  for (const auto& [field_id, raw] : cells) {
    const auto* field = spec.find(field_id);
    if (!field) {
      issues.push_back({ErrorCode::unknown_field, field_id.str(),
                        "table '" + spec.name + "' has no field '" + field_id.str() + "'"});
      continue;
    }
    if (field->kind == FieldKind::created_time) {
      issues.push_back({ErrorCode::client_set_created_time, field->name,
                        "field '" + field->name + "' is assigned by the server"});
      continue;
    }
    try {
      auto value = validate_cell(*field, raw);
      if (!is_empty(value)) record.cells.emplace(field->id, std::move(value));
    } catch (const Error& e) {
      issues.push_back(e.issues().front());
    }
  }
  if (!issues.empty()) {
    auto first = issues.front();
    throw Error(first.code, first.message, std::move(issues));
  }
  record.created_time = std::max(now, last_created_);
  record.seq = next_seq_;
  return record;
}

void TableData::commit_insert(Record record) {
  last_created_ = std::max(last_created_, record.created_time);
  next_seq_ = std::max(next_seq_, record.seq + 1);
  records_.push_back(std::move(record));
}

Record TableData::prepare_update(const RecordId& id, const RawCells& cells) const {
  const auto* existing = find(id);
  if (!existing) throw Error(ErrorCode::unknown_record, "no record '" + id.str() + "'");
  Record updated = *existing;
  std::vector<Issue> issues;
  for (const auto& [field_id, raw] : cells) {
    const auto* field = spec_.find(field_id);
    if (!field) {
      issues.push_back({ErrorCode::unknown_field, field_id.str(),
                        "table '" + spec_.name + "' has no field '" + field_id.str() + "'"});
      continue;
    }
    if (field->kind == FieldKind::created_time) {
      issues.push_back({ErrorCode::client_set_created_time, field->name,
                        "field '" + field->name + "' is assigned by the server"});
      continue;
    }
    try {
      auto value = validate_cell(*field, raw);
      if (is_empty(value)) {
        updated.cells.erase(field->id);
      } else {
        updated.cells.insert_or_assign(field->id, std::move(value));
      }
    } catch (const Error& e) {
      issues.push_back(e.issues().front());
    }
  }
  if (!issues.empty()) {
    auto first = issues.front();
    throw Error(first.code, first.message, std::move(issues));
  }
  return updated;
}

void TableData::commit_update(Record record) {
  for (auto& existing : records_) {
    if (existing.id == record.id) {
      existing.cells = std::move(record.cells);
      return;
    }
  }
}

void TableData::erase(const RecordId& id) {
  auto it = std::find_if(records_.begin(), records_.end(), [&](const Record& r) { return r.id == id; });
  if (it == records_.end()) throw Error(ErrorCode::unknown_record, "no record '" + id.str() + "'");
  records_.erase(it);
}

std::vector<const Record*> TableData::query(const Query& query) const {
  struct Prepared {
    const Filter* filter;
    const FieldSpec* field;
    CellValue operand;
  };
  std::vector<Prepared> filters;
  for (const auto& filter : query.filters) {
    const auto* field = spec_.find(filter.field);
    if (!field) throw Error(ErrorCode::unknown_field, "no field '" + filter.field.str() + "'");
    Prepared prepared{&filter, field, {}};
    switch (filter.predicate) {
      case Predicate::is_empty:
      case Predicate::not_empty: break;
      case Predicate::contains:
        if (!is_textual(field->kind)) {
          throw Error(ErrorCode::predicate_kind_mismatch,
                      "'contains' applies to text fields, not '" + field->name + "'", field->name);
        }
        break;
      case Predicate::equals: prepared.operand = parse_operand(*field, filter.operand); break;
      default:
        if (!orderable(field->kind)) {
          throw Error(ErrorCode::predicate_kind_mismatch,
                      "comparison applies to numeric or date fields, not '" + field->name + "'",
                      field->name);
        }
        prepared.operand = parse_operand(*field, filter.operand);
        if (is_empty(prepared.operand)) {
          throw Error(ErrorCode::type_mismatch, "comparison needs a value", field->name);
        }
    }
    filters.push_back(std::move(prepared));
  }

  std::vector<const Record*> rows;
  for (const auto& record : records_) {
    bool keep = std::all_of(filters.begin(), filters.end(), [&](const Prepared& p) {
      return matches(*p.filter, *p.field, p.operand, record);
    });
    if (keep) rows.push_back(&record);
  }
  auto chronological = [](const Record* a, const Record* b) {
    return std::tie(a->created_time, a->seq) < std::tie(b->created_time, b->seq);
  };
  std::stable_sort(rows.begin(), rows.end(), chronological);
  if (query.sort) {
    const auto* field = spec_.find(query.sort->field);
    if (!field) throw Error(ErrorCode::unknown_field, "no field '" + query.sort->field.str() + "'");
    bool ascending = query.sort->ascending;
    std::stable_sort(rows.begin(), rows.end(), [&](const Record* a, const Record* b) {
      CellValue sa, sb;
      int c = compare_cells(*field, value_of(*a, *field, sa), value_of(*b, *field, sb));
      return ascending ? c < 0 : c > 0;
    });
  }
  return rows;
}

std::vector<std::string> TableData::audit() const {
  std::vector<std::string> problems;
  int created_fields = 0;
  for (const auto& field : spec_.fields) {
    if (field.kind == FieldKind::created_time) ++created_fields;
    if (field.options.has_value() != is_select(field.kind)) {
      problems.push_back("field '" + field.name + "' option list does not match its kind");
    }
  }
  if (created_fields != 1) problems.push_back("table must have exactly one created-time field");
  const Record* previous = nullptr;
  for (const auto& record : records_) {
    if (record.table != spec_.id) problems.push_back("record " + record.id.str() + " has wrong table id");
    for (const auto& [field_id, value] : record.cells) {
      const auto* field = spec_.find(field_id);
      if (!field) {
        problems.push_back("record " + record.id.str() + " has cell for unknown field " + field_id.str());
      } else if (field->kind == FieldKind::created_time) {
        problems.push_back("record " + record.id.str() + " stores a created-time cell");
      } else if (is_empty(value) || !cell_matches(*field, value)) {
        problems.push_back("record " + record.id.str() + " cell '" + field->name +
                           "' does not match kind " + std::string(to_string(field->kind)));
      }
    }
    if (previous && std::tie(previous->created_time, previous->seq) >=
                        std::tie(record.created_time, record.seq)) {
      problems.push_back("record " + record.id.str() + " breaks created-time order");
    }
    previous = &record;
  }
  return problems;
}

}  // namespace farmrec
