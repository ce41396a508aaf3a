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

#include "farmrec/schema.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace farmrec {

namespace {

constexpr std::array<std::pair<FieldKind, std::string_view>, 10> kKindNames = {{
    {FieldKind::date, "date"},
    {FieldKind::created_time, "created-time"},
    {FieldKind::short_text, "short-text"},
    {FieldKind::long_text, "long-text"},
    {FieldKind::integer, "integer"},
    {FieldKind::real, "real"},
    {FieldKind::url, "url"},
    {FieldKind::single_select, "single-select"},
    {FieldKind::multi_select, "multi-select"},
    {FieldKind::attachment_ref, "attachment-ref"},
}};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

Error mismatch(const FieldSpec& spec, std::string_view raw, std::string_view expected) {
  return Error(ErrorCode::type_mismatch,
               "'" + std::string(raw) + "' is not " + std::string(expected) + " for field '" +
                   spec.name + "'",
               spec.name);
}

std::string single_text(const FieldSpec& spec, const RawValue& raw) {
  if (!raw.is_list()) return trim(raw.text());
  const auto& items = raw.items();
  if (items.empty()) return {};
  if (items.size() == 1) return trim(items.front());
  throw Error(ErrorCode::type_mismatch, "field '" + spec.name + "' holds a single value", spec.name);
}

std::optional<std::int64_t> parse_integer(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty() || text.front() == '+') return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_real(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty() || text.front() == '+') return std::nullopt;
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value,
                                   std::chars_format::general);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

bool valid_url(std::string_view text) {
  if (std::any_of(text.begin(), text.end(), is_space)) return false;
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  auto scheme = text.substr(0, colon);
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  if (!alpha(scheme.front())) return false;
  for (char c : scheme) {
    if (!(alpha(c) || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.')) return false;
  }
  auto rest = text.substr(colon + 1);
  if (rest.empty()) return false;
  std::string lowered(scheme);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), ascii_lower);
  if (lowered == "http" || lowered == "https" || lowered == "ftp") {
    if (rest.substr(0, 2) != "//") return false;
    auto host = rest.substr(2);
    host = host.substr(0, host.find_first_of("/?#"));
    return !host.empty();
  }
  return true;
}

const Option& resolve_option(const FieldSpec& spec, std::string_view key) {
  const auto& options = *spec.options;
  if (const auto* by_id = options.find(OptionId(std::string(key)))) return *by_id;
  if (const auto* by_label = options.find_label(key)) return *by_label;
  throw Error(ErrorCode::unknown_option,
              "'" + std::string(key) + "' is not an option of field '" + spec.name + "'", spec.name);
}

std::vector<std::string> split_items(std::string_view text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    items.push_back(std::string(text.substr(start, end - start)));
    start = end + 1;
  }
  return items;
}

std::string format_real(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view to_string(FieldKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "short-text";
}

std::optional<FieldKind> parse_field_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::string trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return std::string(text);
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(),
                    [](char x, char y) { return ascii_lower(x) == ascii_lower(y); });
}

// OptionList

const Option* OptionList::find(const OptionId& id) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Option& o) { return o.id == id; });
  return it == entries_.end() ? nullptr : &*it;
}

const Option* OptionList::find_label(std::string_view label) const {
  auto wanted = trim(label);
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const Option& o) { return iequals(o.label, wanted); });
  return it == entries_.end() ? nullptr : &*it;
}

std::pair<const Option*, bool> OptionList::add(std::string_view label) {
  return add(label, fresh_id<OptionId>("opt"));
}

std::pair<const Option*, bool> OptionList::add(std::string_view label, OptionId id) {
  if (const auto* existing = find_label(label)) return {existing, false};
  entries_.push_back(Option{std::move(id), trim(label), std::nullopt, 0});
  return {&entries_.back(), true};
}

void OptionList::mark_used(const OptionId& id, Timestamp at, std::uint64_t use_seq) {
  for (auto& option : entries_) {
    if (option.id == id) {
      option.last_used_at = at;
      option.use_seq = use_seq;
    }
  }
}

std::vector<const Option*> OptionList::mru_order() const {
  std::vector<const Option*> order;
  order.reserve(entries_.size());
  for (const auto& option : entries_) order.push_back(&option);
  std::stable_sort(order.begin(), order.end(),
                   [](const Option* a, const Option* b) { return a->use_seq > b->use_seq; });
  return order;
}

// FieldSpec / TableSpec

std::string FieldSpec::display_name() const {
  if (unit && !unit->empty()) return name + " (" + *unit + ")";
  return name;
}

FieldSpec make_field(std::string name, FieldKind kind, std::optional<std::string> unit) {
  FieldSpec spec;
  spec.id = fresh_id<FieldId>("fld");
  spec.name = trim(name);
  spec.kind = kind;
  spec.unit = std::move(unit);
  if (is_select(kind)) spec.options = OptionList{};
  return spec;
}

const FieldSpec* TableSpec::find(const FieldId& id) const {
  auto it = std::find_if(fields.begin(), fields.end(), [&](const FieldSpec& f) { return f.id == id; });
  return it == fields.end() ? nullptr : &*it;
}

FieldSpec* TableSpec::find(const FieldId& id) {
  auto it = std::find_if(fields.begin(), fields.end(), [&](const FieldSpec& f) { return f.id == id; });
  return it == fields.end() ? nullptr : &*it;
}

const FieldSpec* TableSpec::resolve(std::string_view key) const {
  if (const auto* by_id = find(FieldId(std::string(key)))) return by_id;
  auto wanted = trim(key);
  for (const auto& field : fields) {
    if (field.name == wanted) return &field;
  }
  for (const auto& field : fields) {
    if (field.display_name() == wanted) return &field;
  }
  return nullptr;
}

const FieldSpec& TableSpec::created_time_field() const {
  auto it = std::find_if(fields.begin(), fields.end(),
                         [](const FieldSpec& f) { return f.kind == FieldKind::created_time; });
  if (it == fields.end()) {
    throw Error(ErrorCode::invalid_request, "table '" + name + "' has no created-time field");
  }
  return *it;
}

TableSpec make_table(std::string name) { return make_table(std::move(name), {}); }

TableSpec make_table(std::string name, std::vector<FieldSpec> fields) {
  TableSpec table;
  table.id = fresh_id<TableId>("tbl");
  table.name = trim(name);
  if (table.name.empty()) throw Error(ErrorCode::empty_name, "table name must not be empty");
  bool has_created = std::any_of(fields.begin(), fields.end(), [](const FieldSpec& f) {
    return f.kind == FieldKind::created_time;
  });
  for (auto& field : fields) table = add_field(std::move(table), std::move(field));
  if (!has_created) table = add_field(std::move(table), make_field("created time", FieldKind::created_time));
  return table;
}

TableSpec add_field(TableSpec table, FieldSpec spec) {
  spec.name = trim(spec.name);
  if (spec.name.empty()) throw Error(ErrorCode::empty_name, "field name must not be empty");
  for (const auto& existing : table.fields) {
    if (existing.name == spec.name || existing.display_name() == spec.display_name()) {
      throw Error(ErrorCode::duplicate_name,
                  "table '" + table.name + "' already has a field named '" + spec.name + "'",
                  spec.name);
    }
    if (existing.id == spec.id) {
      throw Error(ErrorCode::duplicate_name, "field id '" + spec.id.str() + "' already in use",
                  spec.name);
    }
  }
  if (spec.kind == FieldKind::created_time &&
      std::any_of(table.fields.begin(), table.fields.end(),
                  [](const FieldSpec& f) { return f.kind == FieldKind::created_time; })) {
    throw Error(ErrorCode::second_created_time_field,
                "table '" + table.name + "' already has a created-time field", spec.name);
  }
  if (spec.options && !is_select(spec.kind)) {
    throw Error(ErrorCode::options_on_non_select,
                "field '" + spec.name + "' of kind " + std::string(to_string(spec.kind)) +
                    " cannot have options",
                spec.name);
  }
  if (is_select(spec.kind) && !spec.options) spec.options = OptionList{};
  if (spec.id.empty()) spec.id = fresh_id<FieldId>("fld");
  table.fields.push_back(std::move(spec));
  return table;
}

AddOptionResult add_option(FieldSpec spec, std::string_view label) {
  if (!is_select(spec.kind)) {
    throw Error(ErrorCode::non_select_field, "field '" + spec.name + "' does not take options",
                spec.name);
  }
  auto cleaned = trim(label);
  if (cleaned.empty()) throw Error(ErrorCode::empty_label, "option label must not be empty", spec.name);
  if (cleaned.find('\n') != std::string::npos ||
      (spec.kind == FieldKind::multi_select && cleaned.find(';') != std::string::npos)) {
    throw Error(ErrorCode::invalid_label, "option label '" + cleaned + "' contains a reserved character",
                spec.name);
  }
  auto [option, created] = spec.options->add(cleaned);
  OptionId id = option->id;
  return AddOptionResult{std::move(spec), std::move(id), created};
}

// RawValue / cells

bool RawValue::blank() const {
  if (!is_list()) return trim(text()).empty();
  return std::all_of(items().begin(), items().end(),
                     [](const std::string& item) { return trim(item).empty(); });
}

bool cell_matches(const FieldSpec& spec, const CellValue& value) {
  if (is_empty(value)) return true;
  switch (spec.kind) {
    case FieldKind::date: return std::holds_alternative<Date>(value);
    case FieldKind::created_time: return std::holds_alternative<Timestamp>(value);
    case FieldKind::short_text:
    case FieldKind::long_text: return std::holds_alternative<Text>(value);
    case FieldKind::integer: return std::holds_alternative<std::int64_t>(value);
    case FieldKind::real: return std::holds_alternative<double>(value);
    case FieldKind::url: return std::holds_alternative<Url>(value);
    case FieldKind::attachment_ref: return std::holds_alternative<AttachmentRef>(value);
    case FieldKind::single_select: {
      const auto* ref = std::get_if<OptionRef>(&value);
      return ref && spec.options && spec.options->find(ref->id);
    }
    case FieldKind::multi_select: {
      const auto* refs = std::get_if<OptionRefList>(&value);
      return refs && spec.options && !refs->ids.empty() &&
             std::all_of(refs->ids.begin(), refs->ids.end(),
                         [&](const OptionId& id) { return spec.options->find(id) != nullptr; });
    }
  }
  return false;
}

CellValue validate_cell(const FieldSpec& spec, const RawValue& raw) {
  if (spec.kind == FieldKind::multi_select) {
    std::vector<std::string> items = raw.is_list() ? raw.items() : split_items(raw.text());
    OptionRefList refs;
    for (const auto& item : items) {
      auto key = trim(item);
      if (key.empty()) continue;
      const auto& option = resolve_option(spec, key);
      if (std::find(refs.ids.begin(), refs.ids.end(), option.id) == refs.ids.end()) {
        refs.ids.push_back(option.id);
      }
    }
    if (refs.ids.empty()) return std::monostate{};
    return refs;
  }

  auto text = single_text(spec, raw);
  if (text.empty()) return std::monostate{};

  switch (spec.kind) {
    case FieldKind::created_time:
      throw Error(ErrorCode::client_set_created_time,
                  "field '" + spec.name + "' is assigned by the server", spec.name);
    case FieldKind::date: {
      auto date = parse_date(text);
      if (!date) {
        throw Error(ErrorCode::malformed_date,
                    "'" + text + "' is not a date (mm/dd/yyyy or yyyy-mm-dd) for field '" +
                        spec.name + "'",
                    spec.name);
      }
      return *date;
    }
    case FieldKind::short_text:
      if (text.find('\n') != std::string::npos) throw mismatch(spec, text, "single-line text");
      return Text{text};
    case FieldKind::long_text: return Text{text};
    case FieldKind::integer: {
      auto value = parse_integer(text);
      if (!value) throw mismatch(spec, text, "a whole number");
      return *value;
    }
    case FieldKind::real: {
      auto value = parse_real(text);
      if (!value) throw mismatch(spec, text, "a number");
      return *value;
    }
    case FieldKind::url:
      if (!valid_url(text)) {
        throw Error(ErrorCode::malformed_url,
                    "'" + text + "' is not a URL for field '" + spec.name + "'", spec.name);
      }
      return Url{text};
    case FieldKind::attachment_ref:
      if (text.find('\n') != std::string::npos) throw mismatch(spec, text, "a file reference");
      return AttachmentRef{text};
    case FieldKind::single_select: return OptionRef{resolve_option(spec, text).id};
    case FieldKind::multi_select: break;
  }
  throw mismatch(spec, text, "valid input");
}

std::string render_cell(const FieldSpec& spec, const CellValue& value, const RenderStyle& style) {
  auto label = [&](const OptionId& id) -> std::string {
    const auto* option = spec.options ? spec.options->find(id) : nullptr;
    return option ? option->label : id.str();
  };
  return std::visit(
      Overloaded{
          [](const std::monostate&) { return std::string(); },
          [&](const Date& d) { return format_date(d, style.date_pattern); },
          [&](const Timestamp& t) { return format_timestamp(t, style.timestamp_pattern); },
          [](const Text& t) { return t.value; },
          [](const std::int64_t& i) { return std::to_string(i); },
          [](const double& r) { return format_real(r); },
          [](const Url& u) { return u.value; },
          [&](const OptionRef& ref) { return label(ref.id); },
          [&](const OptionRefList& refs) {
            std::string out;
            for (std::size_t i = 0; i < refs.ids.size(); ++i) {
              if (i) out += style.joiner;
              out += label(refs.ids[i]);
            }
            return out;
          },
          [](const AttachmentRef& a) { return a.value; },
      },
      value);
}

}  // namespace farmrec
