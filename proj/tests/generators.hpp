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

// Hand-rolled random generators for tables and records.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "farmrec/record_store.hpp"

namespace farmrec::gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int percent) { return between(0, 99) < percent; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(between(0, static_cast<int>(items.size()) - 1))];
  }

  // Text that survives the validation trim. Mixes CSV metacharacters, quotes,
  // UTF-8 and, when allowed, embedded line breaks.
  std::string text(bool multiline, bool allow_semicolon = true) {
    static const std::vector<std::string> pieces{
        "a", "Bed 72", ",", "\"", "\"\"", " ", "x,y", "é", "日本", "50%", "'", "tab\there", "-", "#", "=1+1",
        "; ", "  ", "Z", "0", "null", "NaN"};
    std::string out;
    int n = between(1, 6);
    for (int i = 0; i < n; ++i) {
      auto piece = pick(pieces);
      if (!allow_semicolon && piece.find(';') != std::string::npos) piece = "k";
      out += piece;
      if (multiline && chance(15)) out += chance(50) ? "\n" : "\r\n";
    }
    auto first = out.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string::npos) return "t";
    auto last = out.find_last_not_of(" \t\r\n\f\v");
    return out.substr(first, last - first + 1);
  }

  std::string label() { return text(false, false) + "#" + std::to_string(between(0, 999)); }

  FieldSpec field(int index) {
    static const std::vector<FieldKind> kinds{FieldKind::date,        FieldKind::short_text,    FieldKind::long_text,
                                              FieldKind::integer,     FieldKind::real,          FieldKind::url,
                                              FieldKind::single_select, FieldKind::multi_select, FieldKind::attachment_ref};
    auto kind = pick(kinds);
    std::optional<std::string> unit;
    if (is_numeric(kind) && chance(40)) unit = chance(50) ? "lb/ac" : "seeds/ac";
    // The index suffix keeps names unique; the prefix exercises quoting in the header.
    auto field = make_field(text(false) + " c" + std::to_string(index), kind, unit);
    if (field.options) {
      int n = between(1, 6);
      for (int i = 0; i < n; ++i) field.options->add(label());
    }
    return field;
  }

  TableSpec table() {
    std::vector<FieldSpec> fields;
    int n = between(1, 8);
    for (int i = 0; i < n; ++i) fields.push_back(field(i));
    auto spec = make_table("Generated", std::move(fields));
    // Occasionally move created time away from the end.
    if (spec.fields.size() > 1 && chance(50)) {
      auto pos = static_cast<std::size_t>(between(0, static_cast<int>(spec.fields.size()) - 1));
      std::rotate(spec.fields.begin() + static_cast<long>(pos), spec.fields.end() - 1, spec.fields.end());
    }
    return spec;
  }

  // Raw input for one cell, or nullopt to leave it empty.
  std::optional<RawValue> raw(const FieldSpec& field) {
    if (chance(20)) return std::nullopt;
    switch (field.kind) {
      case FieldKind::date: {
        auto d = Date::from_ymd(between(1990, 2040), between(1, 12), between(1, 28));
        return RawValue(to_iso(*d));
      }
      case FieldKind::short_text: return RawValue(text(false));
      case FieldKind::long_text: return RawValue(text(true));
      case FieldKind::integer: {
        std::int64_t v = std::uniform_int_distribution<std::int64_t>(-5'000'000'000LL, 5'000'000'000LL)(rng_);
        return RawValue(std::to_string(v));
      }
      case FieldKind::real: {
        double v = std::uniform_real_distribution<double>(-1e4, 1e4)(rng_);
        if (chance(30)) v = std::round(v);
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return RawValue(std::string(buf, end));
      }
      case FieldKind::url:
        return RawValue("https://example.org/" + std::to_string(between(0, 9999)) + (chance(50) ? "?a=1,2&b=\"q\"" : ""));
      case FieldKind::single_select: return RawValue(pick(field.options->entries()).label);
      case FieldKind::multi_select: {
        std::vector<std::string> labels;
        for (const auto& o : field.options->entries()) {
          if (chance(40)) labels.push_back(o.label);
        }
        std::shuffle(labels.begin(), labels.end(), rng_);
        return RawValue(labels);
      }
      case FieldKind::attachment_ref: return RawValue("att-" + std::to_string(between(0, 99999)) + ".jpg");
      case FieldKind::created_time: return std::nullopt;
    }
    return std::nullopt;
  }

  TableData populated(int max_records) {
    TableData data(table());
    int n = between(0, max_records);
    for (int i = 0; i < n; ++i) {
      RawCells cells;
      for (const auto& field : data.spec().fields) {
        if (auto value = raw(field)) cells[field.id] = *value;
      }
      data.commit_insert(data.prepare_insert(cells, Timestamp{1'600'000'000 + i * 61}, fresh_id<RecordId>("rec")));
    }
    return data;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace farmrec::gen
