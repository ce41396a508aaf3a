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

#include <string>
#include <string_view>
#include <vector>

#include "farmrec/record_store.hpp"

namespace farmrec {

namespace csv {

using Row = std::vector<std::string>;

// Quotes a field when it contains a comma, quote, CR or LF; embedded quotes are doubled.
std::string quote(std::string_view field);
std::string write_row(const Row& row, std::string_view line_ending = "\r\n");

// Parses RFC 4180 CSV. Accepts CRLF or LF line endings and a missing final line break;
// a leading UTF-8 BOM is skipped. Errors: malformed-csv (stray quote, unterminated field).
std::vector<Row> parse(std::string_view bytes);

}  // namespace csv

struct ExportConfig {
  std::string datetime_format{kIsoTimestampPattern};
  std::string date_format{kIsoDatePattern};
  std::string multi_value_joiner = "; ";
  std::string line_ending = "\r\n";
  bool include_header = true;
  bool byte_order_mark = false;

  // Default preset: ISO 8601 dates and timestamps.
  static ExportConfig iso();
  // Grid-view preset: "12/20/2022 11:35am" timestamps and mm/dd/yyyy dates.
  static ExportConfig table1();
  // "iso", "table1", or a custom timestamp pattern (must contain '%').
  // Errors: invalid-request.
  static ExportConfig preset(std::string_view name);

  RenderStyle style() const;
};

inline constexpr std::string_view kTable1TimestampPattern = "%-m/%-d/%Y %-I:%M%P";
inline constexpr std::string_view kTable1DatePattern = "%m/%d/%Y";

// Header row = display names in column order, rows in created-time order.
// Errors: invalid-request (empty joiner).
std::string export_csv(const TableData& table, const ExportConfig& config = {});

enum class ImportMode { strict, lenient };

struct ImportError {
  std::size_t row = 0;  // 1-based data row, header excluded
  std::string field;
  ErrorCode code = ErrorCode::type_mismatch;
  std::string message;
};

struct ImportPlan {
  // Schema after lenient option auto-creation.
  TableSpec spec;
  std::vector<Record> records;
  std::vector<ImportError> errors;
  // Select fields that gained options.
  std::vector<FieldId> grown_fields;
};

// Validates a CSV against the table without touching it. Strict mode plans no rows when
// any row fails. A created-time column, if present, is ignored: rows get fresh created
// times from `now` in file order. Errors: header-mismatch, empty-input, malformed-csv.
ImportPlan plan_import(const TableData& table, std::string_view bytes, ImportMode mode, Timestamp now,
                       std::string_view joiner = "; ");

void apply_import(TableData& table, const ImportPlan& plan);

// Kind per column: the narrowest of integer, real, date, datetime, url, single-select, text
// over non-empty cells. Errors: empty-input, duplicate-header, malformed-csv.
TableSpec infer_schema(std::string_view bytes, std::string table_name = "Imported");

}  // namespace farmrec
