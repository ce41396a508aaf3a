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

#include "farmrec/error.hpp"

#include <array>
#include <utility>

namespace farmrec {

namespace {

struct CodeInfo {
  ErrorCode code;
  std::string_view name;
  int status;
};

constexpr std::array kCodes = {
    CodeInfo{ErrorCode::empty_name, "empty-name", 422},
    CodeInfo{ErrorCode::duplicate_name, "duplicate-name", 422},
    CodeInfo{ErrorCode::second_created_time_field, "second-created-time-field", 422},
    CodeInfo{ErrorCode::options_on_non_select, "options-on-non-select", 422},
    CodeInfo{ErrorCode::type_mismatch, "type-mismatch", 422},
    CodeInfo{ErrorCode::unknown_option, "unknown-option", 422},
    CodeInfo{ErrorCode::malformed_date, "malformed-date", 422},
    CodeInfo{ErrorCode::malformed_url, "malformed-url", 422},
    CodeInfo{ErrorCode::non_select_field, "non-select-field", 422},
    CodeInfo{ErrorCode::empty_label, "empty-label", 422},
    CodeInfo{ErrorCode::invalid_label, "invalid-label", 422},
    CodeInfo{ErrorCode::invalid_kind, "invalid-kind", 422},
    CodeInfo{ErrorCode::client_set_created_time, "client-set-created-time", 422},
    CodeInfo{ErrorCode::unknown_record, "unknown-record", 404},
    CodeInfo{ErrorCode::unknown_field, "unknown-field", 422},
    CodeInfo{ErrorCode::predicate_kind_mismatch, "predicate-kind-mismatch", 422},
    CodeInfo{ErrorCode::unknown_table, "unknown-table", 404},
    CodeInfo{ErrorCode::unknown_form, "unknown-form", 404},
    CodeInfo{ErrorCode::invalid_form, "invalid-form", 422},
    CodeInfo{ErrorCode::missing_required, "missing-required", 422},
    CodeInfo{ErrorCode::hidden_field_answer, "hidden-field-answer", 422},
    CodeInfo{ErrorCode::add_not_allowed, "add-not-allowed", 422},
    CodeInfo{ErrorCode::unauthenticated, "unauthenticated", 401},
    CodeInfo{ErrorCode::not_authorized, "not-authorized", 403},
    CodeInfo{ErrorCode::not_owner, "not-owner", 403},
    CodeInfo{ErrorCode::last_owner_removal, "last-owner-removal", 422},
    CodeInfo{ErrorCode::unknown_token, "unknown-token", 404},
    CodeInfo{ErrorCode::unknown_principal, "unknown-principal", 404},
    CodeInfo{ErrorCode::header_mismatch, "header-mismatch", 422},
    CodeInfo{ErrorCode::empty_input, "empty-input", 422},
    CodeInfo{ErrorCode::duplicate_header, "duplicate-header", 422},
    CodeInfo{ErrorCode::malformed_csv, "malformed-csv", 422},
    CodeInfo{ErrorCode::unknown_template, "unknown-template", 404},
    CodeInfo{ErrorCode::storage_full, "storage-full", 507},
    CodeInfo{ErrorCode::io_failure, "io-failure", 500},
    CodeInfo{ErrorCode::corrupt_snapshot, "corrupt-snapshot", 500},
    CodeInfo{ErrorCode::corrupt_journal, "corrupt-journal", 500},
    CodeInfo{ErrorCode::data_dir_locked, "data-dir-locked", 503},
    CodeInfo{ErrorCode::unknown_base, "unknown-base", 404},
    CodeInfo{ErrorCode::ambiguous_name, "ambiguous-name", 422},
    CodeInfo{ErrorCode::invalid_request, "invalid-request", 400},
};

const CodeInfo& info(ErrorCode code) {
  for (const auto& entry : kCodes) {
    if (entry.code == code) return entry;
  }
  return kCodes.back();
}

}  // namespace

std::string_view to_string(ErrorCode code) { return info(code).name; }

std::optional<ErrorCode> parse_error_code(std::string_view text) {
  for (const auto& entry : kCodes) {
    if (entry.name == text) return entry.code;
  }
  return std::nullopt;
}

int http_status(ErrorCode code) { return info(code).status; }

Error::Error(ErrorCode code, std::string message, std::string field)
    : std::runtime_error(message), code_(code), field_(field) {
  issues_.push_back(Issue{code, std::move(field), std::move(message)});
}

Error::Error(ErrorCode code, std::string message, std::vector<Issue> issues)
    : std::runtime_error(message), code_(code), issues_(std::move(issues)) {
  if (issues_.empty()) issues_.push_back(Issue{code, {}, what()});
  field_ = issues_.front().field;
}

}  // namespace farmrec
