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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace farmrec {

// Every module error has exactly one code. The wire spelling (kebab-case) is what
// clients see in ApiError bodies and what the CLI prints on stderr.
enum class ErrorCode {
  // schema-core
  empty_name,
  duplicate_name,
  second_created_time_field,
  options_on_non_select,
  type_mismatch,
  unknown_option,
  malformed_date,
  malformed_url,
  non_select_field,
  empty_label,
  invalid_label,
  invalid_kind,
  // record-store
  client_set_created_time,
  unknown_record,
  unknown_field,
  predicate_kind_mismatch,
  unknown_table,
  // form-engine
  unknown_form,
  invalid_form,
  missing_required,
  hidden_field_answer,
  add_not_allowed,
  // access-control
  unauthenticated,
  not_authorized,
  not_owner,
  last_owner_removal,
  unknown_token,
  unknown_principal,
  // tidy-io
  header_mismatch,
  empty_input,
  duplicate_header,
  malformed_csv,
  // templates
  unknown_template,
  // persistence
  storage_full,
  io_failure,
  corrupt_snapshot,
  corrupt_journal,
  data_dir_locked,
  // service
  unknown_base,
  ambiguous_name,
  invalid_request,
};

std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view text);

// HTTP status for an error code: 401 missing auth, 403 denial, 404 not found, 422 validation.
int http_status(ErrorCode code);

struct Issue {
  ErrorCode code;
  std::string field;  // field name (or id) the issue is anchored to; may be empty
  std::string message;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {});
  Error(ErrorCode code, std::string message, std::vector<Issue> issues);

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }
  // Per-field details; always contains at least the primary issue.
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  ErrorCode code_;
  std::string field_;
  std::vector<Issue> issues_;
};

}  // namespace farmrec
