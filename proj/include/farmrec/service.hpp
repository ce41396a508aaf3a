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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "farmrec/journal.hpp"
#include "farmrec/templates.hpp"
#include "farmrec/tidy_io.hpp"

namespace farmrec {

struct ServiceOptions {
  // nullopt keeps everything in memory.
  std::optional<std::filesystem::path> data_dir;
  std::shared_ptr<Clock> clock;  // defaults to SystemClock
  JournalOptions journal;
  // Events between automatic snapshots; 0 disables them.
  std::uint64_t snapshot_interval = 1000;
  std::int64_t idempotency_retention_seconds = 24 * 3600;
  std::size_t idempotency_capacity = 10000;
};

// Field-keyed input as it arrives from clients: keys are field ids, names or display names.
using KeyedValues = std::vector<std::pair<std::string, RawValue>>;

struct FilterSpec {
  std::string field;
  std::string op;  // eq, contains, empty, notempty, lt, le, gt, ge
  std::string value;
};

struct SortSpec {
  std::string field;
  bool ascending = true;
};

struct NewOptionRequest {
  std::string field;
  std::string label;
};

struct RecordResult {
  TableSpec table;
  Record record;
};

struct QueryResult {
  TableSpec table;
  std::vector<Record> records;
};

struct SubmitResult {
  TableSpec table;
  Record record;
  bool replayed = false;  // an idempotency key matched an earlier submission
};

struct ImportResult {
  std::size_t inserted = 0;
  std::vector<ImportError> errors;
};

// The in-process API over all bases. Every operation taking an Actor authorizes exactly
// once, before any side effect, and raises unauthenticated (no credentials) or
// not-authorized (denied). Mutations on one base are serialized and journaled before
// they are applied; reads take a shared lock.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Principals. Administrative: not authorized via Actor.
  std::string add_principal(const PrincipalId& principal);
  // Principal bearer token or form token. Errors: unauthenticated.
  Actor authenticate(std::string_view bearer) const;
  // Form a live form token opens. Errors: unauthenticated.
  FormId token_form(std::string_view token) const;

  Json create_base(const Actor& actor, std::string name, std::optional<std::string> template_id = {});
  Json get_base(const Actor& actor, std::string_view base);
  TableSpec create_table(const Actor& actor, std::string_view base, std::string name,
                         std::vector<FieldSpec> fields = {});
  FieldSpec add_field(const Actor& actor, std::string_view base, std::string_view table, FieldSpec spec);
  AddOptionResult add_option(const Actor& actor, std::string_view base, std::string_view table,
                             std::string_view field, std::string_view label);
  // Creates or replaces a form after linting. Errors: invalid-form.
  FormSpec save_form(const Actor& actor, std::string_view base, FormSpec form);

  RecordResult insert_record(const Actor& actor, std::string_view base, std::string_view table,
                             const KeyedValues& cells);
  RecordResult update_record(const Actor& actor, std::string_view base, std::string_view table,
                             const RecordId& record, const KeyedValues& cells);
  void delete_record(const Actor& actor, std::string_view base, std::string_view table, const RecordId& record);
  RecordResult get_record(const Actor& actor, std::string_view base, std::string_view table, const RecordId& record);
  QueryResult query(const Actor& actor, std::string_view base, std::string_view table,
                    const std::vector<FilterSpec>& filters = {}, const std::optional<SortSpec>& sort = {});

  FormView render_form(const Actor& actor, const FormId& form, const KeyedValues& draft = {});
  std::vector<FieldId> visible_fields(const Actor& actor, const FormId& form, const KeyedValues& draft = {});
  SubmitResult submit(const Actor& actor, const FormId& form, const KeyedValues& answers,
                      const std::vector<NewOptionRequest>& new_options = {},
                      std::optional<std::string> idempotency_key = {});

  void set_grant(const Actor& actor, std::string_view base, const PrincipalId& principal, Role role);
  void revoke_grant(const Actor& actor, std::string_view base, const PrincipalId& principal);
  FormToken mint_form_token(const Actor& actor, const FormId& form);
  void revoke_form_token(const Actor& actor, const FormId& form, std::string_view token);
  std::vector<FormToken> list_form_tokens(const Actor& actor, const FormId& form);

  std::string export_csv(const Actor& actor, std::string_view base, std::string_view table,
                         const ExportConfig& config = {});
  ImportResult import_csv(const Actor& actor, std::string_view base, std::string_view table,
                          std::string_view bytes, ImportMode mode, std::string_view joiner = "; ");

  Comment add_comment(const Actor& actor, std::string_view base, std::string_view table,
                      const RecordId& record, std::string text);
  std::vector<Comment> list_comments(const Actor& actor, std::string_view base, std::string_view table,
                                     const RecordId& record);

  std::vector<Template> templates(const Actor& actor) const;
  std::vector<ContractBalance> undelivered_balances(const Actor& actor, std::string_view base);

  // Administrative and introspection helpers (no Actor).
  BaseId resolve_base(std::string_view key) const;
  std::vector<BaseId> base_ids() const;
  Base state(const BaseId& base) const;
  std::uint64_t journal_seq(const BaseId& base) const;
  std::uint64_t total_journal_events() const;
  void snapshot(const BaseId& base);
  const std::vector<std::string>& recovery_warnings() const noexcept { return warnings_; }
  Clock& clock() const noexcept { return *clock_; }
  // Test hook: the next journal append in any base tears its line and exits.
  void arm_crash_injection();

 private:
  struct Entry;

  std::shared_ptr<Entry> entry(std::string_view base_key) const;
  std::shared_ptr<Entry> entry_for_form(const FormId& form) const;
  JournalEvent commit(Entry& entry, std::string_view kind, Json payload);
  void register_entry(std::shared_ptr<Entry> entry);
  void index_base(const Base& base);
  void load();
  void save_principals() const;

  ServiceOptions options_;
  std::shared_ptr<Clock> clock_;
  int lock_fd_ = -1;
  std::vector<std::string> warnings_;

  mutable std::shared_mutex registry_mu_;
  std::map<BaseId, std::shared_ptr<Entry>> bases_;
  std::map<FormId, BaseId> form_index_;

  mutable std::mutex principals_mu_;
  std::map<std::string, PrincipalId> principals_;  // token -> principal
};

}  // namespace farmrec
