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

#include "farmrec/service.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace farmrec {

namespace fs = std::filesystem;

struct Service::Entry {
  mutable std::shared_mutex mu;
  Base base;
  std::unique_ptr<Journal> journal;
  std::uint64_t events_since_snapshot = 0;
  fs::path dir;
};

namespace {

[[noreturn]] void deny(const Actor& actor, Action action) {
  if (std::holds_alternative<Anonymous>(actor)) {
    throw Error(ErrorCode::unauthenticated, "credentials required");
  }
  throw Error(ErrorCode::not_authorized, "not allowed to " + std::string(to_string(action)));
}

void require(const Base& base, const Actor& actor, Action action, Target target = {}) {
  if (authorize(base.access, actor, action, target) != Decision::allow) deny(actor, action);
}

const PrincipalId& principal_of(const Actor& actor) {
  static const PrincipalId kNobody;
  if (const auto* p = std::get_if<PrincipalActor>(&actor)) return p->id;
  return kNobody;
}

TableData& table_of(Base& base, std::string_view key) {
  const auto& found = base.resolve_table(key);
  return *base.find_table(found.spec().id);
}

// Resolves client keys to field ids; unknown keys are reported together.
Draft resolve_values(const TableSpec& table, const KeyedValues& values, bool ignore_unknown = false) {
  Draft draft;
  std::vector<Issue> issues;
  for (const auto& [key, raw] : values) {
    const auto* field = table.resolve(key);
    if (!field) {
      if (!ignore_unknown) issues.push_back({ErrorCode::unknown_field, key, "no field '" + key + "'"});
      continue;
    }
    draft.insert_or_assign(field->id, raw);
  }
  if (!issues.empty()) {
    auto first = issues.front();
    throw Error(first.code, first.message, std::move(issues));
  }
  return draft;
}

Json fields_json(const TableSpec& table, const std::vector<FieldId>& ids) {
  Json out = Json::array();
  for (const auto& id : ids) out.push_back(to_json(*table.find(id)));
  return out;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)), clock_(options_.clock) {
  if (!clock_) clock_ = std::make_shared<SystemClock>();
  if (options_.data_dir) load();
}

Service::~Service() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

void Service::load() {
  const auto& dir = *options_.data_dir;
  std::error_code ec;
  fs::create_directories(dir / "bases", ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot create data directory " + dir.string() + ": " + ec.message());
  auto lock_path = dir / ".lock";
  lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
  if (lock_fd_ < 0 || ::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    throw Error(ErrorCode::data_dir_locked, "data directory " + dir.string() + " is in use by another process");
  }

  auto principals_path = dir / "principals.json";
  if (fs::exists(principals_path)) {
    std::ifstream in(principals_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
      const auto document = Json::parse(buffer.str());
      for (const auto& item : document.at("principals")) {
        principals_.emplace(item.at("token").get<std::string>(), PrincipalId(item.at("id").get<std::string>()));
      }
    } catch (const std::exception& e) {
      throw Error(ErrorCode::io_failure, "cannot read principals.json: " + std::string(e.what()));
    }
  }

  std::vector<fs::path> dirs;
  for (const auto& item : fs::directory_iterator(dir / "bases")) {
    if (item.is_directory()) dirs.push_back(item.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& base_dir : dirs) {
    auto recovery = recover_base(base_dir);
    for (auto& warning : recovery.warnings) warnings_.push_back(base_dir.filename().string() + ": " + warning);
    if (!recovery.state) continue;
    auto entry = std::make_shared<Entry>();
    entry->dir = base_dir;
    entry->base = std::move(*recovery.state);
    entry->journal = std::make_unique<Journal>(
        base_dir, std::max(recovery.journal_last_seq, entry->base.journal_seq), options_.journal);
    register_entry(std::move(entry));
  }
}

void Service::save_principals() const {
  if (!options_.data_dir) return;
  Json list = Json::array();
  for (const auto& [token, id] : principals_) list.push_back(Json{{"id", id.str()}, {"token", token}});
  auto path = *options_.data_dir / "principals.json";
  auto temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::trunc);
    out << Json{{"principals", list}}.dump(2) << "\n";
    out.flush();
    if (!out) throw Error(ErrorCode::io_failure, "cannot write " + temp.string());
  }
  ::chmod(temp.c_str(), 0600);
  std::error_code ec;
  fs::rename(temp, path, ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot replace " + path.string() + ": " + ec.message());
}

std::string Service::add_principal(const PrincipalId& principal) {
  if (trim(principal.str()).empty()) throw Error(ErrorCode::empty_name, "principal id must not be empty");
  std::lock_guard lock(principals_mu_);
  for (const auto& [token, id] : principals_) {
    if (id == principal) return token;
  }
  auto token = "pt_" + random_hex(24);
  principals_.emplace(token, principal);
  save_principals();
  return token;
}

Actor Service::authenticate(std::string_view bearer) const {
  if (bearer.empty()) throw Error(ErrorCode::unauthenticated, "credentials required");
  {
    std::lock_guard lock(principals_mu_);
    auto it = principals_.find(std::string(bearer));
    if (it != principals_.end()) return PrincipalActor{it->second};
  }
  std::shared_lock registry(registry_mu_);
  for (const auto& [id, entry] : bases_) {
    std::shared_lock lock(entry->mu);
    if (entry->base.access.find_token(bearer)) return TokenActor{std::string(bearer)};
  }
  throw Error(ErrorCode::unauthenticated, "unknown credentials");
}

FormId Service::token_form(std::string_view token) const {
  std::shared_lock registry(registry_mu_);
  for (const auto& [id, entry] : bases_) {
    std::shared_lock lock(entry->mu);
    if (const auto* found = entry->base.access.find_token(token)) return found->form;
  }
  throw Error(ErrorCode::unauthenticated, "unknown form link");
}

void Service::register_entry(std::shared_ptr<Entry> entry) {
  std::unique_lock registry(registry_mu_);
  for (const auto& form : entry->base.forms) form_index_[form.id] = entry->base.id;
  bases_[entry->base.id] = std::move(entry);
}

void Service::index_base(const Base& base) {
  std::unique_lock registry(registry_mu_);
  for (const auto& form : base.forms) form_index_[form.id] = base.id;
}

BaseId Service::resolve_base(std::string_view key) const {
  std::shared_lock registry(registry_mu_);
  if (bases_.count(BaseId(std::string(key)))) return BaseId(std::string(key));
  std::optional<BaseId> match;
  auto wanted = trim(key);
  for (const auto& [id, entry] : bases_) {
    std::shared_lock lock(entry->mu);
    if (entry->base.name != wanted) continue;
    if (match) throw Error(ErrorCode::ambiguous_name, "more than one base is named '" + wanted + "'");
    match = id;
  }
  if (!match) throw Error(ErrorCode::unknown_base, "no base '" + std::string(key) + "'");
  return *match;
}

std::shared_ptr<Service::Entry> Service::entry(std::string_view base_key) const {
  auto id = resolve_base(base_key);
  std::shared_lock registry(registry_mu_);
  return bases_.at(id);
}

std::shared_ptr<Service::Entry> Service::entry_for_form(const FormId& form) const {
  std::shared_lock registry(registry_mu_);
  auto it = form_index_.find(form);
  if (it == form_index_.end()) throw Error(ErrorCode::unknown_form, "no form '" + form.str() + "'");
  return bases_.at(it->second);
}

JournalEvent Service::commit(Entry& entry, std::string_view kind, Json payload) {
  JournalEvent event;
  auto now = clock_->now();
  if (entry.journal) {
    event = entry.journal->append(kind, std::move(payload), now);
  } else {
    event = JournalEvent{entry.base.journal_seq + 1, now, std::string(kind), std::move(payload)};
  }
  apply_event(entry.base, event);
  if (entry.journal && options_.snapshot_interval &&
      ++entry.events_since_snapshot >= options_.snapshot_interval) {
    write_snapshot(entry.dir, entry.base);
    entry.events_since_snapshot = 0;
  }
  return event;
}

// Bases and schema

Json Service::create_base(const Actor& actor, std::string name, std::optional<std::string> template_id) {
  if (authorize(AccessList{}, actor, Action::create_base, {}) != Decision::allow) deny(actor, Action::create_base);
  const auto& owner = principal_of(actor);
  Base base = template_id && !template_id->empty() ? instantiate(*template_id, std::move(name), owner)
                                                   : farmrec::create_base(std::move(name), owner);
  auto entry = std::make_shared<Entry>();
  if (options_.data_dir) {
    entry->dir = *options_.data_dir / "bases" / base.id.str();
    entry->journal = std::make_unique<Journal>(entry->dir, 0, options_.journal);
  }
  std::unique_lock lock(entry->mu);
  commit(*entry, event_kind::base_create, Json{{"state", state_to_json(base)}});
  auto document = base_document(entry->base);
  lock.unlock();
  register_entry(entry);
  return document;
}

Json Service::get_base(const Actor& actor, std::string_view base) {
  auto e = entry(base);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::read_grid);
  return base_document(e->base);
}

TableSpec Service::create_table(const Actor& actor, std::string_view base, std::string name,
                                std::vector<FieldSpec> fields) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::edit_schema);
  auto spec = make_table(std::move(name), std::move(fields));
  for (const auto& table : e->base.tables) {
    if (table.spec().name == spec.name) {
      throw Error(ErrorCode::duplicate_name, "base already has a table named '" + spec.name + "'");
    }
  }
  commit(*e, event_kind::table_put, Json{{"table", to_json(spec)}});
  return spec;
}

FieldSpec Service::add_field(const Actor& actor, std::string_view base, std::string_view table, FieldSpec spec) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::edit_schema);
  const auto& current = e->base.resolve_table(table);
  if (spec.id.empty()) spec.id = fresh_id<FieldId>("fld");
  auto id = spec.id;
  auto updated = farmrec::add_field(current.spec(), std::move(spec));
  commit(*e, event_kind::table_put, Json{{"table", to_json(updated)}});
  return *updated.find(id);
}

AddOptionResult Service::add_option(const Actor& actor, std::string_view base, std::string_view table,
                                    std::string_view field, std::string_view label) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::edit_schema);
  const auto& current = e->base.resolve_table(table);
  const auto* spec = current.spec().resolve(field);
  if (!spec) throw Error(ErrorCode::unknown_field, "no field '" + std::string(field) + "'");
  auto result = farmrec::add_option(*spec, label);
  if (result.created) {
    TableSpec updated = current.spec();
    *updated.find(spec->id) = result.field;
    commit(*e, event_kind::table_put, Json{{"table", to_json(updated)}});
  }
  return result;
}

FormSpec Service::save_form(const Actor& actor, std::string_view base, FormSpec form) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::edit_form);
  if (form.id.empty()) form.id = fresh_id<FormId>("frm");
  const auto* table = e->base.find_table(form.table);
  if (!table) table = &e->base.resolve_table(form.table.str());
  form.table = table->spec().id;
  auto issues = lint_form(form, table->spec());
  if (!issues.empty()) {
    auto first = issues.front();
    throw Error(ErrorCode::invalid_form, first.message, std::move(issues));
  }
  commit(*e, event_kind::form_put, Json{{"form", to_json(form)}});
  lock.unlock();
  index_base(e->base);
  return form;
}

// Records

RecordResult Service::insert_record(const Actor& actor, std::string_view base, std::string_view table,
                                    const KeyedValues& cells) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::create_record);
  auto& data = table_of(e->base, table);
  auto record = data.prepare_insert(resolve_values(data.spec(), cells), clock_->now(), fresh_id<RecordId>("rec"));
  commit(*e, event_kind::record_insert,
         Json{{"table", data.spec().id.str()}, {"record", record_to_json(data.spec(), record)}});
  return RecordResult{data.spec(), *data.find(record.id)};
}

RecordResult Service::update_record(const Actor& actor, std::string_view base, std::string_view table,
                                    const RecordId& record, const KeyedValues& cells) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::edit_record);
  auto& data = table_of(e->base, table);
  auto updated = data.prepare_update(record, resolve_values(data.spec(), cells));
  commit(*e, event_kind::record_update,
         Json{{"table", data.spec().id.str()}, {"record", record_to_json(data.spec(), updated)}});
  return RecordResult{data.spec(), *data.find(record)};
}

void Service::delete_record(const Actor& actor, std::string_view base, std::string_view table,
                            const RecordId& record) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::delete_record);
  auto& data = table_of(e->base, table);
  if (!data.find(record)) throw Error(ErrorCode::unknown_record, "no record '" + record.str() + "'");
  commit(*e, event_kind::record_delete, Json{{"table", data.spec().id.str()}, {"record", record.str()}});
}

RecordResult Service::get_record(const Actor& actor, std::string_view base, std::string_view table,
                                 const RecordId& record) {
  auto e = entry(base);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::read_grid);
  const auto& data = e->base.resolve_table(table);
  const auto* found = data.find(record);
  if (!found) throw Error(ErrorCode::unknown_record, "no record '" + record.str() + "'");
  return RecordResult{data.spec(), *found};
}

QueryResult Service::query(const Actor& actor, std::string_view base, std::string_view table,
                           const std::vector<FilterSpec>& filters, const std::optional<SortSpec>& sort) {
  auto e = entry(base);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::read_grid);
  const auto& data = e->base.resolve_table(table);
  Query q;
  for (const auto& filter : filters) {
    const auto* field = data.spec().resolve(filter.field);
    if (!field) throw Error(ErrorCode::unknown_field, "no field '" + filter.field + "'", filter.field);
    auto predicate = parse_predicate(filter.op);
    if (!predicate) throw Error(ErrorCode::invalid_request, "unknown filter operator '" + filter.op + "'");
    q.filters.push_back(Filter{field->id, *predicate, filter.value});
  }
  if (sort) {
    const auto* field = data.spec().resolve(sort->field);
    if (!field) throw Error(ErrorCode::unknown_field, "no field '" + sort->field + "'", sort->field);
    q.sort = SortKey{field->id, sort->ascending};
  }
  QueryResult result{data.spec(), {}};
  for (const auto* record : data.query(q)) result.records.push_back(*record);
  return result;
}

// Forms

FormView Service::render_form(const Actor& actor, const FormId& form, const KeyedValues& draft) {
  auto e = entry_for_form(form);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::render_form, Target{form});
  const auto* spec = e->base.find_form(form);
  if (!spec) throw Error(ErrorCode::unknown_form, "no form '" + form.str() + "'");
  const auto& table = *e->base.find_table(spec->table);
  return farmrec::render_form(*spec, table.spec(), resolve_values(table.spec(), draft, true));
}

std::vector<FieldId> Service::visible_fields(const Actor& actor, const FormId& form, const KeyedValues& draft) {
  auto e = entry_for_form(form);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::render_form, Target{form});
  const auto* spec = e->base.find_form(form);
  if (!spec) throw Error(ErrorCode::unknown_form, "no form '" + form.str() + "'");
  const auto& table = *e->base.find_table(spec->table);
  return farmrec::visible_fields(*spec, table.spec(), resolve_values(table.spec(), draft, true));
}

SubmitResult Service::submit(const Actor& actor, const FormId& form, const KeyedValues& answers,
                             const std::vector<NewOptionRequest>& new_options,
                             std::optional<std::string> idempotency_key) {
  auto e = entry_for_form(form);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::submit_form, Target{form});
  const auto* spec = e->base.find_form(form);
  if (!spec) throw Error(ErrorCode::unknown_form, "no form '" + form.str() + "'");
  auto& table = *e->base.find_table(spec->table);
  auto now = clock_->now();
  auto horizon = Timestamp{now.seconds - options_.idempotency_retention_seconds};

  if (idempotency_key) {
    auto it = e->base.idempotency.find(*idempotency_key);
    if (it != e->base.idempotency.end() && it->second.form == form && it->second.at >= horizon) {
      const auto* original = table.find(it->second.record);
      if (!original) {
        throw Error(ErrorCode::unknown_record, "the submission for this idempotency key was deleted");
      }
      return SubmitResult{table.spec(), *original, true};
    }
  }

  std::vector<NewOption> additions;
  for (const auto& request : new_options) {
    const auto* field = table.spec().resolve(request.field);
    if (!field) throw Error(ErrorCode::unknown_field, "no field '" + request.field + "'", request.field);
    additions.push_back(NewOption{field->id, request.label});
  }
  auto plan = plan_submission(*spec, table, resolve_values(table.spec(), answers), additions, now,
                              e->base.option_use_seq, fresh_id<RecordId>("rec"));

  Json changed = Json::array();
  for (const auto& field : plan.changed_fields) changed.push_back(to_json(field));
  Json payload{{"table", table.spec().id.str()},
               {"form", form.str()},
               {"fields", std::move(changed)},
               {"use_seq", plan.use_seq}};
  // Record cells reference options that may only exist in the changed fields.
  TableSpec planned = table.spec();
  for (const auto& field : plan.changed_fields) *planned.find(field.id) = field;
  payload["record"] = record_to_json(planned, plan.record);

  if (idempotency_key) {
    Json evict = Json::array();
    std::vector<std::pair<Timestamp, std::string>> live;
    for (const auto& [key, entry] : e->base.idempotency) {
      if (entry.at < horizon || key == *idempotency_key) {
        evict.push_back(key);
      } else {
        live.emplace_back(entry.at, key);
      }
    }
    std::sort(live.begin(), live.end());
    for (std::size_t i = 0; options_.idempotency_capacity && i + options_.idempotency_capacity <= live.size(); ++i) {
      evict.push_back(live[i].second);
    }
    payload["evict"] = std::move(evict);
    payload["idempotency_key"] = *idempotency_key;
  }
  commit(*e, event_kind::form_submit, std::move(payload));
  return SubmitResult{table.spec(), *table.find(plan.record.id), false};
}

// Sharing

void Service::set_grant(const Actor& actor, std::string_view base, const PrincipalId& principal, Role role) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::manage_grants);
  if (trim(principal.str()).empty()) throw Error(ErrorCode::empty_name, "principal id must not be empty");
  AccessList working = e->base.access;
  working.set_grant(principal_of(actor), principal, role);
  commit(*e, event_kind::grant_set, to_json(Grant{principal, role}));
}

void Service::revoke_grant(const Actor& actor, std::string_view base, const PrincipalId& principal) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::manage_grants);
  AccessList working = e->base.access;
  working.revoke_grant(principal_of(actor), principal);
  commit(*e, event_kind::grant_revoke, Json{{"principal", principal.str()}});
}

FormToken Service::mint_form_token(const Actor& actor, const FormId& form) {
  auto e = entry_for_form(form);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::manage_tokens);
  FormToken token{mint_token_value(), form, false};
  commit(*e, event_kind::token_mint, to_json(token));
  return token;
}

void Service::revoke_form_token(const Actor& actor, const FormId& form, std::string_view token) {
  auto e = entry_for_form(form);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::manage_tokens);
  const auto* existing = e->base.access.find_token(token);
  if (!existing || existing->form != form) throw Error(ErrorCode::unknown_token, "no such token for this form");
  commit(*e, event_kind::token_revoke, Json{{"token", std::string(token)}});
}

std::vector<FormToken> Service::list_form_tokens(const Actor& actor, const FormId& form) {
  auto e = entry_for_form(form);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::manage_tokens);
  std::vector<FormToken> tokens;
  for (const auto& token : e->base.access.tokens()) {
    if (token.form == form) tokens.push_back(token);
  }
  return tokens;
}

// Tidy I/O

std::string Service::export_csv(const Actor& actor, std::string_view base, std::string_view table,
                                const ExportConfig& config) {
  auto e = entry(base);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::export_csv);
  return farmrec::export_csv(e->base.resolve_table(table), config);
}

ImportResult Service::import_csv(const Actor& actor, std::string_view base, std::string_view table,
                                 std::string_view bytes, ImportMode mode, std::string_view joiner) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::create_record);
  auto& data = table_of(e->base, table);
  auto plan = plan_import(data, bytes, mode, clock_->now(), joiner);
  ImportResult result{plan.records.size(), plan.errors};
  if (!plan.records.empty()) {
    Json records = Json::array();
    for (const auto& record : plan.records) records.push_back(record_to_json(plan.spec, record));
    commit(*e, event_kind::import_batch,
           Json{{"table", data.spec().id.str()},
                {"records", std::move(records)},
                {"fields", fields_json(plan.spec, plan.grown_fields)}});
  }
  return result;
}

// Comments

Comment Service::add_comment(const Actor& actor, std::string_view base, std::string_view table,
                             const RecordId& record, std::string text) {
  auto e = entry(base);
  std::unique_lock lock(e->mu);
  require(e->base, actor, Action::comment);
  const auto& data = e->base.resolve_table(table);
  if (!data.find(record)) throw Error(ErrorCode::unknown_record, "no record '" + record.str() + "'");
  auto cleaned = trim(text);
  if (cleaned.empty()) throw Error(ErrorCode::empty_name, "comment text must not be empty");
  Comment comment{fresh_id<CommentId>("cmt"), data.spec().id, record, principal_of(actor), cleaned, clock_->now()};
  commit(*e, event_kind::comment_add, Json{{"comment", to_json(comment)}});
  return comment;
}

std::vector<Comment> Service::list_comments(const Actor& actor, std::string_view base, std::string_view table,
                                            const RecordId& record) {
  auto e = entry(base);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::read_grid);
  const auto& data = e->base.resolve_table(table);
  std::vector<Comment> out;
  for (const auto& comment : e->base.comments) {
    if (comment.table == data.spec().id && comment.record == record) out.push_back(comment);
  }
  return out;
}

std::vector<Template> Service::templates(const Actor& actor) const {
  if (authorize(AccessList{}, actor, Action::list_templates, {}) != Decision::allow) {
    deny(actor, Action::list_templates);
  }
  return list_templates();
}

std::vector<ContractBalance> Service::undelivered_balances(const Actor& actor, std::string_view base) {
  auto e = entry(base);
  std::shared_lock lock(e->mu);
  require(e->base, actor, Action::read_grid);
  return farmrec::undelivered_balances(e->base);
}

// Introspection

std::vector<BaseId> Service::base_ids() const {
  std::shared_lock registry(registry_mu_);
  std::vector<BaseId> ids;
  for (const auto& [id, entry] : bases_) ids.push_back(id);
  return ids;
}

Base Service::state(const BaseId& base) const {
  auto e = entry(base.str());
  std::shared_lock lock(e->mu);
  return e->base;
}

std::uint64_t Service::journal_seq(const BaseId& base) const {
  auto e = entry(base.str());
  std::shared_lock lock(e->mu);
  return e->base.journal_seq;
}

std::uint64_t Service::total_journal_events() const {
  std::shared_lock registry(registry_mu_);
  std::uint64_t total = 0;
  for (const auto& [id, entry] : bases_) {
    std::shared_lock lock(entry->mu);
    total += entry->base.journal_seq;
  }
  return total;
}

void Service::arm_crash_injection() {
  std::shared_lock registry(registry_mu_);
  options_.journal.crash_mid_append = true;
  for (const auto& [id, entry] : bases_) {
    std::unique_lock lock(entry->mu);
    if (entry->journal) entry->journal->options().crash_mid_append = true;
  }
}

void Service::snapshot(const BaseId& base) {
  auto e = entry(base.str());
  std::unique_lock lock(e->mu);
  if (!e->journal) return;
  write_snapshot(e->dir, e->base);
  e->events_since_snapshot = 0;
}

}  // namespace farmrec
