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

#include "farmrec/journal.hpp"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace farmrec {

namespace fs = std::filesystem;

namespace {

std::string crc_hex(std::string_view bytes) {
  auto crc = crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

Json event_body(const JournalEvent& event) {
  return Json{{"seq", event.seq}, {"at", to_iso(event.at)}, {"kind", event.kind}, {"payload", event.payload}};
}

[[noreturn]] void io_error(const std::string& what, int err) {
  auto code = err == ENOSPC || err == EDQUOT ? ErrorCode::storage_full : ErrorCode::io_failure;
  throw Error(code, what + ": " + std::strerror(err));
}

void fsync_dir(const fs::path& dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

void write_all(int fd, std::string_view bytes, const std::string& what) {
  while (!bytes.empty()) {
    auto n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_error(what, errno);
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

TableData& table_for(Base& base, const Json& payload) {
  auto* table = base.find_table(TableId(payload.at("table").get<std::string>()));
  if (!table) throw Error(ErrorCode::corrupt_journal, "event references unknown table");
  return *table;
}

void replace_fields(TableData& table, const Json& fields) {
  for (const auto& json : fields) {
    auto field = field_from_json(json);
    auto* existing = table.mutable_spec().find(field.id);
    if (!existing) throw Error(ErrorCode::corrupt_journal, "event references unknown field");
    *existing = std::move(field);
  }
}

}  // namespace

std::string encode_event(const JournalEvent& event) {
  auto body = event_body(event);
  auto crc = crc_hex(body.dump());
  body["crc"] = crc;
  return body.dump();
}

std::optional<JournalEvent> decode_event(std::string_view line) {
  try {
    auto json = Json::parse(line);
    if (!json.is_object() || !json.contains("crc")) return std::nullopt;
    auto crc = json.at("crc").get<std::string>();
    json.erase("crc");
    if (crc_hex(json.dump()) != crc) return std::nullopt;
    JournalEvent event;
    event.seq = json.at("seq").get<std::uint64_t>();
    auto at = parse_timestamp(json.at("at").get<std::string>());
    if (!at) return std::nullopt;
    event.at = *at;
    event.kind = json.at("kind").get<std::string>();
    event.payload = json.at("payload");
    return event;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void apply_event(Base& base, const JournalEvent& event) {
  const auto& p = event.payload;
  const auto& kind = event.kind;
  try {
    if (kind == event_kind::base_create) {
      base = state_from_json(p.at("state"));
    } else if (kind == event_kind::table_put) {
      auto spec = table_from_json(p.at("table"));
      if (auto* table = base.find_table(spec.id)) {
        table->mutable_spec() = std::move(spec);
      } else {
        base.tables.emplace_back(std::move(spec));
      }
    } else if (kind == event_kind::form_put) {
      auto form = form_from_json(p.at("form"));
      auto it = std::find_if(base.forms.begin(), base.forms.end(),
                             [&](const FormSpec& f) { return f.id == form.id; });
      if (it != base.forms.end()) {
        *it = std::move(form);
      } else {
        base.forms.push_back(std::move(form));
      }
    } else if (kind == event_kind::grant_set) {
      base.access.put_grant(grant_from_json(p));
    } else if (kind == event_kind::grant_revoke) {
      base.access.erase_grant(PrincipalId(p.at("principal").get<std::string>()));
    } else if (kind == event_kind::token_mint) {
      base.access.add_token(token_from_json(p));
    } else if (kind == event_kind::token_revoke) {
      base.access.revoke_token(p.at("token").get<std::string>());
    } else if (kind == event_kind::record_insert) {
      auto& table = table_for(base, p);
      table.commit_insert(record_from_json(table.spec(), p.at("record")));
    } else if (kind == event_kind::record_update) {
      auto& table = table_for(base, p);
      table.commit_update(record_from_json(table.spec(), p.at("record")));
    } else if (kind == event_kind::record_delete) {
      table_for(base, p).erase(RecordId(p.at("record").get<std::string>()));
    } else if (kind == event_kind::form_submit) {
      auto& table = table_for(base, p);
      replace_fields(table, p.at("fields"));
      auto record = record_from_json(table.spec(), p.at("record"));
      base.option_use_seq = p.at("use_seq").get<std::uint64_t>();
      for (const auto& key : p.value("evict", Json::array())) base.idempotency.erase(key.get<std::string>());
      if (p.contains("idempotency_key")) {
        base.idempotency.insert_or_assign(
            p.at("idempotency_key").get<std::string>(),
            IdempotentSubmission{FormId(p.at("form").get<std::string>()), table.spec().id, record.id, event.at});
      }
      table.commit_insert(std::move(record));
    } else if (kind == event_kind::import_batch) {
      auto& table = table_for(base, p);
      replace_fields(table, p.at("fields"));
      for (const auto& record : p.at("records")) table.commit_insert(record_from_json(table.spec(), record));
    } else if (kind == event_kind::comment_add) {
      base.comments.push_back(comment_from_json(p.at("comment")));
    } else {
      throw Error(ErrorCode::corrupt_journal, "unknown event kind '" + kind + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::corrupt_journal) throw;
    throw Error(ErrorCode::corrupt_journal, "event " + std::to_string(event.seq) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::corrupt_journal, "event " + std::to_string(event.seq) + ": " + e.what());
  }
  base.journal_seq = event.seq;
}

Journal::Journal(fs::path dir, std::uint64_t last_seq, JournalOptions options)
    : dir_(std::move(dir)), last_seq_(last_seq), options_(options) {
  std::error_code ec;
  bool created = fs::create_directories(dir_, ec);
  if (ec) io_error("cannot create " + dir_.string(), ec.value());
  auto path = dir_ / kJournalFile;
  fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0600);
  if (fd_ < 0) io_error("cannot open " + path.string(), errno);
  if (created) fsync_dir(dir_.parent_path());
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

JournalEvent Journal::append(std::string_view kind, Json payload, Timestamp at) {
  JournalEvent event{last_seq_ + 1, at, std::string(kind), std::move(payload)};
  auto line = encode_event(event) + "\n";
  if (options_.crash_mid_append) {
    write_all(fd_, std::string_view(line).substr(0, line.size() / 2), "journal append");
    ::fsync(fd_);
    std::_Exit(86);
  }
  auto size_before = ::lseek(fd_, 0, SEEK_END);
  try {
    write_all(fd_, line, "journal append");
    if (options_.fsync && ::fdatasync(fd_) != 0) io_error("journal fsync", errno);
  } catch (...) {
    if (size_before >= 0 && ::ftruncate(fd_, size_before) != 0) {
      // the tail will be dropped by recovery instead
    }
    throw;
  }
  last_seq_ = event.seq;
  return event;
}

void write_snapshot(const fs::path& dir, const Base& base) {
  auto target = dir / kSnapshotFile;
  auto temp = dir / (std::string(kSnapshotFile) + ".tmp");
  auto bytes = state_to_json(base).dump(2) + "\n";
  int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) io_error("cannot write " + temp.string(), errno);
  try {
    write_all(fd, bytes, "snapshot write");
    if (::fsync(fd) != 0) io_error("snapshot fsync", errno);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) io_error("cannot replace " + target.string(), ec.value());
  fsync_dir(dir);
}

Recovery recover_base(const fs::path& dir) {
  Recovery recovery;
  std::optional<Base> state;
  std::uint64_t snapshot_seq = 0;

  auto snapshot_path = dir / kSnapshotFile;
  if (fs::exists(snapshot_path)) {
    try {
      std::ifstream in(snapshot_path, std::ios::binary);
      std::stringstream buffer;
      buffer << in.rdbuf();
      state = state_from_json(Json::parse(buffer.str()));
      snapshot_seq = state->journal_seq;
      recovery.used_snapshot = true;
    } catch (const std::exception& e) {
      recovery.warnings.push_back("corrupt-snapshot: " + std::string(e.what()) +
                                  "; replaying the full journal");
      state.reset();
    }
  }

  auto journal_path = dir / kJournalFile;
  std::string bytes;
  if (fs::exists(journal_path)) {
    std::ifstream in(journal_path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    bytes = buffer.str();
  }

  std::uint64_t expected = 1;
  std::size_t offset = 0;
  std::size_t valid_end = 0;
  bool truncated = false;
  while (offset < bytes.size()) {
    auto newline = bytes.find('\n', offset);
    std::string_view line;
    std::optional<JournalEvent> event;
    if (newline != std::string::npos) {
      line = std::string_view(bytes).substr(offset, newline - offset);
      event = decode_event(line);
    }
    if (!event || event->seq != expected) {
      recovery.warnings.push_back("corrupt-journal: invalid event at byte " + std::to_string(offset) +
                                  " (expected seq " + std::to_string(expected) +
                                  "); truncating the journal there");
      truncated = true;
      break;
    }
    if (event->seq > snapshot_seq) {
      if (!state) {
        if (event->kind != event_kind::base_create) {
          recovery.warnings.push_back("corrupt-journal: journal does not start with base.create");
          truncated = true;
          break;
        }
        state.emplace();
      }
      try {
        apply_event(*state, *event);
        ++recovery.replayed;
      } catch (const Error& e) {
        recovery.warnings.push_back(std::string("corrupt-journal: ") + e.what() + "; truncating");
        truncated = true;
        break;
      }
    }
    ++expected;
    offset = newline + 1;
    valid_end = offset;
  }

  if (truncated) {
    std::error_code ec;
    fs::resize_file(journal_path, valid_end, ec);
    if (ec) recovery.warnings.push_back("could not truncate journal: " + ec.message());
  }
  recovery.journal_last_seq = expected - 1;
  if (state && state->journal_seq > recovery.journal_last_seq) {
    recovery.warnings.push_back("journal ends at seq " + std::to_string(recovery.journal_last_seq) +
                                ", before the snapshot at seq " + std::to_string(state->journal_seq));
  }
  recovery.state = std::move(state);
  return recovery;
}

}  // namespace farmrec
