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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "farmrec/base.hpp"
#include "farmrec/serialize.hpp"

namespace farmrec {

// One committed mutation of a base. Stored as one line of canonical JSON:
//   {"seq":N,"at":"2022-12-20T11:35:00","kind":"record.insert","payload":{...},"crc":"1a2b3c4d"}
// where crc is the CRC-32 of the same object serialized without the "crc" key.
struct JournalEvent {
  std::uint64_t seq = 0;
  Timestamp at;
  std::string kind;
  Json payload;
};

namespace event_kind {
inline constexpr std::string_view base_create = "base.create";
inline constexpr std::string_view table_put = "table.put";
inline constexpr std::string_view form_put = "form.put";
inline constexpr std::string_view grant_set = "grant.set";
inline constexpr std::string_view grant_revoke = "grant.revoke";
inline constexpr std::string_view token_mint = "token.mint";
inline constexpr std::string_view token_revoke = "token.revoke";
inline constexpr std::string_view record_insert = "record.insert";
inline constexpr std::string_view record_update = "record.update";
inline constexpr std::string_view record_delete = "record.delete";
inline constexpr std::string_view form_submit = "form.submit";
inline constexpr std::string_view import_batch = "import";
inline constexpr std::string_view comment_add = "comment.add";
}  // namespace event_kind

std::string encode_event(const JournalEvent& event);
// nullopt on parse failure or checksum mismatch.
std::optional<JournalEvent> decode_event(std::string_view line);

// The only way committed state changes, live or during replay.
// Errors: corrupt-journal when the payload does not fit the state.
void apply_event(Base& base, const JournalEvent& event);

struct JournalOptions {
  bool fsync = true;
  // Test hook: the next append writes half its line and terminates the process.
  bool crash_mid_append = false;
};

// Append-only writer for <dir>/journal.ndjson.
class Journal {
 public:
  Journal(std::filesystem::path dir, std::uint64_t last_seq, JournalOptions options = {});
  ~Journal();
  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  // Durable (flushed and fsynced) when this returns. Errors: storage-full, io-failure.
  JournalEvent append(std::string_view kind, Json payload, Timestamp at);

  std::uint64_t last_seq() const noexcept { return last_seq_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }
  JournalOptions& options() noexcept { return options_; }

 private:
  std::filesystem::path dir_;
  int fd_ = -1;
  std::uint64_t last_seq_ = 0;
  JournalOptions options_;
};

inline constexpr std::string_view kSnapshotFile = "snapshot.json";
inline constexpr std::string_view kJournalFile = "journal.ndjson";

// Atomically replaces <dir>/snapshot.json. Errors: io-failure.
void write_snapshot(const std::filesystem::path& dir, const Base& base);

struct Recovery {
  std::optional<Base> state;  // nullopt when the directory holds no committed base
  std::vector<std::string> warnings;
  std::size_t replayed = 0;
  std::uint64_t journal_last_seq = 0;
  bool used_snapshot = false;
};

// Snapshot plus journal tail. A corrupt snapshot falls back to full replay; a corrupt or
// torn journal tail is truncated at the last valid event and reported in `warnings`.
Recovery recover_base(const std::filesystem::path& dir);

}  // namespace farmrec
