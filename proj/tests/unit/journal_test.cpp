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

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include "support.hpp"

namespace farmrec {
namespace {

using farmrec::testing::HortWorld;
using farmrec::testing::slurp;
using farmrec::testing::TempDir;

std::filesystem::path base_dir(const TempDir& dir, const std::string& base) { return dir.path() / "bases" / base; }

KeyedValues scout(const std::string& note) {
  return {{"Who", "Pete"}, {"Where", "Bed 1"}, {"What", "Scout"}, {"Notes", note}};
}
std::vector<NewOptionRequest> grow() { return {{"Who", "Pete"}, {"Where", "Bed 1"}}; }

TEST(JournalCodecTest, CrcGuardsEveryLine) {
  JournalEvent event{3, Timestamp{1671536100}, "record.delete", Json{{"table", "tbl_x"}, {"record", "rec_y"}}};
  auto line = encode_event(event);
  auto decoded = decode_event(line);
  ASSERT_TRUE(decoded);
  EXPECT_EQ(decoded->seq, 3u);
  EXPECT_EQ(decoded->payload, event.payload);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  for (std::size_t i = 0; i < line.size(); i += 7) {
    auto flipped = line;
    flipped[i] = flipped[i] == 'x' ? 'y' : 'x';
    EXPECT_FALSE(decode_event(flipped)) << i;
  }
  EXPECT_FALSE(decode_event(line.substr(0, line.size() / 2)));
}

TEST(RecoveryTest, ReplayRestoresServiceState) {
  TempDir dir;
  Json before;
  std::string base;
  {
    HortWorld world(dir.path());
    base = world.base;
    for (int i = 0; i < 5; ++i) world.service->submit(world.token, world.form, scout("n" + std::to_string(i)), grow());
    before = state_to_json(world.service->state(BaseId(base)));
  }
  ServiceOptions options;
  options.data_dir = dir.path();
  Service reopened(options);
  EXPECT_TRUE(reopened.recovery_warnings().empty());
  EXPECT_EQ(state_to_json(reopened.state(BaseId(base))), before);
}

TEST(RecoveryTest, TornTailIsTruncated) {
  TempDir dir;
  std::string base;
  Json before;
  {
    HortWorld world(dir.path());
    base = world.base;
    world.service->submit(world.token, world.form, scout("kept"), grow());
    before = state_to_json(world.service->state(BaseId(base)));
  }
  auto journal = base_dir(dir, base) / kJournalFile;
  auto intact = slurp(journal);
  {
    std::ofstream out(journal, std::ios::app | std::ios::binary);
    out << "{\"seq\":99,\"at\":\"2022-12";
  }
  auto recovery = recover_base(base_dir(dir, base));
  ASSERT_TRUE(recovery.state);
  EXPECT_EQ(state_to_json(*recovery.state), before);
  EXPECT_EQ(recovery.warnings.size(), 1u);
  EXPECT_EQ(slurp(journal), intact);
}

TEST(RecoveryTest, CorruptMiddleLineStopsReplayThere) {
  TempDir dir;
  std::string base;
  {
    HortWorld world(dir.path());
    base = world.base;
    for (int i = 0; i < 4; ++i) world.service->submit(world.token, world.form, scout("n" + std::to_string(i)), grow());
  }
  auto journal = base_dir(dir, base) / kJournalFile;
  auto bytes = slurp(journal);
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    if (bytes[i] == '\n') starts.push_back(i + 1);
  }
  ASSERT_EQ(starts.size(), 6u);  // base, token, 4 submissions
  bytes[starts[4] + 10] ^= 0x01;
  {
    std::ofstream out(journal, std::ios::binary | std::ios::trunc);
    out << bytes;
  }
  auto recovery = recover_base(base_dir(dir, base));
  ASSERT_TRUE(recovery.state);
  EXPECT_EQ(recovery.state->journal_seq, 4u);
  EXPECT_EQ(recovery.state->tables.front().records().size(), 2u);
  EXPECT_FALSE(recovery.warnings.empty());
}

TEST(RecoveryTest, SnapshotPlusTailAndCorruptSnapshotFallback) {
  TempDir dir;
  std::string base;
  Json before;
  {
    HortWorld world(dir.path());
    base = world.base;
    world.service->submit(world.token, world.form, scout("a"), grow());
    world.service->snapshot(BaseId(base));
    world.service->submit(world.token, world.form, scout("b"), {});
    before = state_to_json(world.service->state(BaseId(base)));
  }
  auto recovery = recover_base(base_dir(dir, base));
  EXPECT_TRUE(recovery.used_snapshot);
  EXPECT_EQ(recovery.replayed, 1u);
  EXPECT_EQ(state_to_json(*recovery.state), before);

  {
    std::ofstream out(base_dir(dir, base) / kSnapshotFile, std::ios::binary | std::ios::trunc);
    out << "{not json";
  }
  auto fallback = recover_base(base_dir(dir, base));
  EXPECT_FALSE(fallback.used_snapshot);
  EXPECT_EQ(state_to_json(*fallback.state), before);
  EXPECT_FALSE(fallback.warnings.empty());
}

TEST(RecoveryTest, AutomaticSnapshotsKeepReplayShort) {
  TempDir dir;
  std::string base;
  {
    auto clock = std::make_shared<ManualClock>(farmrec::testing::at(9, 0));
    ServiceOptions options;
    options.data_dir = dir.path();
    options.clock = clock;
    options.snapshot_interval = 4;
    Service service(options);
    Actor owner = PrincipalActor{PrincipalId("owner")};
    base = service.create_base(owner, "B", std::string("hort-activity")).at("id").get<std::string>();
    for (int i = 0; i < 10; ++i) {
      service.insert_record(owner, base, "Activities", {{"Duration", std::to_string(i)}});
    }
  }
  auto recovery = recover_base(base_dir(dir, base));
  EXPECT_TRUE(recovery.used_snapshot);
  EXPECT_LT(recovery.replayed, 4u);
  EXPECT_EQ(recovery.state->tables.front().records().size(), 10u);
}

TEST(RecoveryTest, CrashMidAppendLosesOnlyTheUnacknowledgedEvent) {
  TempDir dir;
  std::string base;
  Json acknowledged;
  {
    HortWorld world(dir.path());
    base = world.base;
    world.service->submit(world.token, world.form, scout("acked"), grow());
    acknowledged = state_to_json(world.service->state(BaseId(base)));
  }
  pid_t child = fork();
  ASSERT_GE(child, 0);
  if (child == 0) {
    ServiceOptions options;
    options.data_dir = dir.path();
    Service service(options);
    service.arm_crash_injection();
    service.insert_record(PrincipalActor{PrincipalId("owner")}, base, "Activities", {{"Duration", "1"}});
    _exit(0);  // not reached
  }
  int status = 0;
  waitpid(child, &status, 0);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 86);

  ServiceOptions options;
  options.data_dir = dir.path();
  Service recovered(options);
  EXPECT_EQ(state_to_json(recovered.state(BaseId(base))), acknowledged);
  EXPECT_EQ(recovered.recovery_warnings().size(), 1u);
}

TEST(DataDirTest, SecondServiceIsLockedOut) {
  TempDir dir;
  ServiceOptions options;
  options.data_dir = dir.path();
  Service first(options);
  pid_t child = fork();
  ASSERT_GE(child, 0);
  if (child == 0) {
    try {
      Service second(options);
    } catch (const Error& e) {
      _exit(e.code() == ErrorCode::data_dir_locked ? 0 : 2);
    }
    _exit(1);
  }
  int status = 0;
  waitpid(child, &status, 0);
  EXPECT_TRUE(WIFEXITED(status) && WEXITSTATUS(status) == 0);
}

}  // namespace
}  // namespace farmrec
