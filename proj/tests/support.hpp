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
#include <fstream>
#include <random>
#include <sstream>

#include "farmrec/demo.hpp"
#include "farmrec/http.hpp"

namespace farmrec::testing {

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    path_ = base / ("farmrec-test-" + random_hex(8));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Runs stmt and expects a farmrec::Error carrying the given code.
#define EXPECT_FARMREC_ERROR(stmt, expected_code)                                                  \
  do {                                                                                             \
    try {                                                                                          \
      stmt;                                                                                        \
      ADD_FAILURE() << "expected " << ::farmrec::to_string(expected_code) << " from " #stmt;       \
    } catch (const ::farmrec::Error& e_) {                                                         \
      EXPECT_EQ(::farmrec::to_string(e_.code()), ::farmrec::to_string(expected_code)) << e_.what(); \
    }                                                                                              \
  } while (false)

inline Timestamp at(int hour, int minute, int day = 20) { return *Timestamp::from_civil(2022, 12, day, hour, minute, 0); }

// A service holding one horticultural base owned by "owner", with a form token.
struct HortWorld {
  std::shared_ptr<ManualClock> clock = std::make_shared<ManualClock>(at(11, 0));
  std::unique_ptr<Service> service;
  Actor owner = PrincipalActor{PrincipalId("owner")};
  std::string base;
  std::string table;
  FormId form;
  Actor token;

  explicit HortWorld(std::optional<std::filesystem::path> dir = {}, JournalOptions journal = {},
                     const std::string& template_id = "hort-activity") {
    ServiceOptions options;
    options.data_dir = std::move(dir);
    options.clock = clock;
    options.journal = journal;
    service = std::make_unique<Service>(std::move(options));
    auto doc = service->create_base(owner, "Hort", template_id);
    base = doc.at("id").get<std::string>();
    table = doc.at("tables").at(0).at("id").get<std::string>();
    form = FormId(doc.at("forms").at(0).at("id").get<std::string>());
    token = TokenActor{service->mint_form_token(owner, form).token};
  }

  const TableSpec spec() const { return service->state(BaseId(base)).tables.front().spec(); }
  FieldId field(std::string_view name) const { return spec().resolve(name)->id; }
  std::uint64_t events() const { return service->journal_seq(BaseId(base)); }
};

}  // namespace farmrec::testing
