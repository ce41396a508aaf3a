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

#include "scenarios.hpp"

namespace farmrec {
namespace {

using farmrec::testing::at;
using farmrec::testing::HortWorld;
using namespace farmrec::scenarios;

TEST(ServiceTest, ValidationMatrixRejectsWithoutJournaling) {
  auto cases = validation_cases();
  ASSERT_GE(cases.size(), 12u);
  for (const auto& c : cases) {
    SCOPED_TRACE(c.name);
    HortWorld world({}, {}, c.field_records ? "field-records" : "hort-activity");
    seed(*world.service, world.owner, world.base, world.table);
    auto before = world.events();
    EXPECT_FARMREC_ERROR(world.service->submit(world.token, world.form, c.answers, c.new_options), c.expected);
    EXPECT_EQ(world.events(), before);
  }
}

TEST(ServiceTest, SubmissionThroughTokenAndMru) {
  HortWorld world;
  auto result = world.service->submit(world.token, world.form, valid_hort({{"Power Unit", "Gator"}}),
                                      {{"Who", "Purdue Pete"}, {"Where", "Bed 72"}, {"Power Unit", "Gator"}});
  EXPECT_FALSE(result.replayed);
  world.service->add_option(world.owner, world.base, world.table, "Power Unit", "Utility tractor");
  auto view = world.service->render_form(world.token, world.form);
  for (const auto& entry : view.entries) {
    if (entry.name == "Power Unit") EXPECT_EQ(entry.option_labels.front(), "Gator");
    if (entry.name == "What") EXPECT_EQ(entry.option_labels.front(), "Tillage");
  }
}

TEST(ServiceTest, IdempotencyKeyReplaysTheOriginal) {
  HortWorld world;
  seed(*world.service, world.owner, world.base, world.table);
  auto first = world.service->submit(world.token, world.form, valid_hort(), {}, std::string("key-1"));
  auto events = world.events();
  auto again = world.service->submit(world.token, world.form, valid_hort({{"Duration", "99"}}), {}, std::string("key-1"));
  EXPECT_TRUE(again.replayed);
  EXPECT_EQ(again.record.id, first.record.id);
  EXPECT_EQ(world.events(), events);
  EXPECT_EQ(world.service->query(world.owner, world.base, world.table).records.size(), 1u);

  // Keys expire after the retention window.
  world.clock->advance(25 * 3600);
  auto later = world.service->submit(world.token, world.form, valid_hort(), {}, std::string("key-1"));
  EXPECT_FALSE(later.replayed);
  EXPECT_EQ(world.service->query(world.owner, world.base, world.table).records.size(), 2u);
}

TEST(ServiceTest, IdempotencyCacheIsBounded) {
  auto clock = std::make_shared<ManualClock>(at(8, 0));
  ServiceOptions options;
  options.clock = clock;
  options.idempotency_capacity = 3;
  Service service(options);
  Actor owner = PrincipalActor{PrincipalId("o")};
  auto doc = service.create_base(owner, "B", std::string("hort-activity"));
  auto base = doc.at("id").get<std::string>();
  FormId form(doc.at("forms").at(0).at("id").get<std::string>());
  seed(service, owner, base, "Activities");
  for (int i = 0; i < 10; ++i) {
    clock->advance(1);
    service.submit(owner, form, valid_hort(), {}, "k" + std::to_string(i));
  }
  EXPECT_LE(service.state(BaseId(base)).idempotency.size(), 3u);
  EXPECT_TRUE(service.submit(owner, form, valid_hort(), {}, std::string("k9")).replayed);
  EXPECT_FALSE(service.submit(owner, form, valid_hort(), {}, std::string("k0")).replayed);
}

TEST(ServiceTest, PermissionMatrixThroughServiceCalls) {
  for (auto role : kAllRoles) {
    for (auto action : kAllActions) {
      bool expect = permission_oracle().at(role).count(action) > 0;
      auto outcome = probe([role](const PermissionWorld& w) { return w.as(role); }, action, ErrorCode::not_authorized);
      EXPECT_EQ(outcome.allowed, expect) << to_string(role) << " " << to_string(action) << " " << outcome.detail;
      if (!expect) EXPECT_TRUE(outcome.denied_cleanly) << to_string(role) << " " << to_string(action);
    }
  }
}

TEST(ServiceTest, TokensAnonymousAndStrangers) {
  for (auto action : kAllActions) {
    bool form_action = action == Action::render_form || action == Action::submit_form;
    auto token = probe([](const PermissionWorld& w) { return w.token; }, action, ErrorCode::not_authorized);
    EXPECT_EQ(token.allowed, form_action) << to_string(action) << " " << token.detail;
    if (!form_action) EXPECT_TRUE(token.denied_cleanly) << to_string(action);

    auto anonymous = probe([](const PermissionWorld&) { return Actor{Anonymous{}}; }, action, ErrorCode::unauthenticated);
    EXPECT_FALSE(anonymous.allowed) << to_string(action);
    EXPECT_TRUE(anonymous.denied_cleanly) << to_string(action) << " " << anonymous.detail;
  }
}

TEST(ServiceTest, RevokedTokenStopsWorking) {
  HortWorld world;
  auto token = std::get<TokenActor>(world.token).token;
  world.service->revoke_form_token(world.owner, world.form, token);
  EXPECT_FARMREC_ERROR(world.service->render_form(world.token, world.form), ErrorCode::not_authorized);
  EXPECT_FARMREC_ERROR(world.service->revoke_form_token(world.owner, world.form, "ft_nope"), ErrorCode::unknown_token);
  auto tokens = world.service->list_form_tokens(world.owner, world.form);
  ASSERT_EQ(tokens.size(), 1u);
  EXPECT_TRUE(tokens.front().revoked);
}

TEST(ServiceTest, RecordLifecycleAndComments) {
  HortWorld world;
  seed(*world.service, world.owner, world.base, world.table);
  auto r = world.service->insert_record(world.owner, world.base, "Activities", valid_hort({{"Duration", "40"}}));
  auto updated = world.service->update_record(world.owner, world.base, world.table, r.record.id, {{"Duration", "45"}});
  EXPECT_EQ(updated.record.cell(world.field("Duration")), CellValue(std::int64_t{45}));
  world.service->set_grant(world.owner, world.base, PrincipalId("c"), Role::commenter);
  Actor commenter = PrincipalActor{PrincipalId("c")};
  world.service->add_comment(commenter, world.base, world.table, r.record.id, "check the disc");
  auto comments = world.service->list_comments(world.owner, world.base, world.table, r.record.id);
  ASSERT_EQ(comments.size(), 1u);
  EXPECT_EQ(comments.front().author, PrincipalId("c"));
  // Comments never alter the record.
  EXPECT_EQ(world.service->get_record(world.owner, world.base, world.table, r.record.id).record, updated.record);

  auto filtered = world.service->query(world.owner, world.base, world.table, {{"Duration", "gt", "44"}},
                                       SortSpec{"Duration", false});
  EXPECT_EQ(filtered.records.size(), 1u);
  world.service->delete_record(world.owner, world.base, world.table, r.record.id);
  EXPECT_FARMREC_ERROR(world.service->delete_record(world.owner, world.base, world.table, r.record.id),
                       ErrorCode::unknown_record);
  EXPECT_FARMREC_ERROR(world.service->get_base(world.owner, "No Such Base"), ErrorCode::unknown_base);
  EXPECT_FARMREC_ERROR(world.service->query(world.owner, world.base, "Nope"), ErrorCode::unknown_table);
}

TEST(ServiceTest, SchemaEditsAndForms) {
  HortWorld world;
  auto field = world.service->add_field(world.owner, world.base, world.table, make_field("Weather", FieldKind::short_text));
  EXPECT_EQ(world.spec().fields.back().id, field.id);
  EXPECT_FARMREC_ERROR(
      world.service->add_field(world.owner, world.base, world.table, make_field("Weather", FieldKind::integer)),
      ErrorCode::duplicate_name);
  auto table = world.service->create_table(world.owner, world.base, "Harvest Log",
                                           {make_field("Crop", FieldKind::single_select)});
  EXPECT_FARMREC_ERROR(world.service->create_table(world.owner, world.base, "Harvest Log"), ErrorCode::duplicate_name);
  FormSpec form;
  form.table = table.id;
  form.title = "Harvest";
  form.entries.push_back(FormField{table.fields[0].id, "Crop", true, {}, true});
  auto saved = world.service->save_form(world.owner, world.base, form);
  EXPECT_FALSE(saved.id.empty());
  auto token = world.service->mint_form_token(world.owner, saved.id);
  auto submitted = world.service->submit(TokenActor{token.token}, saved.id, {{"Crop", "rhubarb"}}, {{"Crop", "rhubarb"}});
  EXPECT_EQ(submitted.table.id, table.id);

  form.entries.push_back(FormField{FieldId("fld_ghost"), "", false, {}, false});
  EXPECT_FARMREC_ERROR(world.service->save_form(world.owner, world.base, form), ErrorCode::invalid_form);
}

TEST(ServiceTest, ImportAndExportThroughService) {
  HortWorld world;
  auto csv = farmrec::testing::slurp(std::string(FARMREC_FIXTURES) + "/table1.csv");
  auto strict = world.service->import_csv(world.owner, world.base, world.table, csv, ImportMode::strict);
  EXPECT_EQ(strict.inserted, 0u);
  EXPECT_FALSE(strict.errors.empty());
  auto events = world.events();
  auto lenient = world.service->import_csv(world.owner, world.base, world.table, csv, ImportMode::lenient);
  EXPECT_EQ(lenient.inserted, 7u);
  EXPECT_TRUE(lenient.errors.empty());
  EXPECT_EQ(world.events(), events + 1);
  auto exported = world.service->export_csv(world.owner, world.base, world.table, ExportConfig::table1());
  // Import stamps its own created time, so compare everything but that column.
  auto strip = [](const std::string& bytes) {
    auto rows = csv::parse(bytes);
    for (auto& row : rows) row.erase(row.begin() + 5);
    return rows;
  };
  EXPECT_EQ(strip(exported), strip(csv));
}

TEST(ServiceTest, PrincipalsAuthenticate) {
  Service service;
  auto token = service.add_principal(PrincipalId("pete"));
  EXPECT_EQ(service.add_principal(PrincipalId("pete")), token);
  auto actor = service.authenticate(token);
  ASSERT_TRUE(std::holds_alternative<PrincipalActor>(actor));
  EXPECT_EQ(std::get<PrincipalActor>(actor).id, PrincipalId("pete"));
  EXPECT_FARMREC_ERROR(service.authenticate("pt_wrong"), ErrorCode::unauthenticated);
  EXPECT_FARMREC_ERROR(service.authenticate(""), ErrorCode::unauthenticated);
}

TEST(ServiceTest, MarketingBalances) {
  HortWorld world({}, {}, "marketing-delivery");
  auto& s = *world.service;
  s.insert_record(world.owner, world.base, "Contracts", {{"Contract", "C-1"}, {"Quantity", "5000"}});
  s.insert_record(world.owner, world.base, "Contracts", {{"Contract", "C-2"}, {"Quantity", "1000"}});
  s.add_option(world.owner, world.base, "Deliveries", "Contract", "C-1");
  s.insert_record(world.owner, world.base, "Deliveries", {{"Contract", "C-1"}, {"Quantity", "1200.5"}});
  s.insert_record(world.owner, world.base, "Deliveries", {{"Contract", "C-1"}, {"Quantity", "800"}});
  auto balances = s.undelivered_balances(world.owner, world.base);
  ASSERT_EQ(balances.size(), 2u);
  EXPECT_EQ(balances[0].name, "C-1");
  EXPECT_DOUBLE_EQ(balances[0].balance(), 2999.5);
  EXPECT_DOUBLE_EQ(balances[1].balance(), 1000.0);
}

}  // namespace
}  // namespace farmrec
