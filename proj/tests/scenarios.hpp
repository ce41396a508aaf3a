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

// Scenario tables shared by the unit tests and the acceptance binary.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "support.hpp"

namespace farmrec::scenarios {

using farmrec::testing::HortWorld;

struct ValidationCase {
  std::string name;
  bool field_records = false;  // use the field-records template instead of hort-activity
  KeyedValues answers;
  std::vector<NewOptionRequest> new_options;
  ErrorCode expected;
};

// Answers that pass before mutation: options already exist after seed().
inline KeyedValues valid_hort(std::initializer_list<std::pair<std::string, RawValue>> overrides = {}) {
  KeyedValues answers{{"Who", "Purdue Pete"}, {"Where", "Bed 72"}, {"What", "Tillage"}};
  for (const auto& [key, value] : overrides) {
    auto it = std::find_if(answers.begin(), answers.end(), [&](const auto& kv) { return kv.first == key; });
    if (it != answers.end()) {
      it->second = value;
    } else {
      answers.emplace_back(key, value);
    }
  }
  return answers;
}

inline KeyedValues without(KeyedValues answers, const std::string& key) {
  answers.erase(std::remove_if(answers.begin(), answers.end(), [&](const auto& kv) { return kv.first == key; }),
                answers.end());
  return answers;
}

inline std::vector<ValidationCase> validation_cases() {
  return {
      {"missing Who", false, without(valid_hort(), "Who"), {}, ErrorCode::missing_required},
      {"missing Where", false, without(valid_hort(), "Where"), {}, ErrorCode::missing_required},
      {"blank What", false, valid_hort({{"What", "   "}}), {}, ErrorCode::missing_required},
      {"missing Date on field records", true, valid_hort(), {}, ErrorCode::missing_required},
      {"integer Duration as words", false, valid_hort({{"Duration", "forty"}}), {}, ErrorCode::type_mismatch},
      {"integer Seeding Rate as decimal", false, valid_hort({{"What", "Plant/Transplant"}, {"Seeding Rate", "3.5"}}),
       {}, ErrorCode::type_mismatch},
      {"real Fertilizer Rate as words", false,
       valid_hort({{"What", "Spread/Spray"}, {"Fertilizer Rate", "lots"}}), {}, ErrorCode::type_mismatch},
      {"real Fertilizer Rate infinite", false,
       valid_hort({{"What", "Spread/Spray"}, {"Fertilizer Rate", "inf"}}), {}, ErrorCode::type_mismatch},
      {"impossible Date", true, valid_hort({{"Date", "2022-02-30"}}), {}, ErrorCode::malformed_date},
      {"unknown Who option", false, valid_hort({{"Who", "Nobody Known"}}), {}, ErrorCode::unknown_option},
      {"unknown What option", false, valid_hort({{"What", "Juggling"}}), {}, ErrorCode::unknown_option},
      {"unknown Implement option", false,
       valid_hort({{"Implement(s)", std::vector<std::string>{"bed shaper", "laser plow"}}}), {},
       ErrorCode::unknown_option},
      {"Seeds planted while Harvest", false, valid_hort({{"What", "Harvest"}, {"Seeds planted", "onions - candy"}}),
       {}, ErrorCode::hidden_field_answer},
      {"Products applied while Plant", false,
       valid_hort({{"What", "Plant/Transplant"}, {"Products applied", "Glyphosate"}}), {},
       ErrorCode::hidden_field_answer},
      {"Fertilizer Rate while Scout", false, valid_hort({{"What", "Scout"}, {"Fertilizer Rate", "50"}}), {},
       ErrorCode::hidden_field_answer},
      {"client-set created time", false, valid_hort({{"created time", "12/20/2022 11:35am"}}), {},
       ErrorCode::client_set_created_time},
      {"new option on a closed field", false, valid_hort({{"Duration", "5"}}), {{"Duration", "5"}},
       ErrorCode::add_not_allowed},
      {"new option with a line break", false, valid_hort({{"Who", "Two\nLines"}}), {{"Who", "Two\nLines"}},
       ErrorCode::invalid_label},
      {"unknown field", false, valid_hort({{"Weather", "sunny"}}), {}, ErrorCode::unknown_field},
  };
}

// Creates the options valid_hort() refers to.
inline void seed(Service& service, const Actor& owner, const std::string& base, const std::string& table) {
  for (const auto& [field, label] : std::vector<std::pair<std::string, std::string>>{
           {"Who", "Purdue Pete"}, {"Where", "Bed 72"}, {"Implement(s)", "bed shaper"},
           {"Seeds planted", "onions - candy"}, {"Products applied", "Glyphosate"}}) {
    service.add_option(owner, base, table, field, label);
  }
}

// Expected permissions, written out independently of the access module.
inline const std::map<Role, std::set<Action>>& permission_oracle() {
  using A = Action;
  static const std::map<Role, std::set<Action>> m{
      {Role::readonly, {A::read_grid, A::export_csv, A::create_base, A::list_templates}},
      {Role::commenter, {A::read_grid, A::export_csv, A::comment, A::create_base, A::list_templates}},
      {Role::editor,
       {A::read_grid, A::export_csv, A::comment, A::create_record, A::edit_record, A::delete_record, A::render_form,
        A::submit_form, A::manage_tokens, A::create_base, A::list_templates}},
      {Role::owner,
       {A::read_grid, A::export_csv, A::comment, A::create_record, A::edit_record, A::delete_record, A::render_form,
        A::submit_form, A::manage_tokens, A::edit_schema, A::edit_form, A::manage_grants, A::create_base,
        A::list_templates}},
  };
  return m;
}

// A world with one record, plus a principal holding each role.
struct PermissionWorld : HortWorld {
  RecordId record;
  PermissionWorld() {
    seed(*service, owner, base, table);
    record = service->insert_record(owner, base, table, valid_hort()).record.id;
    for (auto role : {Role::readonly, Role::commenter, Role::editor}) {
      service->set_grant(owner, base, PrincipalId(std::string(to_string(role))), role);
    }
  }

  Actor as(Role role) const {
    return role == Role::owner ? owner : Actor{PrincipalActor{PrincipalId(std::string(to_string(role)))}};
  }
};

// Performs one representative service call for the action.
inline void perform(PermissionWorld& w, const Actor& actor, Action action) {
  auto& s = *w.service;
  switch (action) {
    case Action::read_grid: s.query(actor, w.base, w.table); break;
    case Action::comment: s.add_comment(actor, w.base, w.table, w.record, "looks right"); break;
    case Action::create_record: s.insert_record(actor, w.base, w.table, valid_hort()); break;
    case Action::edit_record: s.update_record(actor, w.base, w.table, w.record, {{"Duration", "12"}}); break;
    case Action::delete_record: s.delete_record(actor, w.base, w.table, w.record); break;
    case Action::edit_schema: s.add_field(actor, w.base, w.table, make_field("Weather", FieldKind::short_text)); break;
    case Action::edit_form: {
      auto doc = s.get_base(w.owner, w.base);
      auto form = form_from_json(doc.at("forms").at(0));
      form.title = "Renamed";
      s.save_form(actor, w.base, form);
      break;
    }
    case Action::manage_grants: s.set_grant(actor, w.base, PrincipalId("newcomer"), Role::readonly); break;
    case Action::export_csv: s.export_csv(actor, w.base, w.table); break;
    case Action::render_form: s.render_form(actor, w.form); break;
    case Action::submit_form: s.submit(actor, w.form, valid_hort()); break;
    case Action::manage_tokens: s.mint_form_token(actor, w.form); break;
    case Action::create_base: s.create_base(actor, "Another"); break;
    case Action::list_templates: s.templates(actor); break;
  }
}

struct PermissionOutcome {
  bool allowed = false;
  bool denied_cleanly = false;  // denial code right and no journal event
  std::string detail;
};

// Runs the action for one actor on a fresh world. expect_code is the denial
// code that applies to this actor.
inline PermissionOutcome probe(const std::function<Actor(const PermissionWorld&)>& who, Action action,
                               ErrorCode denial) {
  PermissionWorld w;
  auto actor = who(w);
  auto before = w.service->total_journal_events();
  auto base_before = state_to_json(w.service->state(BaseId(w.base)));
  PermissionOutcome out;
  try {
    perform(w, actor, action);
    out.allowed = true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::not_authorized || e.code() == ErrorCode::unauthenticated) {
      out.denied_cleanly = e.code() == denial && w.service->total_journal_events() == before &&
                           state_to_json(w.service->state(BaseId(w.base))) == base_before;
      out.detail = std::string(to_string(e.code())) + ": " + e.what();
    } else {
      out.allowed = true;  // got past authorization
      out.detail = std::string("allowed but failed: ") + e.what();
    }
  }
  return out;
}

// Fills every {param} of a route pattern with ids from a live world.
inline std::string route_path(const std::string& pattern, const PermissionWorld& w, const std::string& token) {
  std::string out = pattern;
  auto sub = [&](const std::string& key, const std::string& value) {
    auto pos = out.find(key);
    if (pos != std::string::npos) out.replace(pos, key.size(), value);
  };
  sub("{base}", w.base);
  sub("{table}", w.table);
  sub("{record}", w.record.str());
  sub("{form}", w.form.str());
  sub("{field}", "Who");
  sub("{principal}", "editor");
  sub("{token}", token);
  return out;
}

inline http::Request make_request(const std::string& method, const std::string& path, std::string body = "",
                   std::string bearer = "") {
  http::Request r;
  r.method = method;
  r.path = path;
  r.body = std::move(body);
  if (!bearer.empty()) r.headers["authorization"] = "Bearer " + bearer;
  return r;
}

inline const char* route_body(const std::string& method, const std::string& pattern) {
  if (method == "GET" || method == "DELETE") return "";
  if (pattern.ends_with("/import")) return "Who,Where,What\r\nPurdue Pete,Bed 72,Tillage\r\n";
  if (pattern.ends_with("/submissions")) return R"({"answers":{"Who":"Purdue Pete","Where":"Bed 72","What":"Tillage"}})";
  if (pattern.ends_with("/records")) return R"({"cells":{"Who":"Purdue Pete","Where":"Bed 72","What":"Tillage"}})";
  return R"({"name":"X","label":"L","principal":"p","role":"editor","kind":"short-text","text":"t","table":"Activities","entries":[]})";
}

}  // namespace farmrec::scenarios
