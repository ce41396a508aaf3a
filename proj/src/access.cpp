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

#include "farmrec/access.hpp"

#include <algorithm>

#include "farmrec/error.hpp"

namespace farmrec {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::readonly: return "readonly";
    case Role::commenter: return "commenter";
    case Role::editor: return "editor";
    case Role::owner: return "owner";
  }
  return "readonly";
}

std::optional<Role> parse_role(std::string_view text) {
  for (auto role : kAllRoles) {
    if (to_string(role) == text) return role;
  }
  if (text == "read-only") return Role::readonly;
  if (text == "creator") return Role::owner;
  return std::nullopt;
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::read_grid: return "read-grid";
    case Action::comment: return "comment";
    case Action::create_record: return "create-record";
    case Action::edit_record: return "edit-record";
    case Action::delete_record: return "delete-record";
    case Action::edit_schema: return "edit-schema";
    case Action::edit_form: return "edit-form";
    case Action::manage_grants: return "manage-grants";
    case Action::export_csv: return "export";
    case Action::render_form: return "render-form";
    case Action::submit_form: return "submit-form";
    case Action::manage_tokens: return "manage-tokens";
    case Action::create_base: return "create-base";
    case Action::list_templates: return "list-templates";
  }
  return "read-grid";
}

bool role_allows(Role role, Action action) {
  switch (action) {
    case Action::read_grid:
    case Action::export_csv: return true;
    case Action::comment: return role >= Role::commenter;
    case Action::create_record:
    case Action::edit_record:
    case Action::delete_record:
    case Action::render_form:
    case Action::submit_form:
    case Action::manage_tokens: return role >= Role::editor;
    case Action::edit_schema:
    case Action::edit_form:
    case Action::manage_grants: return role == Role::owner;
    case Action::create_base:
    case Action::list_templates: return true;
  }
  return false;
}

std::string mint_token_value() { return "ft_" + random_hex(24); }

AccessList AccessList::with_owner(PrincipalId owner) {
  return AccessList({Grant{std::move(owner), Role::owner}}, {});
}

std::optional<Role> AccessList::role_of(const PrincipalId& principal) const {
  auto it = std::find_if(grants_.begin(), grants_.end(),
                         [&](const Grant& g) { return g.principal == principal; });
  if (it == grants_.end()) return std::nullopt;
  return it->role;
}

const FormToken* AccessList::find_token(std::string_view token) const {
  auto it = std::find_if(tokens_.begin(), tokens_.end(),
                         [&](const FormToken& t) { return t.token == token; });
  return it == tokens_.end() ? nullptr : &*it;
}

void AccessList::set_grant(const PrincipalId& caller, const PrincipalId& principal, Role role) {
  if (role_of(caller) != Role::owner) {
    throw Error(ErrorCode::not_owner, "only an owner can change sharing");
  }
  auto owners = std::count_if(grants_.begin(), grants_.end(),
                              [](const Grant& g) { return g.role == Role::owner; });
  if (role != Role::owner && role_of(principal) == Role::owner && owners == 1) {
    throw Error(ErrorCode::last_owner_removal, "a base must keep at least one owner");
  }
  put_grant(Grant{principal, role});
}

void AccessList::revoke_grant(const PrincipalId& caller, const PrincipalId& principal) {
  if (role_of(caller) != Role::owner) {
    throw Error(ErrorCode::not_owner, "only an owner can change sharing");
  }
  auto current = role_of(principal);
  if (!current) throw Error(ErrorCode::unknown_principal, "'" + principal.str() + "' has no grant");
  auto owners = std::count_if(grants_.begin(), grants_.end(),
                              [](const Grant& g) { return g.role == Role::owner; });
  if (current == Role::owner && owners == 1) {
    throw Error(ErrorCode::last_owner_removal, "a base must keep at least one owner");
  }
  erase_grant(principal);
}

void AccessList::put_grant(Grant grant) {
  for (auto& existing : grants_) {
    if (existing.principal == grant.principal) {
      existing.role = grant.role;
      return;
    }
  }
  grants_.push_back(std::move(grant));
}

void AccessList::erase_grant(const PrincipalId& principal) {
  std::erase_if(grants_, [&](const Grant& g) { return g.principal == principal; });
}

void AccessList::add_token(FormToken token) { tokens_.push_back(std::move(token)); }

void AccessList::revoke_token(std::string_view token) {
  for (auto& existing : tokens_) {
    if (existing.token == token) existing.revoked = true;
  }
}

Decision authorize(const AccessList& access, const Actor& actor, Action action, const Target& target) {
  if (const auto* principal = std::get_if<PrincipalActor>(&actor)) {
    if (action == Action::create_base || action == Action::list_templates) return Decision::allow;
    auto role = access.role_of(principal->id);
    return role && role_allows(*role, action) ? Decision::allow : Decision::deny;
  }
  if (const auto* token = std::get_if<TokenActor>(&actor)) {
    if (action != Action::render_form && action != Action::submit_form) return Decision::deny;
    const auto* entry = access.find_token(token->token);
    if (!entry || entry->revoked || !target.form || entry->form != *target.form) return Decision::deny;
    return Decision::allow;
  }
  return Decision::deny;
}

}  // namespace farmrec
