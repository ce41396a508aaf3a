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
#include <string>
#include <variant>
#include <vector>

#include "farmrec/ids.hpp"

namespace farmrec {

// Declared in power order; a higher role can do everything a lower one can.
enum class Role { readonly, commenter, editor, owner };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

enum class Action {
  read_grid,
  comment,
  create_record,
  edit_record,
  delete_record,
  edit_schema,
  edit_form,
  manage_grants,
  export_csv,
  render_form,
  submit_form,
  manage_tokens,
  // Not scoped to a base.
  create_base,
  list_templates,
};

inline constexpr Action kAllActions[] = {
    Action::read_grid,     Action::comment,       Action::create_record, Action::edit_record,
    Action::delete_record, Action::edit_schema,   Action::edit_form,     Action::manage_grants,
    Action::export_csv,    Action::render_form,   Action::submit_form,   Action::manage_tokens,
    Action::create_base,   Action::list_templates,
};
inline constexpr Role kAllRoles[] = {Role::readonly, Role::commenter, Role::editor, Role::owner};

std::string_view to_string(Action action);

// The role matrix: readonly reads and exports, commenter adds comments, editor works with
// records and forms, owner changes schema, forms and sharing.
bool role_allows(Role role, Action action);

struct Grant {
  PrincipalId principal;
  Role role = Role::readonly;

  friend bool operator==(const Grant&, const Grant&) = default;
};

struct FormToken {
  std::string token;
  FormId form;
  bool revoked = false;

  friend bool operator==(const FormToken&, const FormToken&) = default;
};

// Fresh form token with 192 bits of entropy.
std::string mint_token_value();

struct PrincipalActor {
  PrincipalId id;
};
struct TokenActor {
  std::string token;
};
struct Anonymous {};

using Actor = std::variant<Anonymous, PrincipalActor, TokenActor>;

struct Target {
  std::optional<FormId> form;  // set for render-form / submit-form
};

enum class Decision { allow, deny };

// Grants and form tokens of one base.
class AccessList {
 public:
  AccessList() = default;
  AccessList(std::vector<Grant> grants, std::vector<FormToken> tokens)
      : grants_(std::move(grants)), tokens_(std::move(tokens)) {}

  static AccessList with_owner(PrincipalId owner);

  const std::vector<Grant>& grants() const noexcept { return grants_; }
  const std::vector<FormToken>& tokens() const noexcept { return tokens_; }

  std::optional<Role> role_of(const PrincipalId& principal) const;
  const FormToken* find_token(std::string_view token) const;

  // Caller must be an owner. Errors: not-owner, last-owner-removal.
  void set_grant(const PrincipalId& caller, const PrincipalId& principal, Role role);
  void revoke_grant(const PrincipalId& caller, const PrincipalId& principal);

  // Unchecked mutations used when replaying committed events.
  void put_grant(Grant grant);
  void erase_grant(const PrincipalId& principal);
  void add_token(FormToken token);
  void revoke_token(std::string_view token);

  friend bool operator==(const AccessList&, const AccessList&) = default;

 private:
  std::vector<Grant> grants_;
  std::vector<FormToken> tokens_;
};

// Pure decision; deny is a value. Base-less actions are allowed for any principal.
Decision authorize(const AccessList& access, const Actor& actor, Action action, const Target& target);

}  // namespace farmrec
