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

#include <string>
#include <vector>

#include "farmrec/base.hpp"
#include "farmrec/serialize.hpp"

namespace farmrec {

struct Template {
  std::string id;
  std::string title;
  std::string description;
  std::string documentation;
  // Base definition with template-local ids: "tables", "forms", optional "presets".
  Json definition;
};

// The built-in templates, in stable order: field-records, hort-activity, fsma,
// marketing-delivery.
const std::vector<Template>& list_templates();

// Errors: unknown-template.
const Template& find_template(std::string_view id);

// Deep copy with fresh ids, `owner` as sole owner, no records, blank MRU state.
// "{base}" in form titles is replaced by the base name. Errors: unknown-template, empty-name.
Base instantiate(std::string_view template_id, std::string base_name, PrincipalId owner);

// Structural problems in a base (schema + form linters). Empty = clean.
std::vector<std::string> lint_base(const Base& base);

struct ContractBalance {
  RecordId contract;
  std::string name;
  double contracted = 0;
  double delivered = 0;
  double balance() const { return contracted - delivered; }
};

// Marketing preset: per contract (in created-time order), contracted minus delivered
// quantity, matching deliveries by contract name. Errors: unknown-table, unknown-field.
std::vector<ContractBalance> undelivered_balances(const Base& base);

}  // namespace farmrec
