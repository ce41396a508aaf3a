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

#include "farmrec/templates.hpp"

#include <map>

#include "template_documents.hpp"

namespace farmrec {

namespace {

std::vector<Template> load_templates() {
  std::vector<Template> templates;
  for (auto document : embedded::kTemplateDocuments) {
    auto json = Json::parse(document);
    Template t;
    t.id = json.at("id").get<std::string>();
    t.title = json.at("title").get<std::string>();
    t.description = json.value("description", std::string());
    t.documentation = json.value("documentation", std::string());
    t.definition = Json{{"tables", json.at("tables")},
                        {"forms", json.at("forms")},
                        {"presets", json.value("presets", Json::array())}};
    templates.push_back(std::move(t));
  }
  return templates;
}

void replace_all(std::string& text, std::string_view from, std::string_view to) {
  for (auto pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

template <class IdType>
IdType remap(std::map<std::string, std::string>& ids, const std::string& local, std::string_view prefix) {
  auto [it, inserted] = ids.try_emplace(local);
  if (inserted) it->second = fresh_id<IdType>(prefix).str();
  return IdType(it->second);
}

}  // namespace

const std::vector<Template>& list_templates() {
  static const std::vector<Template> templates = load_templates();
  return templates;
}

const Template& find_template(std::string_view id) {
  for (const auto& t : list_templates()) {
    if (t.id == id) return t;
  }
  throw Error(ErrorCode::unknown_template, "no template '" + std::string(id) + "'");
}

Base instantiate(std::string_view template_id, std::string base_name, PrincipalId owner) {
  const auto& tmpl = find_template(template_id);
  Base base = create_base(std::move(base_name), std::move(owner));
  base.template_id = tmpl.id;

  std::map<std::string, std::string> table_ids, field_ids, option_ids;
  for (const auto& table_json : tmpl.definition.at("tables")) {
    auto local = table_from_json(table_json);
    auto local_table = local.id.str();
    std::vector<FieldSpec> fields;
    for (auto field : local.fields) {
      field.id = remap<FieldId>(field_ids, local_table + "/" + field.id.str(), "fld");
      if (field.options) {
        std::vector<Option> options;
        for (auto option : field.options->entries()) {
          option.id = remap<OptionId>(option_ids, option.id.str(), "opt");
          option.last_used_at.reset();
          option.use_seq = 0;
          options.push_back(std::move(option));
        }
        field.options = OptionList(std::move(options));
      }
      fields.push_back(std::move(field));
    }
    TableSpec spec;
    spec.id = remap<TableId>(table_ids, local_table, "tbl");
    spec.name = local.name;
    for (auto& field : fields) spec = add_field(std::move(spec), std::move(field));
    base.tables.emplace_back(std::move(spec));
  }

  for (const auto& form_json : tmpl.definition.at("forms")) {
    auto form = form_from_json(form_json);
    auto local_table = form.table.str();
    form.id = fresh_id<FormId>("frm");
    form.table = remap<TableId>(table_ids, local_table, "tbl");
    replace_all(form.title, "{base}", base.name);
    for (auto& entry : form.entries) {
      entry.field = remap<FieldId>(field_ids, local_table + "/" + entry.field.str(), "fld");
      if (entry.visibility.kind != VisibilityRule::Kind::always) {
        entry.visibility.controller =
            remap<FieldId>(field_ids, local_table + "/" + entry.visibility.controller.str(), "fld");
        for (auto& option : entry.visibility.options) {
          option = remap<OptionId>(option_ids, option.str(), "opt");
        }
      }
    }
    base.forms.push_back(std::move(form));
  }
  return base;
}

std::vector<std::string> lint_base(const Base& base) {
  std::vector<std::string> problems;
  for (const auto& table : base.tables) {
    for (auto& problem : table.audit()) problems.push_back(table.spec().name + ": " + problem);
  }
  for (const auto& form : base.forms) {
    const auto* table = base.find_table(form.table);
    if (!table) {
      problems.push_back(form.title + ": unknown table");
      continue;
    }
    for (const auto& issue : lint_form(form, table->spec())) problems.push_back(form.title + ": " + issue.message);
  }
  bool has_owner = false;
  for (const auto& grant : base.access.grants()) has_owner = has_owner || grant.role == Role::owner;
  if (!has_owner) problems.push_back("base has no owner");
  return problems;
}

std::vector<ContractBalance> undelivered_balances(const Base& base) {
  const auto& contracts = base.resolve_table("Contracts");
  const auto& deliveries = base.resolve_table("Deliveries");
  auto field = [](const TableData& table, std::string_view name) -> const FieldSpec& {
    const auto* spec = table.spec().resolve(name);
    if (!spec) {
      throw Error(ErrorCode::unknown_field,
                  "table '" + table.spec().name + "' has no field '" + std::string(name) + "'");
    }
    return *spec;
  };
  const auto& contract_name = field(contracts, "Contract");
  const auto& contract_qty = field(contracts, "Quantity");
  const auto& delivery_contract = field(deliveries, "Contract");
  const auto& delivery_qty = field(deliveries, "Quantity");

  auto quantity = [](const CellValue& value) {
    if (const auto* r = std::get_if<double>(&value)) return *r;
    if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
    return 0.0;
  };

  std::vector<ContractBalance> balances;
  for (const auto* record : contracts.query({})) {
    ContractBalance balance;
    balance.contract = record->id;
    balance.name = render_cell(contract_name, record->cell(contract_name.id));
    balance.contracted = quantity(record->cell(contract_qty.id));
    for (const auto* delivery : deliveries.query({})) {
      auto label = render_cell(delivery_contract, delivery->cell(delivery_contract.id));
      if (!balance.name.empty() && iequals(label, balance.name)) {
        balance.delivered += quantity(delivery->cell(delivery_qty.id));
      }
    }
    balances.push_back(std::move(balance));
  }
  return balances;
}

}  // namespace farmrec
