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

#include "farmrec/demo.hpp"

namespace farmrec {

namespace {

DemoRow row(int hour, int minute, KeyedValues answers) {
  return DemoRow{*Timestamp::from_civil(2022, 12, 20, hour, minute, 0), std::move(answers)};
}

}  // namespace

const std::vector<DemoRow>& demo_rows() {
  static const std::vector<DemoRow> rows{
      row(11, 35, {{"Who", "Purdue Pete"}, {"Where", "Bed 72"}, {"What", "Tillage"}, {"Duration", "40"},
                   {"Power Unit", "Tractor 2 JD X120"}, {"Implement(s)", "bed shaper"},
                   {"Notes", "left disc needs adjustment"}}),
      row(11, 37, {{"Who", "Suzie Jones"}, {"Where", "Bed 72"}, {"What", "Plant/Transplant"},
                   {"Power Unit", "Utility tractor"}, {"Implement(s)", "water wheel transplanter"},
                   {"Seeds planted", "onions - candy"}}),
      row(11, 39, {{"Who", "Purdue Pete"}, {"Where", "Field 1"}, {"What", "Spread/Spray"}, {"Duration", "120"},
                   {"Power Unit", "Gator"}, {"Implement(s)", "150 gal sprayer"},
                   {"Fertilizers applied", "Glyphosate"}}),
      row(11, 41, {{"Who", "Suzie Jones"}, {"Where", "Field 1"}, {"What", "Plant/Transplant"},
                   {"Power Unit", "Tractor 2 JD X120"}, {"Implement(s)", "seed planter"},
                   {"Notes", "burn down looked effective"}, {"Seeds planted", "corn - sweet - 82 day"},
                   {"Seeding Rate", "30000"}, {"Fertilizers applied", "9-18-9 starter"},
                   {"Fertilizer Rate", "50"}}),
      row(11, 42, {{"Who", "Purdue Pete"}, {"Where", "Field 1"}, {"What", "Scout"},
                   {"Notes", "popcorn is near ready"}}),
      row(11, 50, {{"Who", "Suzie Jones"}, {"Where", "Bed 72"}, {"What", "Harvest"}, {"Duration", "30"},
                   {"Power Unit", "human powered"}, {"Notes", "bundles of rhubarb"}}),
      row(12, 30, {{"Who", "Purdue Pete"}, {"Where", "Zone D"}, {"What", "Scout"}, {"Notes", "all looks great"}}),
  };
  return rows;
}

std::vector<RecordId> run_demo(Service& service, ManualClock& clock, const Actor& owner, std::string_view base) {
  auto document = service.get_base(owner, base);
  const auto& forms = document.at("forms");
  if (forms.empty()) throw Error(ErrorCode::unknown_form, "base has no form to submit the sample rows through");
  FormId form(forms.front().at("id").get<std::string>());
  Actor token = TokenActor{service.mint_form_token(owner, form).token};

  std::vector<RecordId> ids;
  for (const auto& sample : demo_rows()) {
    clock.set(sample.at);
    auto view = service.render_form(token, form, sample.answers);
    std::vector<NewOptionRequest> additions;
    for (const auto& [name, raw] : sample.answers) {
      if (raw.is_list()) continue;
      for (const auto& entry : view.entries) {
        if (entry.name != name || !is_select(entry.kind)) continue;
        bool known = false;
        for (const auto& label : entry.option_labels) known = known || iequals(label, raw.text());
        if (!known) additions.push_back(NewOptionRequest{name, raw.text()});
      }
    }
    ids.push_back(service.submit(token, form, sample.answers, additions).record.id);
  }
  return ids;
}

}  // namespace farmrec
