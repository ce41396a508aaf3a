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

#include "farmrec/service.hpp"

namespace farmrec {

// One sample activity, keyed by column name, with the time it was logged.
struct DemoRow {
  Timestamp at;
  KeyedValues answers;
};

// The seven sample activities of the horticultural template, in the order
// they were logged.
const std::vector<DemoRow>& demo_rows();

// Submits the sample rows through a freshly minted form token for the base's
// activity form, setting the clock to each row's time first. Options that do
// not exist yet are added the way a field worker would, via + Add.
// Returns the created record ids.
std::vector<RecordId> run_demo(Service& service, ManualClock& clock, const Actor& owner, std::string_view base);

}  // namespace farmrec
