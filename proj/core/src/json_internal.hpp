// Copyright 2026 Priokin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Internal bridge between the trace emitters and the JSON translation
// unit. Not installed.

#ifndef PRIOKIN_SRC_JSON_INTERNAL_HPP_
#define PRIOKIN_SRC_JSON_INTERNAL_HPP_

#include <iosfwd>
#include <vector>

#include "priokin/scenario.hpp"

namespace priokin {

void emit_trace_json(const std::vector<TraceRow>& rows, std::ostream& out);

}  // namespace priokin

#endif  // PRIOKIN_SRC_JSON_INTERNAL_HPP_
