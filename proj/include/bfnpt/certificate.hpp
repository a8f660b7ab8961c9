// Copyright 2026 The bfnpt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace bfnpt {

// Serialized pass/fail record of one claim check.
struct Certificate {
  std::string claim;
  bool passed = false;
  std::optional<std::uint64_t> seed;
  std::size_t checks = 0;
  // Claim-specific payload: parameters, counterexamples, per-case verdicts.
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const Certificate& c);

// JSON has no infinities; non-finite values become "inf", "-inf" or "nan".
nlohmann::ordered_json json_number(double x);

}  // namespace bfnpt
