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

#include "bfnpt/certificate.hpp"

#include <cmath>

namespace bfnpt {

nlohmann::ordered_json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

nlohmann::ordered_json to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["claim"] = c.claim;
  j["passed"] = c.passed;
  if (c.seed) j["seed"] = *c.seed;
  j["checks"] = c.checks;
  j["detail"] = c.detail;
  return j;
}

}  // namespace bfnpt
