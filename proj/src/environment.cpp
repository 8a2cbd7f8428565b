// Copyright 2026 The rwrl-suite Authors
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

#include "rwrl/environment.hpp"

#include <algorithm>

#include "rwrl/errors.hpp"

namespace rwrl {

void BoundedSpec::append(std::string name, double lo, double hi) {
  names.push_back(std::move(name));
  minimum.push_back(lo);
  maximum.push_back(hi);
}

void BoundedSpec::validate() const {
  if (minimum.size() != names.size() || maximum.size() != names.size()) {
    throw ConfigError("bounded spec: bounds and names differ in length");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!(minimum[i] <= maximum[i])) {
      throw ConfigError("bounded spec: minimum > maximum for component '" + names[i] + "'");
    }
  }
}

std::vector<double> BoundedSpec::clip(std::span<const double> values) const {
  if (values.size() != shape()) {
    throw ContractError("value has " + std::to_string(values.size()) + " components, spec expects " +
                        std::to_string(shape()));
  }
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], minimum[i], maximum[i]);
  return out;
}

bool is_exempt_from_sensor_noise(std::string_view component_name) {
  return component_name.starts_with(kConstraintPrefix) || component_name.starts_with(kObjectivePrefix);
}

double Environment::parameter(std::string_view name) const {
  throw ConfigError("environment '" + this->name() + "' has no parameter '" + std::string(name) + "'");
}

void Environment::set_parameter(std::string_view name, double) {
  throw ConfigError("environment '" + this->name() + "' has no parameter '" + std::string(name) + "'");
}

std::vector<Constraint> Environment::constraint_catalogue(double) const { return {}; }

const StateTransition& Environment::last_transition() const {
  static const StateTransition kEmpty;
  return kEmpty;
}

Wrapper::Wrapper(EnvPtr inner) : inner_(std::move(inner)) {
  if (!inner_) throw ContractError("wrapper constructed around a null environment");
}

}  // namespace rwrl
