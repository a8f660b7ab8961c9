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

#include "cli/model_file.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "bfnpt/errors.hpp"
#include "bfnpt/families.hpp"
#include "cli/config.hpp"

namespace bfnpt::cli {

namespace {

using nlohmann::json;

void allow_keys(const json& obj, const std::set<std::string>& keys, const std::string& where) {
  if (!obj.is_object()) throw ModelFileError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!keys.contains(key)) throw ModelFileError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ModelFileError(where + " is missing '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ModelFileError("'" + key + "' in " + where + " has the wrong type");
  }
}

template <typename T>
T field_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
  return obj.contains(key) ? field<T>(obj, key, where) : fallback;
}

LikelihoodTable parse_likelihood(const json& j) {
  const auto family = field<std::string>(j, "family", "likelihood");
  if (family == "binomial") {
    allow_keys(j, {"family", "n", "p_grid"}, "binomial likelihood");
    return binomial_table(field<int>(j, "n", "likelihood"), field<std::vector<double>>(j, "p_grid", "likelihood"));
  }
  if (family == "poisson") {
    allow_keys(j, {"family", "rate_grid", "truncation", "tail_mass_bound"}, "poisson likelihood");
    return poisson_table(field<std::vector<double>>(j, "rate_grid", "likelihood"),
                         field<int>(j, "truncation", "likelihood"),
                         field<double>(j, "tail_mass_bound", "likelihood"));
  }
  if (family == "gaussian-location") {
    allow_keys(j, {"family", "mu_grid", "sigma", "nodes", "quadrature_tolerance"}, "gaussian likelihood");
    QuadratureNodes nodes;
    const json& n = j.at("nodes");
    allow_keys(n, {"lo", "hi", "count"}, "quadrature nodes");
    nodes.lo = field<double>(n, "lo", "nodes");
    nodes.hi = field<double>(n, "hi", "nodes");
    nodes.count = field<int>(n, "count", "nodes");
    return gaussian_location_table(field<std::vector<double>>(j, "mu_grid", "likelihood"),
                                   field<double>(j, "sigma", "likelihood"), nodes,
                                   field_or<double>(j, "quadrature_tolerance", kDefaultQuadratureTolerance,
                                                    "likelihood"));
  }
  if (family == "matrix") {
    allow_keys(j, {"family", "outcomes", "parameters", "columns", "weights", "quadrature_tolerance"},
               "matrix likelihood");
    auto outcomes = field<std::vector<std::string>>(j, "outcomes", "likelihood");
    const json& params = j.at("parameters");
    std::vector<std::vector<double>> points;
    for (const auto& p : params) {
      points.push_back(p.is_array() ? p.get<std::vector<double>>() : std::vector<double>{p.get<double>()});
    }
    auto columns = field<std::vector<std::vector<double>>>(j, "columns", "likelihood");
    SampleSpace space = j.contains("weights")
                            ? SampleSpace(std::move(outcomes), field<std::vector<double>>(j, "weights", "likelihood"))
                            : SampleSpace(std::move(outcomes));
    return LikelihoodTable(std::move(space), ParameterSpace(std::move(points)), columns,
                           field_or<double>(j, "quadrature_tolerance", kDefaultQuadratureTolerance, "likelihood"));
  }
  throw ModelFileError("unknown likelihood family '" + family + "'");
}

std::vector<std::size_t> parse_support(const json& s, const LikelihoodTable& table, const std::string& where) {
  std::vector<std::size_t> support;
  const std::size_t n = table.num_parameters();
  if (s.is_string() && s.get<std::string>() == "all") {
    for (std::size_t j = 0; j < n; ++j) support.push_back(j);
  } else if (s.is_array()) {
    support = s.get<std::vector<std::size_t>>();
  } else if (s.is_object()) {
    allow_keys(s, {"at_most", "above"}, where + " support");
    const auto& grid = table.parameter_space();
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.coordinate(j);
      const bool keep = s.contains("at_most") ? x <= s["at_most"].get<double>() : x > s["above"].get<double>();
      if (keep) support.push_back(j);
    }
  } else {
    throw ModelFileError(where + " support must be \"all\", an index list, or an at_most/above selector");
  }
  if (support.empty()) throw ModelFileError(where + " support is empty");
  return support;
}

Hypothesis parse_hypothesis(const json& j, HypothesisLabel label, const std::shared_ptr<const LikelihoodTable>& table,
                            const std::string& where) {
  allow_keys(j, {"support", "prior", "atom"}, where);
  auto support = parse_support(j.at("support"), *table, where);
  std::sort(support.begin(), support.end());
  const std::size_t n = table->num_parameters();
  const json prior = j.contains("prior") ? j["prior"] : json("uniform");
  if (prior.is_string() && prior.get<std::string>() == "uniform") {
    return Hypothesis(label, table, Prior::uniform(n, support), support);
  }
  if (prior.is_string() && prior.get<std::string>() == "point") {
    std::size_t atom = support.front();
    if (j.contains("atom")) {
      atom = field<std::size_t>(j, "atom", where);
    } else if (support.size() != 1) {
      throw ModelFileError(where + " point prior needs an 'atom' when the support has several points");
    }
    return Hypothesis(label, table, Prior::point_mass(n, atom), support);
  }
  if (prior.is_array()) {
    const auto w = prior.get<std::vector<double>>();
    if (w.size() != support.size()) throw ModelFileError(where + " prior weights must match the support size");
    std::vector<double> full(n, 0.0);
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (support[k] >= n) throw ModelFileError(where + " support index out of range");
      full[support[k]] = w[k];
    }
    return Hypothesis(label, table, Prior(std::move(full)), support);
  }
  throw ModelFileError(where + " prior must be \"uniform\", \"point\", or a weight list");
}

}  // namespace

ModelSpec parse_model(const nlohmann::json& doc) {
  try {
    allow_keys(doc, {"description", "likelihood", "null", "alternative", "statistic", "theta_hat"}, "model");
    auto table = std::make_shared<const LikelihoodTable>(parse_likelihood(doc.at("likelihood")));
    const auto validation = validate_model(*table);
    if (!validation.ok()) throw ModelFileError("likelihood failed validation: " + validation.violations.front().message);
    Hypothesis null = parse_hypothesis(doc.at("null"), HypothesisLabel::kNull, table, "null");
    Hypothesis alt = parse_hypothesis(doc.at("alternative"), HypothesisLabel::kAlternative, table, "alternative");
    if (doc.contains("statistic") && !doc["statistic"].is_array() && doc["statistic"] != "labels") {
      throw ModelFileError("statistic must be \"labels\" or a list of values");
    }
    Statistic statistic = doc.contains("statistic") && doc["statistic"].is_array()
                              ? Statistic(doc["statistic"].get<std::vector<double>>())
                              : Statistic::from_labels(table->sample_space());
    if (statistic.size() != table->num_outcomes()) throw ModelFileError("statistic length does not match outcomes");
    std::optional<std::size_t> theta_hat;
    if (doc.contains("theta_hat")) {
      theta_hat = field<std::size_t>(doc, "theta_hat", "model");
      if (!null.in_support(*theta_hat)) throw ModelFileError("theta_hat is outside the null support");
    }
    return {table, std::move(null), std::move(alt), std::move(statistic), theta_hat};
  } catch (const ModelFileError&) {
    throw;
  } catch (const std::exception& e) {
    // Library invariant violations and JSON type errors are schema problems.
    throw ModelFileError(e.what());
  }
}

ModelSpec load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read model file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFileError("model file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_model(doc);
}

}  // namespace bfnpt::cli
