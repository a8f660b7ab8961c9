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

#include "bfnpt/np_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>

#include <gmpxx.h>

#include "bfnpt/errors.hpp"
#include "bfnpt/evidence.hpp"
#include "bfnpt/random_models.hpp"

namespace bfnpt {

namespace {

// Budget slack for double sums: absorbs last-bit differences between
// summation orders without admitting materially larger regions.
constexpr double kBudgetSlack = 1e-14;

template <typename Scalar>
Scalar to_scalar(double x) {
  return Scalar(x);
}

// Per-outcome rejection masses: row 0 of power is the alternative's
// prior-averaged mass; error holds one row (expected criterion) or one row
// per null support point (maximum criterion).
template <typename Scalar>
struct Masses {
  std::vector<Scalar> power;
  std::vector<std::vector<Scalar>> error;
};

template <typename Scalar>
std::vector<Scalar> averaged_mass(const Hypothesis& h) {
  const auto& table = h.likelihood();
  const auto& space = table.sample_space();
  std::vector<Scalar> out(table.num_outcomes(), Scalar(0));
  for (std::size_t i = 0; i < table.num_outcomes(); ++i) {
    for (std::size_t j : h.support()) {
      out[i] += to_scalar<Scalar>(h.prior()[j]) * to_scalar<Scalar>(space.weight(i)) *
                to_scalar<Scalar>(table(i, j));
    }
  }
  return out;
}

template <typename Scalar>
Masses<Scalar> build_masses(const Hypothesis& h0, const Hypothesis& h1, ErrorCriterion criterion) {
  Masses<Scalar> m;
  m.power = averaged_mass<Scalar>(h1);
  if (criterion == ErrorCriterion::kExpected) {
    m.error.push_back(averaged_mass<Scalar>(h0));
  } else {
    const auto& table = h0.likelihood();
    for (std::size_t j : h0.support()) {
      std::vector<Scalar> row;
      for (std::size_t i = 0; i < table.num_outcomes(); ++i) {
        row.push_back(to_scalar<Scalar>(table.sample_space().weight(i)) * to_scalar<Scalar>(table(i, j)));
      }
      m.error.push_back(std::move(row));
    }
  }
  return m;
}

// Subset sums over `bits` consecutive outcomes starting at `offset`.
template <typename Scalar>
std::vector<Scalar> subset_sums(const std::vector<Scalar>& values, std::size_t offset, std::size_t bits) {
  std::vector<Scalar> sums(std::size_t{1} << bits, Scalar(0));
  for (std::size_t m = 1; m < sums.size(); ++m) {
    sums[m] = sums[m & (m - 1)] + values[offset + static_cast<std::size_t>(std::countr_zero(m))];
  }
  return sums;
}

template <typename Scalar>
struct Best {
  bool found = false;
  std::uint64_t mask = 0;
  Scalar power = Scalar(0);
  Scalar error = Scalar(0);
};

template <typename Scalar>
bool within_budget(const Scalar& error, const Scalar& budget) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return error <= budget + kBudgetSlack * std::max(budget, 1.0);
  } else {
    return error <= budget;
  }
}

template <typename Scalar>
Best<Scalar> search(const Masses<Scalar>& m, std::size_t n, const Scalar& budget, unsigned workers) {
  const std::size_t low_bits = n / 2;
  const std::size_t high_bits = n - low_bits;
  const auto power_low = subset_sums(m.power, 0, low_bits);
  const auto power_high = subset_sums(m.power, low_bits, high_bits);
  std::vector<std::vector<Scalar>> error_low, error_high;
  for (const auto& row : m.error) {
    error_low.push_back(subset_sums(row, 0, low_bits));
    error_high.push_back(subset_sums(row, low_bits, high_bits));
  }

  const std::uint64_t high_count = std::uint64_t{1} << high_bits;
  const std::uint64_t low_count = std::uint64_t{1} << low_bits;
  const std::uint64_t chunks = std::min<std::uint64_t>(std::max(1u, workers), high_count);
  std::vector<Best<Scalar>> partial(chunks);

  auto scan = [&](std::uint64_t chunk) {
    const std::uint64_t begin = high_count * chunk / chunks;
    const std::uint64_t end = high_count * (chunk + 1) / chunks;
    Best<Scalar>& best = partial[chunk];
    Scalar power(0), error(0), row_error(0);
    for (std::uint64_t hi = begin; hi < end; ++hi) {
      for (std::uint64_t lo = 0; lo < low_count; ++lo) {
        error = error_low[0][lo] + error_high[0][hi];
        for (std::size_t r = 1; r < error_low.size(); ++r) {
          row_error = error_low[r][lo] + error_high[r][hi];
          if (row_error > error) error = row_error;
        }
        if (!within_budget(error, budget)) continue;
        power = power_low[lo] + power_high[hi];
        if (!best.found || power > best.power) {
          best.found = true;
          best.mask = (hi << low_bits) | lo;
          best.power = power;
          best.error = error;
        }
      }
    }
  };

  if (chunks == 1) {
    scan(0);
  } else {
    std::vector<std::thread> threads;
    for (std::uint64_t c = 0; c < chunks; ++c) threads.emplace_back(scan, c);
    for (auto& t : threads) t.join();
  }

  // Chunks cover ascending mask ranges, so a strict comparison in chunk order
  // keeps the lowest mask among equal powers.
  Best<Scalar> best;
  for (auto& b : partial) {
    if (b.found && (!best.found || b.power > best.power)) best = std::move(b);
  }
  return best;
}

double to_double(double x) { return x; }
double to_double(const mpq_class& x) { return x.get_d(); }

// Criterion error of a deterministic region, summed in Scalar arithmetic.
template <typename Scalar>
Scalar region_error(const Masses<Scalar>& m, const RejectionRegion& region) {
  Scalar worst(0);
  for (const auto& row : m.error) {
    Scalar s(0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (region[i] > 0.0) s += row[i];
    }
    if (s > worst) worst = s;
  }
  return worst;
}

// Budget is either a caller value or, when `at_region` is set, the exact
// error of that region in the search arithmetic.
template <typename Scalar>
SearchResult run_search(const Hypothesis& h0, const Hypothesis& h1, double budget, ErrorCriterion criterion,
                        unsigned workers, const RejectionRegion* at_region = nullptr) {
  const std::size_t n = h0.sample_space().size();
  const auto masses = build_masses<Scalar>(h0, h1, criterion);
  const Scalar limit = at_region ? region_error(masses, *at_region) : to_scalar<Scalar>(budget);
  auto best = search(masses, n, limit, workers);
  SearchResult out;
  out.mask = best.mask;
  out.power = to_double(best.power);
  out.error = to_double(best.error);
  out.regions_searched = std::uint64_t{1} << n;
  out.exact = std::is_same_v<Scalar, mpq_class>;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < n; ++i) {
    if ((best.mask >> i) & 1u) members.push_back(i);
  }
  out.region = RejectionRegion::from_outcomes(n, members);
  return out;
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

SearchResult checked_search(const Hypothesis& h0, const Hypothesis& h1, double size_budget, ErrorCriterion criterion,
                            const OracleOptions& options, const RejectionRegion* at_region) {
  if (!same_sample_space(h0, h1)) throw PreconditionError("hypotheses have different sample spaces");
  if (h0.sample_space().size() > kMaxOracleOutcomes) {
    throw PreconditionError("sample space too large for exhaustive search (" +
                            std::to_string(h0.sample_space().size()) + " outcomes)");
  }
  if (!(size_budget >= 0.0)) throw PreconditionError("size budget must be nonnegative");
  const unsigned workers = resolve_workers(options.workers);
  if (options.arithmetic == Arithmetic::kRational) {
    return run_search<mpq_class>(h0, h1, size_budget, criterion, workers, at_region);
  }
  return run_search<double>(h0, h1, size_budget, criterion, workers, at_region);
}

}  // namespace

SearchResult exhaustive_search(const Hypothesis& h0, const Hypothesis& h1, double size_budget,
                               ErrorCriterion criterion, const OracleOptions& options) {
  return checked_search(h0, h1, size_budget, criterion, options, nullptr);
}

RandomizedSolution randomized_np_solution(const Hypothesis& h0, const Hypothesis& h1, double size_budget) {
  if (!same_sample_space(h0, h1)) throw PreconditionError("hypotheses have different sample spaces");
  if (!(size_budget >= 0.0)) throw PreconditionError("size budget must be nonnegative");
  const auto m0 = averaged_mass<double>(h0);
  const auto m1 = averaged_mass<double>(h1);
  const std::size_t n = m0.size();

  // Only outcomes carrying alternative mass can add power.
  std::vector<std::size_t> order;
  std::vector<double> ratio(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (m1[i] > 0.0) {
      ratio[i] = m0[i] > 0.0 ? m1[i] / m0[i] : std::numeric_limits<double>::infinity();
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ratio[a] > ratio[b]; });

  RandomizedSolution out{RejectionRegion::reject_none(n), 0.0, 0.0};
  out.region.mode = RegionMode::kRandomizedExact;
  double remaining = size_budget;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    double class_size = 0.0;
    while (end < order.size() && ratio[order[end]] == ratio[order[k]]) class_size += m0[order[end++]];
    const double fraction = class_size <= remaining ? 1.0 : remaining / class_size;
    if (fraction <= 0.0) break;
    for (std::size_t q = k; q < end; ++q) {
      out.region.reject_probability[order[q]] = fraction;
      out.power += fraction * m1[order[q]];
      out.size += fraction * m0[order[q]];
    }
    out.region.threshold = std::log(ratio[order[k]]);
    if (fraction < 1.0) break;
    remaining -= class_size;
    k = end;
  }
  return out;
}

OracleResult verify_region_optimality(const RejectionRegion& region, const Hypothesis& h0, const Hypothesis& h1,
                                      ErrorCriterion criterion, RegionMode mode, const OracleOptions& options) {
  if (!same_sample_space(h0, h1)) throw PreconditionError("hypotheses have different sample spaces");
  OracleResult out;
  out.criterion = criterion;
  out.mode = mode;
  out.region_power = region_probability(region, h1).total;
  out.region_error = criterion_error(region, h0, criterion);

  if (mode == RegionMode::kDeterministicConservative) {
    const bool exact = options.arithmetic == Arithmetic::kRational;
    auto best = checked_search(h0, h1, out.region_error, criterion, options, exact ? &region : nullptr);
    out.best_power = best.power;
    out.regions_searched = best.regions_searched;
    if (best.power > out.region_power + out.tolerance) {
      out.verdict = Verdict::kDominated;
      out.witness = std::move(best.region);
    }
    return out;
  }

  // Any region with maximum error <= a has size <= a at the worst-case
  // point, so the sharp-null optimum bounds the maximum-criterion power.
  const Hypothesis reference =
      criterion == ErrorCriterion::kExpected
          ? h0
          : h0.with_prior(Prior::point_mass(h0.prior().size(), max_type1(region, h0).theta_hat));
  auto solution = randomized_np_solution(reference, h1, out.region_error);
  out.best_power = solution.power;
  out.regions_searched = 1;
  if (solution.power > out.region_power + out.tolerance) {
    out.verdict = Verdict::kDominated;
    out.witness = std::move(solution.region);
  }
  return out;
}

OracleResult verify_np_optimality(const Hypothesis& h0, const Hypothesis& h1, double size_budget,
                                  ErrorCriterion criterion, RegionMode mode, const OracleOptions& options) {
  const RejectionRegion region =
      criterion == ErrorCriterion::kExpected
          ? calibrate_threshold(bayes_factor(h1, h0), h0, size_budget, criterion, mode).region
          : calibrate_sharp_null(h1, h0, size_budget, mode).calibration.region;
  return verify_region_optimality(region, h0, h1, criterion, mode, options);
}

nlohmann::ordered_json to_json(const OracleResult& r) {
  nlohmann::ordered_json j;
  j["verdict"] = r.verdict == Verdict::kOptimal ? "optimal" : "dominated";
  j["criterion"] = r.criterion == ErrorCriterion::kExpected ? "expected" : "maximum";
  j["mode"] = r.mode == RegionMode::kRandomizedExact ? "randomized" : "conservative";
  j["region_power"] = json_number(r.region_power);
  j["region_error"] = json_number(r.region_error);
  j["best_power"] = json_number(r.best_power);
  j["regions_searched"] = r.regions_searched;
  j["tolerance"] = r.tolerance;
  if (r.witness) j["witness"] = r.witness->reject_probability;
  return j;
}

Certificate search_adversarial_witness(std::uint64_t seed, std::size_t max_models, double size_budget) {
  Certificate cert;
  cert.claim = "wrong-statistic region is dominated";
  cert.seed = seed;
  RandomModelShape shape;
  shape.min_outcomes = 4;
  shape.max_outcomes = 8;
  shape.max_null_points = 1;
  shape.max_alternative_points = 3;
  shape.zero_entry_probability = 0.0;
  for (std::size_t m = 0; m < max_models; ++m) {
    const std::uint64_t model_seed = mix64(seed + m);
    const auto model = random_discrete_model(model_seed, shape);
    const auto& alt = model.alternative;
    ++cert.checks;
    if (alt.support().size() < 2) continue;
    const std::size_t n_params = alt.prior().size();
    const Hypothesis target = alt.with_prior(Prior::point_mass(n_params, alt.support()[0]));
    const Hypothesis wrong = alt.with_prior(Prior::point_mass(n_params, alt.support()[1]));
    const auto region = calibrate_threshold(bayes_factor(wrong, model.null), model.null, size_budget,
                                            ErrorCriterion::kExpected, RegionMode::kDeterministicConservative)
                            .region;
    const auto result = verify_region_optimality(region, model.null, target, ErrorCriterion::kExpected,
                                                 RegionMode::kDeterministicConservative);
    if (result.verdict == Verdict::kDominated) {
      cert.passed = true;
      cert.detail["model_seed"] = model_seed;
      cert.detail["models_scanned"] = m + 1;
      cert.detail["outcomes"] = model.table->num_outcomes();
      cert.detail["size_budget"] = size_budget;
      cert.detail["oracle"] = to_json(result);
      return cert;
    }
  }
  cert.detail["models_scanned"] = max_models;
  return cert;
}

}  // namespace bfnpt
