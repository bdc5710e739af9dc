#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factorlab/invariants.hpp"

namespace factorlab {

// A parameterized element a(n): the n-th power of a fixed base element, or
// the diagonal vector (n, ..., n) of a vector model.
struct GrowthFamily {
  enum class Kind { power, diagonal };
  Kind kind = Kind::power;
  Element base;
};

inline Element family_member(Model const& m, GrowthFamily const& f, std::int64_t n) {
  if (f.kind == GrowthFamily::Kind::power) {
    return m.power(m.canonical(f.base), n);
  }
  auto const* vm = dynamic_cast<VectorModel const*>(&m);
  if (!vm) {
    throw Error("the diagonal family needs a numerical, affine or fp-value model");
  }
  return vm->wrap(Vec(vm->dim(), n));
}

inline constexpr std::array<char const*, 6> growth_columns{
    "catenary",          "equal_catenary",      "adjacent_catenary",
    "monotone_catenary", "successive_distance", "weak_successive_distance"};

struct GrowthRow {
  std::int64_t n = 0;
  Element element;
  enum class Status { ok, not_a_member, overflow } status = Status::ok;
  std::array<std::uint32_t, 6> values{};
  std::size_t factorization_count = 0;
};

struct GrowthReport {
  std::int64_t n_max = 0;
  std::vector<GrowthRow> rows;
  // Per column: the running maximum at n_max already equals the running
  // maximum at ceil(n_max / 2).
  std::array<bool, 6> stabilized{};
  std::array<std::uint32_t, 6> maxima{};
  std::size_t overflows = 0;
};

inline GrowthReport probe_growth(Model const& m, GrowthFamily const& f,
                                 std::int64_t n_max, RunOptions const& opt = {}) {
  if (n_max < 1) {
    throw Error("n-max must be at least 1");
  }
  GrowthReport r;
  r.n_max = n_max;
  auto elems = std::vector<Element>{};
  for (std::int64_t n = 1; n <= n_max; ++n) {
    elems.push_back(family_member(m, f, n));
  }
  r.rows = parallel_map(elems.size(), opt.jobs, [&](std::size_t i) {
    GrowthRow row;
    row.n = static_cast<std::int64_t>(i) + 1;
    row.element = elems[i];
    if (!m.contains(elems[i])) {
      row.status = GrowthRow::Status::not_a_member;
      return row;
    }
    try {
      auto rep = invariant_report(factorizations(m, elems[i], {opt.budget}));
      row.factorization_count = rep.factorization_count;
      row.values = {rep.catenary,          rep.equal_catenary,
                    rep.adjacent_catenary, rep.monotone_catenary,
                    rep.successive_distance, rep.weak_successive_distance};
    } catch (BudgetExceeded const&) {
      row.status = GrowthRow::Status::overflow;
    }
    return row;
  });
  std::array<std::uint32_t, 6> half{};
  auto half_n = (n_max + 1) / 2;
  for (auto const& row : r.rows) {
    if (row.status == GrowthRow::Status::overflow) {
      ++r.overflows;
    }
    if (row.status != GrowthRow::Status::ok) {
      continue;
    }
    for (std::size_t c = 0; c < 6; ++c) {
      r.maxima[c] = std::max(r.maxima[c], row.values[c]);
      if (row.n <= half_n) {
        half[c] = std::max(half[c], row.values[c]);
      }
    }
  }
  for (std::size_t c = 0; c < 6; ++c) {
    r.stabilized[c] = half[c] == r.maxima[c];
  }
  return r;
}

}  // namespace factorlab
