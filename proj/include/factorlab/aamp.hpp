#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "factorlab/invariants.hpp"

namespace factorlab {

// L = y + (L' u L* u L'') with L* = (D + dZ) n [0, max L*], min L* = 0,
// L' in [-M, -1], L'' in max L* + [1, M], and L in y + D + dZ.
struct AampWitness {
  std::int64_t shift = 0;             // y
  std::int64_t difference = 1;        // d
  std::vector<std::int64_t> period;   // D, with {0, d} in D in [0, d]
  std::int64_t bound = 0;             // M
  std::vector<std::int64_t> initial;  // L'
  std::vector<std::int64_t> central;  // L*
  std::vector<std::int64_t> final;    // L''
};

namespace detail {

inline std::int64_t mod(std::int64_t x, std::int64_t d) {
  auto r = x % d;
  return r < 0 ? r + d : r;
}

}  // namespace detail

// Searches for a witness that the finite nonempty set L (sorted, unique) is an
// AAMP with difference d and bound M. The shift y must lie in L (0 is in L*)
// and within M of min L; the period is forced to be the residues of L - y.
inline std::optional<AampWitness> is_aamp(std::span<std::int64_t const> l,
                                          std::int64_t d, std::int64_t m) {
  if (l.empty() || d < 1 || m < 0) {
    return std::nullopt;
  }
  auto lo = l.front();
  for (auto y : l) {
    if (y > lo + m) {
      break;
    }
    std::vector<std::int64_t> shifted;
    std::set<std::int64_t> residues;
    for (auto x : l) {
      shifted.push_back(x - y);
      residues.insert(detail::mod(x - y, d));
    }
    if (shifted.front() < -m) {
      continue;
    }
    auto in_period = [&](std::int64_t x) {
      return residues.count(detail::mod(x, d)) > 0;
    };
    // Candidate split points t = max L*, ascending.
    for (auto t : shifted) {
      if (t < 0) {
        continue;
      }
      bool ok = true;
      for (std::int64_t x = 0; x <= t && ok; ++x) {
        bool member = std::binary_search(shifted.begin(), shifted.end(), x);
        ok = member == in_period(x);
      }
      if (!ok) {
        continue;
      }
      if (shifted.back() > t + m) {
        continue;
      }
      AampWitness w;
      w.shift = y;
      w.difference = d;
      w.bound = m;
      w.period.push_back(0);
      for (auto r : residues) {
        if (r != 0) {
          w.period.push_back(r);
        }
      }
      w.period.push_back(d);
      for (auto x : shifted) {
        if (x < 0) {
          w.initial.push_back(x);
        } else if (x <= t) {
          w.central.push_back(x);
        } else {
          w.final.push_back(x);
        }
      }
      return w;
    }
  }
  return std::nullopt;
}

inline std::optional<AampWitness> is_aamp(LengthSet const& l, std::int64_t d,
                                          std::int64_t m) {
  return is_aamp(std::span<std::int64_t const>(l.values), d, m);
}

// Re-checks every defining condition of a witness against L.
inline bool verify_witness(std::span<std::int64_t const> l,
                           AampWitness const& w) {
  auto d = w.difference;
  auto m = w.bound;
  if (d < 1 || m < 0 || w.central.empty()) {
    return false;
  }
  std::set<std::int64_t> period(w.period.begin(), w.period.end());
  if (!period.count(0) || !period.count(d)) {
    return false;
  }
  for (auto p : period) {
    if (p < 0 || p > d) {
      return false;
    }
  }
  auto in_period = [&](std::int64_t x) {
    for (auto p : period) {
      if (detail::mod(x - p, d) == 0) {
        return true;
      }
    }
    return false;
  };
  std::set<std::int64_t> central(w.central.begin(), w.central.end());
  if (*central.begin() != 0) {
    return false;
  }
  auto top = *central.rbegin();
  for (std::int64_t x = 0; x <= top; ++x) {
    if (central.count(x) != static_cast<std::size_t>(in_period(x))) {
      return false;
    }
  }
  for (auto x : w.initial) {
    if (x < -m || x > -1) {
      return false;
    }
  }
  for (auto x : w.final) {
    if (x < top + 1 || x > top + m) {
      return false;
    }
  }
  std::set<std::int64_t> rebuilt;
  for (auto const* part : {&w.initial, &w.central, &w.final}) {
    for (auto x : *part) {
      rebuilt.insert(w.shift + x);
    }
  }
  std::set<std::int64_t> target(l.begin(), l.end());
  if (rebuilt != target) {
    return false;
  }
  for (auto x : target) {
    if (!in_period(x - w.shift)) {
      return false;
    }
  }
  return true;
}

// Least M for which L is an AAMP with difference d. Always finite for finite
// L: M = max L - min L admits L* = {0}.
inline std::int64_t minimal_bound(std::span<std::int64_t const> l,
                                  std::int64_t d) {
  if (l.empty()) {
    return 0;
  }
  auto span = l.back() - l.front();
  for (std::int64_t m = 0; m <= span; ++m) {
    if (is_aamp(l, d, m)) {
      return m;
    }
  }
  return span;
}

inline std::int64_t minimal_bound(LengthSet const& l, std::int64_t d) {
  return minimal_bound(std::span<std::int64_t const>(l.values), d);
}

struct StructureEntry {
  Element element;
  LengthSet lengths;
  std::int64_t difference = 1;  // realizing d
  std::int64_t bound = 0;       // minimal M for that d
};

struct StructureReport {
  std::int64_t weight_bound = 0;
  std::vector<std::int64_t> differences;
  std::int64_t max_bound = 0;   // M*
  bool stabilized = false;      // M* already reached at weight ceil(bound/2)
  std::vector<StructureEntry> entries;
  std::vector<BudgetOverflow> overflows;
};

inline StructureReport structure_from_sweep(LengthSweep const& s,
                                            std::vector<std::int64_t> ds) {
  if (ds.empty()) {
    throw Error("structure probe needs at least one candidate difference");
  }
  std::sort(ds.begin(), ds.end());
  StructureReport r;
  r.weight_bound = s.bound;
  r.differences = ds;
  r.overflows = s.overflows;
  std::int64_t half_max = 0;
  auto half_bound = (s.bound + 1) / 2;
  for (auto const& [e, l] : s.sets) {
    StructureEntry entry{e, l, ds.front(), minimal_bound(l, ds.front())};
    for (auto d : ds) {
      auto m = minimal_bound(l, d);
      if (m < entry.bound) {
        entry.bound = m;
        entry.difference = d;
      }
    }
    r.max_bound = std::max(r.max_bound, entry.bound);
    if (weight(e) <= half_bound) {
      half_max = std::max(half_max, entry.bound);
    }
    r.entries.push_back(std::move(entry));
  }
  r.stabilized = half_max == r.max_bound;
  return r;
}

// For each element of weight <= bound, the least bound M over the candidate
// differences for which L(a) is an AAMP.
inline StructureReport structure_probe(Model const& m, std::int64_t bound,
                                       std::vector<std::int64_t> ds,
                                       RunOptions const& opt = {}) {
  return structure_from_sweep(sweep_lengths(m, bound, opt), std::move(ds));
}

struct UnionStructureEntry {
  std::int64_t k = 0;
  LengthSet values;
  std::int64_t bound = 0;  // least M for difference min Delta
  double density = 0;      // |U_k| / k
};

struct UnionStructureReport {
  std::int64_t weight_bound = 0;
  bool trivial = false;  // Delta estimate empty
  std::int64_t difference = 1;
  Ratio elasticity{1, 1};
  double limit_trend = 0;  // (rho - 1/rho) / min Delta, informational
  std::vector<UnionStructureEntry> entries;
  std::vector<BudgetOverflow> overflows;
};

// Fits every U_k estimate as an AAMP with difference min Delta_est.
inline UnionStructureReport unions_structure_probe(Model const& m,
                                                   std::int64_t k_min,
                                                   std::int64_t k_max,
                                                   std::int64_t bound,
                                                   RunOptions const& opt = {}) {
  auto sweep = sweep_lengths(m, bound, opt);
  std::set<std::int64_t> delta;
  Ratio rho{1, 1};
  for (auto const& [e, l] : sweep.sets) {
    auto d = l.deltas();
    delta.insert(d.begin(), d.end());
    if (rho < l.elasticity()) rho = l.elasticity();
  }
  UnionStructureReport r;
  r.weight_bound = bound;
  r.overflows = sweep.overflows;
  r.trivial = delta.empty();
  r.difference = delta.empty() ? 1 : *delta.begin();
  r.elasticity = rho;
  if (!r.trivial) {
    r.limit_trend = (rho.value() - 1.0 / rho.value()) /
                    static_cast<double>(r.difference);
  }
  for (auto k = std::max<std::int64_t>(k_min, 1); k <= k_max; ++k) {
    auto u = union_from_sweep(sweep, k);
    UnionStructureEntry e;
    e.k = k;
    e.values = u.values;
    e.bound = minimal_bound(u.values, r.difference);
    e.density = static_cast<double>(u.values.size()) / static_cast<double>(k);
    r.entries.push_back(std::move(e));
  }
  return r;
}

}  // namespace factorlab
