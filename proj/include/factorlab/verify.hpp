#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "factorlab/descriptor.hpp"
#include "factorlab/invariants.hpp"
#include "factorlab/relations.hpp"

namespace factorlab {

struct Check {
  std::string label;
  bool ok = false;
  std::string detail;
};

struct Transcript {
  std::string name;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](Check const& c) { return c.ok; });
  }
  void add(std::string label, bool ok, std::string detail) {
    checks.push_back({std::move(label), ok, std::move(detail)});
  }
};

// Throws AssertionFailure naming the first failed check.
inline void require(Transcript const& t) {
  for (auto const& c : t.checks) {
    if (!c.ok) {
      throw AssertionFailure(t.name + ": " + c.label + " failed: " + c.detail);
    }
  }
}

inline SumsetDescriptor interval_sumset_descriptor() {
  return SumsetDescriptor{{make_sumset({0, 1}), make_sumset({0, 1, 3}),
                           make_sumset({0, 2, 3})}};
}

namespace detail {

inline std::string show(SumSet const& s) { return to_string(Element{s}); }

inline std::optional<Factorization> find_factorization(
    FactorSet const& fs, std::vector<std::pair<Element, Multiplicity>> const& want) {
  std::vector<std::pair<AtomId, Multiplicity>> parts;
  for (auto const& [u, mult] : want) {
    auto id = fs.table->id_of(u);
    if (!id) {
      return std::nullopt;
    }
    if (mult > 0) {
      parts.emplace_back(*id, mult);
    }
  }
  auto z = make_factorization(fs.table->fingerprint, parts);
  for (auto const& x : fs.all) {
    if (x == z) {
      return x;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// The sumset monoid generated by {0,1}, A = {0,1,3}, B = {0,2,3}:
//   {0,1} + kA = {0,1} + kB = [0, 3k+1] for k in [0, k_max];
//   lA, lB are not intervals, 1 in lA, 1 not in lB for l in [1, k_max];
//   a_k = ({0,1} + kA, {0,1} + kB) is an atom of the equal-length relation
//   monoid for k in [1, min(k_max, atom_k_max)].
inline Transcript verify_interval_sumsets(std::int64_t k_max,
                                          std::int64_t atom_k_max = 4,
                                          RunOptions const& opt = {}) {
  if (k_max < 1) {
    throw Error("k-max must be at least 1");
  }
  SumsetModel model(interval_sumset_descriptor().generators);
  auto const one = make_sumset({0, 1});
  auto const a = make_sumset({0, 1, 3});
  auto const b = make_sumset({0, 2, 3});

  Transcript t;
  t.name = "interval sumsets";
  for (std::int64_t k = 0; k <= k_max; ++k) {
    auto sa = sumset_add(one, sumset_multiple(a, k));
    auto sb = sumset_add(one, sumset_multiple(b, k));
    auto iv = interval(0, 3 * k + 1);
    std::ostringstream os;
    os << "{0,1}+" << k << "A = " << detail::show(sa) << ", {0,1}+" << k
       << "B = " << detail::show(sb);
    t.add("interval k=" + std::to_string(k), sa == iv && sb == iv, os.str());
  }
  for (std::int64_t l = 1; l <= k_max; ++l) {
    auto la = sumset_multiple(a, l);
    auto lb = sumset_multiple(b, l);
    bool ok = !is_interval(la) && !is_interval(lb) && la.contains(1) &&
              !lb.contains(1);
    std::ostringstream os;
    os << l << "A = " << detail::show(la) << ", " << l << "B = " << detail::show(lb);
    t.add("non-interval l=" + std::to_string(l), ok, os.str());
  }
  for (std::int64_t k = 1; k <= std::min(k_max, atom_k_max); ++k) {
    auto target = interval(0, 3 * k + 1);
    auto const m = static_cast<Multiplicity>(k);
    std::ostringstream os;
    bool ok = false;
    auto fs = factorizations(model, Element{target}, {opt.budget});
    auto x = detail::find_factorization(fs, {{Element{one}, 1}, {Element{a}, m}});
    auto y = detail::find_factorization(fs, {{Element{one}, 1}, {Element{b}, m}});
    if (x && y) {
      ok = is_relation_atom(model, fs, *x, *y);
      os << "|Z(" << detail::show(target) << ")| = " << fs.size() << ", length "
         << x->length << (ok ? ", no splitting" : ", splits");
    } else {
      os << "factorization missing from Z(" << detail::show(target) << ")";
    }
    t.add("atom a_" + std::to_string(k), ok, os.str());
  }
  return t;
}

inline LengthSet progression_with_tail(std::int64_t y, std::int64_t d,
                                       std::int64_t k,
                                       std::vector<std::int64_t> const& tail) {
  std::vector<std::int64_t> v;
  for (std::int64_t nu = 0; nu <= k; ++nu) {
    v.push_back(y + nu * d);
  }
  for (auto x : tail) {
    v.push_back(y + k * d + x);
  }
  return LengthSet::of(std::move(v));
}

// L1 = y1 + ({nu d : nu in [0,k]} u {kd+2}), L2 = y2 + ({nu d} u {kd+1, kd+3}).
// The targets y+kd+1 and y+kd+2 (y = y1+y2) each have exactly one
// representation in L1 + L2, and the two representations are at least kd
// apart in each coordinate.
inline Transcript verify_unique_sum_representations(std::int64_t d,
                                                    std::int64_t k_max,
                                                    std::int64_t y1 = 2,
                                                    std::int64_t y2 = 2) {
  if (d < 10 || k_max < 1 || y1 < 2 || y2 < 2) {
    throw Error("need d >= 10, k-max >= 1 and shifts >= 2");
  }
  Transcript t;
  t.name = "unique sum representations";
  for (std::int64_t k = 1; k <= k_max; ++k) {
    auto l1 = progression_with_tail(y1, d, k, {2});
    auto l2 = progression_with_tail(y2, d, k, {1, 3});
    auto y = y1 + y2;
    auto ra = unique_representations(l1, l2, y + k * d + 1);
    auto rb = unique_representations(l1, l2, y + k * d + 2);
    std::ostringstream os;
    os << "reps(" << y + k * d + 1 << ") = ";
    for (auto [p, q] : ra) os << "(" << p << "," << q << ")";
    os << ", reps(" << y + k * d + 2 << ") = ";
    for (auto [p, q] : rb) os << "(" << p << "," << q << ")";
    bool ok = ra.size() == 1 && rb.size() == 1;
    if (ok) {
      ok = ra[0] == std::pair{y1, y2 + k * d + 1} &&
           rb[0] == std::pair{y1 + k * d + 2, y2} &&
           std::abs(ra[0].first - rb[0].first) >= k * d &&
           std::abs(ra[0].second - rb[0].second) >= k * d;
    }
    t.add("k=" + std::to_string(k), ok, os.str());
  }
  return t;
}

}  // namespace factorlab
