#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "factorlab/factor.hpp"
#include "factorlab/models.hpp"
#include "factorlab/parallel.hpp"

namespace factorlab {

// Nonnegative rational; den == 0 encodes infinity.
struct Ratio {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  double value() const {
    return den == 0 ? std::numeric_limits<double>::infinity()
                    : static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator==(Ratio const& a, Ratio const& b) {
    return a.num * b.den == b.num * a.den && (a.den == 0) == (b.den == 0);
  }
  friend bool operator<(Ratio const& a, Ratio const& b) {
    if (a.den == 0) return false;
    if (b.den == 0) return true;
    return a.num * b.den < b.num * a.den;
  }
};

inline Ratio reduced(std::uint64_t num, std::uint64_t den) {
  if (den == 0) {
    return {1, 0};
  }
  auto g = std::gcd(num, den);
  return g == 0 ? Ratio{0, 1} : Ratio{num / g, den / g};
}

// A finite set of lengths with its derived invariants. Conventions: an empty
// set has min = max = 0, and rho({0}) = 1.
struct LengthSet {
  std::vector<std::int64_t> values;  // sorted, unique

  static LengthSet of(std::vector<std::int64_t> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return LengthSet{std::move(xs)};
  }

  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }
  std::int64_t min() const { return values.empty() ? 0 : values.front(); }
  std::int64_t max() const { return values.empty() ? 0 : values.back(); }
  bool contains(std::int64_t x) const {
    return std::binary_search(values.begin(), values.end(), x);
  }

  // Delta(L): differences of adjacent elements.
  std::vector<std::int64_t> deltas() const {
    std::set<std::int64_t> d;
    for (std::size_t i = 1; i < values.size(); ++i) {
      d.insert(values[i] - values[i - 1]);
    }
    return {d.begin(), d.end()};
  }

  Ratio elasticity() const {
    if (values.empty() || values == std::vector<std::int64_t>{0}) {
      return {1, 1};
    }
    if (min() == 0) {
      return {1, 0};
    }
    return reduced(static_cast<std::uint64_t>(max()),
                   static_cast<std::uint64_t>(min()));
  }

  friend bool operator==(LengthSet const&, LengthSet const&) = default;
};

inline LengthSet length_set(FactorSet const& fs) {
  LengthSet l;
  for (auto k : fs.lengths()) {
    l.values.push_back(k);
  }
  return l;
}

// {x + y : x in L1, y in L2}; lengths of a product element.
inline LengthSet length_set_sumset(LengthSet const& a, LengthSet const& b) {
  std::vector<std::int64_t> out;
  for (auto x : a.values) {
    for (auto y : b.values) {
      out.push_back(x + y);
    }
  }
  return LengthSet::of(std::move(out));
}

// All (x, y) in L1 x L2 with x + y = target.
inline std::vector<std::pair<std::int64_t, std::int64_t>> unique_representations(
    LengthSet const& a, LengthSet const& b, std::int64_t target) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (auto x : a.values) {
    if (b.contains(target - x)) {
      out.emplace_back(x, target - x);
    }
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////
// Element-level invariants
////////////////////////////////////////////////////////////////////////////

namespace detail {

// Bottleneck of a minimum spanning tree of the complete distance graph
// (dense Prim). This is the least N making the graph {d <= N} connected.
inline std::uint32_t bottleneck(std::span<Factorization const> zs) {
  auto n = zs.size();
  if (n <= 1) {
    return 0;
  }
  constexpr auto inf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> best(n, inf);
  std::vector<char> done(n, 0);
  best[0] = 0;
  std::uint32_t out = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && (u == n || best[v] < best[u])) {
        u = v;
      }
    }
    done[u] = 1;
    out = std::max(out, best[u]);
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v]) {
        best[v] = std::min(best[v], distance_unchecked(zs[u], zs[v]));
      }
    }
  }
  return out;
}

// nearest[i][j] = d({z_i}, Z_{L_j}) for every factorization z_i and every
// length L_j of the element.
struct NearestTable {
  std::vector<std::uint32_t> lengths;
  std::vector<std::size_t> fiber_of;  // factorization index -> length index
  std::vector<std::uint32_t> data;

  std::uint32_t at(std::size_t z, std::size_t j) const {
    return data[z * lengths.size() + j];
  }

  explicit NearestTable(FactorSet const& fs) : lengths(fs.lengths()) {
    auto n = fs.size();
    auto nl = lengths.size();
    fiber_of.resize(n);
    for (std::size_t j = 0; j < nl; ++j) {
      auto [b, e] = fs.by_length.at(lengths[j]);
      for (auto i = b; i < e; ++i) {
        fiber_of[i] = j;
      }
    }
    data.assign(n * nl, std::numeric_limits<std::uint32_t>::max());
    for (std::size_t i = 0; i < n; ++i) {
      data[i * nl + fiber_of[i]] = 0;
      for (std::size_t k = i + 1; k < n; ++k) {
        auto d = distance_unchecked(fs.all[i], fs.all[k]);
        auto& a = data[i * nl + fiber_of[k]];
        auto& b = data[k * nl + fiber_of[i]];
        a = std::min(a, d);
        b = std::min(b, d);
      }
    }
  }

  // d(Z_{L_j}, Z_{L_k})
  std::uint32_t fiber_distance(FactorSet const& fs, std::size_t j,
                               std::size_t k) const {
    auto [b, e] = fs.by_length.at(lengths[j]);
    auto out = std::numeric_limits<std::uint32_t>::max();
    for (auto i = b; i < e; ++i) {
      out = std::min(out, at(i, k));
    }
    return out;
  }

  // Dist(Z_{L_j}, Z_{L_k})
  std::uint32_t fiber_dist_sup(FactorSet const& fs, std::size_t j,
                               std::size_t k) const {
    std::uint32_t out = 0;
    auto [b1, e1] = fs.by_length.at(lengths[j]);
    for (auto i = b1; i < e1; ++i) {
      out = std::max(out, at(i, k));
    }
    auto [b2, e2] = fs.by_length.at(lengths[k]);
    for (auto i = b2; i < e2; ++i) {
      out = std::max(out, at(i, j));
    }
    return out;
  }
};

}  // namespace detail

// c(a)
inline std::uint32_t catenary(FactorSet const& fs) {
  return detail::bottleneck(fs.all);
}

// c_eq(a): monotone chains between equal lengths never leave the fiber.
inline std::uint32_t equal_catenary(FactorSet const& fs) {
  std::uint32_t out = 0;
  for (auto k : fs.lengths()) {
    out = std::max(out, detail::bottleneck(fs.fiber(k)));
  }
  return out;
}

// c_adj(a) = max d(Z_k, Z_l) over adjacent lengths k < l.
inline std::uint32_t adjacent_catenary(FactorSet const& fs) {
  auto ls = fs.lengths();
  std::uint32_t out = 0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    out = std::max(out, set_distance(fs.fiber(ls[i - 1]), fs.fiber(ls[i])));
  }
  return out;
}

// c_mon(a) = max(c_eq(a), c_adj(a)).
inline std::uint32_t monotone_catenary(FactorSet const& fs) {
  return std::max(equal_catenary(fs), adjacent_catenary(fs));
}

// Is there a monotone N-chain from all[from] to all[to]? Breadth-first search
// restricted to steps of distance <= N, once with non-decreasing and once with
// non-increasing lengths.
inline bool monotone_chain_exists(FactorSet const& fs, std::size_t from,
                                  std::size_t to, std::uint32_t n) {
  if (from == to) {
    return true;
  }
  for (int dir : {1, -1}) {
    std::vector<char> seen(fs.size(), 0);
    std::deque<std::size_t> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      if (u == to) {
        return true;
      }
      for (std::size_t v = 0; v < fs.size(); ++v) {
        if (seen[v]) {
          continue;
        }
        auto lu = static_cast<std::int64_t>(fs.all[u].length);
        auto lv = static_cast<std::int64_t>(fs.all[v].length);
        if ((lv - lu) * dir < 0) {
          continue;
        }
        if (distance(fs.all[u], fs.all[v]) <= n) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
  }
  return false;
}

// delta(z) for every factorization: the largest over the lengths adjacent to
// |z| of the distance from z to the nearest factorization of that length.
inline std::vector<std::uint32_t> successive_distance_per_factorization(
    FactorSet const& fs) {
  detail::NearestTable nt(fs);
  std::vector<std::uint32_t> out(fs.size(), 0);
  auto nl = nt.lengths.size();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto j = nt.fiber_of[i];
    if (j > 0) {
      out[i] = std::max(out[i], nt.at(i, j - 1));
    }
    if (j + 1 < nl) {
      out[i] = std::max(out[i], nt.at(i, j + 1));
    }
  }
  return out;
}

// delta(a) = max over adjacent k < l of Dist(Z_k, Z_l).
inline std::uint32_t successive_distance(FactorSet const& fs) {
  auto ls = fs.lengths();
  std::uint32_t out = 0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    out = std::max(out, dist_sup(fs.fiber(ls[i - 1]), fs.fiber(ls[i])));
  }
  return out;
}

namespace detail {

inline std::uint32_t ceil_div(std::uint32_t a, std::uint32_t b) {
  return (a + b - 1) / b;
}

}  // namespace detail

// delta_w(a): least N with d(Z_k, Z_l) <= N |l - k| over all pairs of lengths.
inline std::uint32_t weak_successive_distance(FactorSet const& fs) {
  auto ls = fs.lengths();
  std::uint32_t out = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    for (std::size_t j = i + 1; j < ls.size(); ++j) {
      auto d = set_distance(fs.fiber(ls[i]), fs.fiber(ls[j]));
      out = std::max(out, detail::ceil_div(d, ls[j] - ls[i]));
    }
  }
  return out;
}

struct FiberPair {
  std::uint32_t k = 0;
  std::uint32_t l = 0;
  std::uint32_t distance = 0;  // d(Z_k, Z_l)
  std::uint32_t dist_sup = 0;  // Dist(Z_k, Z_l)
};

struct InvariantReport {
  Element element;
  std::size_t factorization_count = 0;
  LengthSet lengths;
  std::vector<std::int64_t> delta;
  Ratio elasticity;
  std::uint32_t catenary = 0;
  std::uint32_t equal_catenary = 0;
  std::uint32_t adjacent_catenary = 0;
  std::uint32_t monotone_catenary = 0;
  std::uint32_t successive_distance = 0;
  std::uint32_t weak_successive_distance = 0;
  std::vector<FiberPair> pairs;  // all k < l
};

// Every element-level invariant in two quadratic passes over Z(a). The
// strong successive distance is computed both per factorization and per
// fiber pair; the two must agree.
inline InvariantReport invariant_report(FactorSet const& fs) {
  InvariantReport r;
  r.element = fs.element;
  r.factorization_count = fs.size();
  r.lengths = length_set(fs);
  r.delta = r.lengths.deltas();
  r.elasticity = r.lengths.elasticity();
  r.catenary = catenary(fs);
  r.equal_catenary = equal_catenary(fs);

  detail::NearestTable nt(fs);
  auto nl = nt.lengths.size();
  for (std::size_t j = 0; j < nl; ++j) {
    for (std::size_t k = j + 1; k < nl; ++k) {
      FiberPair p{nt.lengths[j], nt.lengths[k], nt.fiber_distance(fs, j, k),
                  nt.fiber_dist_sup(fs, j, k)};
      if (k == j + 1) {
        r.adjacent_catenary = std::max(r.adjacent_catenary, p.distance);
        r.successive_distance = std::max(r.successive_distance, p.dist_sup);
      }
      r.weak_successive_distance =
          std::max(r.weak_successive_distance,
                   detail::ceil_div(p.distance, p.l - p.k));
      r.pairs.push_back(p);
    }
  }
  r.monotone_catenary = std::max(r.equal_catenary, r.adjacent_catenary);

  std::uint32_t per_z = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto j = nt.fiber_of[i];
    if (j > 0) per_z = std::max(per_z, nt.at(i, j - 1));
    if (j + 1 < nl) per_z = std::max(per_z, nt.at(i, j + 1));
  }
  if (per_z != r.successive_distance) {
    throw std::logic_error("successive distance: per-factorization and "
                           "per-fiber values disagree");
  }
  return r;
}

////////////////////////////////////////////////////////////////////////////
// Truncated global estimates
////////////////////////////////////////////////////////////////////////////

struct RunOptions {
  std::size_t budget = 2'000'000;
  unsigned jobs = 1;
};

struct BudgetOverflow {
  Element element;
  std::size_t limit = 0;
};

// Per-element results over all members of weight <= bound.
struct ElementSweep {
  std::int64_t bound = 0;
  std::vector<InvariantReport> reports;  // successful elements, weight order
  std::vector<BudgetOverflow> overflows;
};

inline ElementSweep sweep_elements(Model const& m, std::int64_t bound,
                                   RunOptions const& opt = {}) {
  auto elems = m.elements_up_to(bound);
  auto results = parallel_map(
      elems.size(), opt.jobs,
      [&](std::size_t i) -> std::variant<InvariantReport, BudgetOverflow> {
        try {
          return invariant_report(factorizations(m, elems[i], {opt.budget}));
        } catch (BudgetExceeded const& e) {
          return BudgetOverflow{elems[i], e.limit()};
        }
      });
  ElementSweep s;
  s.bound = bound;
  for (auto& r : results) {
    if (auto* rep = std::get_if<InvariantReport>(&r)) {
      s.reports.push_back(std::move(*rep));
    } else {
      s.overflows.push_back(std::get<BudgetOverflow>(r));
    }
  }
  return s;
}

using EstimateValue =
    std::variant<std::uint64_t, Ratio, std::vector<std::int64_t>>;

// A lower bound for a global invariant from elements of weight <= bound.
// stabilized: the value was already reached at weight ceil(bound / 2).
struct GlobalEstimate {
  std::string name;
  EstimateValue value;
  std::int64_t bound = 0;
  bool stabilized = false;
};

struct GlobalReport {
  std::int64_t bound = 0;
  std::size_t elements = 0;
  bool half_factorial = true;  // at this bound
  std::vector<GlobalEstimate> estimates;
  std::vector<BudgetOverflow> overflows;

  GlobalEstimate const& get(std::string const& name) const {
    for (auto const& e : estimates) {
      if (e.name == name) {
        return e;
      }
    }
    throw std::out_of_range("no estimate named " + name);
  }
  std::uint64_t scalar(std::string const& name) const {
    return std::get<std::uint64_t>(get(name).value);
  }
  std::vector<std::int64_t> const& set(std::string const& name) const {
    return std::get<std::vector<std::int64_t>>(get(name).value);
  }
};

namespace detail {

struct Accumulator {
  std::set<std::int64_t> delta;
  Ratio rho{1, 1};
  std::uint64_t c = 0, c_eq = 0, c_adj = 0, c_mon = 0, delta_s = 0, delta_w = 0;

  void add(InvariantReport const& r) {
    delta.insert(r.delta.begin(), r.delta.end());
    if (rho < r.elasticity) rho = r.elasticity;
    c = std::max<std::uint64_t>(c, r.catenary);
    c_eq = std::max<std::uint64_t>(c_eq, r.equal_catenary);
    c_adj = std::max<std::uint64_t>(c_adj, r.adjacent_catenary);
    c_mon = std::max<std::uint64_t>(c_mon, r.monotone_catenary);
    delta_s = std::max<std::uint64_t>(delta_s, r.successive_distance);
    delta_w = std::max<std::uint64_t>(delta_w, r.weak_successive_distance);
  }

  std::vector<std::pair<std::string, EstimateValue>> values() const {
    return {{"delta_set", std::vector<std::int64_t>(delta.begin(), delta.end())},
            {"elasticity", rho},
            {"catenary", c},
            {"equal_catenary", c_eq},
            {"adjacent_catenary", c_adj},
            {"monotone_catenary", c_mon},
            {"successive_distance", delta_s},
            {"weak_successive_distance", delta_w}};
  }
};

inline bool same_value(EstimateValue const& a, EstimateValue const& b) {
  if (a.index() != b.index()) return false;
  if (auto const* r = std::get_if<Ratio>(&a)) return *r == std::get<Ratio>(b);
  return a == b;
}

}  // namespace detail

inline GlobalReport summarize(ElementSweep const& s) {
  detail::Accumulator half, full;
  auto half_bound = (s.bound + 1) / 2;
  for (auto const& r : s.reports) {
    full.add(r);
    if (weight(r.element) <= half_bound) {
      half.add(r);
    }
  }
  GlobalReport g;
  g.bound = s.bound;
  g.elements = s.reports.size() + s.overflows.size();
  g.overflows = s.overflows;
  g.half_factorial = full.delta.empty();
  auto hv = half.values();
  auto fv = full.values();
  for (std::size_t i = 0; i < fv.size(); ++i) {
    g.estimates.push_back(GlobalEstimate{fv[i].first, fv[i].second, s.bound,
                                         detail::same_value(hv[i].second, fv[i].second)});
  }
  return g;
}

// Delta(H), rho(H), c(H), c_eq(H), c_adj(H), c_mon(H), delta(H), delta_w(H)
// estimated from below over all elements of weight <= bound.
inline GlobalReport global_estimates(Model const& m, std::int64_t bound,
                                     RunOptions const& opt = {}) {
  return summarize(sweep_elements(m, bound, opt));
}

struct UnionEstimate {
  std::int64_t k = 0;
  std::int64_t bound = 0;
  LengthSet values;
  std::int64_t rho_k = 0;
  bool stabilized = false;
  std::vector<BudgetOverflow> overflows;
};

// Per-element sets of lengths for weight <= bound.
struct LengthSweep {
  std::int64_t bound = 0;
  std::vector<std::pair<Element, LengthSet>> sets;
  std::vector<BudgetOverflow> overflows;
};

inline LengthSweep sweep_lengths(Model const& m, std::int64_t bound,
                                 RunOptions const& opt = {}) {
  auto elems = m.elements_up_to(bound);
  auto results = parallel_map(
      elems.size(), opt.jobs,
      [&](std::size_t i) -> std::variant<LengthSet, BudgetOverflow> {
        try {
          return length_set(factorizations(m, elems[i], {opt.budget}));
        } catch (BudgetExceeded const& e) {
          return BudgetOverflow{elems[i], e.limit()};
        }
      });
  LengthSweep s;
  s.bound = bound;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (auto* l = std::get_if<LengthSet>(&results[i])) {
      s.sets.emplace_back(elems[i], std::move(*l));
    } else {
      s.overflows.push_back(std::get<BudgetOverflow>(results[i]));
    }
  }
  return s;
}

inline UnionEstimate union_from_sweep(LengthSweep const& s, std::int64_t k) {
  // U_k always contains k: H has an atom u, and u^k has length k.
  std::set<std::int64_t> full{k}, half{k};
  auto half_bound = (s.bound + 1) / 2;
  for (auto const& [e, l] : s.sets) {
    if (!l.contains(k)) {
      continue;
    }
    full.insert(l.values.begin(), l.values.end());
    if (weight(e) <= half_bound) {
      half.insert(l.values.begin(), l.values.end());
    }
  }
  UnionEstimate u;
  u.k = k;
  u.bound = s.bound;
  u.values = LengthSet{{full.begin(), full.end()}};
  u.rho_k = u.values.max();
  u.stabilized = full == half;
  u.overflows = s.overflows;
  return u;
}

// U_k(H) from elements of weight <= bound, with rho_k = max U_k.
inline UnionEstimate unions_of_lengths(Model const& m, std::int64_t k,
                                       std::int64_t bound,
                                       RunOptions const& opt = {}) {
  if (k < 1) {
    throw Error("unions of lengths need k >= 1");
  }
  return union_from_sweep(sweep_lengths(m, bound, opt), k);
}

}  // namespace factorlab
