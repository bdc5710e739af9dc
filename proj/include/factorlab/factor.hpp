#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "factorlab/element.hpp"
#include "factorlab/error.hpp"
#include "factorlab/models.hpp"

namespace factorlab {

// Atoms relevant to one computation, in global atom order; ids are the
// positions 0..n-1.
struct AtomTable {
  std::vector<Element> atoms;
  std::uint64_t fingerprint = 0;

  std::size_t size() const { return atoms.size(); }

  std::optional<std::uint32_t> id_of(Element const& e) const {
    auto it = std::lower_bound(
        atoms.begin(), atoms.end(), e,
        [](Element const& a, Element const& b) { return compare(a, b) < 0; });
    if (it == atoms.end() || !(*it == e)) {
      return std::nullopt;
    }
    return static_cast<std::uint32_t>(it - atoms.begin());
  }
};

inline std::shared_ptr<AtomTable const> make_atom_table(std::vector<Element> atoms) {
  detail::sort_canonical(atoms);
  auto t = std::make_shared<AtomTable>();
  std::uint64_t h = 0xcbf29ce484222325ULL ^ atoms.size();
  for (auto const& a : atoms) {
    h = (h ^ ElementHash{}(a)) * 0x100000001b3ULL;
  }
  t->fingerprint = h;
  t->atoms = std::move(atoms);
  return t;
}

using AtomId = std::uint32_t;
using Multiplicity = std::uint32_t;

// A multiset of atoms, stored as (atom id, multiplicity) pairs with strictly
// increasing ids.
struct Factorization {
  std::uint64_t table = 0;
  std::vector<std::pair<AtomId, Multiplicity>> parts;
  std::uint32_t length = 0;

  Multiplicity multiplicity(AtomId id) const {
    auto it = std::lower_bound(
        parts.begin(), parts.end(), id,
        [](auto const& p, AtomId x) { return p.first < x; });
    return it != parts.end() && it->first == id ? it->second : 0;
  }

  friend bool operator==(Factorization const& a, Factorization const& b) {
    return a.table == b.table && a.parts == b.parts;
  }
};

inline Factorization make_factorization(
    std::uint64_t table, std::vector<std::pair<AtomId, Multiplicity>> parts) {
  std::sort(parts.begin(), parts.end());
  Factorization z;
  z.table = table;
  for (auto const& [id, m] : parts) {
    if (m == 0) {
      continue;
    }
    if (!z.parts.empty() && z.parts.back().first == id) {
      z.parts.back().second += m;
    } else {
      z.parts.emplace_back(id, m);
    }
    z.length += m;
  }
  return z;
}

// Z(a) together with its partition into the Z_k(a).
struct FactorSet {
  Element element;
  std::shared_ptr<AtomTable const> table;
  // Sorted by length, then by parts; every fiber is a contiguous range.
  std::vector<Factorization> all;
  std::map<std::uint32_t, std::pair<std::size_t, std::size_t>> by_length;

  std::size_t size() const { return all.size(); }

  std::span<Factorization const> fiber(std::uint32_t k) const {
    auto it = by_length.find(k);
    if (it == by_length.end()) {
      return {};
    }
    return std::span<Factorization const>(all).subspan(
        it->second.first, it->second.second - it->second.first);
  }

  std::vector<std::uint32_t> lengths() const {
    std::vector<std::uint32_t> out;
    for (auto const& [k, r] : by_length) {
      out.push_back(k);
    }
    return out;
  }
};

struct FactorOptions {
  std::size_t budget = 2'000'000;
};

namespace detail {

inline void finish(FactorSet& fs) {
  std::sort(fs.all.begin(), fs.all.end(),
            [](Factorization const& a, Factorization const& b) {
              if (a.length != b.length) {
                return a.length < b.length;
              }
              return a.parts < b.parts;
            });
  fs.by_length.clear();
  for (std::size_t i = 0; i < fs.all.size();) {
    std::size_t j = i;
    while (j < fs.all.size() && fs.all[j].length == fs.all[i].length) {
      ++j;
    }
    fs.by_length[fs.all[i].length] = {i, j};
    i = j;
  }
}

inline Factorization from_counts(std::uint64_t table,
                                 std::vector<Multiplicity> const& counts) {
  Factorization z;
  z.table = table;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) {
      z.parts.emplace_back(static_cast<AtomId>(i), counts[i]);
      z.length += counts[i];
    }
  }
  return z;
}

// feasible[i][w]: w is a nonnegative combination of weights[i..].
inline std::vector<std::vector<char>> suffix_weight_table(
    std::vector<std::int64_t> const& weights, std::int64_t total) {
  auto n = weights.size();
  auto W = static_cast<std::size_t>(total);
  std::vector<std::vector<char>> feasible(n + 1, std::vector<char>(W + 1, 0));
  feasible[n][0] = 1;
  for (std::size_t i = n; i-- > 0;) {
    auto w = static_cast<std::size_t>(weights[i]);
    for (std::size_t x = 0; x <= W; ++x) {
      feasible[i][x] =
          feasible[i + 1][x] || (w > 0 && x >= w && feasible[i][x - w]);
    }
  }
  return feasible;
}

// Depth-first search over atoms in non-decreasing id order, pruned by
// remainder membership and by remaining weight.
inline FactorSet factor_vector(VectorModel const& m, Element const& a,
                               FactorOptions const& opt) {
  FactorSet fs;
  fs.element = a;
  fs.table = make_atom_table(m.atoms_dividing(a));
  auto const& atoms = fs.table->atoms;
  std::vector<Vec> av;
  std::vector<std::int64_t> aw;
  for (auto const& u : atoms) {
    av.push_back(m.unwrap(u));
    aw.push_back(weight(u));
  }
  auto feasible = suffix_weight_table(aw, weight(a));
  std::vector<Multiplicity> counts(atoms.size(), 0);
  auto fp = fs.table->fingerprint;

  auto rec = [&](auto&& self, Vec const& rest, std::size_t start,
                 std::int64_t rest_w) -> void {
    if (rest_w == 0) {
      fs.all.push_back(from_counts(fp, counts));
      if (fs.all.size() > opt.budget) {
        throw BudgetExceeded(opt.budget);
      }
      return;
    }
    for (std::size_t i = start; i < av.size(); ++i) {
      if (aw[i] > rest_w || !leq(av[i], rest)) {
        continue;
      }
      auto nw = rest_w - aw[i];
      if (!feasible[i][static_cast<std::size_t>(nw)]) {
        continue;
      }
      auto next = sub(rest, av[i]);
      if (!m.contains_vec(next)) {
        continue;
      }
      ++counts[i];
      self(self, next, i, nw);
      --counts[i];
    }
  };
  rec(rec, m.unwrap(a), 0, weight(a));
  finish(fs);
  return fs;
}

// Depth-first search over atom multisets whose partial sums stay inside a.
inline FactorSet factor_sumset(SumsetModel const& m, Element const& a,
                               FactorOptions const& opt) {
  FactorSet fs;
  fs.element = a;
  fs.table = make_atom_table(m.atoms_dividing(a));
  auto const& atoms = fs.table->atoms;
  auto const& target = a.set();
  std::vector<std::int64_t> aw;
  for (auto const& u : atoms) {
    aw.push_back(u.set().max());
  }
  auto feasible = suffix_weight_table(aw, target.max());
  std::vector<Multiplicity> counts(atoms.size(), 0);
  auto fp = fs.table->fingerprint;

  auto rec = [&](auto&& self, SumSet const& partial, std::size_t start,
                 std::int64_t rest_w) -> void {
    if (rest_w == 0) {
      if (partial == target) {
        fs.all.push_back(from_counts(fp, counts));
        if (fs.all.size() > opt.budget) {
          throw BudgetExceeded(opt.budget);
        }
      }
      return;
    }
    for (std::size_t i = start; i < atoms.size(); ++i) {
      if (aw[i] > rest_w ||
          !feasible[i][static_cast<std::size_t>(rest_w - aw[i])]) {
        continue;
      }
      auto next = sumset_add(partial, atoms[i].set());
      if (!sumset_subset(next, target)) {
        continue;
      }
      ++counts[i];
      self(self, next, i, rest_w - aw[i]);
      --counts[i];
    }
  };
  rec(rec, SumSet{{0}}, 0, target.max());
  finish(fs);
  return fs;
}

inline FactorSet factor_any(Model const& m, Element const& a,
                            FactorOptions const& opt);

// Z((a_1, ..., a_n, free)) = Z(a_1) x ... x Z(a_n) x {free part}.
inline FactorSet factor_product(ProductModel const& m, Element const& a,
                                FactorOptions const& opt) {
  auto const& t = a.tuple();
  std::vector<FactorSet> parts;
  std::size_t count = 1;
  for (std::size_t j = 0; j < m.factor_count(); ++j) {
    parts.push_back(factor_any(m.factor(j), t.factors[j], opt));
    auto n = parts.back().size();
    if (n != 0 && count > opt.budget / n) {
      throw BudgetExceeded(opt.budget);
    }
    count *= n;
  }
  if (count > opt.budget) {
    throw BudgetExceeded(opt.budget);
  }

  FactorSet fs;
  fs.element = a;
  fs.table = make_atom_table(m.atoms_dividing(a));
  auto fp = fs.table->fingerprint;

  std::vector<std::vector<AtomId>> remap(parts.size());
  for (std::size_t j = 0; j < parts.size(); ++j) {
    for (auto const& u : parts[j].table->atoms) {
      remap[j].push_back(*fs.table->id_of(m.embed(j, u)));
    }
  }
  std::vector<std::pair<AtomId, Multiplicity>> free_part;
  for (std::size_t i = 0; i < m.free_rank(); ++i) {
    if (t.free[i] > 0) {
      free_part.emplace_back(*fs.table->id_of(m.free_atom(i)),
                             static_cast<Multiplicity>(t.free[i]));
    }
  }

  std::vector<std::pair<AtomId, Multiplicity>> cur;
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == parts.size()) {
      auto all = cur;
      all.insert(all.end(), free_part.begin(), free_part.end());
      fs.all.push_back(make_factorization(fp, std::move(all)));
      return;
    }
    for (auto const& z : parts[j].all) {
      auto mark = cur.size();
      for (auto const& [id, mult] : z.parts) {
        cur.emplace_back(remap[j][id], mult);
      }
      self(self, j + 1);
      cur.resize(mark);
    }
  };
  rec(rec, 0);
  finish(fs);
  return fs;
}

inline FactorSet factor_any(Model const& m, Element const& a,
                            FactorOptions const& opt) {
  auto e = m.canonical(a);
  m.require_member(e);
  switch (m.kind()) {
    case ModelKind::sumset:
      return factor_sumset(static_cast<SumsetModel const&>(m), e, opt);
    case ModelKind::product:
      return factor_product(static_cast<ProductModel const&>(m), e, opt);
    default:
      return factor_vector(static_cast<VectorModel const&>(m), e, opt);
  }
}

inline std::uint32_t distance_unchecked(Factorization const& x,
                                        Factorization const& y) {
  std::uint32_t common = 0;
  auto i = x.parts.begin();
  auto j = y.parts.begin();
  while (i != x.parts.end() && j != y.parts.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      common += std::min(i->second, j->second);
      ++i;
      ++j;
    }
  }
  return std::max(x.length - common, y.length - common);
}

}  // namespace detail

// The complete, duplicate-free set of factorizations of a.
// Throws NotAMember, ShapeMismatch, or BudgetExceeded.
inline FactorSet factorizations(Model const& m, Element const& a,
                                FactorOptions const& opt = {}) {
  return detail::factor_any(m, a, opt);
}

// pi(z): the product of the atoms of z.
inline Element multiply_out(Model const& m, AtomTable const& table,
                            Factorization const& z) {
  Element out = m.identity();
  for (auto const& [id, mult] : z.parts) {
    for (Multiplicity k = 0; k < mult; ++k) {
      out = m.multiply(out, table.atoms[id]);
    }
  }
  return out;
}

inline Factorization gcd(Factorization const& x, Factorization const& y) {
  if (x.table != y.table) {
    throw TableMismatch();
  }
  Factorization g;
  g.table = x.table;
  auto i = x.parts.begin();
  auto j = y.parts.begin();
  while (i != x.parts.end() && j != y.parts.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      auto m = std::min(i->second, j->second);
      g.parts.emplace_back(i->first, m);
      g.length += m;
      ++i;
      ++j;
    }
  }
  return g;
}

// d(z, z') = max(|z gcd^-1|, |z' gcd^-1|).
inline std::uint32_t distance(Factorization const& x, Factorization const& y) {
  if (x.table != y.table) {
    throw TableMismatch();
  }
  return detail::distance_unchecked(x, y);
}

// d(X, Y) = min d(x, y); 0 if either side is empty.
inline std::uint32_t set_distance(std::span<Factorization const> xs,
                                  std::span<Factorization const> ys) {
  if (xs.empty() || ys.empty()) {
    return 0;
  }
  auto best = std::numeric_limits<std::uint32_t>::max();
  for (auto const& x : xs) {
    for (auto const& y : ys) {
      best = std::min(best, distance(x, y));
      if (best == 0) {
        return 0;
      }
    }
  }
  return best;
}

// Dist(X, Y) = sup of the one-sided nearest distances d({x}, Y), d(X, {y}).
inline std::uint32_t dist_sup(std::span<Factorization const> xs,
                              std::span<Factorization const> ys) {
  if (xs.empty() || ys.empty()) {
    return 0;
  }
  std::uint32_t out = 0;
  for (auto const& x : xs) {
    out = std::max(out, set_distance(std::span(&x, 1), ys));
  }
  for (auto const& y : ys) {
    out = std::max(out, set_distance(xs, std::span(&y, 1)));
  }
  return out;
}

}  // namespace factorlab
