#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "factorlab/factor.hpp"
#include "factorlab/invariants.hpp"

namespace factorlab {

// A factorization written over canonical atom elements instead of a
// per-element table, so that factorizations of different elements can be
// multiplied in the free monoid over all atoms.
struct AtomMultiset {
  std::vector<std::pair<Element, Multiplicity>> parts;  // global atom order
  std::uint32_t length = 0;

  friend bool operator==(AtomMultiset const& a, AtomMultiset const& b) {
    if (a.parts.size() != b.parts.size()) return false;
    for (std::size_t i = 0; i < a.parts.size(); ++i) {
      if (!(a.parts[i].first == b.parts[i].first) ||
          a.parts[i].second != b.parts[i].second) {
        return false;
      }
    }
    return true;
  }
};

inline AtomMultiset to_multiset(AtomTable const& t, Factorization const& z) {
  AtomMultiset m;
  for (auto const& [id, mult] : z.parts) {
    m.parts.emplace_back(t.atoms[id], mult);
  }
  m.length = z.length;
  return m;
}

inline AtomMultiset concatenate(AtomMultiset const& a, AtomMultiset const& b) {
  AtomMultiset out;
  std::size_t i = 0, j = 0;
  while (i < a.parts.size() || j < b.parts.size()) {
    int c = i == a.parts.size()   ? 1
            : j == b.parts.size() ? -1
                                  : compare(a.parts[i].first, b.parts[j].first);
    if (c < 0) {
      out.parts.push_back(a.parts[i++]);
    } else if (c > 0) {
      out.parts.push_back(b.parts[j++]);
    } else {
      out.parts.emplace_back(a.parts[i].first,
                             a.parts[i].second + b.parts[j].second);
      ++i;
      ++j;
    }
  }
  out.length = a.length + b.length;
  return out;
}

inline Element multiply_out(Model const& m, AtomMultiset const& z) {
  Element out = m.identity();
  for (auto const& [u, mult] : z.parts) {
    for (Multiplicity k = 0; k < mult; ++k) {
      out = m.multiply(out, u);
    }
  }
  return out;
}

// (x, y) with pi(x) = pi(y) = element.
struct RelationPair {
  Element element;
  AtomMultiset x;
  AtomMultiset y;
  bool equal_length = true;
};

inline bool is_equal_length_relation(Model const& m, AtomMultiset const& x,
                                     AtomMultiset const& y) {
  return x.length == y.length && multiply_out(m, x) == multiply_out(m, y);
}

// Componentwise product in Z(H) x Z(H).
inline RelationPair combine(Model const& m, RelationPair const& p,
                            RelationPair const& q) {
  RelationPair r;
  r.element = m.multiply(p.element, q.element);
  r.x = concatenate(p.x, q.x);
  r.y = concatenate(p.y, q.y);
  r.equal_length = r.x.length == r.y.length;
  return r;
}

namespace detail {

using Counts = std::vector<Multiplicity>;

inline Counts counts_of(Factorization const& z, std::size_t n) {
  Counts c(n, 0);
  for (auto const& [id, mult] : z.parts) {
    c[id] = mult;
  }
  return c;
}

template <typename F>
void for_each_submultiset(Counts const& top, F&& f) {
  Counts cur(top.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, std::uint32_t len) -> void {
    if (i == top.size()) {
      f(static_cast<Counts const&>(cur), len);
      return;
    }
    for (Multiplicity k = 0; k <= top[i]; ++k) {
      cur[i] = k;
      self(self, i + 1, len + k);
    }
    cur[i] = 0;
  };
  rec(rec, 0, 0);
}

inline Element product_of(Model const& m, AtomTable const& t, Counts const& c) {
  Element out = m.identity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (Multiplicity k = 0; k < c[i]; ++k) {
      out = m.multiply(out, t.atoms[i]);
    }
  }
  return out;
}

inline Counts minus(Counts a, Counts const& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] -= b[i];
  }
  return a;
}

}  // namespace detail

// Is (x, y) an atom of the monoid of equal-length relations? Any splitting
// (x, y) = (x', y') (x'', y'') into nonidentity members has x' | x, y' | y in
// the free monoid and 1 <= |x'| = |y'| < |x|, so enumerating those divisor
// pairs decides atomicity exactly.
inline bool is_relation_atom(Model const& m, FactorSet const& fs,
                             Factorization const& x, Factorization const& y) {
  if (x.length != y.length || x.length == 0) {
    return false;
  }
  auto const& t = *fs.table;
  auto cx = detail::counts_of(x, t.size());
  auto cy = detail::counts_of(y, t.size());

  std::map<std::uint32_t, std::vector<std::pair<detail::Counts, Element>>> ys;
  detail::for_each_submultiset(cy, [&](detail::Counts const& c, std::uint32_t len) {
    if (len >= 1 && len < y.length) {
      ys[len].emplace_back(c, detail::product_of(m, t, c));
    }
  });

  bool splits = false;
  detail::for_each_submultiset(cx, [&](detail::Counts const& c, std::uint32_t len) {
    if (splits || len < 1 || len >= x.length) {
      return;
    }
    auto it = ys.find(len);
    if (it == ys.end()) {
      return;
    }
    auto px = detail::product_of(m, t, c);
    for (auto const& [cy1, py] : it->second) {
      if (!(px == py)) {
        continue;
      }
      auto rx = detail::product_of(m, t, detail::minus(cx, c));
      auto ry = detail::product_of(m, t, detail::minus(cy, cy1));
      if (rx == ry) {
        splits = true;
        return;
      }
    }
  });
  return !splits;
}

struct RelationEnumeration {
  std::int64_t length_bound = 0;
  std::int64_t weight_bound = 0;
  // The weight bound realizes every factorization of length <= length_bound
  // (the atom set is finite); otherwise it is a user-supplied truncation.
  bool complete = true;
  std::vector<RelationPair> pairs;
  std::vector<BudgetOverflow> overflows;
};

namespace detail {

inline std::int64_t relation_weight_bound(Model const& m, std::int64_t length_bound,
                                          std::optional<std::int64_t> const& given,
                                          bool& complete) {
  if (auto atoms = m.atoms()) {
    std::int64_t w = 0;
    for (auto const& u : *atoms) {
      w = std::max(w, weight(u));
    }
    complete = true;
    return w * length_bound;
  }
  if (!given) {
    throw Error("this model has infinitely many atoms; give a weight bound");
  }
  complete = false;
  return *given;
}

template <typename F>
RelationEnumeration scan_relations(Model const& m, std::int64_t length_bound,
                                   std::optional<std::int64_t> const& weight_bound,
                                   RunOptions const& opt, F&& keep) {
  RelationEnumeration out;
  out.length_bound = length_bound;
  out.weight_bound =
      relation_weight_bound(m, length_bound, weight_bound, out.complete);
  auto elems = m.elements_up_to(out.weight_bound);
  auto results = parallel_map(
      elems.size(), opt.jobs,
      [&](std::size_t i) -> std::pair<std::vector<RelationPair>, std::optional<BudgetOverflow>> {
        std::vector<RelationPair> found;
        try {
          auto fs = factorizations(m, elems[i], {opt.budget});
          for (auto const& [k, range] : fs.by_length) {
            if (static_cast<std::int64_t>(k) > length_bound) {
              break;
            }
            auto fib = fs.fiber(k);
            for (auto const& x : fib) {
              for (auto const& y : fib) {
                if (keep(fs, x, y)) {
                  found.push_back(RelationPair{elems[i], to_multiset(*fs.table, x),
                                               to_multiset(*fs.table, y), true});
                }
              }
            }
          }
          return {std::move(found), std::nullopt};
        } catch (BudgetExceeded const& e) {
          return {{}, BudgetOverflow{elems[i], e.limit()}};
        }
      });
  for (auto& [pairs, overflow] : results) {
    for (auto& p : pairs) {
      out.pairs.push_back(std::move(p));
    }
    if (overflow) {
      out.overflows.push_back(*overflow);
    }
  }
  return out;
}

}  // namespace detail

// All (x, y) with x, y in Z(a) and |x| = |y| <= length_bound, over the
// elements a needed to realize every such factorization.
inline RelationEnumeration enumerate_equal_length_relations(
    Model const& m, std::int64_t length_bound,
    std::optional<std::int64_t> weight_bound = std::nullopt,
    RunOptions const& opt = {}) {
  return detail::scan_relations(
      m, length_bound, weight_bound, opt,
      [](FactorSet const&, Factorization const&, Factorization const&) {
        return true;
      });
}

// The atoms (x, y) of the equal-length relation monoid with x != y and
// |x| <= length_bound. The diagonal atoms (u, u), u an atom of H, are left
// out.
inline RelationEnumeration relation_atoms(
    Model const& m, std::int64_t length_bound,
    std::optional<std::int64_t> weight_bound = std::nullopt,
    RunOptions const& opt = {}) {
  return detail::scan_relations(
      m, length_bound, weight_bound, opt,
      [&m](FactorSet const& fs, Factorization const& x, Factorization const& y) {
        return !(x == y) && is_relation_atom(m, fs, x, y);
      });
}

}  // namespace factorlab
