#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace factorlab {

using Vec = std::vector<std::int64_t>;

// A finite subset of N_0, kept sorted and duplicate-free.
struct SumSet {
  std::vector<std::int64_t> items;

  std::int64_t max() const { return items.empty() ? 0 : items.back(); }
  bool contains(std::int64_t x) const {
    return std::binary_search(items.begin(), items.end(), x);
  }
  friend bool operator==(SumSet const&, SumSet const&) = default;
};

struct Element;

// Element of a product model: one entry per base factor plus the exponent
// vector of the free abelian part.
struct Tuple {
  std::vector<Element> factors;
  Vec free;
};

// Canonical form of a monoid element.
//   Numerical         -> std::int64_t
//   Affine / fp-value -> Vec (fixed length)
//   Sumset            -> SumSet
//   Product           -> Tuple
struct Element {
  std::variant<std::int64_t, Vec, SumSet, Tuple> value;

  Element() : value(std::int64_t{0}) {}
  Element(std::int64_t n) : value(n) {}  // NOLINT
  Element(Vec v) : value(std::move(v)) {}  // NOLINT
  Element(SumSet s) : value(std::move(s)) {}  // NOLINT
  Element(Tuple t) : value(std::move(t)) {}  // NOLINT

  bool is_number() const { return value.index() == 0; }
  bool is_vector() const { return value.index() == 1; }
  bool is_set() const { return value.index() == 2; }
  bool is_tuple() const { return value.index() == 3; }

  std::int64_t number() const { return std::get<0>(value); }
  Vec const& vector() const { return std::get<1>(value); }
  SumSet const& set() const { return std::get<2>(value); }
  Tuple const& tuple() const { return std::get<3>(value); }
};

////////////////////////////////////////////////////////////////////////////
// Ordering, equality, weight
////////////////////////////////////////////////////////////////////////////

namespace detail {

inline int compare_ints(std::vector<std::int64_t> const& a,
                        std::vector<std::int64_t> const& b) {
  auto n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) {
      return a[i] < b[i] ? -1 : 1;
    }
  }
  if (a.size() == b.size()) {
    return 0;
  }
  return a.size() < b.size() ? -1 : 1;
}

}  // namespace detail

// Lexicographic comparison of canonical forms (no weight involved).
inline int compare_lex(Element const& a, Element const& b) {
  if (a.value.index() != b.value.index()) {
    return a.value.index() < b.value.index() ? -1 : 1;
  }
  switch (a.value.index()) {
    case 0:
      return a.number() == b.number() ? 0 : (a.number() < b.number() ? -1 : 1);
    case 1:
      return detail::compare_ints(a.vector(), b.vector());
    case 2:
      return detail::compare_ints(a.set().items, b.set().items);
    default: {
      auto const& x = a.tuple();
      auto const& y = b.tuple();
      auto n = std::min(x.factors.size(), y.factors.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare_lex(x.factors[i], y.factors[i]); c != 0) {
          return c;
        }
      }
      if (x.factors.size() != y.factors.size()) {
        return x.factors.size() < y.factors.size() ? -1 : 1;
      }
      return detail::compare_ints(x.free, y.free);
    }
  }
}

inline bool operator==(Element const& a, Element const& b) {
  return compare_lex(a, b) == 0;
}

// The additive termination measure: value for numbers, coordinate sum for
// vectors, maximum for sumsets, and the sum over components for tuples.
inline std::int64_t weight(Element const& e) {
  switch (e.value.index()) {
    case 0:
      return e.number();
    case 1:
      return std::accumulate(e.vector().begin(), e.vector().end(),
                             std::int64_t{0});
    case 2:
      return e.set().max();
    default: {
      std::int64_t w = 0;
      for (auto const& f : e.tuple().factors) {
        w += weight(f);
      }
      for (auto x : e.tuple().free) {
        w += x;
      }
      return w;
    }
  }
}

// Global atom order: by weight, then lexicographically.
inline int compare(Element const& a, Element const& b) {
  auto wa = weight(a);
  auto wb = weight(b);
  if (wa != wb) {
    return wa < wb ? -1 : 1;
  }
  return compare_lex(a, b);
}

inline bool operator<(Element const& a, Element const& b) {
  return compare(a, b) < 0;
}

struct ElementHash {
  std::size_t operator()(Element const& e) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(e.value.index());
    auto mix = [&h](std::int64_t x) {
      h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    };
    switch (e.value.index()) {
      case 0:
        mix(e.number());
        break;
      case 1:
        for (auto x : e.vector()) mix(x);
        break;
      case 2:
        for (auto x : e.set().items) mix(x);
        break;
      default:
        for (auto const& f : e.tuple().factors) mix(static_cast<std::int64_t>(operator()(f)));
        mix(-1);
        for (auto x : e.tuple().free) mix(x);
    }
    return h;
  }
};

struct VecHash {
  std::size_t operator()(Vec const& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v) {
      h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

////////////////////////////////////////////////////////////////////////////
// Sumset arithmetic
////////////////////////////////////////////////////////////////////////////

inline SumSet make_sumset(std::vector<std::int64_t> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return SumSet{std::move(items)};
}

// A + B = {a + b : a in A, b in B}.
inline SumSet sumset_add(SumSet const& a, SumSet const& b) {
  if (a.items.empty() || b.items.empty()) {
    return SumSet{};
  }
  auto top = static_cast<std::size_t>(a.max() + b.max());
  std::vector<char> mark(top + 1, 0);
  for (auto x : a.items) {
    for (auto y : b.items) {
      mark[static_cast<std::size_t>(x + y)] = 1;
    }
  }
  SumSet out;
  for (std::size_t i = 0; i <= top; ++i) {
    if (mark[i]) {
      out.items.push_back(static_cast<std::int64_t>(i));
    }
  }
  return out;
}

// k-fold sumset kA, with 0A = {0}.
inline SumSet sumset_multiple(SumSet const& a, std::int64_t k) {
  SumSet out{{0}};
  for (std::int64_t i = 0; i < k; ++i) {
    out = sumset_add(out, a);
  }
  return out;
}

inline bool sumset_subset(SumSet const& a, SumSet const& b) {
  return std::includes(b.items.begin(), b.items.end(), a.items.begin(),
                       a.items.end());
}

inline bool is_interval(SumSet const& a) {
  return !a.items.empty() &&
         a.items.back() - a.items.front() + 1 ==
             static_cast<std::int64_t>(a.items.size());
}

inline SumSet interval(std::int64_t lo, std::int64_t hi) {
  SumSet out;
  for (auto i = lo; i <= hi; ++i) {
    out.items.push_back(i);
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////
// Text form (also the CLI literal syntax)
////////////////////////////////////////////////////////////////////////////

inline void write_ints(std::ostream& os, std::vector<std::int64_t> const& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << (i ? "," : "") << v[i];
  }
}

inline std::ostream& operator<<(std::ostream& os, Element const& e) {
  switch (e.value.index()) {
    case 0:
      os << e.number();
      break;
    case 1:
      os << '(';
      write_ints(os, e.vector());
      os << ')';
      break;
    case 2:
      os << '{';
      write_ints(os, e.set().items);
      os << '}';
      break;
    default: {
      os << '[';
      auto const& t = e.tuple();
      for (std::size_t i = 0; i < t.factors.size(); ++i) {
        os << (i ? ";" : "") << t.factors[i];
      }
      if (!t.free.empty()) {
        os << ";free:";
        write_ints(os, t.free);
      }
      os << ']';
    }
  }
  return os;
}

inline std::string to_string(Element const& e) {
  std::ostringstream os;
  os << e;
  return os.str();
}

}  // namespace factorlab
