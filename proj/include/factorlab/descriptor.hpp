#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "factorlab/element.hpp"
#include "factorlab/error.hpp"

namespace factorlab {

// One coordinate constraint of an exceptional pattern.
struct Bound {
  enum class Kind { exact, at_least };
  Kind kind = Kind::exact;
  std::int64_t n = 1;

  bool admits(std::int64_t v) const {
    return kind == Kind::exact ? v == n : v >= n;
  }
  static Bound exact(std::int64_t n) { return {Kind::exact, n}; }
  static Bound at_least(std::int64_t n) { return {Kind::at_least, n}; }
  friend bool operator==(Bound const&, Bound const&) = default;
};

// A point or axis-parallel ray (or box corner) in N^s. Describes part of the
// exceptional low region of a finitely primary value semigroup.
struct Pattern {
  std::vector<Bound> entries;

  bool matches(Vec const& v) const {
    if (v.size() != entries.size()) {
      return false;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!entries[i].admits(v[i])) {
        return false;
      }
    }
    return true;
  }
  friend bool operator==(Pattern const&, Pattern const&) = default;
};

struct NumericalDescriptor {
  std::vector<std::int64_t> generators;
};

struct AffineDescriptor {
  std::int64_t dim = 0;
  std::vector<Vec> generators;
};

// H = {0} u { v in N^s : v >= alpha*1, or v matches an exceptional pattern }.
struct FpValueDescriptor {
  std::int64_t rank = 0;
  std::int64_t exponent = 0;
  std::vector<Pattern> exceptional;
};

struct SumsetDescriptor {
  std::vector<SumSet> generators;
};

using BaseDescriptor = std::variant<NumericalDescriptor, AffineDescriptor,
                                    FpValueDescriptor, SumsetDescriptor>;

struct ProductDescriptor {
  std::vector<BaseDescriptor> factors;
  std::int64_t free_rank = 0;
};

using MonoidDescriptor =
    std::variant<NumericalDescriptor, AffineDescriptor, FpValueDescriptor,
                 SumsetDescriptor, ProductDescriptor>;

inline MonoidDescriptor to_descriptor(BaseDescriptor const& b) {
  return std::visit([](auto const& d) -> MonoidDescriptor { return d; }, b);
}

inline char const* model_name(MonoidDescriptor const& d) {
  static constexpr char const* names[] = {"numerical", "affine", "fp-value",
                                          "sumset", "product"};
  return names[d.index()];
}

////////////////////////////////////////////////////////////////////////////
// Structural checks
////////////////////////////////////////////////////////////////////////////

namespace detail {

[[noreturn]] inline void malformed(std::string const& msg) {
  throw MalformedDescriptor(msg);
}

inline void check(NumericalDescriptor const& d) {
  if (d.generators.empty()) {
    malformed("numerical: generators must be nonempty");
  }
  std::set<std::int64_t> seen;
  for (auto g : d.generators) {
    if (g <= 0) {
      malformed("numerical: generators must be positive");
    }
    if (!seen.insert(g).second) {
      malformed("numerical: duplicate generator " + std::to_string(g));
    }
  }
}

inline void check(AffineDescriptor const& d) {
  if (d.dim <= 0) {
    malformed("affine: dim must be positive");
  }
  if (d.generators.empty()) {
    malformed("affine: generators must be nonempty");
  }
  std::set<Vec> seen;
  for (auto const& g : d.generators) {
    if (static_cast<std::int64_t>(g.size()) != d.dim) {
      malformed("affine: generator of wrong dimension");
    }
    bool nonzero = false;
    for (auto x : g) {
      if (x < 0) {
        malformed("affine: generators must lie in N_0^s");
      }
      nonzero = nonzero || x > 0;
    }
    if (!nonzero) {
      malformed("affine: zero generator");
    }
    if (!seen.insert(g).second) {
      malformed("affine: duplicate generator");
    }
  }
}

inline void check(FpValueDescriptor const& d) {
  if (d.rank < 1 || d.rank > 3) {
    malformed("fp-value: rank must be 1, 2 or 3");
  }
  if (d.exponent < 1) {
    malformed("fp-value: exponent must be positive");
  }
  for (auto const& p : d.exceptional) {
    if (static_cast<std::int64_t>(p.entries.size()) != d.rank) {
      malformed("fp-value: pattern length differs from rank");
    }
    bool low_exact = false;
    for (auto const& b : p.entries) {
      if (b.n < 1) {
        malformed("fp-value: pattern entries must be >= 1");
      }
      low_exact = low_exact || (b.kind == Bound::Kind::exact && b.n < d.exponent);
    }
    if (!low_exact) {
      malformed("fp-value: pattern needs an exact entry below the exponent");
    }
  }
}

inline void check(SumsetDescriptor const& d) {
  if (d.generators.empty()) {
    malformed("sumset: generators must be nonempty");
  }
  std::set<std::vector<std::int64_t>> seen;
  for (auto const& g : d.generators) {
    if (!std::is_sorted(g.items.begin(), g.items.end()) ||
        std::adjacent_find(g.items.begin(), g.items.end()) != g.items.end()) {
      malformed("sumset: generator not in canonical sorted form");
    }
    if (g.items.empty() || g.items.front() != 0) {
      malformed("sumset: every generator must contain 0");
    }
    if (g.items.size() == 1) {
      malformed("sumset: generator {0} is the identity");
    }
    if (!seen.insert(g.items).second) {
      malformed("sumset: duplicate generator");
    }
  }
}

inline void check(ProductDescriptor const& d) {
  if (d.factors.empty()) {
    malformed("product: factors must be nonempty");
  }
  if (d.free_rank < 0) {
    malformed("product: freeRank must be >= 0");
  }
  for (auto const& f : d.factors) {
    std::visit([](auto const& x) { check(x); }, f);
  }
}

}  // namespace detail

// Throws MalformedDescriptor on the first violated structural invariant.
inline void check_structure(MonoidDescriptor const& d) {
  std::visit([](auto const& x) { detail::check(x); }, d);
}

}  // namespace factorlab
