#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "factorlab/descriptor.hpp"
#include "factorlab/element.hpp"
#include "factorlab/error.hpp"

namespace factorlab {

enum class ModelKind { numerical, affine, fp_value, sumset, product };

// A concrete reduced, atomic, unit-cancellative monoid. Instances are
// immutable from the caller's point of view; internal memo tables are
// guarded so that a model can be shared between threads.
class Model {
 public:
  virtual ~Model() = default;

  virtual ModelKind kind() const = 0;
  virtual Element identity() const = 0;

  // Checks the raw shape and returns the canonical form. Throws ShapeMismatch.
  virtual Element canonical(Element const& raw) const = 0;

  // Membership of a raw candidate. Throws ShapeMismatch.
  virtual bool contains(Element const& raw) const = 0;

  virtual Element multiply(Element const& a, Element const& b) const = 0;

  virtual bool is_atom(Element const& e) const = 0;

  // The atoms u with u | a, in global atom order. Throws NotAMember.
  virtual std::vector<Element> atoms_dividing(Element const& a) const = 0;

  // Every member of weight <= bound, each once, by weight then lex order.
  virtual std::vector<Element> elements_up_to(std::int64_t bound) const = 0;

  virtual bool cancellative() const = 0;

  // The full atom set when it is finite.
  virtual std::optional<std::vector<Element>> atoms() const = 0;

  Element power(Element const& a, std::int64_t n) const {
    Element out = identity();
    for (std::int64_t i = 0; i < n; ++i) {
      out = multiply(out, a);
    }
    return out;
  }

  void require_member(Element const& a) const {
    if (!contains(a)) {
      throw NotAMember(to_string(a) + " is not an element of the monoid");
    }
  }
};

class ClosureViolation : public Error {
 public:
  ClosureViolation(Vec a, Vec b, Vec sum)
      : Error("not closed under addition: " + to_string(Element(a)) + " + " +
              to_string(Element(b)) + " = " + to_string(Element(sum)) +
              " is not a member"),
        a_(std::move(a)),
        b_(std::move(b)),
        sum_(std::move(sum)) {}

  Vec const& first() const { return a_; }
  Vec const& second() const { return b_; }
  Vec const& sum() const { return sum_; }

 private:
  Vec a_, b_, sum_;
};

namespace detail {

inline bool leq(Vec const& a, Vec const& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) {
      return false;
    }
  }
  return true;
}

inline Vec sub(Vec a, Vec const& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] -= b[i];
  }
  return a;
}

inline Vec add(Vec a, Vec const& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] += b[i];
  }
  return a;
}

inline bool is_zero(Vec const& v) {
  return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
}

// Calls f(v) for every v with 0 <= v <= top, in lexicographic order.
template <typename F>
void for_each_in_box(Vec const& top, F&& f) {
  Vec v(top.size(), 0);
  while (true) {
    f(static_cast<Vec const&>(v));
    std::size_t i = v.size();
    while (i > 0) {
      --i;
      if (v[i] < top[i]) {
        ++v[i];
        std::fill(v.begin() + static_cast<std::ptrdiff_t>(i) + 1, v.end(), 0);
        break;
      }
      if (i == 0) {
        return;
      }
    }
    if (v.empty()) {
      return;
    }
  }
}

// Calls f(v) for every v in N_0^dim with coordinate sum <= bound.
template <typename F>
void for_each_with_weight_at_most(std::size_t dim, std::int64_t bound, F&& f) {
  Vec v(dim, 0);
  auto rec = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
    if (i == dim) {
      f(static_cast<Vec const&>(v));
      return;
    }
    for (std::int64_t x = 0; x <= left; ++x) {
      v[i] = x;
      self(self, i + 1, left - x);
    }
    v[i] = 0;
  };
  rec(rec, 0, bound);
}

inline void sort_canonical(std::vector<Element>& xs) {
  std::sort(xs.begin(), xs.end(),
            [](Element const& a, Element const& b) { return compare(a, b) < 0; });
}

}  // namespace detail

////////////////////////////////////////////////////////////////////////////
// Submonoids of (N_0^s, +): numerical, affine, finitely primary values
////////////////////////////////////////////////////////////////////////////

class VectorModel : public Model {
 public:
  explicit VectorModel(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }

  virtual bool contains_vec(Vec const& v) const = 0;

  Element identity() const override { return wrap(Vec(dim_, 0)); }

  Element canonical(Element const& raw) const override {
    return wrap(unwrap_checked(raw));
  }

  bool contains(Element const& raw) const override {
    return contains_vec(unwrap_checked(raw));
  }

  Element multiply(Element const& a, Element const& b) const override {
    return wrap(detail::add(unwrap(a), unwrap(b)));
  }

  bool is_atom(Element const& e) const override {
    return is_atom_vec(unwrap_checked(e));
  }

  bool cancellative() const override { return true; }

  // Atoms are tested by the absence of a splitting v = b + c into nonzero
  // members, scanning all b <= v.
  bool is_atom_vec(Vec const& v) const {
    if (detail::is_zero(v) || !contains_vec(v)) {
      return false;
    }
    {
      std::lock_guard lock(atom_mutex_);
      if (auto it = atom_memo_.find(v); it != atom_memo_.end()) {
        return it->second;
      }
    }
    bool atom = true;
    detail::for_each_in_box(v, [&](Vec const& b) {
      if (!atom || detail::is_zero(b) || b == v) {
        return;
      }
      if (contains_vec(b) && contains_vec(detail::sub(v, b))) {
        atom = false;
      }
    });
    std::lock_guard lock(atom_mutex_);
    atom_memo_.emplace(v, atom);
    return atom;
  }

  std::vector<Element> atoms_dividing(Element const& a) const override {
    Vec top = unwrap_checked(a);
    if (!contains_vec(top)) {
      throw NotAMember(to_string(a) + " is not an element of the monoid");
    }
    std::vector<Element> out;
    for (auto const& v : atom_candidates(top)) {
      if (detail::leq(v, top) && contains_vec(detail::sub(top, v)) &&
          is_atom_vec(v)) {
        out.push_back(wrap(v));
      }
    }
    detail::sort_canonical(out);
    return out;
  }

  std::vector<Element> elements_up_to(std::int64_t bound) const override {
    std::vector<Element> out;
    if (bound < 0) {
      return out;
    }
    detail::for_each_with_weight_at_most(dim_, bound, [&](Vec const& v) {
      if (contains_vec(v)) {
        out.push_back(wrap(v));
      }
    });
    detail::sort_canonical(out);
    return out;
  }

  virtual Element wrap(Vec v) const { return Element(std::move(v)); }

  virtual Vec unwrap(Element const& e) const { return e.vector(); }

  Vec unwrap_checked(Element const& raw) const {
    Vec v;
    if (dim_ == 1 && raw.is_number() && is_scalar()) {
      v = Vec{raw.number()};
    } else if (raw.is_vector() && !is_scalar()) {
      v = raw.vector();
    } else {
      throw ShapeMismatch("expected " + shape_name() + ", got " +
                          to_string(raw));
    }
    if (v.size() != dim_) {
      throw ShapeMismatch("expected a vector of length " +
                          std::to_string(dim_));
    }
    for (auto x : v) {
      if (x < 0) {
        throw ShapeMismatch("coordinates must be nonnegative");
      }
    }
    return v;
  }

 protected:
  virtual bool is_scalar() const { return false; }

  virtual std::string shape_name() const {
    return "a vector in N_0^" + std::to_string(dim_);
  }

  // Candidate atoms dividing `top`; defaults to the full box below `top`.
  virtual std::vector<Vec> atom_candidates(Vec const& top) const {
    std::vector<Vec> out;
    detail::for_each_in_box(top, [&](Vec const& v) {
      if (!detail::is_zero(v)) {
        out.push_back(v);
      }
    });
    return out;
  }

 private:
  std::size_t dim_;
  mutable std::mutex atom_mutex_;
  mutable std::unordered_map<Vec, bool, VecHash> atom_memo_;
};

// Affine monoid generated by finitely many vectors; membership by memoized
// search over generator sums.
class AffineModel : public VectorModel {
 public:
  AffineModel(std::size_t dim, std::vector<Vec> generators)
      : VectorModel(dim), generators_(std::move(generators)) {
    for (auto const& g : generators_) {
      if (is_atom_vec(g)) {
        atoms_.push_back(g);
      }
    }
    std::sort(atoms_.begin(), atoms_.end(), [this](Vec const& a, Vec const& b) {
      return compare(wrap(a), wrap(b)) < 0;
    });
  }

  ModelKind kind() const override { return ModelKind::affine; }

  bool contains_vec(Vec const& v) const override {
    std::lock_guard lock(mutex_);
    return reachable(v);
  }

  std::optional<std::vector<Element>> atoms() const override {
    std::vector<Element> out;
    for (auto const& a : atoms_) {
      out.push_back(wrap(a));
    }
    return out;
  }

  std::vector<Vec> const& generators() const { return generators_; }

 protected:
  std::vector<Vec> atom_candidates(Vec const&) const override { return atoms_; }

 private:
  bool reachable(Vec const& v) const {
    if (detail::is_zero(v)) {
      return true;
    }
    if (auto it = memo_.find(v); it != memo_.end()) {
      return it->second;
    }
    bool ok = false;
    for (auto const& g : generators_) {
      if (detail::leq(g, v) && reachable(detail::sub(v, g))) {
        ok = true;
        break;
      }
    }
    memo_.emplace(v, ok);
    return ok;
  }

  std::vector<Vec> generators_;
  std::vector<Vec> atoms_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Vec, bool, VecHash> memo_;
};

// Numerical monoid <g_1, ..., g_n>; elements are plain integers.
class NumericalModel : public VectorModel {
 public:
  explicit NumericalModel(std::vector<std::int64_t> generators)
      : VectorModel(1), generators_(std::move(generators)) {
    for (auto g : generators_) {
      if (is_atom_vec(Vec{g})) {
        atoms_.push_back(g);
      }
    }
    std::sort(atoms_.begin(), atoms_.end());
  }

  ModelKind kind() const override { return ModelKind::numerical; }

  bool contains_vec(Vec const& v) const override {
    auto n = v[0];
    if (n < 0) {
      return false;
    }
    std::lock_guard lock(mutex_);
    while (static_cast<std::int64_t>(reach_.size()) <= n) {
      auto m = static_cast<std::int64_t>(reach_.size());
      bool ok = m == 0;
      for (auto g : generators_) {
        if (g <= m && reach_[static_cast<std::size_t>(m - g)]) {
          ok = true;
          break;
        }
      }
      reach_.push_back(ok ? 1 : 0);
    }
    return reach_[static_cast<std::size_t>(n)] != 0;
  }

  Element wrap(Vec v) const override { return Element(v.at(0)); }
  Vec unwrap(Element const& e) const override { return Vec{e.number()}; }

  std::optional<std::vector<Element>> atoms() const override {
    std::vector<Element> out;
    for (auto a : atoms_) {
      out.emplace_back(a);
    }
    return out;
  }

  std::vector<std::int64_t> const& generators() const { return generators_; }

 protected:
  bool is_scalar() const override { return true; }
  std::string shape_name() const override { return "a natural number"; }

  std::vector<Vec> atom_candidates(Vec const&) const override {
    std::vector<Vec> out;
    for (auto a : atoms_) {
      out.push_back(Vec{a});
    }
    return out;
  }

 private:
  std::vector<std::int64_t> generators_;
  std::vector<std::int64_t> atoms_;
  mutable std::mutex mutex_;
  mutable std::vector<char> reach_;
};

// Value semigroup of a finitely primary monoid of rank s and exponent alpha
// with trivial unit part.
class FpValueModel : public VectorModel {
 public:
  explicit FpValueModel(FpValueDescriptor d)
      : VectorModel(static_cast<std::size_t>(d.rank)), desc_(std::move(d)) {}

  ModelKind kind() const override { return ModelKind::fp_value; }

  bool contains_vec(Vec const& v) const override {
    if (detail::is_zero(v)) {
      return true;
    }
    bool high = true;
    for (auto x : v) {
      if (x < 1) {
        return false;
      }
      high = high && x >= desc_.exponent;
    }
    if (high) {
      return true;
    }
    return std::any_of(desc_.exceptional.begin(), desc_.exceptional.end(),
                       [&v](Pattern const& p) { return p.matches(v); });
  }

  std::optional<std::vector<Element>> atoms() const override {
    // rank one with finitely many exceptional points has finitely many
    // atoms, but the general case does not; callers treat this as infinite.
    return std::nullopt;
  }

  std::int64_t exponent() const { return desc_.exponent; }
  std::int64_t rank() const { return desc_.rank; }
  FpValueDescriptor const& descriptor() const { return desc_; }

 private:
  FpValueDescriptor desc_;
};

////////////////////////////////////////////////////////////////////////////
// Monoid of finite subsets of N_0 containing 0 under set addition
////////////////////////////////////////////////////////////////////////////

class SumsetModel : public Model {
 public:
  explicit SumsetModel(std::vector<SumSet> generators)
      : generators_(std::move(generators)) {
    // A generator is reducible iff it is h + c for a generator h of smaller
    // maximum and a nonidentity member c; max is additive and positive.
    for (auto const& g : generators_) {
      bool reducible = false;
      for (auto const& h : generators_) {
        if (h.max() >= g.max() || !sumset_subset(h, g)) {
          continue;
        }
        for (auto const& c : level(g.max() - h.max())) {
          if (sumset_add(h, c) == g) {
            reducible = true;
            break;
          }
        }
        if (reducible) {
          break;
        }
      }
      if (!reducible) {
        atoms_.push_back(g);
      }
    }
    std::sort(atoms_.begin(), atoms_.end(), [](SumSet const& a, SumSet const& b) {
      return compare(Element(a), Element(b)) < 0;
    });
  }

  ModelKind kind() const override { return ModelKind::sumset; }

  Element identity() const override { return Element(SumSet{{0}}); }

  Element canonical(Element const& raw) const override {
    if (!raw.is_set()) {
      throw ShapeMismatch("expected a finite set of naturals, got " +
                          to_string(raw));
    }
    for (auto x : raw.set().items) {
      if (x < 0) {
        throw ShapeMismatch("sets must consist of naturals");
      }
    }
    return Element(make_sumset(raw.set().items));
  }

  bool contains(Element const& raw) const override {
    auto s = canonical(raw).set();
    if (s.items.empty() || s.items.front() != 0) {
      return false;
    }
    auto const& lv = level(s.max());
    return std::binary_search(lv.begin(), lv.end(), s, set_less);
  }

  Element multiply(Element const& a, Element const& b) const override {
    return Element(sumset_add(a.set(), b.set()));
  }

  bool is_atom(Element const& e) const override {
    auto s = canonical(e).set();
    return std::find(atoms_.begin(), atoms_.end(), s) != atoms_.end();
  }

  // Divisors are found by quotient existence: u | a iff u + c = a for some
  // member c of weight max(a) - max(u).
  std::vector<Element> atoms_dividing(Element const& a) const override {
    if (!contains(a)) {
      throw NotAMember(to_string(a) + " is not an element of the monoid");
    }
    auto const& s = a.set();
    std::vector<Element> out;
    for (auto const& u : atoms_) {
      if (u.max() > s.max() || !sumset_subset(u, s)) {
        continue;
      }
      for (auto const& c : level(s.max() - u.max())) {
        if (sumset_subset(c, s) && sumset_add(u, c) == s) {
          out.emplace_back(u);
          break;
        }
      }
    }
    return out;
  }

  std::vector<Element> elements_up_to(std::int64_t bound) const override {
    std::vector<Element> out;
    for (std::int64_t w = 0; w <= bound; ++w) {
      for (auto const& s : level(w)) {
        out.emplace_back(s);
      }
    }
    return out;
  }

  bool cancellative() const override { return false; }

  std::optional<std::vector<Element>> atoms() const override {
    std::vector<Element> out;
    for (auto const& a : atoms_) {
      out.emplace_back(a);
    }
    return out;
  }

  std::vector<SumSet> const& atom_sets() const { return atoms_; }

  // All members of weight exactly w, sorted lexicographically.
  std::vector<SumSet> const& level(std::int64_t w) const {
    std::lock_guard lock(mutex_);
    while (static_cast<std::int64_t>(levels_.size()) <= w) {
      auto m = static_cast<std::int64_t>(levels_.size());
      std::vector<SumSet> lv;
      if (m == 0) {
        lv.push_back(SumSet{{0}});
      } else {
        for (auto const& g : generators_) {
          if (g.max() > m) {
            continue;
          }
          for (auto const& e : levels_[static_cast<std::size_t>(m - g.max())]) {
            lv.push_back(sumset_add(g, e));
          }
        }
        std::sort(lv.begin(), lv.end(), set_less);
        lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
      }
      levels_.push_back(std::move(lv));
    }
    return levels_[static_cast<std::size_t>(w)];
  }

 private:
  static bool set_less(SumSet const& a, SumSet const& b) {
    return a.items < b.items;
  }

  std::vector<SumSet> generators_;
  std::vector<SumSet> atoms_;
  mutable std::mutex mutex_;
  mutable std::deque<std::vector<SumSet>> levels_;
};

////////////////////////////////////////////////////////////////////////////
// H_1 x ... x H_n x N_0^f
////////////////////////////////////////////////////////////////////////////

class ProductModel : public Model {
 public:
  ProductModel(std::vector<std::unique_ptr<Model>> factors, std::size_t free_rank)
      : factors_(std::move(factors)), free_rank_(free_rank) {}

  ModelKind kind() const override { return ModelKind::product; }

  std::size_t factor_count() const { return factors_.size(); }
  std::size_t free_rank() const { return free_rank_; }
  Model const& factor(std::size_t i) const { return *factors_[i]; }

  Element identity() const override {
    Tuple t;
    for (auto const& f : factors_) {
      t.factors.push_back(f->identity());
    }
    t.free.assign(free_rank_, 0);
    return Element(std::move(t));
  }

  Element canonical(Element const& raw) const override {
    if (!raw.is_tuple() || raw.tuple().factors.size() != factors_.size() ||
        raw.tuple().free.size() != free_rank_) {
      throw ShapeMismatch("expected a tuple with " +
                          std::to_string(factors_.size()) +
                          " components and " + std::to_string(free_rank_) +
                          " free exponents");
    }
    Tuple t;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      t.factors.push_back(factors_[i]->canonical(raw.tuple().factors[i]));
    }
    for (auto x : raw.tuple().free) {
      if (x < 0) {
        throw ShapeMismatch("free exponents must be nonnegative");
      }
    }
    t.free = raw.tuple().free;
    return Element(std::move(t));
  }

  bool contains(Element const& raw) const override {
    auto e = canonical(raw);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (!factors_[i]->contains(e.tuple().factors[i])) {
        return false;
      }
    }
    return true;
  }

  Element multiply(Element const& a, Element const& b) const override {
    Tuple t;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      t.factors.push_back(
          factors_[i]->multiply(a.tuple().factors[i], b.tuple().factors[i]));
    }
    t.free = detail::add(a.tuple().free, b.tuple().free);
    return Element(std::move(t));
  }

  bool is_atom(Element const& raw) const override {
    auto e = canonical(raw);
    auto const& t = e.tuple();
    std::size_t nontrivial = 0;
    std::int64_t free_sum = 0;
    bool atom_part = true;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (!(t.factors[i] == factors_[i]->identity())) {
        ++nontrivial;
        atom_part = atom_part && factors_[i]->is_atom(t.factors[i]);
      }
    }
    for (auto x : t.free) {
      free_sum += x;
    }
    if (free_sum == 1) {
      return nontrivial == 0;
    }
    return free_sum == 0 && nontrivial == 1 && atom_part;
  }

  // Embeds a factor element as a tuple with identities elsewhere.
  Element embed(std::size_t j, Element const& u) const {
    auto e = identity();
    std::get<Tuple>(e.value).factors[j] = u;
    return e;
  }

  Element free_atom(std::size_t i) const {
    auto e = identity();
    std::get<Tuple>(e.value).free[i] = 1;
    return e;
  }

  std::vector<Element> atoms_dividing(Element const& a) const override {
    require_member(a);
    std::vector<Element> out;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      for (auto const& u : factors_[j]->atoms_dividing(a.tuple().factors[j])) {
        out.push_back(embed(j, u));
      }
    }
    for (std::size_t i = 0; i < free_rank_; ++i) {
      if (a.tuple().free[i] > 0) {
        out.push_back(free_atom(i));
      }
    }
    detail::sort_canonical(out);
    return out;
  }

  std::vector<Element> elements_up_to(std::int64_t bound) const override {
    std::vector<std::vector<Element>> parts;
    for (auto const& f : factors_) {
      parts.push_back(f->elements_up_to(bound));
    }
    std::vector<Element> out;
    Tuple cur;
    cur.factors.resize(factors_.size());
    auto rec = [&](auto&& self, std::size_t j, std::int64_t left) -> void {
      if (j == factors_.size()) {
        detail::for_each_with_weight_at_most(free_rank_, left, [&](Vec const& v) {
          Tuple t = cur;
          t.free = v;
          out.emplace_back(std::move(t));
        });
        return;
      }
      for (auto const& e : parts[j]) {
        auto w = weight(e);
        if (w > left) {
          break;
        }
        cur.factors[j] = e;
        self(self, j + 1, left - w);
      }
    };
    rec(rec, 0, bound);
    detail::sort_canonical(out);
    return out;
  }

  bool cancellative() const override {
    return std::all_of(factors_.begin(), factors_.end(),
                       [](auto const& f) { return f->cancellative(); });
  }

  std::optional<std::vector<Element>> atoms() const override {
    std::vector<Element> out;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      auto fa = factors_[j]->atoms();
      if (!fa) {
        return std::nullopt;
      }
      for (auto const& u : *fa) {
        out.push_back(embed(j, u));
      }
    }
    for (std::size_t i = 0; i < free_rank_; ++i) {
      out.push_back(free_atom(i));
    }
    detail::sort_canonical(out);
    return out;
  }

 private:
  std::vector<std::unique_ptr<Model>> factors_;
  std::size_t free_rank_;
};

////////////////////////////////////////////////////////////////////////////
// Construction and validation
////////////////////////////////////////////////////////////////////////////

namespace detail {

inline std::unique_ptr<Model> build(NumericalDescriptor const& d) {
  return std::make_unique<NumericalModel>(d.generators);
}
inline std::unique_ptr<Model> build(AffineDescriptor const& d) {
  return std::make_unique<AffineModel>(static_cast<std::size_t>(d.dim),
                                       d.generators);
}
inline std::unique_ptr<Model> build(FpValueDescriptor const& d) {
  return std::make_unique<FpValueModel>(d);
}
inline std::unique_ptr<Model> build(SumsetDescriptor const& d) {
  return std::make_unique<SumsetModel>(d.generators);
}
inline std::unique_ptr<Model> build(ProductDescriptor const& d) {
  std::vector<std::unique_ptr<Model>> fs;
  for (auto const& f : d.factors) {
    fs.push_back(std::visit([](auto const& x) { return build(x); }, f));
  }
  return std::make_unique<ProductModel>(std::move(fs),
                                        static_cast<std::size_t>(d.free_rank));
}

}  // namespace detail

// Builds the model after checking structural invariants.
inline std::unique_ptr<Model> make_model(MonoidDescriptor const& d) {
  check_structure(d);
  return std::visit([](auto const& x) { return detail::build(x); }, d);
}

struct ValidationReport {
  std::string model;
  std::int64_t verified_bound = 0;
  bool closure_checked = false;
  std::size_t members_checked = 0;
  std::optional<Vec> smallest;  // componentwise smallest nonzero value
  bool cancellative = true;
  bool strongly_ring_like_candidate = false;
  std::vector<ValidationReport> factors;
};

namespace detail {

inline std::optional<Vec> smallest_value(VectorModel const& m,
                                         std::int64_t bound) {
  Vec top(m.dim(), bound);
  std::optional<Vec> low;
  for_each_in_box(top, [&](Vec const& v) {
    if (is_zero(v) || !m.contains_vec(v)) {
      return;
    }
    if (!low) {
      low = v;
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) {
        (*low)[i] = std::min((*low)[i], v[i]);
      }
    }
  });
  if (low && m.contains_vec(*low)) {
    return low;
  }
  return std::nullopt;
}

inline std::int64_t max_generator_weight(BaseDescriptor const& d) {
  std::int64_t w = 0;
  if (auto const* n = std::get_if<NumericalDescriptor>(&d)) {
    for (auto g : n->generators) w = std::max(w, g);
  } else if (auto const* a = std::get_if<AffineDescriptor>(&d)) {
    for (auto const& g : a->generators) w = std::max(w, weight(Element(g)));
  } else if (auto const* s = std::get_if<SumsetDescriptor>(&d)) {
    for (auto const& g : s->generators) w = std::max(w, g.max());
  }
  return w;
}

inline ValidationReport validate_base(BaseDescriptor const& d,
                                      std::int64_t bound) {
  ValidationReport r;
  r.model = model_name(to_descriptor(d));
  r.verified_bound = bound;
  auto model = make_model(to_descriptor(d));
  r.cancellative = model->cancellative();
  if (auto const* fp = std::get_if<FpValueDescriptor>(&d)) {
    if (bound < 2 * fp->exponent) {
      throw Error("validation bound must be at least twice the exponent");
    }
    auto const& vm = static_cast<FpValueModel const&>(*model);
    std::vector<Vec> members;
    for_each_in_box(Vec(vm.dim(), bound), [&](Vec const& v) {
      if (vm.contains_vec(v)) {
        members.push_back(v);
      }
    });
    std::sort(members.begin(), members.end(), [](Vec const& a, Vec const& b) {
      return compare(Element(a), Element(b)) < 0;
    });
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i; j < members.size(); ++j) {
        auto s = add(members[i], members[j]);
        bool high = std::all_of(s.begin(), s.end(),
                                [&](auto x) { return x >= fp->exponent; });
        if (!high && !vm.contains_vec(s)) {
          throw ClosureViolation(members[i], members[j], s);
        }
      }
    }
    r.closure_checked = true;
    r.members_checked = members.size();
    r.smallest = smallest_value(vm, bound);
    r.strongly_ring_like_candidate = r.smallest.has_value();
  } else {
    if (bound < max_generator_weight(d)) {
      throw Error("validation bound must be at least the largest generator weight");
    }
    if (auto const* vm = dynamic_cast<VectorModel const*>(model.get())) {
      r.smallest = smallest_value(*vm, bound);
    }
  }
  return r;
}

}  // namespace detail

// Structural checks, bounded closure verification for fp-value models, the
// smallest nonzero value (if any) and classification flags.
inline ValidationReport validate(MonoidDescriptor const& d, std::int64_t bound) {
  check_structure(d);
  if (auto const* p = std::get_if<ProductDescriptor>(&d)) {
    ValidationReport r;
    r.model = "product";
    r.verified_bound = bound;
    for (auto const& f : p->factors) {
      r.factors.push_back(detail::validate_base(f, bound));
      r.cancellative = r.cancellative && r.factors.back().cancellative;
    }
    return r;
  }
  return std::visit(
      [bound](auto const& x) -> ValidationReport {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ProductDescriptor>) {
          return {};
        } else {
          return detail::validate_base(BaseDescriptor{x}, bound);
        }
      },
      d);
}

// Smallest bound accepted by validate().
inline std::int64_t minimal_validation_bound(MonoidDescriptor const& d) {
  auto one = [](BaseDescriptor const& b) -> std::int64_t {
    if (auto const* fp = std::get_if<FpValueDescriptor>(&b)) {
      return 2 * fp->exponent;
    }
    return detail::max_generator_weight(b);
  };
  if (auto const* p = std::get_if<ProductDescriptor>(&d)) {
    std::int64_t w = 0;
    for (auto const& f : p->factors) {
      w = std::max(w, one(f));
    }
    return w;
  }
  return std::visit(
      [&](auto const& x) -> std::int64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ProductDescriptor>) {
          return 0;
        } else {
          return one(BaseDescriptor{x});
        }
      },
      d);
}

}  // namespace factorlab
