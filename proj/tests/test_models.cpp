#include <random>

#include "catch_amalgamated.hpp"
#include "factorlab/models.hpp"
#include "oracle.hpp"
#include "samples.hpp"

using namespace factorlab;

TEST_CASE("fp-value with empty exceptional region validates") {
  auto r = validate(samples::fp2(), 6);
  CHECK(r.closure_checked);
  REQUIRE(r.smallest);
  CHECK(*r.smallest == Vec{1, 1});
  CHECK(r.cancellative);
  CHECK(r.strongly_ring_like_candidate);
  CHECK(r.verified_bound == 6);
}

TEST_CASE("sumset monoid validates as non-cancellative") {
  auto r = validate(samples::sumset(), 3);
  CHECK_FALSE(r.cancellative);
  CHECK(r.model == "sumset");
}

TEST_CASE("closure violation reports the first failing pair") {
  FpValueDescriptor d{2, 3, {Pattern{{Bound::exact(1), Bound::at_least(1)}}}};
  try {
    validate(d, 6);
    FAIL("expected a closure violation");
  } catch (ClosureViolation const& e) {
    CHECK(e.first() == Vec{1, 1});
    CHECK(e.second() == Vec{1, 1});
    CHECK(e.sum() == Vec{2, 2});
  }
}

TEST_CASE("validation bound preconditions") {
  CHECK_THROWS_AS(validate(samples::fp2_rays(), 3), Error);
  CHECK_THROWS_AS(validate(NumericalDescriptor{{2, 5}}, 4), Error);
  CHECK_NOTHROW(validate(NumericalDescriptor{{2, 5}}, 5));
  CHECK(minimal_validation_bound(samples::fp2_rays()) == 4);
  CHECK(minimal_validation_bound(samples::num357()) == 7);
}

TEST_CASE("product validation covers each factor") {
  auto r = validate(samples::product(), 6);
  REQUIRE(r.factors.size() == 2);
  CHECK(r.factors[1].closure_checked);
  CHECK(r.cancellative);
}

TEST_CASE("malformed descriptors are rejected") {
  CHECK_THROWS_AS(make_model(NumericalDescriptor{{}}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(NumericalDescriptor{{2, 2}}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(NumericalDescriptor{{0, 3}}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(AffineDescriptor{2, {{1, 0, 0}}}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(AffineDescriptor{2, {{0, 0}}}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(FpValueDescriptor{4, 1, {}}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(FpValueDescriptor{2, 0, {}}), MalformedDescriptor);
  // A pattern with no exact entry below the exponent is redundant.
  CHECK_THROWS_AS(
      make_model(FpValueDescriptor{2, 2, {Pattern{{Bound::at_least(1), Bound::at_least(1)}}}}),
      MalformedDescriptor);
  CHECK_THROWS_AS(make_model(FpValueDescriptor{2, 2, {Pattern{{Bound::exact(0), Bound::exact(1)}}}}),
                  MalformedDescriptor);
  CHECK_THROWS_AS(make_model(FpValueDescriptor{2, 2, {Pattern{{Bound::exact(1)}}}}),
                  MalformedDescriptor);
  CHECK_THROWS_AS(make_model(SumsetDescriptor{{make_sumset({1, 2})}}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(SumsetDescriptor{{make_sumset({0})}}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(ProductDescriptor{{}, 1}), MalformedDescriptor);
  CHECK_THROWS_AS(make_model(ProductDescriptor{{NumericalDescriptor{{2, 3}}}, -1}),
                  MalformedDescriptor);
}

TEST_CASE("multiply examples") {
  auto s = make_model(samples::sumset());
  CHECK(s->multiply(make_sumset({0, 1}), make_sumset({0, 1, 3})) ==
        Element(make_sumset({0, 1, 2, 3, 4})));
  auto n = make_model(samples::num23());
  CHECK(n->multiply(std::int64_t{2}, std::int64_t{3}) == Element(std::int64_t{5}));
  auto f = make_model(samples::fp2());
  CHECK(f->multiply(Vec{1, 2}, Vec{2, 1}) == Element(Vec{3, 3}));
}

TEST_CASE("membership examples") {
  auto f = make_model(samples::fp_ray_alpha2());
  CHECK(f->contains(Vec{1, 7}));
  CHECK_FALSE(f->contains(Vec{0, 3}));
  CHECK_FALSE(f->contains(Vec{2, 1}));
  CHECK(f->contains(Vec{0, 0}));
  CHECK_THROWS_AS(f->contains(Vec{1, 2, 3}), ShapeMismatch);
  CHECK_THROWS_AS(f->contains(std::int64_t{3}), ShapeMismatch);

  auto n = make_model(samples::num23());
  CHECK_FALSE(n->contains(std::int64_t{1}));
  CHECK(n->contains(std::int64_t{7}));
  CHECK_THROWS_AS(n->contains(Vec{1, 2}), ShapeMismatch);

  auto s = make_model(samples::sumset());
  CHECK(s->contains(make_sumset({0, 1, 2, 3, 4})));
  CHECK_FALSE(s->contains(make_sumset({0, 2})));
  CHECK(s->contains(make_sumset({0, 1, 2})));
  CHECK_FALSE(s->contains(make_sumset({1, 2})));
}

TEST_CASE("atomsDividing examples") {
  auto f = make_model(samples::fp2());
  CHECK(f->atoms_dividing(Vec{3, 3}) ==
        std::vector<Element>{Vec{1, 1}, Vec{1, 2}, Vec{2, 1}});
  auto n = make_model(samples::num23());
  CHECK(n->atoms_dividing(std::int64_t{6}) ==
        std::vector<Element>{std::int64_t{2}, std::int64_t{3}});
  CHECK_THROWS_AS(n->atoms_dividing(std::int64_t{1}), NotAMember);
  auto s = make_model(samples::sumset());
  CHECK(s->atoms_dividing(make_sumset({0, 1, 2, 3, 4})) ==
        std::vector<Element>{make_sumset({0, 1}), make_sumset({0, 1, 3}),
                             make_sumset({0, 2, 3})});
}

TEST_CASE("elements up to a weight bound") {
  auto n = make_model(samples::num23());
  std::vector<Element> want;
  for (std::int64_t x : {0, 2, 3, 4, 5, 6, 7}) want.push_back(x);
  CHECK(n->elements_up_to(7) == want);
  CHECK(n->elements_up_to(0) == std::vector<Element>{std::int64_t{0}});

  auto s = make_model(samples::sumset());
  auto es = s->elements_up_to(4);
  for (auto const& x : {make_sumset({0}), make_sumset({0, 1}), make_sumset({0, 1, 3}),
                        make_sumset({0, 2, 3}), make_sumset({0, 1, 2}),
                        make_sumset({0, 1, 2, 3, 4})}) {
    CHECK(std::find(es.begin(), es.end(), Element(x)) != es.end());
  }
  CHECK(std::is_sorted(es.begin(), es.end()));
}

TEST_CASE("engine agrees with the brute-force oracle on members and atoms") {
  for (auto const& [name, d] : samples::all_models()) {
    INFO(name);
    auto m = make_model(d);
    oracle::Monoid o(d);
    auto bound = name == "product" ? 8 : 10;
    auto mine = m->elements_up_to(bound);
    auto theirs = o.members_up_to(bound);
    REQUIRE(mine == theirs);
    for (auto const& a : mine) {
      INFO(to_string(a));
      CHECK(m->atoms_dividing(a) == o.atoms_dividing(a));
    }
  }
}

TEST_CASE("canonical forms, commutativity, associativity, weight additivity") {
  std::mt19937 rng(20241016);
  for (auto const& [name, d] : samples::all_models()) {
    INFO(name);
    auto m = make_model(d);
    auto es = m->elements_up_to(name == "product" ? 6 : 8);
    std::uniform_int_distribution<std::size_t> pick(0, es.size() - 1);
    for (int i = 0; i < 1000; ++i) {
      auto const& a = es[pick(rng)];
      auto const& b = es[pick(rng)];
      auto const& c = es[pick(rng)];
      auto ab = m->multiply(a, b);
      REQUIRE(ab == m->multiply(b, a));
      REQUIRE(m->multiply(ab, c) == m->multiply(a, m->multiply(b, c)));
      REQUIRE(weight(ab) == weight(a) + weight(b));
      REQUIRE(m->contains(ab));
      REQUIRE(m->canonical(m->canonical(ab)) == m->canonical(ab));
      REQUIRE(m->multiply(a, m->identity()) == a);
    }
  }
}

TEST_CASE("canonicalization of raw sumsets is idempotent") {
  auto s = make_model(samples::sumset());
  Element raw{SumSet{{3, 0, 1, 1}}};
  auto c = s->canonical(raw);
  CHECK(c == Element(make_sumset({0, 1, 3})));
  CHECK(s->canonical(c) == c);
}

TEST_CASE("atoms dividing are divisors that admit no splitting") {
  for (auto const& [name, d] : samples::all_models()) {
    INFO(name);
    auto m = make_model(d);
    auto es = m->elements_up_to(name == "product" ? 6 : 9);
    for (auto const& a : es) {
      for (auto const& u : m->atoms_dividing(a)) {
        bool divides = false;
        for (auto const& c : es) divides = divides || m->multiply(u, c) == a;
        CHECK(divides);
        for (auto const& x : es) {
          for (auto const& y : es) {
            if (x == m->identity() || y == m->identity()) continue;
            CHECK_FALSE(m->multiply(x, y) == u);
          }
        }
      }
    }
  }
}

TEST_CASE("fp closure holds on the verified box") {
  for (auto const& d : {samples::fp2(), samples::fp2_rays(), samples::fp_ray_alpha2()}) {
    auto m = make_model(d);
    auto es = m->elements_up_to(8);
    for (auto const& a : es)
      for (auto const& b : es) CHECK(m->contains(m->multiply(a, b)));
  }
}

TEST_CASE("sumset monoid is unit-cancellative on sampled pairs") {
  auto m = make_model(samples::sumset());
  auto es = m->elements_up_to(9);
  for (auto const& a : es)
    for (auto const& u : es)
      if (m->multiply(a, u) == a) CHECK(u == m->identity());
}

TEST_CASE("sumset monoid is not cancellative") {
  auto m = make_model(samples::sumset());
  auto one = make_sumset({0, 1});
  // {0,1} + A = {0,1} + B with A != B.
  CHECK(m->multiply(one, make_sumset({0, 1, 3})) == m->multiply(one, make_sumset({0, 2, 3})));
}
