#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "factorlab/aamp.hpp"
#include "samples.hpp"

using namespace factorlab;

namespace {

using Set = std::vector<std::int64_t>;

std::int64_t mod(std::int64_t x, std::int64_t d) { return ((x % d) + d) % d; }

// Straight from the definition: try every shift, period and split point.
bool brute_aamp(Set const& l, std::int64_t d, std::int64_t m) {
  std::set<std::int64_t> target(l.begin(), l.end());
  auto lo = l.front(), hi = l.back();
  for (std::int64_t y = lo - m - 1; y <= hi + 1; ++y) {
    for (std::uint32_t mask = 0; mask < (1u << (d - 1)); ++mask) {
      std::set<std::int64_t> period{0};
      for (std::int64_t r = 1; r < d; ++r)
        if (mask & (1u << (r - 1))) period.insert(r);
      for (std::int64_t t = 0; t <= hi - y; ++t) {
        if (!period.count(mod(t, d))) continue;
        std::set<std::int64_t> rebuilt;
        bool ok = true;
        for (std::int64_t x = 0; x <= t; ++x)
          if (period.count(mod(x, d))) rebuilt.insert(y + x);
        for (auto x : l) {
          auto s = x - y;
          if (s < 0) {
            ok = ok && s >= -m && period.count(mod(s, d));
            rebuilt.insert(x);
          } else if (s > t) {
            ok = ok && s <= t + m && period.count(mod(s, d));
            rebuilt.insert(x);
          }
        }
        if (ok && rebuilt == target) return true;
      }
    }
  }
  return false;
}

Set random_set(std::mt19937& rng, std::int64_t lo, std::int64_t span) {
  std::uniform_int_distribution<int> coin(0, 2);
  Set s{lo};
  for (std::int64_t x = lo + 1; x <= lo + span; ++x)
    if (coin(rng) == 0) s.push_back(x);
  return s;
}

}  // namespace

TEST_CASE("isAAMP examples") {
  auto w = is_aamp(Set{2, 4, 6}, 2, 0);
  REQUIRE(w);
  CHECK(w->shift == 2);
  CHECK(w->period == Set{0, 2});
  CHECK(w->central == Set{0, 2, 4});
  CHECK(w->initial.empty());
  CHECK(w->final.empty());

  CHECK_FALSE(is_aamp(Set{2, 3, 5}, 1, 1));
  auto v = is_aamp(Set{2, 3, 5}, 1, 2);
  REQUIRE(v);
  CHECK(v->shift == 2);
  CHECK(v->central == Set{0, 1});
  CHECK(v->final == Set{3});
  CHECK(v->initial.empty());
}

TEST_CASE("minimal bound examples") {
  for (std::int64_t d : {1, 2, 5}) CHECK(minimal_bound(Set{5}, d) == 0);
  CHECK(minimal_bound(Set{2, 3, 5}, 1) == 2);
  CHECK(minimal_bound(Set{2, 4, 6}, 2) == 0);
  CHECK(minimal_bound(Set{2, 4, 6}, 1) == 2);
}

TEST_CASE("isAAMP agrees with a definitional brute force") {
  std::mt19937 rng(314159);
  for (int i = 0; i < 400; ++i) {
    auto l = random_set(rng, std::uniform_int_distribution<int>(-5, 5)(rng), 9);
    for (std::int64_t d : {1, 2, 3, 4}) {
      for (std::int64_t m : {0, 1, 2, 3}) {
        INFO(Catch::Detail::stringify(l) << " d=" << d << " M=" << m);
        REQUIRE(is_aamp(l, d, m).has_value() == brute_aamp(l, d, m));
      }
    }
  }
}

TEST_CASE("witnesses verify, translate and fill the interior progression") {
  std::mt19937 rng(2718);
  for (int i = 0; i < 1000; ++i) {
    auto l = random_set(rng, std::uniform_int_distribution<int>(0, 20)(rng), 14);
    auto span = l.back() - l.front();
    for (std::int64_t d : {1, 2, 3, 6}) {
      auto mb = minimal_bound(l, d);
      REQUIRE(mb <= span);
      REQUIRE(is_aamp(l, d, mb));
      if (mb > 0) REQUIRE_FALSE(is_aamp(l, d, mb - 1));
      for (std::int64_t m : {mb, mb + 1}) {
        auto w = is_aamp(l, d, m);
        REQUIRE(w);
        REQUIRE(verify_witness(l, *w));
        for (std::int64_t t : {-7, 13}) {
          Set moved;
          for (auto x : l) moved.push_back(x + t);
          REQUIRE(is_aamp(moved, d, m).has_value());
        }
        std::set<std::int64_t> in(l.begin(), l.end());
        for (auto x : l) {
          for (std::int64_t k = -span / d - 1; k <= span / d + 1; ++k) {
            auto s = x + k * d;
            if (l.front() + m <= s && s <= l.back() - m) REQUIRE(in.count(s));
          }
        }
      }
    }
  }
}

TEST_CASE("verifier rejects broken witnesses") {
  Set l{2, 3, 5};
  auto w = *is_aamp(l, 1, 2);
  auto bad = w;
  bad.final = {4};
  CHECK_FALSE(verify_witness(l, bad));
  bad = w;
  bad.bound = 1;
  CHECK_FALSE(verify_witness(l, bad));
  bad = w;
  bad.central = {1};
  CHECK_FALSE(verify_witness(l, bad));
  auto a = *is_aamp(Set{0, 2, 4}, 2, 0);
  a.period = {0, 1, 2};
  CHECK_FALSE(verify_witness(Set{0, 2, 4}, a));
}

TEST_CASE("structure probe examples") {
  auto r = structure_probe(*make_model(samples::num23()), 30, {1});
  CHECK(r.max_bound == 0);
  CHECK(r.stabilized);
  CHECK(r.entries.size() == make_model(samples::num23())->elements_up_to(30).size());
  CHECK(structure_probe(*make_model(samples::free2()), 10, {1, 2}).max_bound == 0);
  CHECK(structure_probe(*make_model(samples::fp2()), 12, {1}).max_bound == 0);
  CHECK_THROWS_AS(structure_probe(*make_model(samples::num23()), 10, {}), Error);

  auto s = structure_probe(*make_model(samples::num357()), 20, {1, 2});
  for (auto const& e : s.entries) {
    CHECK(e.bound == minimal_bound(e.lengths, e.difference));
    CHECK(e.bound <= s.max_bound);
  }
}

TEST_CASE("unions structure probe examples") {
  auto f = unions_structure_probe(*make_model(samples::free2()), 1, 4, 10);
  CHECK(f.trivial);
  for (auto const& e : f.entries) {
    CHECK(e.values.values == Set{e.k});
    CHECK(e.bound == 0);
  }

  auto n = unions_structure_probe(*make_model(samples::num23()), 2, 8, 40);
  CHECK_FALSE(n.trivial);
  CHECK(n.difference == 1);
  REQUIRE(n.entries.size() == 7);
  for (auto const& e : n.entries) CHECK(e.bound == 0);

  auto p = unions_structure_probe(*make_model(samples::fp2()), 2, 5, 12);
  CHECK(p.difference == 1);
  for (auto const& e : p.entries) CHECK(e.bound == 0);
  CHECK(p.limit_trend > 0);
}
