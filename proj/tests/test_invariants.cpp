#include "catch_amalgamated.hpp"
#include "factorlab/growth.hpp"
#include "factorlab/invariants.hpp"
#include "oracle.hpp"
#include "samples.hpp"

using namespace factorlab;

namespace {

Element n(std::int64_t x) { return Element(x); }

InvariantReport report(MonoidDescriptor const& d, Element const& a) {
  auto m = make_model(d);
  return invariant_report(factorizations(*m, a));
}

}  // namespace

TEST_CASE("length sets and conventions") {
  auto m = make_model(samples::num23());
  auto l = length_set(factorizations(*m, n(12)));
  CHECK(l.values == std::vector<std::int64_t>{4, 5, 6});
  CHECK(l.deltas() == std::vector<std::int64_t>{1});
  CHECK(l.elasticity() == Ratio{3, 2});

  auto id = length_set(factorizations(*m, n(0)));
  CHECK(id.values == std::vector<std::int64_t>{0});
  CHECK(id.elasticity() == Ratio{1, 1});
  CHECK(id.deltas().empty());

  LengthSet empty;
  CHECK(empty.min() == 0);
  CHECK(empty.max() == 0);

  auto f = make_model(samples::fp2());
  CHECK(length_set(factorizations(*f, Vec{3, 3})).values == std::vector<std::int64_t>{2, 3});
}

TEST_CASE("elasticity of a set without 0 is at least 1") {
  for (auto const& v : {std::vector<std::int64_t>{2, 3}, {5}, {1, 7, 9}}) {
    auto l = LengthSet::of(v);
    CHECK_FALSE(l.elasticity() < Ratio{1, 1});
  }
  CHECK(LengthSet::of({2, 7}).elasticity() == Ratio{7, 2});
}

TEST_CASE("golden invariants of 12 in <2,3>") {
  auto r = report(samples::num23(), n(12));
  CHECK(r.lengths.values == std::vector<std::int64_t>{4, 5, 6});
  CHECK(r.catenary == 3);
  CHECK(r.equal_catenary == 0);
  CHECK(r.adjacent_catenary == 3);
  CHECK(r.monotone_catenary == 3);
  CHECK(r.successive_distance == 3);
  CHECK(r.weak_successive_distance == 3);
  CHECK(report(samples::num23(), n(6)).catenary == 3);
}

TEST_CASE("golden invariants of (3,3) in the rank-2 fp monoid") {
  auto r = report(samples::fp2(), Vec{3, 3});
  CHECK(r.lengths.values == std::vector<std::int64_t>{2, 3});
  CHECK(r.catenary == 3);
  CHECK(r.equal_catenary == 0);
  CHECK(r.adjacent_catenary == 3);
  CHECK(r.monotone_catenary == 3);
  CHECK(r.successive_distance == 3);
  CHECK(r.weak_successive_distance == 3);
}

TEST_CASE("single factorization gives zeros") {
  auto r = report(samples::num23(), n(3));
  CHECK(r.factorization_count == 1);
  CHECK(r.catenary == 0);
  CHECK(r.monotone_catenary == 0);
  CHECK(r.weak_successive_distance == 0);
  CHECK(r.successive_distance == 0);
}

TEST_CASE("equal catenary of (3,3) in the five-generator affine monoid") {
  auto m = make_model(samples::affine5());
  auto fs = factorizations(*m, Vec{3, 3});
  // Z_3 = {(1,1)^3, (2,0)(0,2)(1,1)} and Z_2 = {(3,0)(0,3)}.
  CHECK(fs.fiber(3).size() == 2);
  CHECK(fs.fiber(2).size() == 1);
  auto r = invariant_report(fs);
  oracle::Monoid o(samples::affine5());
  auto atoms = o.atoms_dividing(Vec{3, 3});
  auto ref = oracle::invariants(oracle::factorizations(o, atoms, Vec{3, 3}, m->identity()));
  CHECK(r.equal_catenary == ref.c_eq);
  CHECK(r.equal_catenary == 2);
}

TEST_CASE("monotone chain search") {
  auto m = make_model(samples::num23());
  auto fs = factorizations(*m, n(12));
  // all is sorted by length: [3^4], [2^3 3^2], [2^6].
  CHECK(monotone_chain_exists(fs, 0, 0, 0));
  CHECK(monotone_chain_exists(fs, 0, 2, 3));
  CHECK_FALSE(monotone_chain_exists(fs, 0, 2, 2));
}

TEST_CASE("sumset of length sets and unique representations") {
  auto l = LengthSet::of({2, 3});
  CHECK(length_set_sumset(LengthSet::of({0}), l).values == l.values);
  CHECK(length_set_sumset(l, l).values == std::vector<std::int64_t>{4, 5, 6});
  auto l1 = LengthSet::of({2, 12, 14});
  auto l2 = LengthSet::of({2, 12, 13, 15});
  CHECK(length_set_sumset(l1, l2).values ==
        std::vector<std::int64_t>{4, 14, 15, 16, 17, 24, 25, 26, 27, 29});
  using P = std::vector<std::pair<std::int64_t, std::int64_t>>;
  CHECK(unique_representations(l1, l2, 15) == P{{2, 13}});
  CHECK(unique_representations(l1, l2, 16) == P{{14, 2}});
  CHECK(unique_representations(l1, l2, 4) == P{{2, 2}});
}

TEST_CASE("engine matches the oracle on every element of weight at most 12") {
  for (auto const& [name, d] : samples::all_models()) {
    INFO(name);
    auto m = make_model(d);
    oracle::Monoid o(d);
    for (auto const& a : m->elements_up_to(name == "product" ? 9 : 12)) {
      INFO(to_string(a));
      auto r = invariant_report(factorizations(*m, a));
      auto ref = oracle::invariants(
          oracle::factorizations(o, o.atoms_dividing(a), a, m->identity()));
      REQUIRE(r.lengths.values == ref.lengths);
      REQUIRE(r.catenary == ref.c);
      REQUIRE(r.equal_catenary == ref.c_eq);
      REQUIRE(r.adjacent_catenary == ref.c_adj);
      REQUIRE(r.monotone_catenary == ref.c_mon);
      REQUIRE(r.successive_distance == ref.delta);
      REQUIRE(r.weak_successive_distance == ref.delta_w);
    }
  }
}

TEST_CASE("elementwise inequalities between invariants") {
  for (auto const& [name, d] : samples::all_models()) {
    INFO(name);
    auto m = make_model(d);
    for (auto const& a : m->elements_up_to(name == "product" ? 9 : 14)) {
      auto fs = factorizations(*m, a);
      auto r = invariant_report(fs);
      REQUIRE(r.catenary <= r.monotone_catenary);
      REQUIRE(r.monotone_catenary == std::max(r.equal_catenary, r.adjacent_catenary));
      REQUIRE(r.monotone_catenary <= r.lengths.max());
      REQUIRE(r.adjacent_catenary <= r.successive_distance);
      REQUIRE(r.weak_successive_distance <= r.successive_distance);
      if (r.lengths.size() >= 2) {
        auto ds = r.lengths.deltas();
        auto max_delta = static_cast<std::uint32_t>(*std::max_element(ds.begin(), ds.end()));
        REQUIRE(r.adjacent_catenary <= r.weak_successive_distance * max_delta);
      } else {
        REQUIRE(r.adjacent_catenary == 0);
        REQUIRE(r.weak_successive_distance == 0);
      }
      if (fs.size() <= 1) REQUIRE(r.catenary == 0);
      auto per_z = successive_distance_per_factorization(fs);
      REQUIRE(*std::max_element(per_z.begin(), per_z.end()) == r.successive_distance);
    }
  }
}

TEST_CASE("monotone catenary agrees with the chain search") {
  for (auto const& d : {samples::num357(), samples::affine5(), samples::fp2_rays(), samples::sumset()}) {
    auto m = make_model(d);
    for (auto const& a : m->elements_up_to(11)) {
      auto fs = factorizations(*m, a);
      auto c = monotone_catenary(fs);
      bool all = true, some_fail = false;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = 0; j < fs.size(); ++j) {
          all = all && monotone_chain_exists(fs, i, j, c);
          if (c > 0) some_fail = some_fail || !monotone_chain_exists(fs, i, j, c - 1);
        }
      }
      REQUIRE(all);
      REQUIRE((c == 0 || some_fail));
    }
  }
}

TEST_CASE("global estimates for <2,3>") {
  auto m = make_model(samples::num23());
  auto g = global_estimates(*m, 30);
  CHECK(g.set("delta_set") == std::vector<std::int64_t>{1});
  CHECK_FALSE(g.half_factorial);
  CHECK(g.scalar("catenary") == 3);
  CHECK(g.scalar("monotone_catenary") == 3);
  CHECK(g.get("catenary").stabilized);
  CHECK(g.get("catenary").bound == 30);
  CHECK(g.overflows.empty());
}

TEST_CASE("global estimates for a free abelian monoid vanish") {
  auto m = make_model(samples::free2());
  auto g = global_estimates(*m, 10);
  CHECK(g.half_factorial);
  CHECK(g.set("delta_set").empty());
  CHECK(std::get<Ratio>(g.get("elasticity").value) == Ratio{1, 1});
  for (auto const* k : {"catenary", "equal_catenary", "adjacent_catenary", "monotone_catenary",
                        "successive_distance", "weak_successive_distance"}) {
    CHECK(g.scalar(k) == 0);
  }
}

TEST_CASE("rank-2 fp monoid is not half-factorial") {
  auto m = make_model(samples::fp2());
  auto g = global_estimates(*m, 10);
  CHECK_FALSE(g.half_factorial);
  CHECK_FALSE(g.set("delta_set").empty());
}

TEST_CASE("catenary estimate dominates 1 + max delta") {
  for (auto const& [name, d] : samples::all_models()) {
    auto m = make_model(d);
    auto g = global_estimates(*m, name == "product" ? 8 : 12);
    if (g.half_factorial) continue;
    INFO(name);
    CHECK(1 + static_cast<std::uint64_t>(g.set("delta_set").back()) <= g.scalar("catenary"));
  }
}

TEST_CASE("global estimates are monotone in the bound") {
  auto m = make_model(samples::fp2_rays());
  GlobalReport prev;
  for (std::int64_t b = 4; b <= 12; b += 2) {
    auto g = global_estimates(*m, b);
    if (b > 4) {
      for (auto const& e : g.estimates) {
        auto const& p = prev.get(e.name).value;
        if (auto const* s = std::get_if<std::vector<std::int64_t>>(&e.value)) {
          auto const& ps = std::get<std::vector<std::int64_t>>(p);
          CHECK(std::includes(s->begin(), s->end(), ps.begin(), ps.end()));
        } else if (auto const* r = std::get_if<Ratio>(&e.value)) {
          CHECK_FALSE(*r < std::get<Ratio>(p));
        } else {
          CHECK(std::get<std::uint64_t>(e.value) >= std::get<std::uint64_t>(p));
        }
      }
    }
    prev = g;
  }
}

TEST_CASE("budget overflows are recorded per element") {
  auto m = make_model(samples::num23());
  auto g = global_estimates(*m, 20, {3, 1});
  CHECK_FALSE(g.overflows.empty());
  for (auto const& o : g.overflows) CHECK(o.limit == 3);
  CHECK(g.elements == m->elements_up_to(20).size());
}

TEST_CASE("parallel sweeps match sequential ones") {
  auto m = make_model(samples::fp2_rays());
  auto a = sweep_elements(*m, 10, {2'000'000, 1});
  auto b = sweep_elements(*m, 10, {2'000'000, 4});
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].element == b.reports[i].element);
    CHECK(a.reports[i].catenary == b.reports[i].catenary);
    CHECK(a.reports[i].weak_successive_distance == b.reports[i].weak_successive_distance);
  }
}

TEST_CASE("unions of sets of lengths") {
  auto free = make_model(samples::free2());
  for (std::int64_t k : {1, 2, 5}) {
    CHECK(unions_of_lengths(*free, k, 10).values.values == std::vector<std::int64_t>{k});
  }
  auto m = make_model(samples::num23());
  auto u = unions_of_lengths(*m, 2, 30);
  CHECK(u.values.contains(2));
  CHECK(u.values.contains(3));
  CHECK(u.rho_k == u.values.max());
  CHECK(unions_of_lengths(*m, 2, 6).values.values == std::vector<std::int64_t>{2, 3});

  auto f = make_model(samples::fp2());
  auto uf = unions_of_lengths(*f, 2, 12);
  for (std::int64_t x : {2, 3, 4}) CHECK(uf.values.contains(x));
  CHECK_THROWS_AS(unions_of_lengths(*m, 0, 10), Error);
}

TEST_CASE("product length sets are sumsets of component length sets") {
  auto p = make_model(samples::product());
  auto n23 = make_model(samples::num23());
  auto fp = make_model(samples::fp2());
  for (auto const& a1 : n23->elements_up_to(8)) {
    for (auto const& a2 : fp->elements_up_to(6)) {
      for (std::int64_t f : {0, 2}) {
        auto l1 = length_set(factorizations(*n23, a1));
        auto l2 = length_set(factorizations(*fp, a2));
        auto lp = length_set(factorizations(*p, Element(Tuple{{a1, a2}, {f}})));
        auto want = length_set_sumset(length_set_sumset(l1, l2), LengthSet::of({f}));
        REQUIRE(lp.values == want.values);
      }
    }
  }
}

TEST_CASE("growth probes") {
  auto m = make_model(samples::num23());
  auto r = probe_growth(*m, {GrowthFamily::Kind::power, n(6)}, 10);
  REQUIRE(r.rows.size() == 10);
  CHECK(r.rows[0].element == n(6));
  CHECK(r.rows[9].element == n(60));
  for (std::size_t c = 0; c < growth_columns.size(); ++c) {
    if (std::string(growth_columns[c]) == "equal_catenary") continue;
    CHECK(r.maxima[c] == 3);
    CHECK(r.stabilized[c]);
  }

  auto f = make_model(samples::fp2());
  auto rf = probe_growth(*f, {GrowthFamily::Kind::diagonal, {}}, 8);
  CHECK(rf.rows[2].element == Element(Vec{3, 3}));
  CHECK(rf.stabilized[3]);

  auto free = make_model(samples::free2());
  auto z = probe_growth(*free, {GrowthFamily::Kind::diagonal, {}}, 6);
  for (auto x : z.maxima) CHECK(x == 0);

  auto s = make_model(samples::sumset());
  CHECK_THROWS_AS(probe_growth(*s, {GrowthFamily::Kind::diagonal, {}}, 3), Error);
  auto over = probe_growth(*m, {GrowthFamily::Kind::power, n(6)}, 10, {3, 1});
  CHECK(over.overflows > 0);
}
