#include <filesystem>

#include "catch_amalgamated.hpp"
#include "factorlab/cache.hpp"
#include "factorlab/growth.hpp"
#include "factorlab/relations.hpp"
#include "samples.hpp"

using namespace factorlab;
namespace fs = std::filesystem;

namespace {

std::string sample(char const* name) { return std::string(FACTORLAB_SAMPLES) + "/" + name; }

std::string slurp(fs::path const& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("factorlab-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("descriptors round-trip through JSON") {
  auto all = samples::all_models();
  all.emplace_back("fp2_alpha3", samples::fp2_alpha3());
  all.emplace_back("fp3", samples::fp3());
  for (auto const& [name, d] : all) {
    INFO(name);
    auto j = to_json(d);
    auto back = descriptor_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(to_json(parse_descriptor(j.dump(2))) == j);
    CHECK(descriptor_hash(back) == descriptor_hash(d));
  }
}

TEST_CASE("sample descriptor files load") {
  CHECK(to_json(load_descriptor(sample("num23.json"))) == to_json(samples::num23()));
  CHECK(to_json(load_descriptor(sample("fp2-rays.json"))) == to_json(samples::fp2_rays()));
  CHECK(to_json(load_descriptor(sample("sumset.json"))) == to_json(samples::sumset()));
  CHECK(to_json(load_descriptor(sample("product.json"))) == to_json(samples::product()));
  for (auto const* f : {"affine-2-11-02.json", "free2.json", "fp2.json", "num357.json"})
    CHECK_NOTHROW(make_model(load_descriptor(sample(f))));
  CHECK_THROWS_AS(load_descriptor(sample("missing.json")), Error);
}

TEST_CASE("malformed JSON reports line, column and context") {
  std::string text = "{\n  \"model\": \"numerical\",\n  \"generators\": [2, 3,]\n}";
  try {
    parse_descriptor(text, "bad.json");
    FAIL("expected a parse error");
  } catch (Error const& e) {
    std::string msg = e.what();
    CHECK(msg.rfind("bad.json:3:", 0) == 0);
    CHECK(msg.find("\"generators\": [2, 3,]") != std::string::npos);
    CHECK(msg.find('^') != std::string::npos);
  }
}

TEST_CASE("structurally malformed descriptors name the offending field") {
  auto expect = [](std::string const& text, std::string const& needle) {
    try {
      parse_descriptor(text);
      FAIL("expected MalformedDescriptor for " << text);
    } catch (MalformedDescriptor const& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect(R"({"model": "numerical"})", "generators");
  expect(R"({"model": "numerical", "generators": [2, "x"]})", "generators[1]");
  expect(R"({"model": "numerical", "generators": [2, 3], "extra": 1})", "extra");
  expect(R"({"model": "nope"})", "model");
  expect(R"({"model": "fp-value", "rank": 2, "exponent": 2,
             "exceptional": [[{"exactly": 1}, {"atLeast": 1}]]})", "exceptional[0]");
  expect(R"({"model": "product", "factors": [{"model": "product", "factors": []}]})",
         "factors[0]");
}

TEST_CASE("element JSON round-trips") {
  for (auto const& [name, d] : samples::all_models()) {
    auto m = make_model(d);
    for (auto const& a : m->elements_up_to(name == "product" ? 5 : 7)) {
      CHECK(element_from_json(to_json(a)) == a);
    }
  }
  CHECK(to_json(Element(make_sumset({0, 1, 3}))) == Json::parse(R"({"set":[0,1,3]})"));
  CHECK_THROWS_AS(element_from_json(Json::parse(R"("x")")), Error);
}

TEST_CASE("element literals") {
  auto n = make_model(samples::num23());
  CHECK(parse_element(*n, " 12 ") == Element(std::int64_t{12}));
  CHECK_THROWS_AS(parse_element(*n, "1 2"), Error);
  auto f = make_model(samples::fp2());
  CHECK(parse_element(*f, "3,3") == Element(Vec{3, 3}));
  CHECK(parse_element(*f, "(3, 3)") == Element(Vec{3, 3}));
  auto s = make_model(samples::sumset());
  CHECK(parse_element(*s, "{3,0,1}") == Element(make_sumset({0, 1, 3})));
  CHECK_THROWS_AS(parse_element(*s, "0,1"), ShapeMismatch);
  auto p = make_model(samples::product());
  CHECK(parse_element(*p, "12;3,3;2") ==
        Element(Tuple{{Element(std::int64_t{12}), Element(Vec{3, 3})}, {2}}));
  CHECK(parse_element(*p, "12;3,3") ==
        Element(Tuple{{Element(std::int64_t{12}), Element(Vec{3, 3})}, {0}}));
  CHECK_THROWS_AS(parse_element(*p, "12"), ShapeMismatch);
}

TEST_CASE("factor sets round-trip") {
  for (auto const& [name, d] : samples::all_models()) {
    auto m = make_model(d);
    for (auto const& a : m->elements_up_to(name == "product" ? 6 : 9)) {
      auto z = factorizations(*m, a);
      auto back = factor_set_from_json(to_json(z));
      REQUIRE(back.element == z.element);
      REQUIRE(back.table->atoms == z.table->atoms);
      REQUIRE(back.table->fingerprint == z.table->fingerprint);
      REQUIRE(back.all == z.all);
      REQUIRE(to_json(back).dump() == to_json(z).dump());
    }
  }
  auto j = to_json(factorizations(*make_model(samples::num23()), Element(std::int64_t{12})));
  auto bad = j;
  bad["lengths"][0] = 99;
  CHECK_THROWS_AS(factor_set_from_json(bad), Error);
  bad = j;
  bad["factorizations"][0][0][0] = 7;
  CHECK_THROWS_AS(factor_set_from_json(bad), Error);
}

TEST_CASE("SHA-256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(descriptor_hash(samples::num23()) != descriptor_hash(samples::num357()));
}

TEST_CASE("the cache replays byte-identical factor sets") {
  TempDir dir;
  auto d = samples::fp2_rays();
  auto m = make_model(d);
  FactorCache cache(dir.path, descriptor_hash(d));
  Element a(Vec{6, 7});
  auto first = cached_factorizations(*m, a, {}, &cache);
  auto path = cache.path_for(a);
  REQUIRE(fs::exists(path));
  auto bytes = slurp(path);
  auto second = cached_factorizations(*m, a, {}, &cache);
  CHECK(to_json(second).dump() == to_json(first).dump());
  CHECK(to_json(second).dump() == bytes);
  CHECK(invariant_report(second).catenary == invariant_report(first).catenary);

  // A corrupt entry is ignored and rewritten.
  { std::ofstream(path) << "{ not json"; }
  auto third = cached_factorizations(*m, a, {}, &cache);
  CHECK(to_json(third).dump() == bytes);
  CHECK(slurp(path) == bytes);
  for (auto const& e : fs::directory_iterator(path.parent_path()))
    CHECK(e.path().extension() == ".json");
}

TEST_CASE("reports serialize deterministically") {
  auto m = make_model(samples::num357());
  auto g1 = to_json(global_estimates(*m, 20, {2'000'000, 1})).dump();
  auto g4 = to_json(global_estimates(*m, 20, {2'000'000, 4})).dump();
  CHECK(g1 == g4);
  auto r = to_json(invariant_report(factorizations(*m, Element(std::int64_t{21}))));
  CHECK(r["catenary"].is_number_unsigned());
  CHECK(r.contains("lengths"));
  CHECK(to_string(Ratio{3, 2}) == "3/2");

  auto s = make_model(samples::sumset());
  auto rel = to_json(relation_atoms(*s, 2));
  CHECK(rel.dump() == to_json(relation_atoms(*s, 2, std::nullopt, {2'000'000, 3})).dump());
  auto pr = to_json(probe_growth(*m, {GrowthFamily::Kind::power, Element(std::int64_t{3})}, 5));
  CHECK(pr.dump() == to_json(probe_growth(*m, {GrowthFamily::Kind::power,
                                                Element(std::int64_t{3})}, 5)).dump());
}
