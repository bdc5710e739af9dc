#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "factorlab/aamp.hpp"
#include "factorlab/descriptor.hpp"
#include "factorlab/factor.hpp"
#include "factorlab/growth.hpp"
#include "factorlab/invariants.hpp"
#include "factorlab/models.hpp"
#include "factorlab/relations.hpp"
#include "factorlab/verify.hpp"

namespace factorlab {

using Json = nlohmann::json;  // std::map objects, so keys come out sorted

////////////////////////////////////////////////////////////////////////////
// Descriptors
////////////////////////////////////////////////////////////////////////////

namespace detail {

inline Json base_to_json(BaseDescriptor const& d);

inline Json pattern_to_json(Pattern const& p) {
  Json out = Json::array();
  for (auto const& b : p.entries) {
    out.push_back(b.kind == Bound::Kind::exact ? Json{{"exact", b.n}}
                                               : Json{{"atLeast", b.n}});
  }
  return out;
}

inline Json base_to_json(BaseDescriptor const& d) {
  return std::visit(
      [](auto const& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NumericalDescriptor>) {
          return {{"model", "numerical"}, {"generators", x.generators}};
        } else if constexpr (std::is_same_v<T, AffineDescriptor>) {
          return {{"model", "affine"}, {"dim", x.dim}, {"generators", x.generators}};
        } else if constexpr (std::is_same_v<T, FpValueDescriptor>) {
          Json pats = Json::array();
          for (auto const& p : x.exceptional) {
            pats.push_back(pattern_to_json(p));
          }
          return {{"model", "fp-value"},
                  {"rank", x.rank},
                  {"exponent", x.exponent},
                  {"exceptional", pats}};
        } else {
          Json gens = Json::array();
          for (auto const& g : x.generators) {
            gens.push_back(g.items);
          }
          return {{"model", "sumset"}, {"generators", gens}};
        }
      },
      d);
}

[[noreturn]] inline void malformed(std::string const& where, std::string const& what) {
  throw MalformedDescriptor(where + ": " + what);
}

inline Json const& field(Json const& j, char const* key, std::string const& where) {
  if (!j.is_object() || !j.contains(key)) {
    malformed(where, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

inline std::int64_t as_int(Json const& j, std::string const& where) {
  if (!j.is_number_integer()) {
    malformed(where, "expected an integer, got " + j.dump());
  }
  return j.get<std::int64_t>();
}

inline std::vector<std::int64_t> as_ints(Json const& j, std::string const& where) {
  if (!j.is_array()) {
    malformed(where, "expected an array of integers, got " + j.dump());
  }
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_int(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline void only_fields(Json const& j, std::vector<std::string> const& allowed,
                        std::string const& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      malformed(where, "unknown field \"" + it.key() + "\"");
    }
  }
}

inline Bound bound_from_json(Json const& j, std::string const& where) {
  if (!j.is_object() || j.size() != 1) {
    malformed(where, R"(expected {"exact": n} or {"atLeast": n})");
  }
  if (j.contains("exact")) return Bound::exact(as_int(j["exact"], where + ".exact"));
  if (j.contains("atLeast")) {
    return Bound::at_least(as_int(j["atLeast"], where + ".atLeast"));
  }
  malformed(where, R"(expected {"exact": n} or {"atLeast": n})");
}

inline BaseDescriptor base_from_json(Json const& j, std::string const& where) {
  if (!j.is_object()) {
    malformed(where, "expected an object");
  }
  auto const& model = field(j, "model", where);
  if (!model.is_string()) {
    malformed(where + ".model", "expected a string");
  }
  auto name = model.get<std::string>();
  if (name == "numerical") {
    only_fields(j, {"model", "generators"}, where);
    return NumericalDescriptor{
        as_ints(field(j, "generators", where), where + ".generators")};
  }
  if (name == "affine") {
    only_fields(j, {"model", "dim", "generators"}, where);
    AffineDescriptor d;
    d.dim = as_int(field(j, "dim", where), where + ".dim");
    auto const& gens = field(j, "generators", where);
    if (!gens.is_array()) malformed(where + ".generators", "expected an array");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      d.generators.push_back(
          as_ints(gens[i], where + ".generators[" + std::to_string(i) + "]"));
    }
    return d;
  }
  if (name == "fp-value") {
    only_fields(j, {"model", "rank", "exponent", "exceptional"}, where);
    FpValueDescriptor d;
    d.rank = as_int(field(j, "rank", where), where + ".rank");
    d.exponent = as_int(field(j, "exponent", where), where + ".exponent");
    if (j.contains("exceptional")) {
      auto const& pats = j["exceptional"];
      if (!pats.is_array()) malformed(where + ".exceptional", "expected an array");
      for (std::size_t i = 0; i < pats.size(); ++i) {
        auto pw = where + ".exceptional[" + std::to_string(i) + "]";
        if (!pats[i].is_array()) malformed(pw, "expected an array");
        Pattern p;
        for (std::size_t c = 0; c < pats[i].size(); ++c) {
          p.entries.push_back(
              bound_from_json(pats[i][c], pw + "[" + std::to_string(c) + "]"));
        }
        d.exceptional.push_back(std::move(p));
      }
    }
    return d;
  }
  if (name == "sumset") {
    only_fields(j, {"model", "generators"}, where);
    SumsetDescriptor d;
    auto const& gens = field(j, "generators", where);
    if (!gens.is_array()) malformed(where + ".generators", "expected an array");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto items = as_ints(gens[i], where + ".generators[" + std::to_string(i) + "]");
      for (auto x : items) {
        if (x < 0) malformed(where + ".generators", "sumset entries must be >= 0");
      }
      d.generators.push_back(make_sumset(std::move(items)));
    }
    return d;
  }
  if (name == "product") {
    malformed(where, "products cannot be nested");
  }
  malformed(where + ".model", "unknown model \"" + name + "\"");
}

}  // namespace detail

inline Json to_json(MonoidDescriptor const& d) {
  if (auto const* p = std::get_if<ProductDescriptor>(&d)) {
    Json factors = Json::array();
    for (auto const& f : p->factors) {
      factors.push_back(detail::base_to_json(f));
    }
    return {{"model", "product"}, {"factors", factors}, {"freeRank", p->free_rank}};
  }
  return std::visit(
      [](auto const& x) -> Json {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ProductDescriptor>) {
          return {};
        } else {
          return detail::base_to_json(BaseDescriptor{x});
        }
      },
      d);
}

// Structural decoding only; check_structure() / validate() do the rest.
inline MonoidDescriptor descriptor_from_json(Json const& j) {
  std::string where = "descriptor";
  if (j.is_object() && j.contains("model") && j["model"] == "product") {
    detail::only_fields(j, {"model", "factors", "freeRank"}, where);
    ProductDescriptor p;
    auto const& fs = detail::field(j, "factors", where);
    if (!fs.is_array()) detail::malformed(where + ".factors", "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      p.factors.push_back(
          detail::base_from_json(fs[i], where + ".factors[" + std::to_string(i) + "]"));
    }
    p.free_rank = j.contains("freeRank")
                      ? detail::as_int(j["freeRank"], where + ".freeRank")
                      : 0;
    return p;
  }
  auto b = detail::base_from_json(j, where);
  return to_descriptor(b);
}

// Parses descriptor text. Syntax errors carry line, column and the line.
inline MonoidDescriptor parse_descriptor(std::string const& text,
                                         std::string const& origin = "<input>") {
  Json j;
  try {
    j = Json::parse(text);
  } catch (Json::parse_error const& e) {
    std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    offset = std::min(offset, text.size());
    std::size_t line = 1 + static_cast<std::size_t>(
                               std::count(text.begin(), text.begin() + offset, '\n'));
    auto start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    start = start == std::string::npos ? 0 : start + 1;
    if (offset > 0 && text[offset - 1] == '\n') start = offset;
    auto end = text.find('\n', start);
    auto column = offset - start + 1;
    std::ostringstream os;
    os << origin << ":" << line << ":" << column << ": invalid JSON\n  "
       << text.substr(start, end == std::string::npos ? std::string::npos : end - start)
       << "\n  " << std::string(column > 0 ? column - 1 : 0, ' ') << "^";
    throw Error(os.str());
  }
  return descriptor_from_json(j);
}

inline MonoidDescriptor load_descriptor(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read descriptor file " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_descriptor(ss.str(), path);
}

////////////////////////////////////////////////////////////////////////////
// Elements
////////////////////////////////////////////////////////////////////////////

// number -> n, vector -> [..], set -> {"set": [..]},
// tuple -> {"factors": [..], "free": [..]}
inline Json to_json(Element const& e) {
  switch (e.value.index()) {
    case 0:
      return e.number();
    case 1:
      return e.vector();
    case 2:
      return Json{{"set", e.set().items}};
    default: {
      Json fs = Json::array();
      for (auto const& f : e.tuple().factors) {
        fs.push_back(to_json(f));
      }
      return Json{{"factors", fs}, {"free", e.tuple().free}};
    }
  }
}

inline Element element_from_json(Json const& j) {
  if (j.is_number_integer()) {
    return Element(j.get<std::int64_t>());
  }
  if (j.is_array()) {
    return Element(j.get<Vec>());
  }
  if (j.is_object() && j.contains("set")) {
    return Element(make_sumset(j["set"].get<std::vector<std::int64_t>>()));
  }
  if (j.is_object() && j.contains("factors")) {
    Tuple t;
    for (auto const& f : j["factors"]) {
      t.factors.push_back(element_from_json(f));
    }
    t.free = j.value("free", Vec{});
    return Element(std::move(t));
  }
  throw Error("cannot decode element " + j.dump());
}

namespace detail {

inline std::string trim(std::string s) {
  auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

inline std::vector<std::string> split(std::string const& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '{' || c == '(' || c == '[') ++depth;
    if (c == '}' || c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::int64_t parse_int(std::string const& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (std::exception const&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ShapeMismatch("not an integer: \"" + s + "\"");
  }
  return v;
}

inline std::string strip(std::string s, char open, char close) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == open && s.back() == close) {
    return trim(s.substr(1, s.size() - 2));
  }
  return s;
}

inline std::vector<std::int64_t> parse_ints(std::string const& s) {
  std::vector<std::int64_t> out;
  if (trim(s).empty()) return out;
  for (auto const& part : split(s, ',')) {
    out.push_back(parse_int(part));
  }
  return out;
}

inline Element parse_base_literal(Model const& m, std::string const& text) {
  auto s = trim(text);
  switch (m.kind()) {
    case ModelKind::numerical:
      return Element(parse_int(s));
    case ModelKind::affine:
    case ModelKind::fp_value:
      return Element(parse_ints(strip(strip(s, '(', ')'), '[', ']')));
    case ModelKind::sumset:
      if (s.empty() || s.front() != '{' || s.back() != '}') {
        throw ShapeMismatch("sumset literals look like {0,1,3}");
      }
      return Element(make_sumset(parse_ints(strip(s, '{', '}'))));
    default:
      throw ShapeMismatch("products cannot be nested");
  }
}

}  // namespace detail

// CLI element literals: "12", "3,3", "{0,1,3}", and for products the
// components joined by ';' with the free exponents as an optional last
// component ("12;3,3;1,0"). The result is canonical.
inline Element parse_element(Model const& m, std::string const& text) {
  if (m.kind() != ModelKind::product) {
    return m.canonical(detail::parse_base_literal(m, text));
  }
  auto const& p = static_cast<ProductModel const&>(m);
  auto parts = detail::split(detail::trim(text), ';');
  if (parts.size() != p.factor_count() &&
      !(p.free_rank() > 0 && parts.size() == p.factor_count() + 1)) {
    throw ShapeMismatch("expected " + std::to_string(p.factor_count()) +
                        " ';'-separated components" +
                        (p.free_rank() > 0 ? " plus optional free exponents" : ""));
  }
  Tuple t;
  for (std::size_t i = 0; i < p.factor_count(); ++i) {
    t.factors.push_back(detail::parse_base_literal(p.factor(i), parts[i]));
  }
  t.free.assign(p.free_rank(), 0);
  if (parts.size() > p.factor_count()) {
    t.free = detail::parse_ints(detail::strip(parts.back(), '(', ')'));
  }
  return m.canonical(Element(std::move(t)));
}

////////////////////////////////////////////////////////////////////////////
// Factorizations
////////////////////////////////////////////////////////////////////////////

inline Json to_json(Factorization const& z) {
  Json parts = Json::array();
  for (auto const& [id, mult] : z.parts) {
    parts.push_back({id, mult});
  }
  return parts;
}

inline Json to_json(FactorSet const& fs) {
  Json atoms = Json::array();
  for (auto const& u : fs.table->atoms) {
    atoms.push_back(to_json(u));
  }
  Json zs = Json::array();
  for (auto const& z : fs.all) {
    zs.push_back(to_json(z));
  }
  Json lengths = Json::array();
  for (auto const& z : fs.all) {
    lengths.push_back(z.length);
  }
  return {{"element", to_json(fs.element)},
          {"atoms", atoms},
          {"factorizations", zs},
          {"lengths", lengths}};
}

inline FactorSet factor_set_from_json(Json const& j) {
  FactorSet fs;
  fs.element = element_from_json(j.at("element"));
  std::vector<Element> atoms;
  for (auto const& a : j.at("atoms")) {
    atoms.push_back(element_from_json(a));
  }
  fs.table = make_atom_table(std::move(atoms));
  auto const& zs = j.at("factorizations");
  auto const& lengths = j.at("lengths");
  if (zs.size() != lengths.size()) {
    throw Error("corrupt factorization record");
  }
  for (std::size_t i = 0; i < zs.size(); ++i) {
    std::vector<std::pair<AtomId, Multiplicity>> parts;
    for (auto const& p : zs[i]) {
      auto id = p.at(0).get<AtomId>();
      if (id >= fs.table->size()) {
        throw Error("corrupt factorization record");
      }
      parts.emplace_back(id, p.at(1).get<Multiplicity>());
    }
    auto z = make_factorization(fs.table->fingerprint, std::move(parts));
    if (z.length != lengths[i].get<std::uint32_t>()) {
      throw Error("corrupt factorization record");
    }
    fs.all.push_back(std::move(z));
  }
  detail::finish(fs);
  return fs;
}

// Atoms as elements; multiplicities alongside.
inline Json to_json(AtomMultiset const& z) {
  Json out = Json::array();
  for (auto const& [u, mult] : z.parts) {
    out.push_back({to_json(u), mult});
  }
  return out;
}

////////////////////////////////////////////////////////////////////////////
// Reports
////////////////////////////////////////////////////////////////////////////

inline std::string to_string(Ratio const& r) {
  if (r.den == 0) return "inf";
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

inline Json to_json(LengthSet const& l) { return l.values; }

inline Json to_json(ValidationReport const& r) {
  Json j{{"model", r.model},
         {"verifiedBound", r.verified_bound},
         {"closureChecked", r.closure_checked},
         {"membersChecked", r.members_checked},
         {"cancellative", r.cancellative},
         {"stronglyRingLikeCandidate", r.strongly_ring_like_candidate},
         {"smallest", r.smallest ? Json(*r.smallest) : Json(nullptr)}};
  if (!r.factors.empty()) {
    Json fs = Json::array();
    for (auto const& f : r.factors) fs.push_back(to_json(f));
    j["factors"] = fs;
  }
  return j;
}

inline Json to_json(InvariantReport const& r) {
  Json pairs = Json::array();
  for (auto const& p : r.pairs) {
    pairs.push_back({{"k", p.k}, {"l", p.l}, {"distance", p.distance}, {"dist", p.dist_sup}});
  }
  return {{"element", to_json(r.element)},
          {"factorizationCount", r.factorization_count},
          {"lengths", to_json(r.lengths)},
          {"delta", r.delta},
          {"elasticity", to_string(r.elasticity)},
          {"catenary", r.catenary},
          {"equalCatenary", r.equal_catenary},
          {"adjacentCatenary", r.adjacent_catenary},
          {"monotoneCatenary", r.monotone_catenary},
          {"successiveDistance", r.successive_distance},
          {"weakSuccessiveDistance", r.weak_successive_distance},
          {"fiberPairs", pairs}};
}

inline Json to_json(BudgetOverflow const& o) {
  return {{"element", to_json(o.element)}, {"limit", o.limit}};
}

inline Json overflows_json(std::vector<BudgetOverflow> const& os) {
  Json out = Json::array();
  for (auto const& o : os) out.push_back(to_json(o));
  return out;
}

inline Json to_json(EstimateValue const& v) {
  return std::visit(
      [](auto const& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Ratio>) {
          return to_string(x);
        } else {
          return x;
        }
      },
      v);
}

inline Json to_json(GlobalReport const& g) {
  Json est = Json::object();
  for (auto const& e : g.estimates) {
    est[e.name] = {{"value", to_json(e.value)},
                   {"bound", e.bound},
                   {"stabilized", e.stabilized},
                   {"lowerBound", true}};
  }
  return {{"bound", g.bound},
          {"elements", g.elements},
          {"halfFactorial", g.half_factorial},
          {"estimates", est},
          {"overflows", overflows_json(g.overflows)}};
}

inline Json to_json(UnionEstimate const& u) {
  return {{"k", u.k},
          {"bound", u.bound},
          {"union", to_json(u.values)},
          {"rhoK", u.rho_k},
          {"stabilized", u.stabilized},
          {"lowerBound", true},
          {"overflows", overflows_json(u.overflows)}};
}

inline Json to_json(AampWitness const& w) {
  return {{"shift", w.shift},     {"difference", w.difference},
          {"period", w.period},   {"bound", w.bound},
          {"initial", w.initial}, {"central", w.central},
          {"final", w.final}};
}

inline Json to_json(StructureReport const& r) {
  Json entries = Json::array();
  for (auto const& e : r.entries) {
    entries.push_back({{"element", to_json(e.element)},
                       {"lengths", to_json(e.lengths)},
                       {"d", e.difference},
                       {"M", e.bound}});
  }
  return {{"weightBound", r.weight_bound},
          {"differences", r.differences},
          {"maxBound", r.max_bound},
          {"stabilized", r.stabilized},
          {"entries", entries},
          {"overflows", overflows_json(r.overflows)}};
}

inline Json to_json(UnionStructureReport const& r) {
  Json entries = Json::array();
  for (auto const& e : r.entries) {
    entries.push_back({{"k", e.k},
                       {"union", to_json(e.values)},
                       {"M", e.bound},
                       {"density", e.density}});
  }
  return {{"weightBound", r.weight_bound},
          {"trivial", r.trivial},
          {"difference", r.difference},
          {"elasticity", to_string(r.elasticity)},
          {"limitTrend", r.limit_trend},
          {"entries", entries},
          {"overflows", overflows_json(r.overflows)}};
}

inline Json to_json(RelationPair const& p) {
  return {{"element", to_json(p.element)},
          {"x", to_json(p.x)},
          {"y", to_json(p.y)},
          {"length", p.x.length}};
}

inline Json to_json(RelationEnumeration const& r) {
  Json pairs = Json::array();
  for (auto const& p : r.pairs) pairs.push_back(to_json(p));
  return {{"lengthBound", r.length_bound},
          {"weightBound", r.weight_bound},
          {"complete", r.complete},
          {"pairs", pairs},
          {"count", r.pairs.size()},
          {"overflows", overflows_json(r.overflows)}};
}

inline Json to_json(Transcript const& t) {
  Json checks = Json::array();
  for (auto const& c : t.checks) {
    checks.push_back({{"check", c.label}, {"ok", c.ok}, {"detail", c.detail}});
  }
  return {{"name", t.name}, {"passed", t.passed()}, {"checks", checks}};
}

inline Json to_json(GrowthReport const& r) {
  Json rows = Json::array();
  for (auto const& row : r.rows) {
    Json j{{"n", row.n}, {"element", to_json(row.element)}};
    switch (row.status) {
      case GrowthRow::Status::ok:
        j["status"] = "ok";
        j["factorizationCount"] = row.factorization_count;
        for (std::size_t c = 0; c < growth_columns.size(); ++c) {
          j[growth_columns[c]] = row.values[c];
        }
        break;
      case GrowthRow::Status::not_a_member:
        j["status"] = "not-a-member";
        break;
      case GrowthRow::Status::overflow:
        j["status"] = "budget-exceeded";
        break;
    }
    rows.push_back(std::move(j));
  }
  Json verdict = Json::object();
  for (std::size_t c = 0; c < growth_columns.size(); ++c) {
    verdict[growth_columns[c]] = {{"max", r.maxima[c]},
                                  {"verdict", r.stabilized[c] ? "stabilized" : "growing"}};
  }
  return {{"nMax", r.n_max}, {"rows", rows}, {"verdict", verdict}, {"overflows", r.overflows}};
}

}  // namespace factorlab
