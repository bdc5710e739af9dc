#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "factorlab/cache.hpp"

using namespace factorlab;

namespace {

struct Common {
  std::string monoid;
  std::string output = "json";
  std::size_t budget = 2'000'000;
  unsigned jobs = 1;
  std::string cache_dir;
};

struct Args {
  Common common;
  std::string element;
  std::optional<std::int64_t> bound;
  std::int64_t length_bound = 4;
  std::int64_t k = 2;
  std::int64_t k_min = 1;
  std::int64_t k_max = 8;
  std::vector<std::int64_t> ds{1};
  std::optional<std::int64_t> d;
  std::int64_t m = 0;
  std::string set;
  std::string name;
  std::string family = "power";
  std::int64_t n_max = 8;
  std::int64_t y1 = 2;
  std::int64_t y2 = 2;
  std::int64_t atom_k_max = 4;
  bool all = false;
  bool unions = false;
};

class BudgetFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Session {
  MonoidDescriptor descriptor;
  std::unique_ptr<Model> model;
  std::string hash;
  ValidationReport validation;
};

Session open_monoid(Common const& c) {
  if (c.monoid.empty()) {
    throw Error("--monoid is required");
  }
  Session s;
  s.descriptor = load_descriptor(c.monoid);
  s.validation = validate(s.descriptor, minimal_validation_bound(s.descriptor));
  s.model = make_model(s.descriptor);
  s.hash = descriptor_hash(s.descriptor);
  return s;
}

std::optional<FactorCache> open_cache(Common const& c, std::string const& hash) {
  if (!c.cache_dir.empty()) {
    return FactorCache(c.cache_dir, hash);
  }
  if (auto dir = default_cache_dir()) {
    return FactorCache(*dir, hash);
  }
  return std::nullopt;
}

RunOptions run_options(Common const& c) { return {c.budget, c.jobs}; }

bool is_scalar(Json const& j) {
  if (j.is_primitive()) return true;
  if (j.is_array()) {
    for (auto const& x : j) {
      if (!is_scalar(x)) return false;
    }
    return true;
  }
  return false;
}

std::string cell(Json const& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

bool is_row_list(Json const& j) {
  if (!j.is_array() || j.empty()) return false;
  return std::all_of(j.begin(), j.end(), [](Json const& r) { return r.is_object(); });
}

void render_table(Json const& j, std::ostream& os, std::string const& indent = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto const& v = it.value();
    if (is_scalar(v)) {
      os << indent << it.key() << ": " << cell(v) << "\n";
    } else if (is_row_list(v)) {
      std::vector<std::string> cols;
      for (auto const& r : v) {
        for (auto c = r.begin(); c != r.end(); ++c) {
          if (std::find(cols.begin(), cols.end(), c.key()) == cols.end()) {
            cols.push_back(c.key());
          }
        }
      }
      std::vector<std::size_t> width;
      for (auto const& c : cols) width.push_back(c.size());
      std::vector<std::vector<std::string>> rows;
      for (auto const& r : v) {
        std::vector<std::string> row;
        for (std::size_t i = 0; i < cols.size(); ++i) {
          row.push_back(r.contains(cols[i]) ? cell(r[cols[i]]) : "");
          width[i] = std::max(width[i], row.back().size());
        }
        rows.push_back(std::move(row));
      }
      os << indent << it.key() << ":\n";
      auto line = [&](std::vector<std::string> const& row) {
        os << indent << "  ";
        for (std::size_t i = 0; i < row.size(); ++i) {
          os << row[i];
          if (i + 1 < row.size()) os << std::string(width[i] - row[i].size() + 2, ' ');
        }
        os << "\n";
      };
      line(cols);
      for (auto const& r : rows) line(r);
    } else if (v.is_object()) {
      os << indent << it.key() << ":\n";
      render_table(v, os, indent + "  ");
    } else {
      os << indent << it.key() << ":\n";
      for (auto const& x : v) {
        if (x.is_object()) {
          render_table(x, os, indent + "  - ");
        } else {
          os << indent << "  - " << cell(x) << "\n";
        }
      }
    }
  }
}

void emit(Common const& c, std::string const& command, Json const& hash,
          Json bounds, Json results, Json warnings) {
  Json report{{"command", command},
              {"descriptorHash", hash},
              {"bounds", std::move(bounds)},
              {"results", std::move(results)},
              {"warnings", std::move(warnings)}};
  if (c.output == "table") {
    render_table(report, std::cout);
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

Json base_bounds(Session const& s, Common const& c) {
  return {{"verified", s.validation.verified_bound}, {"budget", c.budget}};
}

Json overflow_warnings(std::vector<BudgetOverflow> const& os) {
  Json w = Json::array();
  for (auto const& o : os) {
    w.push_back("budget of " + std::to_string(o.limit) +
                " factorizations exceeded at " + to_string(o.element) +
                "; element skipped");
  }
  return w;
}

std::int64_t require_bound(Args const& a) {
  if (!a.bound) throw Error("--bound is required");
  if (*a.bound < 0) throw Error("--bound must be nonnegative");
  return *a.bound;
}

int run(std::string const& command, Args const& a) {
  auto const& c = a.common;
  if (c.budget < 1) throw Error("--budget must be at least 1");
  if (c.output != "json" && c.output != "table") {
    throw Error("--output must be json or table");
  }

  if (command == "verify-example") {
    Transcript t;
    Json hash = nullptr;
    Json bounds{{"kMax", a.k_max}};
    if (a.name == "3.2") {
      hash = descriptor_hash(interval_sumset_descriptor());
      bounds["atomKMax"] = std::min(a.k_max, a.atom_k_max);
      t = verify_interval_sumsets(a.k_max, a.atom_k_max, run_options(c));
    } else if (a.name == "3.3") {
      std::int64_t d = a.d.value_or(10);
      bounds["d"] = d;
      bounds["shifts"] = {a.y1, a.y2};
      t = verify_unique_sum_representations(d, a.k_max, a.y1, a.y2);
    } else {
      throw Error("--name must be 3.2 or 3.3");
    }
    emit(c, command, hash, bounds, to_json(t), Json::array());
    if (!t.passed()) {
      require(t);
    }
    return 0;
  }

  if (command == "aamp-check" && !a.set.empty()) {
    auto l = LengthSet::of(detail::parse_ints(detail::strip(a.set, '{', '}')));
    if (l.empty()) throw Error("--set must be nonempty");
    std::int64_t d = a.d.value_or(1);
    auto w = is_aamp(l, d, a.m);
    Json r{{"set", to_json(l)},
           {"d", d},
           {"M", a.m},
           {"aamp", w.has_value()},
           {"witness", w ? to_json(*w) : Json(nullptr)},
           {"minimalBound", minimal_bound(l, d)}};
    emit(c, command, nullptr, Json{{"M", a.m}}, r, Json::array());
    return 0;
  }

  auto s = open_monoid(c);
  auto const& m = *s.model;
  auto opt = run_options(c);
  auto bounds = base_bounds(s, c);

  if (command == "validate") {
    std::int64_t b = a.bound.value_or(s.validation.verified_bound);
    auto r = validate(s.descriptor, b);
    bounds["verified"] = b;
    emit(c, command, s.hash, bounds, to_json(r), Json::array());
    return 0;
  }

  if (command == "atoms") {
    auto e = parse_element(m, a.element);
    Json atoms = Json::array();
    for (auto const& u : m.atoms_dividing(e)) atoms.push_back(to_json(u));
    emit(c, command, s.hash, bounds, {{"element", to_json(e)}, {"atoms", atoms}},
         Json::array());
    return 0;
  }

  if (command == "factorize" || command == "invariants") {
    auto e = parse_element(m, a.element);
    auto cache = open_cache(c, s.hash);
    auto fs = cached_factorizations(m, e, {c.budget}, cache ? &*cache : nullptr);
    auto results = command == "factorize" ? to_json(fs) : to_json(invariant_report(fs));
    emit(c, command, s.hash, bounds, results, Json::array());
    return 0;
  }

  if (command == "global") {
    auto b = require_bound(a);
    bounds["weight"] = b;
    auto g = global_estimates(m, b, opt);
    emit(c, command, s.hash, bounds, to_json(g), overflow_warnings(g.overflows));
    if (!g.overflows.empty()) throw BudgetFailure("budget exceeded");
    return 0;
  }

  if (command == "unions") {
    auto b = require_bound(a);
    bounds["weight"] = b;
    auto u = unions_of_lengths(m, a.k, b, opt);
    emit(c, command, s.hash, bounds, to_json(u), overflow_warnings(u.overflows));
    if (!u.overflows.empty()) throw BudgetFailure("budget exceeded");
    return 0;
  }

  if (command == "aamp-check") {
    auto e = parse_element(m, a.element);
    auto l = length_set(factorizations(m, e, {c.budget}));
    std::int64_t d = a.d.value_or(1);
    auto w = is_aamp(l, d, a.m);
    Json r{{"element", to_json(e)},
           {"set", to_json(l)},
           {"d", d},
           {"M", a.m},
           {"aamp", w.has_value()},
           {"witness", w ? to_json(*w) : Json(nullptr)},
           {"minimalBound", minimal_bound(l, d)}};
    bounds["M"] = a.m;
    emit(c, command, s.hash, bounds, r, Json::array());
    return 0;
  }

  if (command == "structure-probe") {
    auto b = require_bound(a);
    bounds["weight"] = b;
    if (a.unions) {
      auto r = unions_structure_probe(m, a.k_min, a.k_max, b, opt);
      bounds["k"] = {std::max<std::int64_t>(a.k_min, 1), a.k_max};
      emit(c, command, s.hash, bounds, to_json(r), overflow_warnings(r.overflows));
      if (!r.overflows.empty()) throw BudgetFailure("budget exceeded");
    } else {
      auto r = structure_probe(m, b, a.ds, opt);
      emit(c, command, s.hash, bounds, to_json(r), overflow_warnings(r.overflows));
      if (!r.overflows.empty()) throw BudgetFailure("budget exceeded");
    }
    return 0;
  }

  if (command == "relation-atoms") {
    bounds["length"] = a.length_bound;
    auto r = a.all ? enumerate_equal_length_relations(m, a.length_bound, a.bound, opt)
                   : relation_atoms(m, a.length_bound, a.bound, opt);
    bounds["weight"] = r.weight_bound;
    auto warnings = overflow_warnings(r.overflows);
    if (!r.complete) {
      warnings.push_back("infinitely many atoms: relations truncated at weight " +
                         std::to_string(r.weight_bound));
    }
    emit(c, command, s.hash, bounds, to_json(r), warnings);
    if (!r.overflows.empty()) throw BudgetFailure("budget exceeded");
    return 0;
  }

  if (command == "probe-growth") {
    GrowthFamily f;
    if (a.family == "power") {
      f.kind = GrowthFamily::Kind::power;
      f.base = parse_element(m, a.element);
    } else if (a.family == "diagonal") {
      f.kind = GrowthFamily::Kind::diagonal;
    } else {
      throw Error("--family must be power or diagonal");
    }
    bounds["nMax"] = a.n_max;
    auto r = probe_growth(m, f, a.n_max, opt);
    Json warnings = Json::array();
    for (auto const& row : r.rows) {
      if (row.status == GrowthRow::Status::overflow) {
        warnings.push_back("budget exceeded at n = " + std::to_string(row.n));
      }
    }
    emit(c, command, s.hash, bounds, to_json(r), warnings);
    if (r.overflows > 0) throw BudgetFailure("budget exceeded");
    return 0;
  }

  throw Error("unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"factorlab: factorizations and their invariants in concrete monoids"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* sub, bool monoid) {
    if (monoid) {
      sub->add_option("--monoid", a.common.monoid, "descriptor JSON file")->required();
    }
    sub->add_option("--output", a.common.output, "json or table")
        ->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--budget", a.common.budget, "factorizations per element");
    sub->add_option("--jobs", a.common.jobs, "worker threads");
    sub->add_option("--cache-dir", a.common.cache_dir,
                    "factorization cache (default $FACTORLAB_CACHE)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a descriptor");
  common(validate_cmd, true);
  validate_cmd->add_option("--bound", a.bound, "coordinate bound for closure checks");

  auto* atoms_cmd = app.add_subcommand("atoms", "atoms dividing an element");
  common(atoms_cmd, true);
  atoms_cmd->add_option("--element", a.element)->required();

  auto* factorize_cmd = app.add_subcommand("factorize", "all factorizations of an element");
  common(factorize_cmd, true);
  factorize_cmd->add_option("--element", a.element)->required();

  auto* inv_cmd = app.add_subcommand("invariants", "element-level invariants");
  common(inv_cmd, true);
  inv_cmd->add_option("--element", a.element)->required();

  auto* global_cmd = app.add_subcommand("global", "global estimates up to a weight bound");
  common(global_cmd, true);
  global_cmd->add_option("--bound", a.bound, "weight bound")->required();

  auto* unions_cmd = app.add_subcommand("unions", "union of sets of lengths containing k");
  common(unions_cmd, true);
  unions_cmd->add_option("--k", a.k)->required();
  unions_cmd->add_option("--bound", a.bound, "weight bound")->required();

  auto* aamp_cmd = app.add_subcommand("aamp-check", "AAMP test for a set or L(a)");
  common(aamp_cmd, false);
  aamp_cmd->add_option("--monoid", a.common.monoid, "descriptor JSON file");
  auto* set_opt = aamp_cmd->add_option("--set", a.set, "finite set, e.g. 2,3,5");
  auto* elem_opt = aamp_cmd->add_option("--element", a.element);
  set_opt->excludes(elem_opt);
  aamp_cmd->add_option("--d", a.d, "difference")->required();
  aamp_cmd->add_option("--M", a.m, "bound")->required();

  auto* sp_cmd = app.add_subcommand("structure-probe", "AAMP fits of sets of lengths");
  common(sp_cmd, true);
  sp_cmd->add_option("--bound", a.bound, "weight bound")->required();
  sp_cmd->add_option("--d", a.ds, "candidate differences")->delimiter(',');
  sp_cmd->add_flag("--unions", a.unions, "fit unions of sets of lengths instead");
  sp_cmd->add_option("--k-min", a.k_min);
  sp_cmd->add_option("--k-max", a.k_max);

  auto* ra_cmd = app.add_subcommand("relation-atoms", "atoms of the equal-length relation monoid");
  common(ra_cmd, true);
  ra_cmd->add_option("--length-bound", a.length_bound)->required();
  ra_cmd->add_option("--bound", a.bound, "weight bound, needed for infinitely many atoms");
  ra_cmd->add_flag("--all", a.all, "list every equal-length relation instead");

  auto* ve_cmd = app.add_subcommand("verify-example", "reproduce a worked example");
  common(ve_cmd, false);
  ve_cmd->add_option("--name", a.name, "3.2 or 3.3")
      ->required()
      ->check(CLI::IsMember({"3.2", "3.3"}));
  ve_cmd->add_option("--k-max", a.k_max)->required();
  ve_cmd->add_option("--d", a.d, "difference for 3.3 (default 10)");
  ve_cmd->add_option("--y1", a.y1);
  ve_cmd->add_option("--y2", a.y2);
  ve_cmd->add_option("--atom-k-max", a.atom_k_max);

  auto* pg_cmd = app.add_subcommand("probe-growth", "invariants along a family a(n)");
  common(pg_cmd, true);
  pg_cmd->add_option("--family", a.family, "power or diagonal")
      ->check(CLI::IsMember({"power", "diagonal"}));
  pg_cmd->add_option("--element", a.element, "base element for the power family");
  pg_cmd->add_option("--n-max", a.n_max)->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, a);
  } catch (ClosureViolation const& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 2;
  } catch (MalformedDescriptor const& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 2;
  } catch (NotAMember const& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 2;
  } catch (ShapeMismatch const& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 2;
  } catch (BudgetExceeded const& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (BudgetFailure const& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (AssertionFailure const& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return 4;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
