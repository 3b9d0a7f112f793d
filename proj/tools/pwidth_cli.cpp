// ============================================================================
// pwidth: command-line surface over the factorization engine and the
// exhaustive oracle.
//
// Subcommands, one per mathematical claim the library packages:
//
//   decompose    factor one permutation into <= 3 order-p elements
//   width        exact width of one element's class (oracle)
//   table        exact width of every class of A_n (oracle)
//   verify       run the engine over all of A_n and re-check every result
//   sharpness    the interval of degrees whose group width reaches 3
//   dvir         class-cube coverage report for A_n
//   paper-check  re-multiply the bundled worked-example identities
//   bench        seeded random decomposition throughput
//
// Exit codes: 0 success; 1 a mathematical check failed (counterexample
// printed); 2 invalid input; 3 resource cap or I/O failure.  All default
// output is line-oriented plain text; --json swaps in one JSON document
// with stable field order.  Identical command + seed gives byte-identical
// stdout (timings, when measured, go to stderr).
// ============================================================================

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pwidth/factor.hpp"
#include "pwidth/oracle.hpp"
#include "pwidth/perm.hpp"

using nlohmann::ordered_json;
using namespace pwidth;

namespace {

struct Options {
  int n = 0;
  int p = 0;
  std::string perm;
  bool json = false;
  std::uint64_t seed = 1;
  int max_n = 9;
  int workers = 1;
  std::string out;
  int count = 1000;
};

// ---- output plumbing ----

// accumulate everything, then emit once (stdout or --out file)
int emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(opt.out, std::ios::binary);
  f << text;
  f.flush();
  if (!f) {
    std::cerr << "emit: cannot write " << opt.out << "\n";
    return 3;
  }
  return 0;
}

std::string type_string(const std::vector<int>& type) {
  std::string s;
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(type[i]);
  }
  return s;
}

std::string split_string(int split) {
  return split > 0 ? "+" : split < 0 ? "-" : "";
}

ordered_json certificate_json(int n, const Factorization& f, bool verified) {
  ordered_json j;
  j["n"] = n;
  j["p"] = f.prime;
  j["sigma"] = f.target.str();
  j["factors"] = ordered_json::array();
  for (const Permutation& x : f.factors) j["factors"].push_back(x.str());
  j["strong"] = f.strong;
  j["free_letters"] = f.free_letters;
  j["trace"] = f.trace;
  j["verified"] = verified;
  return j;
}

// all even permutations of degree n, lexicographic image order
std::vector<Permutation> whole_alternating(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  std::vector<Permutation> out;
  do {
    Permutation g = Permutation::from_images(img);
    if (g.is_even()) out.push_back(g);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

// uniform over A_n: uniform S_n, then a parity-fixing swap of two images
Permutation random_even(int n, std::mt19937_64& rng) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> d(0, i);
    std::swap(img[i], img[d(rng)]);
  }
  Permutation g = Permutation::from_images(img);
  if (!g.is_even()) {
    std::swap(img[0], img[1]);
    g = Permutation::from_images(img);
  }
  return g;
}

// ---- subcommands ----

int cmd_decompose(const Options& opt) {
  Permutation sigma = parse_perm(opt.perm, opt.n);
  Factorization f = decompose(sigma, opt.p);
  std::vector<std::string> reasons;
  const bool verified = verify_certificate(f, &reasons);
  if (!verified || f.factors.size() > 3) {
    std::cout << "counterexample: sigma " << sigma.str() << "\n";
    for (std::size_t i = 0; i < f.factors.size(); ++i)
      std::cout << "factor " << f.factors[i].str() << "\n";
    for (const std::string& r : reasons) std::cout << "reason " << r << "\n";
    return 1;
  }
  std::ostringstream os;
  if (opt.json) {
    os << certificate_json(opt.n, f, verified).dump() << "\n";
  } else {
    os << "n " << opt.n << "\np " << opt.p << "\nsigma " << sigma.str() << "\n";
    for (const Permutation& x : f.factors) os << "factor " << x.str() << "\n";
    os << "strong " << (f.strong ? "true" : "false") << "\n";
    os << "free_letters";
    for (int c : f.free_letters) os << ' ' << c;
    os << "\n";
    for (const std::string& t : f.trace) os << "trace " << t << "\n";
    os << "verified true\n";
  }
  return emit(opt, os.str());
}

int cmd_width(const Options& opt) {
  Permutation sigma = parse_perm(opt.perm, opt.n);
  const oracle::ClassId id = oracle::class_of(sigma);
  const bool big = opt.n >= 10 && opt.max_n >= opt.n;
  oracle::WidthTable table = oracle::exact_widths(opt.n, opt.p, big, opt.workers);
  const auto row = std::find_if(table.rows.begin(), table.rows.end(),
                                [&](const oracle::ClassRow& r) { return r.id == id; });
  if (row == table.rows.end()) throw std::logic_error("width: class missing from table");
  std::ostringstream os;
  if (opt.json) {
    ordered_json j;
    j["n"] = opt.n;
    j["p"] = opt.p;
    j["sigma"] = sigma.str();
    j["cycle_type"] = id.cycle_type;
    j["split"] = split_string(id.split);
    j["width"] = row->width;
    j["class_size"] = row->size;
    j["group_width"] = table.group_width;
    os << j.dump() << "\n";
  } else {
    os << "sigma " << sigma.str() << "\nclass " << oracle::format_class(id)
       << "\nwidth " << row->width << "\ngroup_width " << table.group_width << "\n";
  }
  return emit(opt, os.str());
}

int cmd_table(const Options& opt) {
  const bool big = opt.n >= 10 && opt.max_n >= opt.n;
  oracle::WidthTable table = oracle::exact_widths(opt.n, opt.p, big, opt.workers);
  std::ostringstream os;
  if (opt.json) {
    ordered_json j;
    j["n"] = table.n;
    j["p"] = table.p;
    j["group_width"] = table.group_width;
    j["group_size"] = table.group_size;
    j["rows"] = ordered_json::array();
    for (const oracle::ClassRow& row : table.rows) {
      ordered_json r;
      r["cycle_type"] = row.id.cycle_type;
      r["split"] = split_string(row.id.split);
      r["width"] = row.width;
      r["size"] = row.size;
      j["rows"].push_back(r);
    }
    os << j.dump() << "\n";
  } else {
    os << "# n=" << table.n << " p=" << table.p
       << " group_width=" << table.group_width << "\n";
    os << "cycle_type,split,width\n";
    for (const oracle::ClassRow& row : table.rows)
      os << type_string(row.id.cycle_type) << ',' << split_string(row.id.split)
         << ',' << row.width << "\n";
  }
  return emit(opt, os.str());
}

int cmd_verify(const Options& opt) {
  if (opt.n > 10) throw oracle::ResourceCap("verify: degree above 10");
  int histogram[4] = {0, 0, 0, 0};
  int weak = 0;
  std::uint64_t total = 0;
  for (const Permutation& sigma : whole_alternating(opt.n)) {
    Factorization f = decompose(sigma, opt.p);
    std::vector<std::string> reasons;
    if (f.factors.size() > 3 || !verify_certificate(f, &reasons)) {
      std::cout << "counterexample: sigma " << sigma.str() << "\n";
      for (const Permutation& x : f.factors) std::cout << "factor " << x.str() << "\n";
      for (const std::string& r : reasons) std::cout << "reason " << r << "\n";
      return 1;
    }
    ++histogram[f.factors.size()];
    if (!f.strong) ++weak;
    ++total;
  }
  std::ostringstream os;
  if (opt.json) {
    ordered_json j;
    j["n"] = opt.n;
    j["p"] = opt.p;
    j["checked"] = total;
    j["factor_counts"] = {histogram[0], histogram[1], histogram[2], histogram[3]};
    j["weak"] = weak;
    j["verified"] = true;
    os << j.dump() << "\n";
  } else {
    os << "checked " << total << " elements of A_" << opt.n << " at p=" << opt.p << "\n";
    os << "factor_counts 0:" << histogram[0] << " 1:" << histogram[1]
       << " 2:" << histogram[2] << " 3:" << histogram[3] << "\n";
    os << "weak " << weak << "\nverified true\n";
  }
  return emit(opt, os.str());
}

int cmd_sharpness(const Options& opt) {
  const std::vector<int> ns = oracle::sharpness_scan(opt.p);
  std::ostringstream os;
  ordered_json rows = ordered_json::array();
  bool failed = false;
  for (int n : ns) {
    const int cap = std::max(opt.max_n, 9);
    if (n <= cap && n <= 10) {
      oracle::WidthTable t =
          oracle::exact_widths(n, opt.p, n >= 10, opt.workers);
      ordered_json r;
      r["n"] = n;
      r["group_width"] = t.group_width;
      r["confirmed"] = t.group_width == 3;
      rows.push_back(r);
      if (t.group_width != 3) failed = true;
    } else {
      ordered_json r;
      r["n"] = n;
      r["status"] = "beyond-cap";
      rows.push_back(r);
    }
  }
  if (opt.json) {
    ordered_json j;
    j["p"] = opt.p;
    j["interval"] = ns;
    j["rows"] = rows;
    os << j.dump() << "\n";
  } else {
    os << "p " << opt.p << "\ninterval";
    for (int n : ns) os << ' ' << n;
    os << "\n";
    for (const auto& r : rows) {
      if (r.contains("status"))
        os << "n " << r["n"] << " beyond-cap\n";
      else
        os << "n " << r["n"] << " group_width " << r["group_width"]
           << (r["confirmed"].get<bool>() ? " confirmed" : " NOT-CONFIRMED") << "\n";
    }
  }
  const int rc = emit(opt, os.str());
  if (failed) {
    std::cout << "counterexample: some degree in the interval has group width "
                 "different from 3\n";
    return 1;
  }
  return rc;
}

int cmd_dvir(const Options& opt) {
  if (opt.n < 5)
    throw std::invalid_argument(
        "dvir: the coverage criterion presumes A_n simple; need n >= 5");
  const bool big = opt.n >= 10 && opt.max_n >= opt.n;
  std::ostringstream os;
  ordered_json rows = ordered_json::array();
  bool failed = false;
  for (const oracle::ClassId& cls : oracle::all_classes(opt.n)) {
    const int r = oracle::class_r(cls.cycle_type);
    const bool pred = oracle::dvir_predicate(opt.n, cls.cycle_type);
    const bool strict = oracle::dvir_predicate_strict(opt.n, cls.cycle_type);
    ordered_json row;
    row["class"] = oracle::format_class(cls);
    row["r"] = r;
    row["predicate"] = pred;
    row["strict"] = strict;
    // cube computed where a claim or a reading disagreement rides on it
    if (pred || strict) {
      const bool cubes = oracle::class_cube_covers(opt.n, cls, big);
      row["cubes"] = cubes;
      if (pred && !cubes) {
        failed = true;
        std::cout << "counterexample: class " << oracle::format_class(cls)
                  << " satisfies the coverage criterion but its cube misses elements\n";
      }
      if (pred != strict)
        row["reading_note"] = cubes ? "covers: exclusion unnecessary here"
                                    : "fails to cover: broad exclusion needed";
    }
    rows.push_back(row);
  }
  ordered_json j;
  j["n"] = opt.n;
  j["rows"] = rows;
  if (opt.p != 0) {
    const int k = oracle::dvir_witness_k(opt.n, opt.p);
    std::vector<int> type(k, opt.p);
    type.resize(k + (opt.n - k * opt.p), 1);
    ordered_json w;
    w["p"] = opt.p;
    w["k"] = k;
    w["cycle_type"] = type;
    const bool halves = oracle::splits_in_half(type);
    bool cubes = true;
    for (int tag : halves ? std::vector<int>{1, -1} : std::vector<int>{0})
      cubes = cubes && oracle::class_cube_covers(opt.n, {type, tag}, big);
    w["cubes"] = cubes;
    if (!cubes) {
      failed = true;
      std::cout << "counterexample: witness class fails to cover\n";
    }
    j["witness"] = w;
  }
  if (opt.json) {
    os << j.dump() << "\n";
  } else {
    for (const auto& row : j["rows"]) {
      os << "class " << row["class"].get<std::string>() << " r " << row["r"]
         << " predicate " << (row["predicate"].get<bool>() ? "yes" : "no")
         << " strict " << (row["strict"].get<bool>() ? "yes" : "no");
      if (row.contains("cubes"))
        os << " cubes " << (row["cubes"].get<bool>() ? "yes" : "no");
      if (row.contains("reading_note"))
        os << "  [" << row["reading_note"].get<std::string>() << "]";
      os << "\n";
    }
    if (j.contains("witness")) {
      const auto& w = j["witness"];
      os << "witness p " << w["p"] << " k " << w["k"] << " type "
         << type_string(w["cycle_type"].get<std::vector<int>>()) << " cubes "
         << (w["cubes"].get<bool>() ? "yes" : "no") << "\n";
    }
  }
  const int rc = emit(opt, os.str());
  return failed ? 1 : rc;
}

// ---- bundled worked-example identities ----

struct IdentityCheck {
  std::string name;
  bool pass = false;
  bool required = true;  // expected-mismatch lines are reported, not enforced
};

// transposition-pair gadget: (2 3)(4 5) as two p-cycles on p+1 letters
IdentityCheck gadget_identity(int p) {
  const int deg = p + 1;
  Cycle first, second{3, 4, 2, 5};
  for (int o = 6; o <= p + 1; ++o) first.push_back(o);
  first.insert(first.end(), {5, 3, 4, 2});
  for (int o = p + 1; o >= 6; --o) second.push_back(o);
  const Permutation lhs = Permutation::from_cycles(deg, {{2, 3}, {4, 5}});
  const Permutation rhs = Permutation::from_cycles(deg, {first})
                              .then(Permutation::from_cycles(deg, {second}));
  return {"transposition-pair gadget (p=" + std::to_string(p) + ")", lhs == rhs};
}

Permutation run_cycle(int n, int from, int to) {
  Cycle c;
  for (int x = from; x <= to; ++x) c.push_back(x);
  return Permutation::from_cycles(n, {c});
}

// the 47-letter row layout: three rows of 5-cycles and a tail residue
IdentityCheck row_layout_identity() {
  const int n = 47;
  auto block = [&](std::initializer_list<int> v) { return Cycle(v); };
  auto run = [&](int a, int b, int extra) {
    Cycle c;
    for (int x = a; x <= b; ++x) c.push_back(x);
    if (extra) c.push_back(extra);
    return c;
  };
  const Permutation x1 = Permutation::from_cycles(
      n, {run(1, 5, 0), run(13, 16, 47), run(20, 23, 46), run(27, 30, 45),
          run(34, 37, 44)});
  const Permutation x2 = Permutation::from_cycles(
      n, {block({1, 6, 7, 8, 9}), run(17, 20, 47), run(24, 27, 46),
          run(31, 34, 45)});
  const Permutation x3 =
      Permutation::from_cycles(n, {block({1, 10, 11, 12, 13})});
  const Permutation tail = run_cycle(n, 38, 44);
  const bool pass =
      x1.then(x2).then(x3).then(tail) == run_cycle(n, 1, 47) &&
      x1.is_p_element(5) && x2.is_p_element(5) && x3.is_p_element(5);
  return {"row layout example (n=47)", pass};
}

// merge-and-split display: (1 2 3 4 5)(6..12) = (1..7)(6 1 8 9 10 11 12)
IdentityCheck merge_split_identity() {
  const int n = 12;
  const Permutation lhs =
      Permutation::from_cycles(n, {{1, 2, 3, 4, 5}}).then(run_cycle(n, 6, 12));
  const Permutation rhs = run_cycle(n, 1, 7).then(
      Permutation::from_cycles(n, {{6, 1, 8, 9, 10, 11, 12}}));
  return {"merge-and-split display", lhs == rhs};
}

// block-pair display, two readings of the first line; the chain itself is
// (1..12)(7 1) = (1..7)(7 1 8 9 10 11 12)
std::vector<IdentityCheck> block_pair_identity() {
  const int n = 12;
  const Permutation mid =
      run_cycle(n, 1, 12).then(Permutation::from_cycles(n, {{7, 1}}));
  const Permutation last = run_cycle(n, 1, 7).then(
      Permutation::from_cycles(n, {{7, 1, 8, 9, 10, 11, 12}}));
  const Permutation verbatim = Permutation::from_cycles(
      n, {{1, 2, 3, 4, 5, 6}, {7, 8, 9, 11, 10, 12}});
  const Permutation corrected = Permutation::from_cycles(
      n, {{1, 2, 3, 4, 5, 6}, {7, 8, 9, 10, 11, 12}});
  std::vector<IdentityCheck> out;
  out.push_back({"block-pair display chain", mid == last});
  out.push_back({"block-pair display (corrected reading)",
                 corrected == mid && corrected == last});
  out.push_back({"block-pair display (verbatim reading)", verbatim == mid,
                 /*required=*/false});
  return out;
}

int cmd_paper_check(const Options& opt) {
  std::vector<IdentityCheck> checks;
  if (opt.p == 0 || opt.p == 5) {
    checks.push_back(gadget_identity(5));
    checks.push_back(row_layout_identity());
  }
  if (opt.p == 0 || opt.p == 7) {
    checks.push_back(gadget_identity(7));
    checks.push_back(merge_split_identity());
    for (IdentityCheck& c : block_pair_identity()) checks.push_back(c);
  }
  if (checks.empty())
    throw std::invalid_argument("paper-check: no bundled identities for this p");
  std::ostringstream os;
  bool failed = false;
  ordered_json rows = ordered_json::array();
  for (const IdentityCheck& c : checks) {
    const char* status = c.pass          ? "pass"
                         : c.required    ? "FAIL"
                                         : "mismatch (expected)";
    if (!c.pass && c.required) failed = true;
    if (opt.json) {
      ordered_json r;
      r["check"] = c.name;
      r["pass"] = c.pass;
      r["required"] = c.required;
      rows.push_back(r);
    } else {
      os << "check " << c.name << ": " << status << "\n";
    }
  }
  if (opt.json) {
    ordered_json j;
    j["checks"] = rows;
    j["all_required_pass"] = !failed;
    os << j.dump() << "\n";
  } else {
    os << (failed ? "result FAIL\n" : "result pass\n");
  }
  const int rc = emit(opt, os.str());
  return failed ? 1 : rc;
}

int cmd_bench(const Options& opt) {
  std::mt19937_64 rng(opt.seed);
  const auto start = std::chrono::steady_clock::now();
  int strong = 0, weak = 0;
  std::size_t max_factors = 0;
  for (int i = 0; i < opt.count; ++i) {
    Permutation sigma = random_even(opt.n, rng);
    Factorization f = decompose(sigma, opt.p);
    std::vector<std::string> reasons;
    if (f.factors.size() > 3 || !verify_certificate(f, &reasons)) {
      std::cout << "counterexample at sample " << i << ": sigma " << sigma.str()
                << "\n";
      for (const std::string& r : reasons) std::cout << "reason " << r << "\n";
      return 1;
    }
    (f.strong ? strong : weak)++;
    max_factors = std::max(max_factors, f.factors.size());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::cerr << "elapsed " << secs << " s\n";  // timing is not part of stdout
  std::ostringstream os;
  if (opt.json) {
    ordered_json j;
    j["n"] = opt.n;
    j["p"] = opt.p;
    j["count"] = opt.count;
    j["seed"] = opt.seed;
    j["verified"] = opt.count;
    j["strong"] = strong;
    j["weak"] = weak;
    j["max_factors"] = max_factors;
    os << j.dump() << "\n";
  } else {
    os << "n " << opt.n << "\np " << opt.p << "\ncount " << opt.count
       << "\nseed " << opt.seed << "\nverified " << opt.count << "\nstrong "
       << strong << "\nweak " << weak << "\nmax_factors " << max_factors
       << "\n";
  }
  return emit(opt, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-width toolkit: constructive factorization into order-p "
               "elements and exhaustive verification over small alternating "
               "groups"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool need_n, bool need_p) {
    auto* n = sub->add_option("--n", opt.n, "degree (number of letters)");
    auto* p = sub->add_option("--p", opt.p, "odd prime order of the factors");
    if (need_n) n->required();
    if (need_p) p->required();
    sub->add_flag("--json", opt.json, "emit one JSON document");
    sub->add_option("--out", opt.out, "write output to a file");
    sub->add_option("--max-n", opt.max_n,
                    "allow oracle degrees above 9 up to this bound");
    sub->add_option("--workers", opt.workers, "oracle worker threads");
    return sub;
  };

  CLI::App* dec = add_common(
      app.add_subcommand("decompose", "factor a permutation into <= 3 "
                                      "order-p elements and verify"),
      true, true);
  dec->add_option("--perm", opt.perm, "permutation in cycle notation")
      ->required();
  CLI::App* wid = add_common(
      app.add_subcommand("width", "exact width of one element's class"), true,
      true);
  wid->add_option("--perm", opt.perm, "permutation in cycle notation")
      ->required();
  add_common(app.add_subcommand("table", "exact width of every class of A_n"),
             true, true);
  add_common(app.add_subcommand(
                 "verify", "decompose and re-check every element of A_n"),
             true, true);
  add_common(app.add_subcommand(
                 "sharpness", "degrees between (4p+3)/3 and 2p, confirmed "
                              "against exact widths where in cap"),
             false, true);
  add_common(app.add_subcommand(
                 "dvir", "class-cube coverage report over A_n classes"),
             true, false);
  add_common(app.add_subcommand("paper-check",
                                "re-multiply the bundled worked-example "
                                "identities and report each one"),
             false, false);
  CLI::App* ben = add_common(
      app.add_subcommand("bench", "seeded random decomposition throughput"),
      true, true);
  ben->add_option("--count", opt.count, "number of random samples");
  ben->add_option("--seed", opt.seed, "random seed");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("decompose")) return cmd_decompose(opt);
    if (app.got_subcommand("width")) return cmd_width(opt);
    if (app.got_subcommand("table")) return cmd_table(opt);
    if (app.got_subcommand("verify")) return cmd_verify(opt);
    if (app.got_subcommand("sharpness")) return cmd_sharpness(opt);
    if (app.got_subcommand("dvir")) return cmd_dvir(opt);
    if (app.got_subcommand("paper-check")) return cmd_paper_check(opt);
    if (app.got_subcommand("bench")) return cmd_bench(opt);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const oracle::ResourceCap& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 1;
  }
}
