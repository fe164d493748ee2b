#include "ppower/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ppower/conj.hpp"
#include "ppower/gf.hpp"
#include "ppower/tri_image.hpp"
#include "ppower/uni_image.hpp"

namespace ppower {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Fixed six-digit rendering so reports stay byte-stable.
std::string decimal_string(const Ratio& r) {
  const BigInt scaled = r.num * 1000000 / r.den;
  const BigInt whole = scaled / 1000000;
  std::string frac = BigInt(scaled % 1000000).str();
  frac.insert(0, 6 - frac.size(), '0');
  return whole.str() + "." + frac;
}

json ratio_json(const Ratio& r) {
  return json{{"num", r.num.str()}, {"den", r.den.str()}, {"decimal", decimal_string(r)}};
}

std::vector<unsigned> prime_powers_up_to(unsigned max_q) {
  std::vector<unsigned> out;
  for (unsigned q = 2; q <= std::min(max_q, FieldTable::kMaxOrder); ++q) {
    unsigned p = 0;
    unsigned e = 0;
    if (split_prime_power(q, p, e)) out.push_back(q);
  }
  return out;
}

unsigned char_of(unsigned q) {
  unsigned p = 0;
  unsigned e = 0;
  if (!split_prime_power(q, p, e)) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
  return p;
}

// Loads the cache named by the context, if any; saves on destruction when dirty.
class CacheSession {
 public:
  explicit CacheSession(const RunContext& ctx) : ctx_(ctx) {
    if (ctx_.cache_path) {
      cache_ = CensusCache::load(*ctx_.cache_path);
      before_ = cache_->dump();
    }
  }
  ~CacheSession() {
    try {
      if (cache_ && ctx_.write_cache && cache_->dump() != before_) cache_->save(*ctx_.cache_path);
    } catch (...) {
    }
  }
  CensusCache* get() { return cache_ ? &*cache_ : nullptr; }

 private:
  const RunContext& ctx_;
  std::optional<CensusCache> cache_;
  std::string before_;
};

}  // namespace

json RunReport::canonical() const {
  return json{{"command", command},
              {"parameters", parameters},
              {"results", results},
              {"passed", passed},
              {"cache_hits", cache_hits}};
}

std::string RunReport::timed_json() const {
  json doc = canonical();
  doc["elapsed"] = elapsed;
  doc["shards"] = shards;
  return doc.dump(2);
}

double census_cost(unsigned n, unsigned q) {
  return std::pow(static_cast<double>(q), static_cast<double>(n) * (n - 1) / 2.0) * n * n;
}

BigInt census_count(unsigned n, unsigned q, std::uint64_t m, const RunContext& ctx, CensusCache* cache,
                    unsigned* cache_hits) {
  auto field = FieldTable::of_order(q);
  if (cache != nullptr)
    if (auto hit = cache->find(n, q, m); hit && hit->modulus == field->modulus()) {
      if (cache_hits != nullptr) ++*cache_hits;
      return hit->count;
    }
  const double cost = census_cost(n, q);
  if (cost > kSlowThreshold && !ctx.slow) {
    std::ostringstream msg;
    msg << "census of U(" << n << "," << q << ") needs about " << std::scientific << cost
        << " elementary operations; rerun with --slow";
    throw SlowGateError(msg.str());
  }
  ImageCensus census = u_image_census(field, n, m, ctx.census);
  if (cache != nullptr) cache->store({n, q, m, census.count, field->modulus(), "brute"});
  return census.count;
}

RunReport cmd_field_info(std::optional<unsigned> q) {
  RunReport report;
  report.command = "field-info";
  json fields = json::array();
  std::vector<unsigned> orders = q ? std::vector<unsigned>{*q} : prime_powers_up_to(FieldTable::kMaxOrder);
  for (unsigned order : orders) {
    auto f = FieldTable::of_order(order);
    fields.push_back(json{{"q", order},
                          {"p", f->characteristic()},
                          {"e", f->degree()},
                          {"modulus", f->modulus()},
                          {"modulus_text", f->modulus_string()},
                          {"primitive_element", f->primitive_element().index}});
  }
  if (q) report.parameters["q"] = *q;
  report.results["fields"] = std::move(fields);
  return report;
}

RunReport cmd_u_image(const UImageArgs& args, const RunContext& ctx) {
  const auto start = Clock::now();
  RunReport report;
  report.command = "u-image";
  report.shards = ctx.census.shards;
  auto field = FieldTable::of_order(args.q);
  const unsigned p = field->characteristic();
  const std::uint64_t m = args.m == 0 ? p : args.m;
  report.parameters = json{{"n", args.n}, {"q", args.q}, {"m", m}};

  CacheSession session(ctx);
  BigInt count;
  std::string method = "brute";
  if (args.dump_path) {
    if (census_cost(args.n, args.q) > kSlowThreshold && !ctx.slow)
      throw SlowGateError("census needs --slow");
    ImageCensus census = u_image_census(field, args.n, m, ctx.census, true);
    std::ofstream out(*args.dump_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + *args.dump_path);
    write_bitmap_dump(out, *census.image);
    count = census.count;
    if (auto* cache = session.get()) cache->store({args.n, args.q, m, count, field->modulus(), "brute"});
  } else {
    count = census_count(args.n, args.q, m, ctx, session.get(), &report.cache_hits);
    if (report.cache_hits != 0) method = "cache";
  }

  const BigInt domain = band_group_order(args.n, args.q, m == p ? p - 1 : 0);
  report.results = json{{"n", args.n},
                        {"q", args.q},
                        {"p", p},
                        {"m", m},
                        {"count", count.str()},
                        {"domain_size", domain.str()},
                        {"ratio", ratio_json(Ratio::reduced(count, domain))},
                        {"method", method}};
  report.passed = count >= 1 && count <= domain;
  report.elapsed = seconds_since(start);
  return report;
}

std::string u_image_csv(const RunReport& report) {
  const json& r = report.results;
  std::ostringstream out;
  out << "n,q,p,m,count,domain_size,ratio_num,ratio_den,method\n";
  out << r["n"].get<unsigned>() << "," << r["q"].get<unsigned>() << "," << r["p"].get<unsigned>() << ","
      << r["m"].get<std::uint64_t>() << "," << r["count"].get<std::string>() << ","
      << r["domain_size"].get<std::string>() << "," << r["ratio"]["num"].get<std::string>() << ","
      << r["ratio"]["den"].get<std::string>() << "," << r["method"].get<std::string>() << "\n";
  return out.str();
}

std::string u_image_table(const RunReport& report) {
  const json& r = report.results;
  std::ostringstream out;
  out << "(n,q)=(" << r["n"].get<unsigned>() << "," << r["q"].get<unsigned>() << ")  m=" << r["m"].get<std::uint64_t>()
      << "\n  |U(n,q)^m|   " << r["count"].get<std::string>() << "\n  domain size  " << r["domain_size"].get<std::string>()
      << "\n  ratio        " << r["ratio"]["num"].get<std::string>() << "/" << r["ratio"]["den"].get<std::string>() << " ~ "
      << r["ratio"]["decimal"].get<std::string>() << "\n";
  return out.str();
}

RunReport cmd_t_image(const TImageArgs& args, const RunContext& ctx) {
  const auto start = Clock::now();
  if (args.method != "formula" && args.method != "brute" && args.method != "both")
    throw std::invalid_argument("method must be formula, brute or both");
  RunReport report;
  report.command = "t-image";
  report.shards = ctx.census.shards;
  report.parameters = json{{"n", args.n}, {"q", args.q}, {"method", args.method}};
  auto field = FieldTable::of_order(args.q);
  CacheSession session(ctx);
  const unsigned p = field->characteristic();

  std::optional<BigInt> formula_total;
  std::optional<TImageFormula> formula;
  if (args.method != "brute") {
    formula = t_image_by_formula(args.n, args.q, [&](unsigned a) {
      return census_count(a, args.q, p, ctx, session.get(), &report.cache_hits);
    });
    formula_total = formula->total;
    json summands = json::array();
    for (const auto& s : formula->summands)
      summands.push_back(json{{"partition", s.delta.to_string()},
                              {"d_count", s.d_count.str()},
                              {"class_index", s.class_index.str()},
                              {"cent_image", s.cent_image.str()},
                              {"product", s.product.str()}});
    report.results["formula"] = json{{"count", formula->total.str()}, {"delegated", formula->delegated},
                                     {"summands", std::move(summands)}};
  }

  if (args.method != "formula") {
    const double cost = std::pow(double(args.q - 1), args.n) * std::pow(double(args.q), args.n * (args.n - 1) / 2.0) *
                        args.n * args.n * args.n * p;
    if (cost > kSlowThreshold && !ctx.slow) throw SlowGateError("brute-force T census needs --slow");
    const TImageBrute brute = t_image_brute(field, args.n, {args.max_brute, ctx.census.shards});
    json per_type = json::object();
    for (const auto& [delta, count] : brute.per_type) per_type[delta.to_string()] = std::to_string(count);
    report.results["brute"] = json{{"count", brute.count.str()}, {"elements", brute.elements}, {"per_type", per_type}};

    if (formula && !formula->delegated) {
      bool per_type_ok = true;
      for (const auto& s : formula->summands) {
        auto it = brute.per_type.find(s.delta);
        const BigInt got = it == brute.per_type.end() ? BigInt(0) : BigInt(it->second);
        per_type_ok = per_type_ok && got == s.product;
      }
      report.results["per_type_agree"] = per_type_ok;
      report.passed = report.passed && per_type_ok;
    }
    if (formula_total) {
      const bool agree = *formula_total == brute.count;
      report.results["agree"] = agree;
      report.passed = report.passed && agree;
    }
  }
  report.elapsed = seconds_since(start);
  return report;
}

RunReport cmd_paper_table(const RunContext& ctx) {
  const auto start = Clock::now();
  RunReport report;
  report.command = "paper-table";
  report.shards = ctx.census.shards;
  report.parameters = json{{"slow", ctx.slow}};
  struct Row {
    unsigned n, q;
    const char* count;
    const char* relation;
  };
  const Row rows[] = {{5, 2, "52", ">1/3"},    {5, 4, "3376", ">1/3"},  {6, 2, "600", ">1/3"},
                      {6, 3, "585", ">1/3"},   {7, 2, "13344", ">1/3"}, {8, 2, "573184", "<1/3"}};
  CacheSession session(ctx);
  json out = json::array();
  for (const Row& row : rows) {
    const unsigned p = char_of(row.q);
    const BigInt domain = band_group_order(row.n, row.q, p - 1);
    json item{{"n", row.n}, {"q", row.q}, {"domain_size", domain.str()}, {"expected_count", row.count},
              {"expected_relation", row.relation}};
    try {
      const BigInt count = census_count(row.n, row.q, p, ctx, session.get(), &report.cache_hits);
      const Ratio ratio = Ratio::reduced(count, domain);
      const std::string relation = ratio > Ratio{1, 3} ? ">1/3" : (ratio == Ratio{1, 3} ? "=1/3" : "<1/3");
      const bool match = count.str() == row.count && relation == row.relation;
      item["count"] = count.str();
      item["ratio"] = ratio_json(ratio);
      item["relation"] = relation;
      item["match"] = match;
      report.passed = report.passed && match;
    } catch (const SlowGateError& e) {
      item["skipped"] = e.what();
    }
    out.push_back(std::move(item));
  }
  report.results["rows"] = std::move(out);
  report.elapsed = seconds_since(start);
  return report;
}

namespace {

struct SuiteResult {
  json items = json::array();
  bool passed = true;

  void add(json item, bool ok) {
    item["pass"] = ok;
    passed = passed && ok;
    items.push_back(std::move(item));
  }
  void skip(json item, const std::string& why) {
    item["skipped"] = why;
    items.push_back(std::move(item));
  }
};

SuiteResult suite_prop_bu(const VerifyArgs& args, const RunContext& ctx) {
  SuiteResult out;
  for (unsigned q : prime_powers_up_to(args.max_q))
    for (unsigned n = 2; n <= args.max_n; ++n) {
      json item{{"n", n}, {"q", q}};
      if (census_cost(n, q) > kSlowThreshold && !ctx.slow) {
        out.skip(item, "needs --slow");
        continue;
      }
      try {
        const BuReport r = bu_trichotomy_check(FieldTable::of_order(q), n, ctx.census);
        item["branch"] = to_string(r.branch);
        item["image"] = r.image_count;
        item["domain"] = r.domain_size;
        item["closure"] = r.closure_size;
        out.add(item, r.holds);
      } catch (const SizeGuardError& e) {
        out.skip(item, e.what());
      }
    }
  return out;
}

SuiteResult suite_theorem_a(const VerifyArgs& args, const RunContext& ctx, CensusCache* cache, unsigned* hits) {
  SuiteResult out;
  for (unsigned q : prime_powers_up_to(args.max_q)) {
    const unsigned p = char_of(q);
    for (unsigned n = p + 3; n <= args.max_n; ++n) {
      json item{{"n", n}, {"q", q}};
      try {
        const BigInt count = census_count(n, q, p, ctx, cache, hits);
        const TheoremAReport r = theorem_a_check(n, q, count);
        item["count"] = count.str();
        item["ratio"] = ratio_json(r.ratio);
        item["hypothesis"] = r.hypothesis;
        item["above_third"] = r.above_third;
        item["analytic"] = ratio_json(r.analytic);
        item["proper"] = r.proper;
        out.add(item, r.holds());
      } catch (const SizeGuardError& e) {
        out.skip(item, e.what());
      }
    }
  }
  return out;
}

SuiteResult suite_lbound(const VerifyArgs& args, const RunContext& ctx, CensusCache* cache, unsigned* hits) {
  SuiteResult out;
  for (unsigned q : prime_powers_up_to(args.max_q)) {
    const unsigned p = char_of(q);
    for (unsigned n = p + 3; n <= args.max_n; ++n) {
      json item{{"n", n}, {"q", q}};
      const auto terms = lbound_terms(n, q, p);
      BigInt bound = 0;
      bool structural = true;
      for (const auto& t : terms) {
        bound += t.value;
        BigInt from_families = 0;
        for (const auto& fam : t.families) {
          fam.validate();
          from_families += fam.member_count() * big_pow(q, fam.class_size_exponent());
        }
        structural = structural && from_families == t.value;
      }
      item["bound"] = bound.str();
      item["structural"] = structural;
      try {
        const BigInt count = census_count(n, q, p, ctx, cache, hits);
        item["count"] = count.str();
        out.add(item, structural && bound <= count);
      } catch (const SizeGuardError& e) {
        out.skip(item, e.what());
      }
    }
  }
  return out;
}

SuiteResult suite_class_sizes(const VerifyArgs& args, const RunContext&) {
  SuiteResult out;
  for (unsigned q : prime_powers_up_to(args.max_q)) {
    auto field = FieldTable::of_order(q);
    const unsigned p = field->characteristic();
    for (unsigned n = p + 1; n <= args.max_n; ++n) {
      json item{{"n", n}, {"q", q}, {"l", p - 1}};
      try {
        const MatrixSpace space = MatrixSpace::unitriangular(field, n);
        std::vector<std::pair<TriMatrix, unsigned>> reps;  // member, class-size exponent
        std::set<std::uint64_t> seen;
        unsigned collisions = 0;
        for (const auto& fam : all_families(n, q, p - 1))
          for (auto& a : family_members(field, fam)) {
            if (!seen.insert(space.encode(a).value).second) {
              ++collisions;
              continue;
            }
            reps.emplace_back(std::move(a), fam.class_size_exponent());
          }
        bool sizes_ok = true;
        bool disjoint = true;
        for (const auto& [a, exponent] : reps) {
          const ConjugacyClass cls = class_of(a, Ambient::Unitriangular);
          sizes_ok = sizes_ok && BigInt(cls.size()) == big_pow(q, exponent);
          for (const auto& [b, unused] : reps)
            if (!(b == a) && cls.contains(b)) disjoint = false;
        }
        item["representatives"] = reps.size();
        item["boundary_collisions"] = collisions;
        item["sizes_match"] = sizes_ok;
        item["disjoint"] = disjoint;
        out.add(item, sizes_ok && disjoint);
      } catch (const SizeGuardError& e) {
        out.skip(item, e.what());
      }
    }
  }
  return out;
}

SuiteResult suite_canonical(const VerifyArgs& args, const RunContext&) {
  SuiteResult out;
  for (unsigned q : prime_powers_up_to(args.max_q)) {
    auto field = FieldTable::of_order(q);
    for (unsigned n = 2; n <= std::min(args.max_n, 5U); ++n) {
      json item{{"n", n}, {"q", q}};
      try {
        unsigned elements = 0;
        bool canonical = true;
        bool duals = true;
        bool sizes = true;
        for (unsigned l = 0; l + 2 <= n; ++l) {
          const unsigned k = n - l - 1;
          std::vector<unsigned> digit(k, 0);
          for (;;) {
            std::vector<FieldElement> values;
            for (unsigned d : digit) values.push_back(field->element(d));
            const TriMatrix a = canonical_element(field, n, l, values);
            ++elements;
            canonical = canonical && is_canonical(a);
            const auto inert = inert_points(a);
            for (IndexPair ij : dual_lemma_predictions(a))
              duals = duals && std::find(inert.begin(), inert.end(), ij) != inert.end();
            sizes = sizes && BigInt(class_of(a, Ambient::Unitriangular).size()) == big_pow(q, inert.size());
            unsigned t = 0;
            for (; t < k; ++t) {
              if (++digit[t] < q) break;
              digit[t] = 0;
            }
            if (t == k) break;
          }
        }
        item["elements"] = elements;
        item["canonical"] = canonical;
        item["dual_lemmas"] = duals;
        item["class_size_inert"] = sizes;
        out.add(item, canonical && duals && sizes);
      } catch (const SizeGuardError& e) {
        out.skip(item, e.what());
      }
    }
  }
  return out;
}

SuiteResult suite_corollary_c(const VerifyArgs& args, const RunContext& ctx, CensusCache* cache, unsigned* hits) {
  SuiteResult out;
  for (unsigned q : prime_powers_up_to(args.max_q)) {
    const unsigned p = char_of(q);
    for (unsigned n = 2; n <= args.max_n; ++n) {
      json item{{"n", n}, {"q", q}};
      try {
        const TImageFormula f =
            t_image_by_formula(n, q, [&](unsigned a) { return census_count(a, q, p, ctx, cache, hits); });
        const CorollaryCReport r = corollary_c_check(n, q, f.total);
        item["t_image"] = f.total.str();
        item["hypothesis"] = r.hypothesis;
        item["lhs"] = ratio_json(r.lhs);
        item["rhs"] = ratio_json(r.rhs);
        item["inequality"] = r.inequality;
        if (r.hypothesis)
          out.add(item, r.inequality);
        else
          out.skip(item, "hypothesis q > n - p - 1 fails");
      } catch (const SizeGuardError& e) {
        out.skip(item, e.what());
      }
    }
  }
  return out;
}

}  // namespace

RunReport cmd_verify(const VerifyArgs& args, const RunContext& ctx) {
  static const std::vector<std::string> suites = {"theoremA", "propBU", "classSizes", "lbound", "canonical", "corollaryC"};
  if (args.suite != "all" && std::find(suites.begin(), suites.end(), args.suite) == suites.end())
    throw std::invalid_argument("unknown suite: " + args.suite);
  const auto start = Clock::now();
  RunReport report;
  report.command = "verify";
  report.shards = ctx.census.shards;
  report.parameters = json{{"suite", args.suite}, {"max_n", args.max_n}, {"max_q", args.max_q}, {"slow", ctx.slow}};
  CacheSession session(ctx);
  for (const auto& name : suites) {
    if (args.suite != "all" && args.suite != name) continue;
    SuiteResult r;
    if (name == "theoremA") r = suite_theorem_a(args, ctx, session.get(), &report.cache_hits);
    if (name == "propBU") r = suite_prop_bu(args, ctx);
    if (name == "classSizes") r = suite_class_sizes(args, ctx);
    if (name == "lbound") r = suite_lbound(args, ctx, session.get(), &report.cache_hits);
    if (name == "canonical") r = suite_canonical(args, ctx);
    if (name == "corollaryC") r = suite_corollary_c(args, ctx, session.get(), &report.cache_hits);
    report.results[name] = json{{"pass", r.passed}, {"checks", std::move(r.items)}};
    report.passed = report.passed && r.passed;
  }
  report.elapsed = seconds_since(start);
  return report;
}

RunReport cmd_cache_list(const std::string& path) {
  RunReport report;
  report.command = "cache list";
  report.parameters["path"] = path;
  const CensusCache cache = CensusCache::load(path);
  report.results = nlohmann::json::parse(cache.dump());
  return report;
}

RunReport cmd_cache_prune(const std::string& path, bool all) {
  RunReport report;
  report.command = "cache prune";
  report.parameters = json{{"path", path}, {"all", all}};
  CensusCache cache = CensusCache::load(path);
  const std::size_t removed = cache.prune(all);
  if (removed != 0) cache.save(path);
  report.results = json{{"removed", removed}, {"remaining", cache.entries().size()}};
  return report;
}

}  // namespace ppower
