#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppower/commands.hpp"

namespace {

using namespace ppower;

constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;

int print_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::json doc{{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cout << doc.dump(2) << "\n";
  return code;
}

std::optional<unsigned> env_unsigned(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    return static_cast<unsigned>(std::stoul(raw));
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(name) + " must be a positive integer");
  }
}

struct CommonFlags {
  unsigned shards = 0;
  std::string cache;
  bool no_cache = false;
  bool slow = false;
  bool timing = false;

  void attach(CLI::App* cmd, bool with_cache = true) {
    cmd->add_option("--shards", shards, "independent census shards (default $PPOWER_SHARDS or 1)")
        ->check(CLI::PositiveNumber);
    if (with_cache) {
      cmd->add_option("--cache", cache, "census cache file (default $PPOWER_CACHE or ppower_cache.json)");
      cmd->add_flag("--no-cache", no_cache, "neither read nor write the cache");
    }
    cmd->add_flag("--slow", slow, "allow censuses above the desk-scale budget");
    cmd->add_flag("--timing", timing, "add elapsed time and shard count to the output");
  }

  RunContext context() const {
    RunContext ctx;
    ctx.census.shards = shards != 0 ? shards : env_unsigned("PPOWER_SHARDS").value_or(1);
    ctx.slow = slow;
    if (!no_cache) ctx.cache_path = cache.empty() ? default_cache_path() : cache;
    return ctx;
  }
};

void emit(const RunReport& report, bool timing) {
  std::cout << (timing ? report.timed_json() : report.canonical_json()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-power images in unitriangular and triangular groups over finite fields"};
  app.require_subcommand(1);

  std::optional<unsigned> info_q;
  auto* field_info = app.add_subcommand("field-info", "field tables and moduli");
  field_info->add_option("--q", info_q, "field order (all supported orders when omitted)");

  UImageArgs u_args;
  CommonFlags u_flags;
  std::string u_format = "json";
  std::string u_dump;
  auto* u_image = app.add_subcommand("u-image", "size of the image of x -> x^m on U(n,q)");
  u_image->add_option("--n", u_args.n, "matrix size")->required()->check(CLI::Range(1U, 16U));
  u_image->add_option("--q", u_args.q, "field order")->required();
  u_image->add_option("--m", u_args.m, "exponent (default p)")->check(CLI::PositiveNumber);
  u_image->add_option("--format", u_format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
  u_image->add_option("--dump", u_dump, "write the image bitmap to this file");
  u_flags.attach(u_image);

  TImageArgs t_args;
  CommonFlags t_flags;
  auto* t_image = app.add_subcommand("t-image", "size of the image of x -> x^p on T(n,q)");
  t_image->add_option("--n", t_args.n, "matrix size")->required()->check(CLI::Range(1U, 16U));
  t_image->add_option("--q", t_args.q, "field order")->required();
  t_image->add_option("--method", t_args.method, "formula, brute or both")
      ->check(CLI::IsMember({"formula", "brute", "both"}));
  t_image->add_option("--max-brute", t_args.max_brute, "largest T(n,q) the brute force may enumerate");
  t_flags.attach(t_image);

  CommonFlags table_flags;
  auto* paper_table = app.add_subcommand("paper-table", "the reference table of |U(n,q)^p|");
  table_flags.attach(paper_table);

  VerifyArgs v_args;
  CommonFlags v_flags;
  auto* verify = app.add_subcommand("verify", "run the consistency suites");
  verify->add_option("--suite", v_args.suite)
      ->check(CLI::IsMember({"theoremA", "propBU", "classSizes", "lbound", "canonical", "corollaryC", "all"}));
  verify->add_option("--max-n", v_args.max_n)->check(CLI::Range(2U, 16U));
  verify->add_option("--max-q", v_args.max_q)->check(CLI::Range(2U, 64U));
  v_flags.attach(verify);

  std::string cache_file;
  bool prune_all = false;
  auto* cache = app.add_subcommand("cache", "inspect the census cache");
  cache->require_subcommand(1);
  cache->add_option("--cache", cache_file, "cache file (default $PPOWER_CACHE or ppower_cache.json)");
  auto* cache_list = cache->add_subcommand("list", "print every entry");
  auto* cache_prune = cache->add_subcommand("prune", "drop entries with a stale modulus");
  cache_prune->add_flag("--all", prune_all, "drop every entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*field_info) {
      emit(cmd_field_info(info_q), false);
      return 0;
    }
    if (*u_image) {
      if (!u_dump.empty()) u_args.dump_path = u_dump;
      const RunReport report = cmd_u_image(u_args, u_flags.context());
      if (u_format == "csv")
        std::cout << u_image_csv(report);
      else if (u_format == "table")
        std::cout << u_image_table(report);
      else
        emit(report, u_flags.timing);
      return report.exit_code();
    }
    if (*t_image) {
      const RunReport report = cmd_t_image(t_args, t_flags.context());
      emit(report, t_flags.timing);
      return report.exit_code();
    }
    if (*paper_table) {
      const RunReport report = cmd_paper_table(table_flags.context());
      emit(report, table_flags.timing);
      return report.exit_code();
    }
    if (*verify) {
      const RunReport report = cmd_verify(v_args, v_flags.context());
      emit(report, v_flags.timing);
      return report.exit_code();
    }
    if (*cache) {
      const std::string path = cache_file.empty() ? default_cache_path() : cache_file;
      const RunReport report = *cache_list ? cmd_cache_list(path) : cmd_cache_prune(path, prune_all);
      emit(report, false);
      return report.exit_code();
    }
  } catch (const SizeGuardError& e) {
    return print_error("size_guard", e.what(), kExitRefused);
  } catch (const CLI::ValidationError& e) {
    return print_error("usage", e.what(), kExitUsage);
  } catch (const std::invalid_argument& e) {
    return print_error("usage", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return print_error("failure", e.what(), 1);
  }
  return kExitUsage;
}
