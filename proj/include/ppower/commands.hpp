#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ppower/bigint.hpp"
#include "ppower/cache.hpp"
#include "ppower/census_kernel.hpp"
#include "ppower/errors.hpp"

namespace ppower {

/// Refusal to start work estimated above the desk-scale budget without --slow.
class SlowGateError : public SizeGuardError {
 public:
  using SizeGuardError::SizeGuardError;
};

/// Elementary-operation budget above which a run needs --slow.
inline constexpr double kSlowThreshold = 1e9;

/// Result of one CLI command.
///
/// The canonical serialization has sorted keys and leaves out the
/// execution metadata (elapsed time, shard count), so the same flags and
/// cache always give byte-identical output.
struct RunReport {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  bool passed = true;
  double elapsed = 0.0;
  unsigned shards = 1;
  unsigned cache_hits = 0;

  int exit_code() const { return passed ? 0 : 1; }
  nlohmann::json canonical() const;
  std::string canonical_json() const { return canonical().dump(2); }
  /// Canonical document plus the "elapsed" and "shards" fields.
  std::string timed_json() const;
};

/// Shared knobs for commands that may run censuses.
struct RunContext {
  CensusOptions census;
  bool slow = false;
  std::optional<std::string> cache_path;  ///< no cache when empty
  bool write_cache = true;
};

/// Estimated elementary operations for a census of U(n,q).
double census_cost(unsigned n, unsigned q);

/// |U(n,q)^m| from the cache when present, otherwise computed (and stored).
/// Throws SlowGateError / SizeGuardError when the computation is refused.
BigInt census_count(unsigned n, unsigned q, std::uint64_t m, const RunContext& ctx, CensusCache* cache,
                    unsigned* cache_hits);

RunReport cmd_field_info(std::optional<unsigned> q);

struct UImageArgs {
  unsigned n = 0;
  unsigned q = 0;
  std::uint64_t m = 0;  ///< 0 means p
  std::optional<std::string> dump_path;
};
RunReport cmd_u_image(const UImageArgs& args, const RunContext& ctx);

/// CSV row: n,q,p,m,count,domain_size,ratio_num,ratio_den,method (with header).
std::string u_image_csv(const RunReport& report);
std::string u_image_table(const RunReport& report);

struct TImageArgs {
  unsigned n = 0;
  unsigned q = 0;
  std::string method = "formula";  ///< formula | brute | both
  std::uint64_t max_brute = 10'000'000;
};
RunReport cmd_t_image(const TImageArgs& args, const RunContext& ctx);

RunReport cmd_paper_table(const RunContext& ctx);

struct VerifyArgs {
  std::string suite = "all";  ///< theoremA|propBU|classSizes|lbound|canonical|corollaryC|all
  unsigned max_n = 6;
  unsigned max_q = 3;
};
/// Throws std::invalid_argument for an unknown suite.
RunReport cmd_verify(const VerifyArgs& args, const RunContext& ctx);

RunReport cmd_cache_list(const std::string& path);
RunReport cmd_cache_prune(const std::string& path, bool all);

}  // namespace ppower
