#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlab/spectra.hpp"
#include "qlab/verify.hpp"

namespace qlab::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;  // verify, spectrum, bethe
  std::optional<int> n;
  bool homogeneous = false;
  std::optional<std::string> spin;
  std::vector<std::string> spins;
  std::vector<std::string> deltas;
  std::optional<int> degree;  // catalog default when unset
  int trials = 1;
  std::uint64_t seed = 0;
  bool all = false;
  std::vector<std::string> identities;
  int dmax = 2;
  bool floating = false;
  std::string out;
  std::string format;  // json or csv; empty picks the command default
  bool mutate_pochhammer = false;

  // Fixed chain described by the flags, if any. Throws UsageError.
  std::optional<ChainConfig> chain() const;
  std::vector<Identity> selected_identities() const;
  std::string effective_format() const;
  nlohmann::json to_json() const;
};

// Parses argv (argv[0] is the program name). Throws UsageError; returns
// nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bethe(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full entry point: parse, dispatch, map exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::json to_json(const ParamRecord& params);
nlohmann::json to_json(const IdentityReport& report);
nlohmann::json to_json(const BetheRecord& record);
std::string bethe_csv(const std::vector<BetheRecord>& records);

// Worker count: hardware concurrency capped by QLAB_THREADS.
unsigned thread_count();

}  // namespace qlab::cli
