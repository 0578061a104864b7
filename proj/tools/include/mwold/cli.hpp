#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "mwold/linalg.hpp"

namespace mwold::cli {

enum class Command { CheckMiso, KernelCond, Complete, Recover, Graph, Wold, ShiftModel, Examples };
enum class Format { Json, Csv, Text };

Command command_from_string(const std::string& s);
std::string to_string(Command c);
Format format_from_string(const std::string& s);

struct RunConfig {
  Command command = Command::Examples;
  std::string input_path;
  std::optional<std::string> output_path;
  ToleranceConfig tol;
  Format format = Format::Json;
  std::optional<Index> N;
  std::optional<Index> J;
  std::optional<Index> n_max;
  std::optional<Index> m;
  std::optional<Index> k;
  std::optional<std::uint64_t> seed;

  /// Throws ArgumentError for non-positive counts or invalid tolerances.
  void validate() const;
};

inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitError = 2;

/// Runs one command. The report goes to `output_path` when set, otherwise to
/// `out`; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mwold::cli
