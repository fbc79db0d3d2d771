#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tcs::cli {

enum class OutputFormat { Text, Json, Csv };

struct Config {
  /// Working precision when given explicitly (flag or TCS_DIGITS); unset means
  /// adaptive precision starting from the default.
  std::optional<unsigned> digits;
  std::string cache_path;
  OutputFormat output = OutputFormat::Text;
};

inline constexpr unsigned kDefaultDigits = 64;
inline constexpr unsigned kMinDigits = 16;

inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecision = 1;  // precision or search budget ran out
inline constexpr int kExitUsage = 2;
inline constexpr int kExitMismatch = 3;  // a fixture, sweep or cached record disagreed

/// Runs one command line (without the program name). Never calls exit().
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcs::cli
