#pragma once

#include <lrmap/types.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lrmap::cli {

/// A cell of the CSV could not be parsed as a number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, int line_in, int col_in)
      : std::runtime_error(what), line(line_in), col(col_in) {}
  int line;  // 1-based
  int col;   // 1-based field index
};

/// Rows of the CSV have different field counts.
struct RaggedRows : std::runtime_error {
  RaggedRows(const std::string& what, int line_in)
      : std::runtime_error(what), line(line_in) {}
  int line;  // 1-based
};

/// Raised for bad command-line values or malformed config files.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Headerless numeric CSV (LF or CRLF) into a dense matrix.
Matrix read_matrix_csv(const std::string& path);

/// Writes a matrix as headerless CSV with 17-significant-digit values, so a
/// read-back reproduces the doubles bit-for-bit. Atomic (temp + rename).
void write_matrix_csv(const std::string& path, const Matrix& m);

/// 17-significant-digit decimal form of a finite double.
std::string format_double(double v);

/// Everything a run needs; produced by flag parsing, consumed by run().
struct RunConfig {
  std::string command;  // solve | weighted | dmd | kernel-dmd | continuous |
                        // verify | sweep
  std::string x_path;
  std::string y_path;
  std::string out_path;
  std::string config_path;
  int k = 0;
  bool k_set = false;
  int kmax = -1;
  std::string p_text = "2";  // real or "inf"
  std::uint64_t seed = 0;
  double rank_rtol = 1e-12;
};

/// Exit codes produced by run() and by the wrapper in main.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,       // bad flags, unreadable files, malformed config
  kDimension = 3,   // operand shapes incompatible
  kNumerical = 4,   // factorization or refinement failure
  kVerifyFail = 5,  // a candidate beat the closed form beyond tolerance
};

/// Executes the command and writes the report (and the sweep curve for
/// `sweep`). Throws the library error types; the caller maps them to exit
/// codes. Returns kOk or kVerifyFail.
int run(const RunConfig& config);

/// Maps an exception thrown by run() to the documented exit code and prints
/// the message to stderr.
int run_and_map_errors(const RunConfig& config);

}  // namespace lrmap::cli
