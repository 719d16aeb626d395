#pragma once

#include <string>
#include <vector>

#include "riesz/oracle.hpp"
#include "riesz/params.hpp"

namespace riesz {

inline constexpr const char* kArtifactName = "riesz";
inline constexpr const char* kArtifactVersion = "0.1.0";

namespace cli {

/// Exit codes: 0 success, 1 verification failure, 2 usage / config / I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

struct VerifyRow {
  std::string test_id;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Oracle cross-checks (d = 1; d >= 2 gets the potential checks only).
/// `quick` limits the quadrature oracles to n <= 3 and shortens reference sums.
/// `spec` is the outer quadrature; independent sides use spec.doubled().
std::vector<VerifyRow> oracle_suite(const RieszParams& params, bool quick, const QuadratureSpec& spec = {});

/// The three DLR test functions at one (n, β): exterior-measurable,
/// sub-window indicator and a smooth window sum. Window Δ = [-L/6, L/6).
std::vector<VerifyRow> dlr_suite(const RieszParams& params, int n, double beta, const QuadratureSpec& spec = {});

/// GNZ residuals at one (n, β): constant, window indicator with an empty
/// window condition, and a smooth pair-dependent functional.
std::vector<VerifyRow> gnz_suite(const RieszParams& params, int n, double beta, const QuadratureSpec& spec = {});

/// 17 significant digits, the CSV float format.
std::string format_double(double x);

}  // namespace cli
}  // namespace riesz
