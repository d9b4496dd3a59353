#pragma once

#include <string>

#include "rantor/config.hpp"

namespace rantor {

/// Process exit conventions: 0 pass, 1 config error, 2 property violation,
/// 3 cone-property failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitConeFailure = 3;

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
};

RunOutcome run_analyze(const RunConfig& cfg, const std::string& out_dir);
RunOutcome run_correlate(const RunConfig& cfg, const std::string& out_dir);
RunOutcome run_verify(const RunConfig& cfg, const std::string& out_dir);
RunOutcome run_diophantine(const RunConfig& cfg, const std::string& out_dir);

/// 17-significant-digit decimal used in every CSV artifact.
std::string fmt17(double v);

}  // namespace rantor
