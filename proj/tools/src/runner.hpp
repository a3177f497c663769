#pragma once

#include <iosfwd>
#include <string>

#include "pivotlab/config.hpp"

namespace pivotlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

/// Runs config.experiment, writes CSV/JSON into config.out_dir and returns
/// kExitOk iff every asserted invariant held. Each failure goes to `err` as
/// one line ending in a reproducer.
int run_experiment(const ExperimentConfig& config, std::ostream& log, std::ostream& err);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace pivotlab::cli
