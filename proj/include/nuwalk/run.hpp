#pragma once

#include <iosfwd>

#include "nuwalk/config.hpp"

namespace nuwalk {

// Executes the configured mode and writes the result to cfg.out_path
// ("-" = stdout). Warnings and progress diagnostics go to the given stream.
// Returns the process exit status (nonzero when a validation suite fails).
int run(const RunConfig& cfg, std::ostream& diagnostics);

}  // namespace nuwalk
