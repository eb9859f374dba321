#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selrisk/engine.hpp"

namespace selrisk {

struct SuiteReport {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<std::string> messages;
};

const std::vector<std::string>& props_suite_names();

// Runs one randomized property suite; deterministic for a given seed.
SuiteReport run_props_suite(const std::string& name, std::uint64_t seed, std::size_t cases);

// Runs every suite (or the named one). Failure messages carry a minimal
// reproduction scenario as JSON.
std::vector<SuiteReport> run_props(std::uint64_t seed, std::size_t cases,
                                   const std::string& suite = "");

} // namespace selrisk
