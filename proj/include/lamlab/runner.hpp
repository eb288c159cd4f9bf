#pragma once

#include <string>
#include <vector>

#include "lamlab/config.hpp"
#include "lamlab/report.hpp"

namespace lamlab {

struct RunContext {
    std::string out_dir = ".";
    int threads = 1;
    double tol_scale = 1;
};

struct RunResult {
    std::string experiment;
    std::vector<Check> checks;
    std::vector<std::string> files;
    std::string error;  // set when a module raised
    bool pass = false;
};

// Context from [experiment] (out_dir, threads, tol_scale).
RunContext context_from(const Config& cfg);
// Validates cfg and runs [experiment] name. Throws ConfigError for invalid configs.
RunResult run_experiment(const Config& cfg, const RunContext& ctx);
RunResult run_named(const std::string& name, const Config& cfg, const RunContext& ctx);

// Resolves a relative output path against ctx.out_dir.
std::string output_path(const RunContext& ctx, const std::string& name);

ProfileSpec profile_from(const Config& cfg);

}  // namespace lamlab
