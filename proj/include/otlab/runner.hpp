#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otlab/serialize.hpp"

namespace otlab {

// One reproducible experiment: which fixtures to build, which suites to run
// per (dim, seed) cell, and where to write the reports. Fully serializable;
// the hash of the canonical serialization is stamped into every output file.
struct ExperimentConfig {
    // covariance of the reference Gaussian
    double c1 = 1.0;
    double alpha_decay = 3.0;
    int dim_max = 8;

    std::vector<int> dims{1, 2};
    std::size_t grid_cells = 64;   // finest fixture grid per axis
    double half_width = 4.0;       // fixture box, in sigmas
    double shift_sigmas = 1.0;     // gaussian-pair translation
    int empirical_points = 64;

    std::vector<double> epsilons;  // empty = default ladder
    std::vector<double> ts{0.25, 0.5, 0.75};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::int64_t mc_samples = 100000;

    std::string output_dir = "otlab-out";
    std::vector<std::string> suites{"selection", "entropy", "diagnostics", "ratio"};
    int workers = 1;

    static ExperimentConfig from_json(const Json& j);
    Json to_json() const;
    std::string config_hash() const;  // hex of fnv1a64 over the canonical dump
};

std::vector<double> parse_epsilon_spec(const std::string& spec);

struct CellResult {
    std::string name;
    bool pass = false;
    std::string error;  // nonempty when the cell threw
};

struct RunReport {
    std::vector<CellResult> cells;
    bool all_pass = false;
};

// Executes the requested suites cell by cell (up to `workers` in parallel),
// writes one JSON/CSV group per cell plus a summary, and returns the
// aggregate. Failures are collected, never fail-fast.
RunReport run_experiment(const ExperimentConfig& config);

// Convenience: exit status for main(), 0 iff every asserted invariant held.
int run_experiment_status(const ExperimentConfig& config);

}  // namespace otlab
