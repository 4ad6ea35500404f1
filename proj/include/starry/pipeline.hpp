#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace starry {

enum class Subcommand { sample, tree, map, stars, assouad, obstruct, example51, counterexample };

Subcommand parse_subcommand(const std::string& name);

struct RunConfig {
    Subcommand subcommand = Subcommand::sample;
    std::size_t grid_n = 65536;
    std::uint64_t seed = 0;
    std::size_t subset_m = 512;
    int n_min = 6;
    int n_max = 10;
    unsigned threads = 1;

    std::string in;
    std::string out;
    std::string plot;
    std::string star;
    std::string leaves;

    std::string kind = "brownian";      // sample: brownian | zigzag:<n> | example51
    std::string strategy = "extremes";  // map: stride | extremes
    std::string metric = "tree";        // stars: tree | map
    std::string psi = "linear";         // obstruct
    double C = 1.0;
    double s = 2.0;

    std::size_t points = 256;  // tree / assouad subsample size
    int series_terms = 20;     // example51 truncation
    int counter_n_max = 24;    // counterexample truncation
};

/// Throws InvalidArgument unless grid_n >= 16 is a power of two and, for the
/// subcommands that draw a chain-point subset, subset_m <= grid_n.
void validate(const RunConfig& config);

/// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidArguments = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitInternal = 3;

/// Executes one subcommand, writing its artifacts; progress lines go to `log`.
/// Throws on failure; see run_guarded for the exit-status mapping.
void run(const RunConfig& config, std::ostream& log);

/// run() with exceptions mapped to exit statuses: 1 invalid arguments,
/// 2 invalid input file, 3 anything else (a bug).
int run_guarded(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace starry
