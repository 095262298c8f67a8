#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrac/mub.hpp"
#include "qrac/oiscan.hpp"

namespace qrac {

/// Generator identification recorded in every report.
inline constexpr const char* kRngName = "std::mt19937_64 seeded by splitmix64(seed, stream) v1";

/// splitmix64 finalizer applied to seed + golden-ratio increment * (stream + 1).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

struct ShotScenario {
    TripletId id;
    double exact = 0.0;  // Born-rule expectation (infinite shots)
    std::vector<double> estimates;
    double mean = 0.0;
    double sd = 0.0;     // sample standard deviation across trials
};

struct ShotReport {
    std::size_t dim = 0;
    std::uint64_t shots = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string rng = kRngName;
    bool infinite = false;
    ShotScenario plus;
    ShotScenario minus;
    double sigma_gap = 0.0;  // (mean+ - mean-) / sqrt(sd+^2 + sd-^2)
};

struct ShotOptions {
    std::uint64_t shots = 25000;
    std::size_t trials = 5;
    std::optional<std::uint64_t> seed;
    bool infinite = false;  // analytic expectation instead of sampling
};

/// Exact success probability of the optimal prepare-and-measure protocol for
/// a MUB triplet, summed over (word, question) pairs by the Born rule.
double born_expectation(const Basis& c, const Basis& e, const Basis& f);

/// Shot counts per (word, question) pair in odometer order: `shots` split
/// uniformly with largest-remainder rounding (ties to earlier pairs).
std::vector<std::uint64_t> allocate_shots(std::uint64_t shots, std::size_t pairs);

/// Simulates the two scenarios. Throws SeedMissing without a seed (unless
/// infinite), Usage when trials < 2 or shots < 1.
ShotReport run_shots(const MubSet& mubs, const TripletId& plus, const TripletId& minus, const ShotOptions& options);

std::string shots_to_json(const ShotReport& report);

}  // namespace qrac
