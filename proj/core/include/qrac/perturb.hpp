#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qrac/mub.hpp"
#include "qrac/oiscan.hpp"

namespace qrac {

/// gram_schmidt(U + delta * I) applied to every basis. The results are
/// unitary but in general no longer mutually unbiased. Throws RankDeficient.
std::vector<Basis> perturb_set(std::span<const Basis> bases, double delta);
std::vector<Basis> perturb_set(const MubSet& mubs, double delta);

struct SweepSpec {
    std::vector<double> delta_grid;               // strictly increasing, contains 0
    std::optional<std::vector<TripletId>> triplets;  // all when empty
    double margin = 1e-3;
    std::uint64_t budget = 1'000'000'000;  // d^3 * |grid| * |triplets|
    unsigned threads = 0;

    /// 0 to 2.0 in steps of 0.02 (101 points).
    static std::vector<double> default_grid();
    static std::vector<double> make_grid(double start, double end, double step);
};

struct SweepCurve {
    TripletId id;
    std::vector<double> values;  // aligned with the grid
    double max_value = 0.0;
    double argmax_delta = 0.0;
    double mub_value = 0.0;       // closed-form value of the unperturbed triplet
    std::size_t cluster = 0;      // index into the reference scan's clusters
};

/// A grid point where U + delta I of one basis is singular.
struct RankDeficientPoint {
    double delta = 0.0;
    std::size_t basis = 0;
};

struct SweepReport {
    std::size_t dim = 0;
    std::vector<double> grid;
    std::vector<SweepCurve> curves;
    double P_plus = 0.0;
    double P_minus = 0.0;
    std::size_t reference_N = 0;
    double margin = 0.0;
    bool surpass = false;
    TripletId best;
    double best_value = 0.0;
    double best_delta = 0.0;
    bool best_from_plus = false;  // best triplet lies in the top cluster
    double continuity_constant = 0.0;  // max |dP| / d(delta) over all curves
    double delta0_max_error = 0.0;     // max |P(0) - closed form| over curves
    /// Points skipped because gram_schmidt(U + delta I) is rank deficient;
    /// curves through them hold NaN there.
    std::vector<RankDeficientPoint> rank_deficient;
};

/// Throws Usage on an invalid grid, BudgetExceeded.
SweepReport sweep(const SweepSpec& spec, const MubSet& mubs, const ScanReport& reference);
SweepReport sweep(const SweepSpec& spec, const MubSet& mubs);

/// CSV: header "mu1,mu2,mu3,delta,P".
void write_sweep_csv(const SweepReport& report, std::ostream& out);
std::string sweep_to_json(const SweepReport& report);

}  // namespace qrac
