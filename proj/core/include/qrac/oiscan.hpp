#pragma once

#include <array>
#include <compare>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qrac/mub.hpp"

namespace qrac {

/// Sorted triple of basis indices mu1 < mu2 < mu3.
struct TripletId {
    std::array<std::size_t, 3> idx{};

    auto operator<=>(const TripletId&) const = default;
    std::string str() const;
};

/// Validates and sorts. Throws Usage on repeated or out-of-range indices.
TripletId make_triplet(std::size_t a, std::size_t b, std::size_t c, std::size_t basis_count);

/// All C(count, 3) triplets in lexicographic order.
std::vector<TripletId> all_triplets(std::size_t basis_count);

struct ValueCluster {
    double representative = 0.0;       // mean of members
    std::vector<std::size_t> members;  // indices into the input
};

/// Single-linkage clustering of sorted values: a gap > tol starts a new
/// cluster. Clusters are returned in ascending order of value.
std::vector<ValueCluster> cluster_values(std::span<const double> values, double tol);

struct ScanEntry {
    TripletId id;
    double value = 0.0;
};

struct TripletCluster {
    double representative = 0.0;
    double spread = 0.0;
    std::vector<TripletId> members;
};

struct ScanReport {
    std::size_t dim = 0;
    double tol = 0.0;
    std::vector<ScanEntry> entries;        // ordered by TripletId
    std::vector<TripletCluster> clusters;  // ascending by value
    std::size_t N = 0;
    double P_plus = 0.0;
    double P_minus = 0.0;
    std::size_t predicted_N = 0;
    bool agrees = false;
    /// min between-cluster gap / tol; infinity for a single cluster.
    double gap_ratio = 0.0;

    /// Index of the cluster containing a triplet.
    std::size_t cluster_of(const TripletId& id) const;
};

inline constexpr double kDefaultScanTol = 1e-9;

/// 2 if d = 1 (mod 4), else 1.
std::size_t predicted_cluster_count(std::size_t d) noexcept;

struct ScanOptions {
    double tol = kDefaultScanTol;
    unsigned threads = 0;
};

/// Closed-form P for every triplet of a certified MUB set, then clustering.
ScanReport scan(const MubSet& mubs, const ScanOptions& options = {});

bool check_pattern(const ScanReport& report) noexcept;

/// CSV: header "mu1,mu2,mu3,P", one row per triplet, 17 significant digits.
void write_scan_csv(const ScanReport& report, std::ostream& out);
std::string scan_to_json(const ScanReport& report);

}  // namespace qrac
