#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qrac/error.hpp"
#include "qrac/oiscan.hpp"
#include "qrac/qrac.hpp"

using namespace qrac;

TEST(Triplets, ValidationAndOrdering) {
    EXPECT_EQ(make_triplet(4, 0, 2, 6).idx, (std::array<std::size_t, 3>{0, 2, 4}));
    EXPECT_THROW(make_triplet(1, 1, 2, 6), Error);
    EXPECT_THROW(make_triplet(0, 1, 6, 6), Error);
    const auto all = all_triplets(6);
    EXPECT_EQ(all.size(), 20U);
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
    EXPECT_EQ(all.front().str(), "0,1,2");
}

TEST(Clustering, Examples) {
    const std::vector<double> v{0.5, 0.5 + 1e-12, 0.6};
    const auto c = cluster_values(v, 1e-9);
    ASSERT_EQ(c.size(), 2U);
    EXPECT_EQ(c[0].members.size(), 2U);
    EXPECT_NEAR(c[0].representative, 0.5, 1e-12);
    EXPECT_EQ(c[1].members, (std::vector<std::size_t>{2}));
    EXPECT_TRUE(cluster_values(std::vector<double>{}, 1e-9).empty());
}

TEST(Clustering, SingleLinkageChains) {
    const std::vector<double> v{0.0, 0.8e-9, 1.6e-9, 2.4e-9};
    EXPECT_EQ(cluster_values(v, 1e-9).size(), 1U);
}

TEST(Clustering, InputOrderDoesNotMatter) {
    std::vector<double> v{0.3, 0.1, 0.2, 0.1 + 1e-13, 0.3 - 1e-13};
    const auto a = cluster_values(v, 1e-9);
    std::reverse(v.begin(), v.end());
    const auto b = cluster_values(v, 1e-9);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].representative, b[i].representative);
}

TEST(Scan, PrimeFiveHasTwoClusters) {
    const auto rep = scan(galois_mubs(5));
    EXPECT_EQ(rep.entries.size(), 20U);
    ASSERT_EQ(rep.N, 2U);
    EXPECT_EQ(rep.clusters[0].members.size(), 10U);
    EXPECT_EQ(rep.clusters[1].members.size(), 10U);
    EXPECT_NEAR(rep.P_plus, 0.6109, 5e-5);
    EXPECT_NEAR(rep.P_minus, 0.5964, 5e-5);
    EXPECT_TRUE(rep.agrees);
    EXPECT_TRUE(check_pattern(rep));
    EXPECT_GT(rep.gap_ratio, 1e3);
}

TEST(Scan, SmallDimensions) {
    const auto q = scan(galois_mubs(2));
    EXPECT_EQ(q.entries.size(), 1U);
    EXPECT_EQ(q.N, 1U);
    EXPECT_NEAR(q.P_plus, 0.788675, 1e-6);
    EXPECT_EQ(scan(galois_mubs(3)).N, 1U);
    EXPECT_EQ(scan(galois_mubs(7)).N, 1U);
    EXPECT_EQ(scan(galois_mubs(9)).N, 2U);
    EXPECT_EQ(scan(galois_mubs(13)).N, 2U);
}

TEST(Scan, PredictedCounts) {
    EXPECT_EQ(predicted_cluster_count(5), 2U);
    EXPECT_EQ(predicted_cluster_count(9), 2U);
    EXPECT_EQ(predicted_cluster_count(7), 1U);
    EXPECT_EQ(predicted_cluster_count(8), 1U);
    EXPECT_EQ(predicted_cluster_count(2), 1U);
}

TEST(Scan, CheckPatternOnSyntheticReports) {
    ScanReport r;
    r.dim = 13;
    r.N = 2;
    EXPECT_TRUE(check_pattern(r));
    r.N = 1;
    EXPECT_FALSE(check_pattern(r));
    r.dim = 8;
    EXPECT_TRUE(check_pattern(r));
    r.N = 3;
    EXPECT_FALSE(check_pattern(r));
}

TEST(Scan, EntriesMatchTripletAverages) {
    const auto set = galois_mubs(4);
    const auto rep = scan(set);
    for (const auto& e : rep.entries) {
        const Basis* trio[3] = {&set[e.id.idx[0]], &set[e.id.idx[1]], &set[e.id.idx[2]]};
        EXPECT_NEAR(e.value, p_general(trio, RequestWeights::uniform(3)).value, 1e-9);
    }
}

TEST(Scan, RelabelingBasesPreservesValueMultiset) {
    const auto set = galois_mubs(5);
    auto bases = set.bases();
    std::mt19937_64 rng(6);
    std::shuffle(bases.begin(), bases.end(), rng);
    const auto a = scan(set);
    const auto b = scan(certify_mub_set(bases, "shuffled"));
    ASSERT_EQ(a.N, b.N);
    for (std::size_t i = 0; i < a.N; ++i) {
        EXPECT_NEAR(a.clusters[i].representative, b.clusters[i].representative, 1e-12);
        EXPECT_EQ(a.clusters[i].members.size(), b.clusters[i].members.size());
    }
}

TEST(Scan, ClusterLookup) {
    const auto rep = scan(galois_mubs(5));
    for (std::size_t c = 0; c < rep.clusters.size(); ++c) {
        for (const auto& id : rep.clusters[c].members) EXPECT_EQ(rep.cluster_of(id), c);
    }
}

TEST(Scan, CsvAndJsonOutput) {
    const auto rep = scan(galois_mubs(3));
    std::ostringstream os;
    write_scan_csv(rep, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "mu1,mu2,mu3,P");
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 4U);
    const auto j = nlohmann::json::parse(scan_to_json(rep));
    EXPECT_EQ(j.at("dim").get<int>(), 3);
    EXPECT_EQ(j.at("N").get<int>(), 1);
    EXPECT_TRUE(j.at("agrees").get<bool>());
}

TEST(Scan, Deterministic) {
    const auto set = galois_mubs(7);
    EXPECT_EQ(scan_to_json(scan(set)), scan_to_json(scan(set)));
}
