#include "mils/instance.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mils {
namespace {

using testing::make_instance;

Instance parse(const std::string &text, std::optional<Metric> metric = std::nullopt) {
    std::istringstream in(text);
    return parse_tsplib(in, metric);
}

TEST(ParseTsplib, ThreeNodeFile) {
    const Instance inst = parse(
        "NAME : tiny\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\n"
        "NODE_COORD_SECTION\n1 0 0\n2 3 4\n3 0 8\nEOF\n");
    EXPECT_EQ(inst.name(), "tiny");
    EXPECT_EQ(inst.num_cities(), 2);
    EXPECT_EQ(inst.coord(kDepot).x, 0.0);
    EXPECT_EQ(inst.coord(kDepot).y, 0.0);
    EXPECT_EQ(inst.metric(), Metric::RealEuclidean);
    EXPECT_DOUBLE_EQ(inst.distance(0, 1), 5.0);
    EXPECT_DOUBLE_EQ(inst.distance(1, 2), 5.0);
}

TEST(ParseTsplib, Mtsp51HasFiftyCities) {
    const Instance inst = read_tsplib_file(testing::instance_path("mtsp51.tsp"));
    EXPECT_EQ(inst.num_cities(), 50);
    EXPECT_EQ(inst.coord(kDepot).x, 37.0);
    EXPECT_EQ(inst.coord(kDepot).y, 52.0);
}

TEST(ParseTsplib, AttDefaultsToAttMetric) {
    const Instance inst = read_tsplib_file(testing::instance_path("att532.tsp"));
    EXPECT_EQ(inst.num_cities(), 531);
    EXPECT_EQ(inst.metric(), Metric::Att);
    // Every ATT distance is integral.
    for (int j = 1; j < 50; ++j) EXPECT_EQ(inst.distance(0, j), std::floor(inst.distance(0, j)));
}

TEST(ParseTsplib, DimensionMismatchNamesLine) {
    try {
        parse("DIMENSION : 5\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n3 2 2\n4 3 3\nEOF\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError &e) {
        EXPECT_GT(e.line(), 0);
        EXPECT_NE(std::string(e.what()).find("DIMENSION"), std::string::npos);
    }
}

TEST(ParseTsplib, MalformedInputs) {
    EXPECT_THROW(parse("DIMENSION : 2\nEDGE_WEIGHT_TYPE : EXPLICIT\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n"), ParseError);
    EXPECT_THROW(parse("DIMENSION 2\n"), ParseError);
    EXPECT_THROW(parse("DIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1\n"), ParseError);
    EXPECT_THROW(parse("DIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\n"), ParseError);
}

TEST(ParseTsplib, MetricOverrideAndCeil) {
    const std::string text = "DIMENSION : 2\nEDGE_WEIGHT_TYPE : CEIL_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n";
    EXPECT_DOUBLE_EQ(parse(text).distance(0, 1), 2.0);
    EXPECT_DOUBLE_EQ(parse(text, Metric::RoundedEuclidean).distance(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(parse(text, Metric::RealEuclidean).distance(0, 1), std::sqrt(2.0));
}

TEST(ParseTsplib, WriteReadRoundTrip) {
    const Instance a = generate_random(30, 1000.0, 5, "roundtrip");
    std::stringstream buf;
    write_tsplib(buf, a);
    const Instance b = parse_tsplib(buf);
    ASSERT_EQ(a.num_vertices(), b.num_vertices());
    EXPECT_EQ(b.name(), "roundtrip");
    for (int v = 0; v < a.num_vertices(); ++v) {
        EXPECT_EQ(a.coord(v).x, b.coord(v).x);
        EXPECT_EQ(a.coord(v).y, b.coord(v).y);
    }
}

TEST(GenerateRandom, DeterministicForSeed) {
    const Instance a = generate_random(6, 100.0, 1);
    const Instance b = generate_random(6, 100.0, 1);
    ASSERT_EQ(a.num_vertices(), b.num_vertices());
    for (int v = 0; v < a.num_vertices(); ++v) {
        EXPECT_EQ(a.coord(v).x, b.coord(v).x);
        EXPECT_EQ(a.coord(v).y, b.coord(v).y);
    }
    EXPECT_NE(generate_random(6, 100.0, 2).coord(1).x, a.coord(1).x);
}

TEST(GenerateRandom, CoordinatesInRange) {
    const Instance inst = generate_random(100, 1000.0, 7);
    EXPECT_EQ(inst.num_cities(), 100);
    EXPECT_EQ(inst.metric(), Metric::RealEuclidean);
    for (const Point &p : inst.coords()) {
        EXPECT_GE(p.x, 0.0);
        EXPECT_LE(p.x, 1000.0);
        EXPECT_GE(p.y, 0.0);
        EXPECT_LE(p.y, 1000.0);
    }
}

TEST(GenerateRandom, RejectsZeroCities) { EXPECT_THROW(generate_random(0, 100.0, 1), std::invalid_argument); }

TEST(Distance, KnownValues) {
    EXPECT_DOUBLE_EQ(metric_distance(Metric::RealEuclidean, {0, 0}, {3, 4}), 5.0);
    EXPECT_DOUBLE_EQ(metric_distance(Metric::Att, {0, 0}, {3, 4}), 2.0);
    EXPECT_DOUBLE_EQ(metric_distance(Metric::RoundedEuclidean, {0, 0}, {1, 1}), 1.0);
    EXPECT_DOUBLE_EQ(metric_distance(Metric::RoundedEuclidean, {0, 0}, {1.1, 1.1}), 2.0);
    for (Metric m : {Metric::RealEuclidean, Metric::RoundedEuclidean, Metric::CeilEuclidean, Metric::Att})
        EXPECT_EQ(metric_distance(m, {2.5, 7}, {2.5, 7}), 0.0);
}

TEST(Distance, OutOfRangeIndex) {
    const Instance inst = make_instance({{0, 0}, {1, 0}});
    EXPECT_THROW(inst.checked_distance(0, 2), std::out_of_range);
    EXPECT_THROW(inst.checked_distance(-1, 0), std::out_of_range);
}

TEST(Distance, RandomInstanceProperties) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Instance inst = testing::random_instance(12, seed);
        const int nv = inst.num_vertices();
        for (int i = 0; i < nv; ++i) {
            EXPECT_EQ(inst.distance(i, i), 0.0);
            for (int j = 0; j < nv; ++j) {
                ASSERT_EQ(inst.distance(i, j), inst.distance(j, i));
                for (int k = 0; k < nv; ++k)
                    ASSERT_LE(inst.distance(i, k), inst.distance(i, j) + inst.distance(j, k) + 1e-9);
            }
        }
    }
}

TEST(Distance, OnDemandAboveMatrixLimit) {
    const Instance big = generate_random(Instance::kMatrixLimit + 5, 1000.0, 3);
    for (int j = 1; j < 20; ++j)
        EXPECT_EQ(big.distance(0, j), metric_distance(Metric::RealEuclidean, big.coord(0), big.coord(j)));
}

TEST(NeighborList, CollinearPoints) {
    const Instance inst = make_instance({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    const NeighborList nb(inst, 2);
    EXPECT_EQ(std::vector<int>(nb.of(0).begin(), nb.of(0).end()), (std::vector<int>{1, 2}));
    EXPECT_EQ(std::vector<int>(nb.of(3).begin(), nb.of(3).end()), (std::vector<int>{2, 1}));
    // Vertex 1 has 0 and 2 at distance 1; the lower index comes first.
    EXPECT_EQ(std::vector<int>(nb.of(1).begin(), nb.of(1).end()), (std::vector<int>{0, 2}));
}

TEST(NeighborList, ClampsAlpha) {
    const Instance inst = make_instance({{0, 0}, {1, 0}, {5, 0}});
    const NeighborList nb(inst, 10);
    EXPECT_EQ(nb.alpha(), 2);
    for (int v = 0; v < 3; ++v) EXPECT_EQ(nb.of(v).size(), 2u);
    EXPECT_THROW(NeighborList(inst, 0), std::invalid_argument);
}

TEST(NeighborList, AlphaOne) {
    const Instance inst = make_instance({{0, 0}, {1, 0}, {5, 0}});
    const NeighborList nb(inst, 1);
    EXPECT_EQ(nb.of(0)[0], 1);
    EXPECT_EQ(nb.of(1)[0], 0);
    EXPECT_EQ(nb.of(2)[0], 1);
}

TEST(NeighborList, MatchesFullSortOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Instance inst = testing::random_instance(199, seed, 50.0);
        const NeighborList nb(inst, 10);
        for (int v = 0; v < inst.num_vertices(); ++v) {
            std::vector<int> all;
            for (int w = 0; w < inst.num_vertices(); ++w)
                if (w != v) all.push_back(w);
            std::stable_sort(all.begin(), all.end(),
                             [&](int a, int b) { return inst.distance(v, a) < inst.distance(v, b); });
            all.resize(10);
            ASSERT_EQ(std::vector<int>(nb.of(v).begin(), nb.of(v).end()), all) << "vertex " << v;
        }
    }
}

}  // namespace
}  // namespace mils
