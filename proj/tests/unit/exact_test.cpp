#include "mils/exact.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <regex>

namespace mils {
namespace {

using testing::make_instance;

bool has_family(const std::vector<ModelViolation> &v, ConstraintFamily f) {
    return std::any_of(v.begin(), v.end(), [&](const ModelViolation &x) { return x.family == f; });
}

TEST(BruteForce, OneCityPerSalesman) {
    const Instance inst = testing::random_instance(5, 3);
    double longest = 0.0;
    for (int c = 1; c <= 5; ++c) longest = std::max(longest, 2.0 * inst.distance(0, c));
    const ExactResult r = brute_force_opt(inst, 5);
    EXPECT_NEAR(r.makespan, longest, 1e-12);
    EXPECT_EQ(r.tours.size(), 5u);
}

TEST(BruteForce, SingleSalesmanIsTsp) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Instance inst = testing::random_instance(7, seed);
        EXPECT_NEAR(brute_force_opt(inst, 1).makespan, testing::enumerate_tsp(inst, {1, 2, 3, 4, 5, 6, 7}), 1e-9);
    }
}

TEST(BruteForce, SquareCornersTwoSalesmen) {
    // Depot at the centre of a unit square: each salesman takes two adjacent corners.
    const Instance inst = make_instance({{0, 0}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
    const ExactResult r = brute_force_opt(inst, 2);
    EXPECT_NEAR(r.makespan, 2.0 + 2.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(makespan(inst, r.tours), r.makespan, 1e-12);
    EXPECT_TRUE(validate(inst, 2, r.tours).empty());
}

TEST(BruteForce, MatchesEnumeration) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int n = 5 + static_cast<int>(seed % 4);
        const int m = 1 + static_cast<int>(seed % 3);
        const Instance inst = testing::random_instance(n, seed + 500);
        const ExactResult r = brute_force_opt(inst, m);
        EXPECT_NEAR(r.makespan, testing::enumerate_optimum(inst, m), 1e-9) << "seed " << seed;
        EXPECT_TRUE(validate(inst, m, r.tours).empty());
        EXPECT_NEAR(testing::reference_makespan(inst, r.tours), r.makespan, 1e-9);
    }
}

TEST(BruteForce, RejectsLargeOrInfeasible) {
    EXPECT_THROW(brute_force_opt(testing::random_instance(kExactMaxCities + 1, 1), 2), std::invalid_argument);
    EXPECT_THROW(brute_force_opt(testing::random_instance(4, 1), 5), std::invalid_argument);
    EXPECT_THROW(held_karp_tour(testing::random_instance(17, 1), std::vector<int>(17, 1)), std::invalid_argument);
}

int count_matches(const std::string &text, const std::string &pattern) {
    const std::regex re(pattern);
    return static_cast<int>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

TEST(ExportLp, VariableAndRowCounts) {
    const Instance inst = make_instance({{0, 0}, {1, 0}, {0, 1}});
    const std::string lp = export_lp(inst, 1);
    EXPECT_NE(lp.find("Minimize\n obj: C\n"), std::string::npos);
    const std::size_t bin = lp.find("Binaries\n");
    ASSERT_NE(bin, std::string::npos);
    const std::string binaries = lp.substr(bin, lp.find("End") - bin);
    EXPECT_EQ(count_matches(binaries, R"(x_\d+_\d+_\d+)"), 6);
    EXPECT_EQ(count_matches(lp, R"( depot_(out|in)_\d+:)"), 2);
}

TEST(ExportLp, RowFamiliesScaleWithSize) {
    const Instance inst = testing::random_instance(6, 2);
    const int m = 3;
    const std::string lp = export_lp(inst, m);
    EXPECT_EQ(count_matches(lp, R"( len_\d+:)"), m);
    EXPECT_EQ(count_matches(lp, R"( assign_\d+:)"), 6);
    EXPECT_EQ(count_matches(lp, R"( depot_(out|in)_\d+:)"), 2 * m);
    EXPECT_EQ(count_matches(lp, R"( flow_\d+_\d+:)"), 6 * m);
    EXPECT_EQ(count_matches(lp, R"( mtz_\d+_\d+:)"), 6 * 5);
    EXPECT_NE(lp.find("C >= 0"), std::string::npos);
    EXPECT_THROW(export_lp(inst, 7), std::invalid_argument);
}

TEST(ModelFeasibility, ExamplesByFamily) {
    const Instance inst = testing::random_instance(6, 4);
    const std::vector<Tour> good = {{1, 2, 3}, {4, 5, 6}};
    EXPECT_TRUE(check_model_feasibility(inst, 2, good).empty());

    const auto dup = check_model_feasibility(inst, 2, {{1, 2, 3}, {4, 5, 6, 1}});
    EXPECT_TRUE(has_family(dup, ConstraintFamily::Assignment));

    const double longest = makespan(inst, good);
    const auto short_c = check_model_feasibility(inst, 2, good, longest - 1e-3);
    ASSERT_FALSE(short_c.empty());
    EXPECT_TRUE(has_family(short_c, ConstraintFamily::Length));
    EXPECT_TRUE(check_model_feasibility(inst, 2, good, longest + 1.0).empty());

    const auto empty = check_model_feasibility(inst, 2, {{1, 2, 3, 4, 5, 6}, {}});
    EXPECT_TRUE(has_family(empty, ConstraintFamily::DepotOut));
    EXPECT_TRUE(has_family(empty, ConstraintFamily::DepotIn));

    EXPECT_EQ(to_string(ConstraintFamily::Mtz), "mtz");
}

TEST(ModelFeasibility, AgreesWithValidate) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        const int n = 4 + static_cast<int>(rng.below(12));
        const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, 5))));
        const Instance inst = testing::random_instance(n, seed + 700);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Tour> tours = testing::random_tours(n, m, rng);
            switch (rng.below(5)) {
                case 0: break;
                case 1: {  // duplicate a city into another tour
                    const auto t = rng.below(tours.size());
                    tours[rng.below(tours.size())].push_back(tours[t][rng.below(tours[t].size())]);
                    break;
                }
                case 2: {  // drop a city
                    auto &t = tours[rng.below(tours.size())];
                    t.erase(t.begin() + static_cast<long>(rng.below(t.size())));
                    break;
                }
                case 3: {  // empty a tour, moving its cities elsewhere when possible
                    const auto k = rng.below(tours.size());
                    if (tours.size() > 1) {
                        auto &dst = tours[(k + 1) % tours.size()];
                        dst.insert(dst.end(), tours[k].begin(), tours[k].end());
                    }
                    tours[k].clear();
                    break;
                }
                default: {  // move a city between tours, possibly still valid
                    const auto from = rng.below(tours.size());
                    if (tours[from].size() < 2) break;
                    const int c = tours[from].back();
                    tours[from].pop_back();
                    tours[rng.below(tours.size())].push_back(c);
                    break;
                }
            }
            const bool valid = validate(inst, m, tours).empty();
            const bool model = check_model_feasibility(inst, m, tours).empty();
            ASSERT_EQ(valid, model) << "seed " << seed << " trial " << trial;
        }
    }
}

TEST(KnownOptimum, Att532TwentySalesmenIsTwiceFarthestCity) {
    const Instance inst = read_tsplib_file(testing::instance_path("att532.tsp"));
    double farthest = 0.0;
    for (int c = 1; c <= inst.num_cities(); ++c) farthest = std::max(farthest, inst.distance(0, c));
    EXPECT_EQ(2.0 * farthest, 5580.0);
}

}  // namespace
}  // namespace mils
