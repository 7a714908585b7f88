#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "mogpsa/benchmark.hpp"
#include "mogpsa/eval_cache.hpp"
#include "mogpsa/grid.hpp"
#include "mogpsa/search.hpp"

using namespace mogpsa;

namespace {

ImagePoint convex(std::span<const double> x)
{
    return ImagePoint::finite({x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0)});
}

} // namespace

TEST(Grid, TransformHitsCornersAndMidpoint)
{
    const GridSpec spec{{-1.0, 0.3}, {2.0, 0.7}, 20};
    EXPECT_EQ(h_transform(spec, {0, 0}), (std::vector<double>{-1.0, 0.3}));
    EXPECT_EQ(h_transform(spec, {spec.extent(), spec.extent()}), (std::vector<double>{2.0, 0.7}));
    const auto mid = h_transform(spec, spec.center());
    EXPECT_DOUBLE_EQ(mid[0], 0.5);
    EXPECT_DOUBLE_EQ(mid[1], 0.5);
    EXPECT_THROW((GridSpec{{0.0}, {0.0}, 20}.validate()), InvalidInput);
    EXPECT_THROW((GridSpec{{0.0}, {1.0}, 0}.validate()), InvalidInput);
}

TEST(Grid, SamplePattern)
{
    const GridSpec spec{{0.0, 0.0}, {1.0, 1.0}, 2};
    const std::vector<GridPoint> base{{2, 2}};
    GridPointSet visited{{2, 2}};
    const auto s = sample_pattern(base, {2, 2}, spec, visited);
    EXPECT_EQ(s, (std::vector<GridPoint>{{0, 2}, {4, 2}, {2, 0}, {2, 4}}));

    const std::vector<GridPoint> edge{{0, 2}};
    const auto e = sample_pattern(edge, {2, 2}, spec, visited);
    for (const auto& p : e) EXPECT_TRUE(spec.contains(p));
    EXPECT_EQ(e.size(), 2u); // (-2, 2) leaves the box, (2, 2) is visited

    visited.insert(s.begin(), s.end());
    EXPECT_TRUE(sample_pattern(base, {2, 2}, spec, visited).empty());
}

TEST(Cache, InsertOnceAndCounters)
{
    EvalCache cache;
    EXPECT_FALSE(cache.find({1}).has_value());
    cache.insert({1}, ImagePoint::finite({1.0}));
    cache.insert({1}, ImagePoint::finite({2.0}));
    EXPECT_EQ((*cache.find({1}))[0], 1.0);
    cache.insert({2}, ImagePoint::infeasible());
    EXPECT_EQ(cache.size(), 2u);
    EXPECT_EQ(cache.hits(), 1u);
    EXPECT_EQ(cache.infeasible(), 1u);
}

TEST(Cache, BatchIsThreadCountInvariant)
{
    std::vector<GridPoint> pts;
    for (int i = 0; i < 40; ++i) pts.push_back({i, 40 - i});
    auto f = [](const GridPoint& s) { return ImagePoint::finite({std::sin(double(s[0])), double(s[1])}); };
    EvalCache a, b;
    const auto ra = evaluate_batch(pts, a, f, 1);
    const auto rb = evaluate_batch(pts, b, f, 4);
    EXPECT_EQ(ra, rb);
    std::atomic<int> calls{0};
    evaluate_batch(pts, a, [&](const GridPoint& s) { ++calls; return f(s); }, 3);
    EXPECT_EQ(calls.load(), 0);
    EXPECT_EQ(a.hits(), 40u);
}

TEST(Search, ConvexFrontAtModerateResolution)
{
    const GridSpec spec{{-1.0}, {2.0}, 12};
    SearchOptions opts;
    opts.hall_of_fame = 10;
    const auto r = optimize(convex, spec, opts);
    const double step = 3.0 / double(spec.extent());
    const auto c = check_convex_front(r, 3.0 * step, 50, 6.0 * step);
    EXPECT_TRUE(c.parameters_in_range);
    EXPECT_TRUE(c.mutually_nondominated);
    EXPECT_EQ(c.touched, 50u);
    EXPECT_FALSE(r.budget_exhausted);
    for (auto w : r.final_steps) EXPECT_EQ(w, 1);
    EXPECT_EQ(r.trace.front().steps, (StepWidths{spec.extent() / 2}));
}

TEST(Search, SingleObjectiveFindsMinimum)
{
    const GridSpec spec{{-1.0}, {2.0}, 20};
    SearchOptions opts;
    opts.hall_of_fame = 1;
    const auto r = optimize([](std::span<const double> x) { return ImagePoint::finite({x[0] * x[0]}); }, spec, opts);
    ASSERT_EQ(r.parameters.size(), 1u);
    EXPECT_LE(std::abs(r.parameters[0][0]), 3.0 / double(spec.extent()));
}

TEST(Search, BudgetCountsUniqueEvaluations)
{
    const GridSpec spec{{-1.0, -1.0}, {2.0, 2.0}, 10};
    SearchOptions opts;
    opts.hall_of_fame = 5;
    opts.budget = 37;
    std::atomic<int> calls{0};
    const auto r = optimize(
        [&](std::span<const double> x) {
            ++calls;
            if (x[1] > 1.5) return ImagePoint::infeasible();
            return ImagePoint::finite({x[0] * x[0] + x[1] * x[1], (x[0] - 1) * (x[0] - 1) + x[1] * x[1]});
        },
        spec, opts);
    EXPECT_TRUE(r.budget_exhausted);
    EXPECT_EQ(r.unique_evaluations, 37u);
    EXPECT_EQ(calls.load(), 37);
    for (const auto& img : r.images) EXPECT_FALSE(img.is_infeasible());
}

TEST(Search, DeterministicAcrossThreadCounts)
{
    const GridSpec spec{{-2.0, -2.0}, {2.0, 2.0}, 8};
    auto f = [](std::span<const double> x) {
        if (x[0] + x[1] > 3.0) return ImagePoint::infeasible();
        return ImagePoint::finite({(x[0] - 1) * (x[0] - 1) + x[1] * x[1], x[0] * x[0] + (x[1] - 1) * (x[1] - 1)});
    };
    SearchOptions one;
    one.hall_of_fame = 8;
    SearchOptions many = one;
    many.threads = 4;
    const auto a = optimize(f, spec, one);
    const auto b = optimize(f, spec, many);
    EXPECT_EQ(a.grid_points, b.grid_points);
    EXPECT_EQ(a.images, b.images);
    EXPECT_EQ(a.unique_evaluations, b.unique_evaluations);
}

TEST(Search, RejectsBadOptions)
{
    const GridSpec spec{{0.0}, {1.0}, 4};
    SearchOptions opts;
    opts.hall_of_fame = 0;
    EXPECT_THROW(optimize(convex, spec, opts), InvalidInput);
    opts.hall_of_fame = 1;
    opts.budget = 0;
    EXPECT_THROW(optimize(convex, spec, opts), InvalidInput);
}

TEST(Benchmark, Suite)
{
    EXPECT_TRUE(benchmark_suite({}).empty());
    const std::vector<std::string> sel{"sorting-1000"};
    const auto r = benchmark_suite(sel);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_TRUE(r[0].passed);
    const std::vector<std::string> bad{"nope"};
    EXPECT_THROW(benchmark_suite(bad), InvalidInput);
}
