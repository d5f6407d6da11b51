#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tagnet/core_model.hpp"

namespace tagnet {

enum class ActivityMetric { degree, distinct_tags, groups, assignments };

// short labels used in file output: k, n_t, n_g, a
const char* metric_label(ActivityMetric m);
std::uint32_t metric_of(const ActivityProfile& p, ActivityMetric m);

// Empirical probability mass function.
struct Distribution {
    std::vector<double> support;        // sorted values (or bin lower edges)
    std::vector<double> mass;           // sums to 1
    std::vector<std::uint64_t> counts;  // raw counts per support value
    std::uint64_t sample_count = 0;
};

// PMF of a list of nonnegative integers. Throws DomainError on empty input.
Distribution distribution(std::span<const std::uint64_t> values);

// One row of the activity summary: mean and fluctuation <x^2>/<x>.
// fluctuation is empty when the metric is identically zero.
struct SummaryRow {
    ActivityMetric metric;
    double mean = 0.0;
    std::optional<double> fluctuation;
};

std::vector<SummaryRow> summary_table(std::span<const ActivityProfile> profiles);

// x -> class-averaged y with class sizes; used both for activity-vs-degree
// curves and for nearest-neighbor mixing curves.
struct MixingCurve {
    ActivityMetric metric;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::uint64_t> bin_count;
};

// Average of `metric` over the class of users with each degree k.
MixingCurve activity_vs_degree(std::span<const ActivityProfile> profiles, ActivityMetric metric);

// Product-moment correlation. Requires |x| == |y| >= 2 and non-constant input.
double pearson(std::span<const double> x, std::span<const double> y);

// Nearest-neighbor mixing curve for one metric: for each user first average
// the metric over its neighbors, then average those per metric class.
// Users with degree 0 are excluded. Throws DomainError on an edgeless graph.
MixingCurve nn_mixing_curve(const Folksonomy& f, const SocialGraph& g,
                            const GroupMembership& m, ActivityMetric metric);

// Geometric rebinning for plot emission; x == 0 keeps its own bin. Bin means
// are weighted by class size. Core results stay unbinned.
MixingCurve log_binned(const MixingCurve& curve, double base = 1.3);
Distribution log_binned(const Distribution& dist, double base = 1.3);

} // namespace tagnet
