#include "tagnet/net_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "tagnet/errors.hpp"

namespace tagnet {

const char* metric_label(ActivityMetric m) {
    switch (m) {
        case ActivityMetric::degree: return "k";
        case ActivityMetric::distinct_tags: return "n_t";
        case ActivityMetric::groups: return "n_g";
        case ActivityMetric::assignments: return "a";
    }
    return "?";
}

std::uint32_t metric_of(const ActivityProfile& p, ActivityMetric m) {
    switch (m) {
        case ActivityMetric::degree: return p.degree;
        case ActivityMetric::distinct_tags: return p.distinct_tags;
        case ActivityMetric::groups: return p.groups;
        case ActivityMetric::assignments: return p.assignments;
    }
    return 0;
}

Distribution distribution(std::span<const std::uint64_t> values) {
    if (values.empty()) throw DomainError("distribution of empty value list");
    std::map<std::uint64_t, std::uint64_t> counts;
    for (auto v : values) ++counts[v];
    Distribution d;
    d.sample_count = values.size();
    d.support.reserve(counts.size());
    d.mass.reserve(counts.size());
    d.counts.reserve(counts.size());
    for (const auto& [value, count] : counts) {
        d.support.push_back(static_cast<double>(value));
        d.counts.push_back(count);
        d.mass.push_back(static_cast<double>(count) / static_cast<double>(values.size()));
    }
    return d;
}

std::vector<SummaryRow> summary_table(std::span<const ActivityProfile> profiles) {
    if (profiles.empty()) throw DomainError("summary of empty profile list");
    std::vector<SummaryRow> rows;
    for (ActivityMetric m : {ActivityMetric::degree, ActivityMetric::distinct_tags,
                             ActivityMetric::groups, ActivityMetric::assignments}) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& p : profiles) {
            const double x = metric_of(p, m);
            sum += x;
            sum_sq += x * x;
        }
        SummaryRow row;
        row.metric = m;
        row.mean = sum / static_cast<double>(profiles.size());
        if (sum > 0.0) row.fluctuation = sum_sq / sum;
        rows.push_back(row);
    }
    return rows;
}

MixingCurve activity_vs_degree(std::span<const ActivityProfile> profiles, ActivityMetric metric) {
    if (profiles.empty()) throw DomainError("curve over empty profile list");
    std::map<std::uint32_t, std::pair<double, std::uint64_t>> classes;  // k -> (sum, n)
    for (const auto& p : profiles) {
        auto& [sum, n] = classes[p.degree];
        sum += metric_of(p, metric);
        ++n;
    }
    MixingCurve c;
    c.metric = metric;
    for (const auto& [k, acc] : classes) {
        c.x.push_back(static_cast<double>(k));
        c.y.push_back(acc.first / static_cast<double>(acc.second));
        c.bin_count.push_back(acc.second);
    }
    return c;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
    if (x.size() < 2) throw DomainError("pearson: need at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DomainError("pearson: constant input");
    return sxy / std::sqrt(sxx * syy);
}

MixingCurve nn_mixing_curve(const Folksonomy& f, const SocialGraph& g,
                            const GroupMembership& m, ActivityMetric metric) {
    if (g.edge_count() == 0) throw DomainError("mixing curve of edgeless graph");

    // metric value per graph user; stores that do not know a user contribute 0
    std::vector<double> value(g.user_count(), 0.0);
    for (UserId u = 0; u < g.user_count(); ++u) {
        const std::string& name = g.user_name(u);
        switch (metric) {
            case ActivityMetric::degree:
                value[u] = static_cast<double>(g.degree(u));
                break;
            case ActivityMetric::distinct_tags:
                if (auto fu = f.find_user(name)) value[u] = f.vocab_size(*fu);
                break;
            case ActivityMetric::assignments:
                if (auto fu = f.find_user(name)) value[u] = f.assignment_count(*fu);
                break;
            case ActivityMetric::groups:
                if (auto mu = m.find_user(name)) value[u] = static_cast<double>(m.group_count_of(*mu));
                break;
        }
    }

    std::map<double, std::pair<double, std::uint64_t>> classes;  // value -> (sum of nn means, n)
    for (UserId u = 0; u < g.user_count(); ++u) {
        const auto nbrs = g.neighbors(u);
        if (nbrs.empty()) continue;
        double nn_sum = 0.0;
        for (UserId v : nbrs) nn_sum += value[v];
        auto& [sum, n] = classes[value[u]];
        sum += nn_sum / static_cast<double>(nbrs.size());
        ++n;
    }

    MixingCurve c;
    c.metric = metric;
    for (const auto& [v, acc] : classes) {
        c.x.push_back(v);
        c.y.push_back(acc.first / static_cast<double>(acc.second));
        c.bin_count.push_back(acc.second);
    }
    return c;
}

namespace {

// bin index for geometric binning; value 0 maps to bin -1
long geo_bin(double v, double base) {
    if (v <= 0.0) return -1;
    return static_cast<long>(std::floor(std::log(v) / std::log(base)));
}

} // namespace

MixingCurve log_binned(const MixingCurve& curve, double base) {
    if (base <= 1.0) throw DomainError("log binning base must exceed 1");
    std::map<long, std::array<double, 3>> bins;  // bin -> (sum wx, sum wy, sum w)
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        auto& acc = bins[geo_bin(curve.x[i], base)];
        const double w = static_cast<double>(curve.bin_count[i]);
        acc[0] += w * curve.x[i];
        acc[1] += w * curve.y[i];
        acc[2] += w;
    }
    MixingCurve out;
    out.metric = curve.metric;
    for (const auto& [bin, acc] : bins) {
        out.x.push_back(acc[0] / acc[2]);
        out.y.push_back(acc[1] / acc[2]);
        out.bin_count.push_back(static_cast<std::uint64_t>(acc[2]));
    }
    return out;
}

Distribution log_binned(const Distribution& dist, double base) {
    if (base <= 1.0) throw DomainError("log binning base must exceed 1");
    std::map<long, std::pair<double, std::uint64_t>> bins;  // bin -> (sum w*value, count)
    std::map<long, double> mass;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        const long b = geo_bin(dist.support[i], base);
        bins[b].first += static_cast<double>(dist.counts[i]) * dist.support[i];
        bins[b].second += dist.counts[i];
        mass[b] += dist.mass[i];
    }
    Distribution out;
    out.sample_count = dist.sample_count;
    for (const auto& [b, acc] : bins) {
        out.support.push_back(acc.first / static_cast<double>(acc.second));
        out.counts.push_back(acc.second);
        out.mass.push_back(mass[b]);
    }
    return out;
}

} // namespace tagnet
