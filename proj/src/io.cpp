#include "tagnet/io.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "tagnet/errors.hpp"

namespace tagnet::io {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void dump_json(const std::filesystem::path& path, const ordered_json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace

void write_curve_csv(const std::filesystem::path& path, const MixingCurve& curve) {
    auto out = open_out(path);
    out << "value,mean,count\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i)
        out << format_double(curve.x[i]) << ',' << format_double(curve.y[i]) << ','
            << curve.bin_count[i] << '\n';
}

void write_curve_json(const std::filesystem::path& path, const MixingCurve& curve) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < curve.x.size(); ++i)
        rows.push_back({{"value", curve.x[i]}, {"mean", curve.y[i]}, {"count", curve.bin_count[i]}});
    dump_json(path, {{"metric", metric_label(curve.metric)}, {"rows", rows}});
}

void write_distribution_csv(const std::filesystem::path& path, const Distribution& dist) {
    auto out = open_out(path);
    out << "value,mass,count\n";
    for (std::size_t i = 0; i < dist.support.size(); ++i)
        out << format_double(dist.support[i]) << ',' << format_double(dist.mass[i]) << ','
            << dist.counts[i] << '\n';
}

void write_distribution_json(const std::filesystem::path& path, const Distribution& dist) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < dist.support.size(); ++i)
        rows.push_back(
            {{"value", dist.support[i]}, {"mass", dist.mass[i]}, {"count", dist.counts[i]}});
    dump_json(path, {{"samples", dist.sample_count}, {"rows", rows}});
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
    auto out = open_out(path);
    out << "metric,mean,fluctuation\n";
    for (const auto& row : rows) {
        out << metric_label(row.metric) << ',' << format_double(row.mean) << ',';
        out << (row.fluctuation ? format_double(*row.fluctuation) : "nan") << '\n';
    }
}

void write_summary_json(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r{{"metric", metric_label(row.metric)}, {"mean", row.mean}};
        if (row.fluctuation) r["fluctuation"] = *row.fluctuation;
        else r["fluctuation"] = nullptr;
        arr.push_back(std::move(r));
    }
    dump_json(path, {{"rows", arr}});
}

void write_correlations_csv(const std::filesystem::path& path,
                            const std::vector<CorrelationRow>& rows) {
    auto out = open_out(path);
    out << "metric_a,metric_b,pearson\n";
    for (const auto& row : rows)
        out << row.metric_a << ',' << row.metric_b << ',' << format_double(row.pearson) << '\n';
}

void write_correlations_json(const std::filesystem::path& path,
                             const std::vector<CorrelationRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows)
        arr.push_back(
            {{"metric_a", row.metric_a}, {"metric_b", row.metric_b}, {"pearson", row.pearson}});
    dump_json(path, {{"rows", arr}});
}

void write_profile_csv(const std::filesystem::path& path, const DistanceProfile& profile,
                       AlignmentQuantity quantity) {
    auto out = open_out(path);
    out << "distance,mean,count\n";
    for (std::size_t i = 0; i < profile.distance.size(); ++i) {
        double mean = 0.0;
        switch (quantity) {
            case AlignmentQuantity::shared_tags: mean = profile.mean_shared_tags[i]; break;
            case AlignmentQuantity::sigma_tags: mean = profile.mean_sigma_tags[i]; break;
            case AlignmentQuantity::shared_groups: mean = profile.mean_shared_groups[i]; break;
            case AlignmentQuantity::sigma_groups: mean = profile.mean_sigma_groups[i]; break;
        }
        out << profile.distance[i] << ',' << format_double(mean) << ',' << profile.pair_count[i]
            << '\n';
    }
}

void write_histogram_csv(const std::filesystem::path& path, const Distribution& dist) {
    auto out = open_out(path);
    out << "bin,mass\n";
    for (std::size_t i = 0; i < dist.support.size(); ++i)
        out << format_double(dist.support[i]) << ',' << format_double(dist.mass[i]) << '\n';
}

void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& pairs,
                      const std::vector<double>& scores) {
    auto out = open_out(path);
    out << "userA,userB,score\n";
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out << pairs[i].first << ',' << pairs[i].second << ',' << format_double(scores[i]) << '\n';
}

void write_roc_csv(const std::filesystem::path& path, const RocResult& roc) {
    auto out = open_out(path);
    out << "fpr,tpr\n";
    for (const auto& [fpr, tpr] : roc.points)
        out << format_double(fpr) << ',' << format_double(tpr) << '\n';
}

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows) {
    auto out = open_out(path);
    out << "spec,auc,rel_improvement\n";
    for (const auto& row : rows)
        out << row.spec << ',' << format_double(row.auc) << ','
            << format_double(row.rel_improvement) << '\n';
}

void write_shuffle_report(const std::filesystem::path& path, const ShuffleReport& report) {
    dump_json(path, {{"seed", report.seed},
                     {"users_shuffled", report.users_shuffled},
                     {"vocab_sizes_preserved", report.vocab_sizes_preserved},
                     {"freq_multisets_preserved", report.freq_multisets_preserved},
                     {"group_counts_preserved", report.group_counts_preserved}});
}

void write_triples(const std::filesystem::path& path, const Folksonomy& f) {
    auto out = open_out(path);
    for (UserId u = 0; u < f.known_user_count(); ++u)
        for (const Posting& p : f.postings_by_item(u))
            out << f.user_name(u) << '\t' << f.item_name(p.item) << '\t' << f.tag_name(p.tag)
                << '\n';
}

void write_edges(const std::filesystem::path& path, const SocialGraph& g) {
    auto out = open_out(path);
    for (UserId u = 0; u < g.user_count(); ++u)
        for (UserId v : g.neighbors(u))
            if (u < v) out << g.user_name(u) << '\t' << g.user_name(v) << '\n';
}

void write_groups(const std::filesystem::path& path, const GroupMembership& m) {
    auto out = open_out(path);
    for (UserId u = 0; u < m.user_count(); ++u)
        for (GroupId g : m.groups_of(u)) out << m.user_name(u) << '\t' << m.group_name(g) << '\n';
}

void write_tsv_pairs(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::string>>& pairs) {
    auto out = open_out(path);
    for (const auto& [a, b] : pairs) out << a << '\t' << b << '\n';
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    ordered_json inputs = ordered_json::object();
    for (const auto& [name, value] : manifest.inputs) inputs[name] = value;
    ordered_json options = ordered_json::object();
    for (const auto& [name, value] : manifest.options) options[name] = value;
    dump_json(path, {{"tool", "tagnet"},
                     {"version", TAGNET_VERSION},
                     {"subcommand", manifest.subcommand},
                     {"seed", manifest.seed},
                     {"inputs", inputs},
                     {"options", options},
                     {"outputs", manifest.outputs}});
}

} // namespace tagnet::io
