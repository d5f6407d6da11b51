#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tagnet/alignment.hpp"
#include "tagnet/core_model.hpp"
#include "tagnet/link_prediction.hpp"
#include "tagnet/net_metrics.hpp"
#include "tagnet/null_model.hpp"

namespace tagnet::io {

// shortest round-trip decimal representation
std::string format_double(double v);

// --- CSV / JSON emission (fixed column names, deterministic bytes) -------

void write_curve_csv(const std::filesystem::path& path, const MixingCurve& curve);
void write_curve_json(const std::filesystem::path& path, const MixingCurve& curve);
void write_distribution_csv(const std::filesystem::path& path, const Distribution& dist);
void write_distribution_json(const std::filesystem::path& path, const Distribution& dist);
void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
void write_summary_json(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);

struct CorrelationRow {
    std::string metric_a;
    std::string metric_b;
    double pearson = 0.0;
};
void write_correlations_csv(const std::filesystem::path& path,
                            const std::vector<CorrelationRow>& rows);
void write_correlations_json(const std::filesystem::path& path,
                             const std::vector<CorrelationRow>& rows);

// one file per alignment quantity: distance, mean, count
void write_profile_csv(const std::filesystem::path& path, const DistanceProfile& profile,
                       AlignmentQuantity quantity);
void write_histogram_csv(const std::filesystem::path& path, const Distribution& dist);

void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& pairs,
                      const std::vector<double>& scores);
void write_roc_csv(const std::filesystem::path& path, const RocResult& roc);
void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows);

void write_shuffle_report(const std::filesystem::path& path, const ShuffleReport& report);

// --- TSV store dumps -----------------------------------------------------

void write_triples(const std::filesystem::path& path, const Folksonomy& f);
void write_edges(const std::filesystem::path& path, const SocialGraph& g);
void write_groups(const std::filesystem::path& path, const GroupMembership& m);
void write_tsv_pairs(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::string>>& pairs);

// --- run manifest ----------------------------------------------------------

// Written beside every CLI run's outputs; content is a function of the
// invocation only, so identical runs produce identical bytes.
struct Manifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> inputs;   // name -> path
    std::vector<std::pair<std::string, std::string>> options;  // name -> value
    std::vector<std::string> outputs;                          // file names
    std::uint64_t seed = 0;
};

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

} // namespace tagnet::io
