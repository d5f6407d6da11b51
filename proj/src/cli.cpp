#include "tagnet/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "tagnet/alignment.hpp"
#include "tagnet/core_model.hpp"
#include "tagnet/errors.hpp"
#include "tagnet/io.hpp"
#include "tagnet/link_prediction.hpp"
#include "tagnet/net_metrics.hpp"
#include "tagnet/null_model.hpp"
#include "tagnet/similarity.hpp"
#include "tagnet/synth_gen.hpp"

namespace tagnet::cli {

namespace fs = std::filesystem;

namespace {

fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("TAGNET_OUT_DIR"); env && *env) return env;
    throw DomainError("no output directory: pass --out or set TAGNET_OUT_DIR");
}

std::string sanitize(std::string name) {
    for (char& c : name)
        if (c == ':' || c == '/' || c == '\\') c = '_';
    return name;
}

AlignmentQuantity parse_quantity(const std::string& text) {
    const std::string t = normalize_id(text);
    if (t == "shared_tags" || t == "n_st") return AlignmentQuantity::shared_tags;
    if (t == "sigma_tags") return AlignmentQuantity::sigma_tags;
    if (t == "shared_groups" || t == "n_sg") return AlignmentQuantity::shared_groups;
    if (t == "sigma_groups") return AlignmentQuantity::sigma_groups;
    throw DomainError("unknown alignment quantity '" + t + "'");
}

std::vector<std::pair<std::string, std::string>> load_pair_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path.string(), lineno, "expected userA<TAB>userB");
        std::string a = normalize_id(std::string_view(line).substr(0, tab));
        std::string b = normalize_id(std::string_view(line).substr(tab + 1));
        if (a.empty() && b.empty()) continue;
        if (a.empty() || b.empty()) throw ParseError(path.string(), lineno, "empty field");
        pairs.emplace_back(std::move(a), std::move(b));
    }
    return pairs;
}

// --- stats ----------------------------------------------------------------

struct StatsOptions {
    std::string triples, edges, groups, out;
    bool log_bin = false;
    double log_base = 1.3;
};

void run_stats(const StatsOptions& opt) {
    const fs::path out = resolve_out_dir(opt.out);
    const Folksonomy f = Folksonomy::load(opt.triples);
    const SocialGraph g = SocialGraph::load(opt.edges);
    const GroupMembership m = GroupMembership::load(opt.groups);
    const std::vector<ActivityProfile> profiles = all_profiles(f, g, m);

    io::Manifest manifest;
    manifest.subcommand = "stats";
    manifest.inputs = {{"triples", opt.triples}, {"edges", opt.edges}, {"groups", opt.groups}};
    if (opt.log_bin)
        manifest.options = {{"log_bin", "true"}, {"log_base", io::format_double(opt.log_base)}};
    auto emit = [&](const std::string& name) { manifest.outputs.push_back(name); };

    const ActivityMetric metrics[] = {ActivityMetric::degree, ActivityMetric::distinct_tags,
                                      ActivityMetric::groups, ActivityMetric::assignments};

    for (ActivityMetric metric : metrics) {
        std::vector<std::uint64_t> values;
        values.reserve(profiles.size());
        for (const auto& p : profiles) values.push_back(metric_of(p, metric));
        const Distribution dist = distribution(values);
        const std::string base = std::string("dist_") + metric_label(metric);
        io::write_distribution_csv(out / (base + ".csv"), dist);
        io::write_distribution_json(out / (base + ".json"), dist);
        emit(base + ".csv");
        emit(base + ".json");
        if (opt.log_bin) {
            io::write_distribution_csv(out / (base + "_logbin.csv"),
                                       log_binned(dist, opt.log_base));
            emit(base + "_logbin.csv");
        }
    }

    const std::vector<SummaryRow> summary = summary_table(profiles);
    io::write_summary_csv(out / "summary.csv", summary);
    io::write_summary_json(out / "summary.json", summary);
    emit("summary.csv");
    emit("summary.json");

    for (ActivityMetric metric : {ActivityMetric::distinct_tags, ActivityMetric::groups,
                                  ActivityMetric::assignments}) {
        const MixingCurve curve = activity_vs_degree(profiles, metric);
        const std::string base = std::string("activity_vs_degree_") + metric_label(metric);
        io::write_curve_csv(out / (base + ".csv"), curve);
        io::write_curve_json(out / (base + ".json"), curve);
        emit(base + ".csv");
        emit(base + ".json");
        if (opt.log_bin) {
            io::write_curve_csv(out / (base + "_logbin.csv"), log_binned(curve, opt.log_base));
            emit(base + "_logbin.csv");
        }
    }

    for (ActivityMetric metric : metrics) {
        const MixingCurve curve = nn_mixing_curve(f, g, m, metric);
        const std::string base = std::string("mixing_") + metric_label(metric);
        io::write_curve_csv(out / (base + ".csv"), curve);
        io::write_curve_json(out / (base + ".json"), curve);
        emit(base + ".csv");
        emit(base + ".json");
        if (opt.log_bin) {
            io::write_curve_csv(out / (base + "_logbin.csv"), log_binned(curve, opt.log_base));
            emit(base + "_logbin.csv");
        }
    }

    std::vector<io::CorrelationRow> correlations;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            std::vector<double> x, y;
            x.reserve(profiles.size());
            y.reserve(profiles.size());
            for (const auto& p : profiles) {
                x.push_back(metric_of(p, metrics[i]));
                y.push_back(metric_of(p, metrics[j]));
            }
            io::CorrelationRow row;
            row.metric_a = metric_label(metrics[i]);
            row.metric_b = metric_label(metrics[j]);
            try {
                row.pearson = pearson(x, y);
            } catch (const DomainError&) {
                row.pearson = std::numeric_limits<double>::quiet_NaN();  // constant metric
            }
            correlations.push_back(row);
        }
    }
    io::write_correlations_csv(out / "correlations.csv", correlations);
    io::write_correlations_json(out / "correlations.json", correlations);
    emit("correlations.csv");
    emit("correlations.json");

    io::write_manifest(out / "manifest.json", manifest);
    std::cout << "stats: " << profiles.size() << " users -> " << out.string() << "\n";
}

// --- align ------------------------------------------------------------------

struct AlignOptions {
    std::string triples, edges, groups, out;
    std::size_t sources = 20000;
    int dmax = 6;
    std::uint64_t seed = 0;
    bool exhaustive_d2 = false;
    double bin_width = 0.02;
    std::vector<std::string> histograms;  // "d:quantity"
};

void run_align(const AlignOptions& opt) {
    const fs::path out = resolve_out_dir(opt.out);
    const Folksonomy f = Folksonomy::load(opt.triples);
    const SocialGraph g = SocialGraph::load(opt.edges);
    const GroupMembership m = GroupMembership::load(opt.groups);

    AlignmentConfig cfg;
    cfg.sources = opt.sources;
    cfg.d_max = opt.dmax;
    cfg.seed = opt.seed;
    cfg.exhaustive_d2 = opt.exhaustive_d2;
    cfg.hist_bin_width = opt.bin_width;

    io::Manifest manifest;
    manifest.subcommand = "align";
    manifest.seed = opt.seed;
    manifest.inputs = {{"triples", opt.triples}, {"edges", opt.edges}, {"groups", opt.groups}};
    manifest.options = {{"sources", std::to_string(opt.sources)},
                        {"dmax", std::to_string(opt.dmax)},
                        {"exhaustive_d2", opt.exhaustive_d2 ? "true" : "false"},
                        {"bin_width", io::format_double(opt.bin_width)}};

    const DistanceProfile profile = alignment_profile(f, g, m, cfg);
    if (profile.sources_clamped)
        std::cerr << "warning: source sample clamped to " << g.user_count() << " users\n";
    for (AlignmentQuantity q : {AlignmentQuantity::shared_tags, AlignmentQuantity::sigma_tags,
                                AlignmentQuantity::shared_groups, AlignmentQuantity::sigma_groups}) {
        const std::string name = std::string("align_") + quantity_label(q) + ".csv";
        io::write_profile_csv(out / name, profile, q);
        manifest.outputs.push_back(name);
    }

    for (const std::string& spec : opt.histograms) {
        const std::size_t colon = spec.find(':');
        if (colon == std::string::npos)
            throw DomainError("histogram spec must be distance:quantity, got '" + spec + "'");
        const int d = std::stoi(spec.substr(0, colon));
        const AlignmentQuantity q = parse_quantity(spec.substr(colon + 1));
        const Distribution hist = alignment_histogram(f, g, m, d, q, cfg);
        const std::string name =
            std::string("hist_") + quantity_label(q) + "_d" + std::to_string(d) + ".csv";
        io::write_histogram_csv(out / name, hist);
        manifest.outputs.push_back(name);
    }

    io::write_manifest(out / "manifest.json", manifest);
    std::cout << "align: " << profile.distance.size() << " strata -> " << out.string() << "\n";
}

// --- shuffle ----------------------------------------------------------------

struct ShuffleOptions {
    std::string triples, groups, out;
    std::uint64_t seed = 0;
};

void run_shuffle(const ShuffleOptions& opt) {
    if (opt.triples.empty() && opt.groups.empty())
        throw DomainError("shuffle needs --triples and/or --groups");
    const fs::path out = resolve_out_dir(opt.out);

    io::Manifest manifest;
    manifest.subcommand = "shuffle";
    manifest.seed = opt.seed;

    if (!opt.triples.empty()) {
        const Folksonomy f = Folksonomy::load(opt.triples);
        const auto [shuffled, report] = shuffle_tags(f, opt.seed);
        io::write_triples(out / "shuffled_triples.tsv", shuffled);
        io::write_shuffle_report(out / "shuffle_tags_report.json", report);
        manifest.inputs.emplace_back("triples", opt.triples);
        manifest.outputs.push_back("shuffled_triples.tsv");
        manifest.outputs.push_back("shuffle_tags_report.json");
        if (!report.ok()) throw StateError("tag shuffle failed its preservation audit");
    }
    if (!opt.groups.empty()) {
        const GroupMembership m = GroupMembership::load(opt.groups);
        const auto [shuffled, report] = shuffle_groups(m, opt.seed);
        io::write_groups(out / "shuffled_groups.tsv", shuffled);
        io::write_shuffle_report(out / "shuffle_groups_report.json", report);
        manifest.inputs.emplace_back("groups", opt.groups);
        manifest.outputs.push_back("shuffled_groups.tsv");
        manifest.outputs.push_back("shuffle_groups_report.json");
        if (!report.ok()) throw StateError("group shuffle failed its preservation audit");
    }

    io::write_manifest(out / "manifest.json", manifest);
    std::cout << "shuffle: seed " << opt.seed << " -> " << out.string() << "\n";
}

// --- score ------------------------------------------------------------------

struct ScoreOptions {
    std::string triples, pairs, spec, out;
};

void run_score(const ScoreOptions& opt) {
    const fs::path out = resolve_out_dir(opt.out);
    const Folksonomy f = Folksonomy::load(opt.triples);
    const MeasureSpec spec = MeasureSpec::parse(opt.spec);
    const auto pairs = load_pair_file(opt.pairs);
    const TagProbabilityTable probs = tag_probabilities(f);
    const std::vector<double> scores = batch_similarity(spec, f, probs, pairs);

    io::write_scores_csv(out / "scores.csv", pairs, scores);
    io::Manifest manifest;
    manifest.subcommand = "score";
    manifest.inputs = {{"triples", opt.triples}, {"pairs", opt.pairs}};
    manifest.options = {{"spec", spec.str()}};
    manifest.outputs = {"scores.csv"};
    io::write_manifest(out / "manifest.json", manifest);
    std::cout << "score: " << pairs.size() << " pairs -> " << out.string() << "\n";
}

// --- predict ----------------------------------------------------------------

struct PredictOptions {
    std::string triples, edges, neighbors, criterion = "most-active", out;
    std::vector<std::string> specs;
    bool all_specs = false;
    std::size_t sample_size = 1000;
    std::uint64_t seed = 0;
};

void run_predict(const PredictOptions& opt) {
    if (opt.neighbors.empty())
        throw DomainError("predict needs --neighbors (or its alias --baseline)");
    const fs::path out = resolve_out_dir(opt.out);
    const Folksonomy f = Folksonomy::load(opt.triples);
    const SocialGraph g = SocialGraph::load(opt.edges);
    const NeighborLists lists = load_neighbor_lists(opt.neighbors);
    const BaselineScores baseline = BaselineScores::load(opt.neighbors);
    const SampleCriterion criterion = parse_criterion(opt.criterion);

    std::vector<MeasureSpec> specs;
    if (opt.all_specs) {
        specs = MeasureSpec::all();
    } else {
        if (opt.specs.empty()) throw DomainError("predict needs --spec or --all-specs");
        for (const auto& s : opt.specs) specs.push_back(MeasureSpec::parse(s));
    }

    const PairSample sample = sample_pairs(f, g, lists, criterion, opt.sample_size, opt.seed);
    if (sample.short_sample)
        std::cerr << "warning: only " << sample.pairs.size() << " of " << opt.sample_size
                  << " requested pairs could be sampled\n";
    if (sample.pairs.empty()) throw DataError("pair sampling produced no usable pairs");

    const TagProbabilityTable probs = tag_probabilities(f);

    io::Manifest manifest;
    manifest.subcommand = "predict";
    manifest.seed = opt.seed;
    manifest.inputs = {{"triples", opt.triples}, {"edges", opt.edges}, {"neighbors", opt.neighbors}};
    manifest.options = {{"criterion", criterion_label(criterion)},
                        {"sample_size", std::to_string(opt.sample_size)}};

    io::write_tsv_pairs(out / "sampled_pairs.tsv", sample.pairs);
    manifest.outputs.push_back("sampled_pairs.tsv");

    // baseline ROC
    {
        std::vector<double> scores;
        scores.reserve(sample.pairs.size());
        for (const auto& [a, b] : sample.pairs) {
            const auto s = baseline.find(a, b);
            if (!s) throw DataError("no baseline score for pair (" + a + ", " + b + ")");
            scores.push_back(*s);
        }
        io::write_roc_csv(out / "roc_baseline.csv", roc(label_pairs(g, sample.pairs, scores)));
        manifest.outputs.push_back("roc_baseline.csv");
    }
    for (const MeasureSpec& spec : specs) {
        const std::vector<double> scores = batch_similarity(spec, f, probs, sample.pairs);
        const std::string name = "roc_" + sanitize(spec.str()) + ".csv";
        io::write_roc_csv(out / name, roc(label_pairs(g, sample.pairs, scores)));
        manifest.outputs.push_back(name);
    }

    const std::vector<ComparisonRow> rows = compare_measures(f, g, probs, sample, specs, baseline);
    io::write_comparison_csv(out / "comparison.csv", rows);
    manifest.outputs.push_back("comparison.csv");

    io::write_manifest(out / "manifest.json", manifest);
    std::cout << "predict: " << sample.pairs.size() << " pairs, " << specs.size()
              << " measures -> " << out.string() << "\n";
}

// --- synth ------------------------------------------------------------------

struct SynthOptions {
    SynthConfig cfg;
    std::string out;
};

void run_synth(const SynthOptions& opt) {
    const fs::path out = resolve_out_dir(opt.out);
    const SynthData data = generate(opt.cfg);
    if (data.clamped) std::cerr << "warning: some draws were clamped to universe bounds\n";

    io::write_triples(out / "triples.tsv", data.folksonomy);
    io::write_edges(out / "edges.tsv", data.graph);
    io::write_groups(out / "groups.tsv", data.groups);
    io::write_tsv_pairs(out / "communities.tsv", data.communities);

    io::Manifest manifest;
    manifest.subcommand = "synth";
    manifest.seed = opt.cfg.seed;
    manifest.options = {{"users", std::to_string(opt.cfg.user_count)},
                        {"tags", std::to_string(opt.cfg.tag_universe)},
                        {"items", std::to_string(opt.cfg.item_universe)},
                        {"group_universe", std::to_string(opt.cfg.group_universe)},
                        {"communities", std::to_string(opt.cfg.community_count)},
                        {"exponent", io::format_double(opt.cfg.activity_exponent)},
                        {"homophily", io::format_double(opt.cfg.homophily)},
                        {"assortativity", io::format_double(opt.cfg.assortativity)},
                        {"mean_degree", io::format_double(opt.cfg.mean_degree)}};
    manifest.outputs = {"triples.tsv", "edges.tsv", "groups.tsv", "communities.tsv"};
    io::write_manifest(out / "manifest.json", manifest);

    std::cout << "synth: " << data.folksonomy.user_count() << " users, "
              << data.folksonomy.annotation_count() << " triples, " << data.graph.edge_count()
              << " edges -> " << out.string() << "\n";
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"folksonomy analytics and social link prediction"};
    app.require_subcommand(1);

    StatsOptions stats;
    auto* stats_cmd = app.add_subcommand("stats", "activity distributions, summary, mixing curves");
    stats_cmd->add_option("--triples,-t", stats.triples, "triples TSV")->required();
    stats_cmd->add_option("--edges,-e", stats.edges, "edges TSV")->required();
    stats_cmd->add_option("--groups,-g", stats.groups, "groups TSV")->required();
    stats_cmd->add_option("--out,-o", stats.out, "output directory (or TAGNET_OUT_DIR)");
    stats_cmd->add_flag("--log-bin", stats.log_bin, "also emit log-binned curves");
    stats_cmd->add_option("--log-base", stats.log_base, "log binning base");
    stats_cmd->callback([&] { run_stats(stats); });

    AlignOptions align;
    auto* align_cmd = app.add_subcommand("align", "alignment vs social distance");
    align_cmd->add_option("--triples,-t", align.triples, "triples TSV")->required();
    align_cmd->add_option("--edges,-e", align.edges, "edges TSV")->required();
    align_cmd->add_option("--groups,-g", align.groups, "groups TSV")->required();
    align_cmd->add_option("--out,-o", align.out, "output directory (or TAGNET_OUT_DIR)");
    align_cmd->add_option("--sources", align.sources, "number of BFS sources");
    align_cmd->add_option("--dmax", align.dmax, "maximum distance");
    align_cmd->add_option("--seed", align.seed, "RNG seed");
    align_cmd->add_flag("--exhaustive-d2", align.exhaustive_d2, "exhaustive strata up to d=2");
    align_cmd->add_option("--bin-width", align.bin_width, "cosine histogram bin width");
    align_cmd->add_option("--hist", align.histograms,
                          "emit a histogram, distance:quantity (repeatable)");
    align_cmd->callback([&] { run_align(align); });

    ShuffleOptions shuffle;
    auto* shuffle_cmd = app.add_subcommand("shuffle", "reshuffling null models");
    shuffle_cmd->add_option("--triples,-t", shuffle.triples, "triples TSV");
    shuffle_cmd->add_option("--groups,-g", shuffle.groups, "groups TSV");
    shuffle_cmd->add_option("--out,-o", shuffle.out, "output directory (or TAGNET_OUT_DIR)");
    shuffle_cmd->add_option("--seed", shuffle.seed, "RNG seed");
    shuffle_cmd->callback([&] { run_shuffle(shuffle); });

    ScoreOptions score;
    auto* score_cmd = app.add_subcommand("score", "batch pair similarity");
    score_cmd->add_option("--triples,-t", score.triples, "triples TSV")->required();
    score_cmd->add_option("--pairs,-p", score.pairs, "pairs TSV (userA<TAB>userB)")->required();
    score_cmd->add_option("--spec,-s", score.spec, "measure, kernel:aggregation:projection")
        ->required();
    score_cmd->add_option("--out,-o", score.out, "output directory (or TAGNET_OUT_DIR)");
    score_cmd->callback([&] { run_score(score); });

    PredictOptions predict;
    auto* predict_cmd = app.add_subcommand("predict", "pair sampling, ROC/AUC, comparison");
    predict_cmd->add_option("--triples,-t", predict.triples, "triples TSV")->required();
    predict_cmd->add_option("--edges,-e", predict.edges, "edges TSV")->required();
    predict_cmd->add_option("--neighbors,-n", predict.neighbors,
                            "candidate lists with baseline affinity (userA<TAB>userB<TAB>affinity)");
    predict_cmd->add_option("--baseline,-b", predict.neighbors,
                            "alias for --neighbors (the affinity file is the baseline)");
    predict_cmd->add_option("--spec,-s", predict.specs, "measure spec (repeatable)");
    predict_cmd->add_flag("--all-specs", predict.all_specs, "evaluate all 24 measures");
    predict_cmd->add_option("--criterion,-c", predict.criterion,
                            "most-active | most-connected | random");
    predict_cmd->add_option("--sample-size,-M", predict.sample_size, "target pair count");
    predict_cmd->add_option("--seed", predict.seed, "RNG seed");
    predict_cmd->add_option("--out,-o", predict.out, "output directory (or TAGNET_OUT_DIR)");
    predict_cmd->callback([&] { run_predict(predict); });

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "synthetic folksonomy generator");
    synth_cmd->add_option("--users", synth.cfg.user_count, "number of users");
    synth_cmd->add_option("--tags", synth.cfg.tag_universe, "tag universe size");
    synth_cmd->add_option("--items", synth.cfg.item_universe, "item universe size");
    synth_cmd->add_option("--group-universe", synth.cfg.group_universe, "group universe size");
    synth_cmd->add_option("--communities", synth.cfg.community_count, "number of communities");
    synth_cmd->add_option("--exponent", synth.cfg.activity_exponent, "activity tail exponent");
    synth_cmd->add_option("--homophily", synth.cfg.homophily, "community mixture weight in [0,1]");
    synth_cmd->add_option("--assortativity", synth.cfg.assortativity,
                          "degree-rank edge locality in [0,1]");
    synth_cmd->add_option("--mean-degree", synth.cfg.mean_degree, "target mean degree");
    synth_cmd->add_option("--vocab-scale", synth.cfg.vocab_scale, "vocabulary size scale");
    synth_cmd->add_option("--seed", synth.cfg.seed, "RNG seed");
    synth_cmd->add_option("--out,-o", synth.out, "output directory (or TAGNET_OUT_DIR)");
    synth_cmd->callback([&] { run_synth(synth); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("tagnet");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace tagnet::cli
