#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tagnet/alignment.hpp"
#include "tagnet/core_model.hpp"
#include "tagnet/errors.hpp"
#include "tagnet/link_prediction.hpp"
#include "tagnet/net_metrics.hpp"
#include "tagnet/null_model.hpp"
#include "tagnet/similarity.hpp"
#include "tagnet/synth_gen.hpp"

namespace py = pybind11;
using namespace tagnet;

namespace {

Folksonomy folksonomy_from_python(const std::vector<std::tuple<std::string, std::string, std::string>>& triples) {
    std::vector<Annotation> annotations;
    annotations.reserve(triples.size());
    for (const auto& [u, i, t] : triples) annotations.push_back({u, i, t});
    return Folksonomy::from_annotations(annotations);
}

ActivityMetric metric_from_string(const std::string& name) {
    const std::string n = normalize_id(name);
    if (n == "k" || n == "degree") return ActivityMetric::degree;
    if (n == "n_t" || n == "tags") return ActivityMetric::distinct_tags;
    if (n == "n_g" || n == "groups") return ActivityMetric::groups;
    if (n == "a" || n == "assignments") return ActivityMetric::assignments;
    throw DomainError("unknown metric '" + name + "'");
}

AlignmentQuantity quantity_from_string(const std::string& name) {
    const std::string n = normalize_id(name);
    if (n == "shared_tags") return AlignmentQuantity::shared_tags;
    if (n == "sigma_tags") return AlignmentQuantity::sigma_tags;
    if (n == "shared_groups") return AlignmentQuantity::shared_groups;
    if (n == "sigma_groups") return AlignmentQuantity::sigma_groups;
    throw DomainError("unknown quantity '" + name + "'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "folksonomy analytics and social link prediction";
    m.attr("__version__") = TAGNET_VERSION;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    py::class_<Folksonomy>(m, "Folksonomy")
        .def_static("load", [](const std::string& path) { return Folksonomy::load(path); },
                    py::arg("path"))
        .def_static("from_triples", &folksonomy_from_python, py::arg("triples"))
        .def_property_readonly("user_count", &Folksonomy::user_count)
        .def_property_readonly("item_count", &Folksonomy::item_count)
        .def_property_readonly("tag_count", &Folksonomy::tag_count)
        .def_property_readonly("annotation_count", &Folksonomy::annotation_count)
        .def("tag_freq",
             [](const Folksonomy& f, const std::string& user) {
                 const auto u = f.find_user(user);
                 if (!u) throw NotFoundError("unknown user: " + user);
                 std::map<std::string, std::uint32_t> out;
                 for (const auto& [tag, n] : f.tag_freq(*u)) out[f.tag_name(tag)] = n;
                 return out;
             },
             py::arg("user"))
        .def("__repr__", [](const Folksonomy& f) {
            return "<Folksonomy users=" + std::to_string(f.user_count()) +
                   " annotations=" + std::to_string(f.annotation_count()) + ">";
        });

    py::class_<SocialGraph>(m, "SocialGraph")
        .def_static("load", [](const std::string& path) { return SocialGraph::load(path); },
                    py::arg("path"))
        .def_static("from_edges",
                    [](const std::vector<std::pair<std::string, std::string>>& edges) {
                        return SocialGraph::from_edges(edges);
                    },
                    py::arg("edges"))
        .def_property_readonly("user_count", &SocialGraph::user_count)
        .def_property_readonly("edge_count", &SocialGraph::edge_count)
        .def("degree",
             [](const SocialGraph& g, const std::string& user) {
                 const auto u = g.find_user(user);
                 if (!u) throw NotFoundError("unknown user: " + user);
                 return g.degree(*u);
             },
             py::arg("user"))
        .def("neighbors",
             [](const SocialGraph& g, const std::string& user) {
                 const auto u = g.find_user(user);
                 if (!u) throw NotFoundError("unknown user: " + user);
                 std::vector<std::string> out;
                 for (UserId v : g.neighbors(*u)) out.push_back(g.user_name(v));
                 return out;
             },
             py::arg("user"))
        .def("__repr__", [](const SocialGraph& g) {
            return "<SocialGraph users=" + std::to_string(g.user_count()) +
                   " edges=" + std::to_string(g.edge_count()) + ">";
        });

    py::class_<GroupMembership>(m, "GroupMembership")
        .def_static("load", [](const std::string& path) { return GroupMembership::load(path); },
                    py::arg("path"))
        .def_static("from_pairs",
                    [](const std::vector<std::pair<std::string, std::string>>& pairs) {
                        return GroupMembership::from_pairs(pairs);
                    },
                    py::arg("pairs"))
        .def_property_readonly("user_count", &GroupMembership::user_count)
        .def_property_readonly("group_count", &GroupMembership::group_count)
        .def("groups_of", [](const GroupMembership& m_, const std::string& user) {
            const auto u = m_.find_user(user);
            if (!u) throw NotFoundError("unknown user: " + user);
            std::vector<std::string> out;
            for (GroupId g : m_.groups_of(*u)) out.push_back(m_.group_name(g));
            return out;
        });

    py::class_<ActivityProfile>(m, "ActivityProfile")
        .def_readonly("user", &ActivityProfile::user)
        .def_readonly("degree", &ActivityProfile::degree)
        .def_readonly("distinct_tags", &ActivityProfile::distinct_tags)
        .def_readonly("groups", &ActivityProfile::groups)
        .def_readonly("assignments", &ActivityProfile::assignments)
        .def("__repr__", [](const ActivityProfile& p) {
            return "<ActivityProfile " + p.user + " k=" + std::to_string(p.degree) +
                   " n_t=" + std::to_string(p.distinct_tags) + " n_g=" + std::to_string(p.groups) +
                   " a=" + std::to_string(p.assignments) + ">";
        });

    m.def("activity_profile", &activity_profile, py::arg("folksonomy"), py::arg("graph"),
          py::arg("groups"), py::arg("user"));

    py::class_<Distribution>(m, "Distribution")
        .def_readonly("support", &Distribution::support)
        .def_readonly("mass", &Distribution::mass)
        .def_readonly("counts", &Distribution::counts)
        .def_readonly("sample_count", &Distribution::sample_count);

    m.def("distribution",
          [](const std::vector<std::uint64_t>& values) { return distribution(values); },
          py::arg("values"));

    m.def("pearson",
          [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
          py::arg("x"), py::arg("y"));

    py::class_<MixingCurve>(m, "MixingCurve")
        .def_readonly("x", &MixingCurve::x)
        .def_readonly("y", &MixingCurve::y)
        .def_readonly("bin_count", &MixingCurve::bin_count);

    m.def("nn_mixing_curve",
          [](const Folksonomy& f, const SocialGraph& g, const GroupMembership& gm,
             const std::string& metric) {
              return nn_mixing_curve(f, g, gm, metric_from_string(metric));
          },
          py::arg("folksonomy"), py::arg("graph"), py::arg("groups"), py::arg("metric"));

    py::class_<PairAlignment>(m, "PairAlignment")
        .def_readonly("user_a", &PairAlignment::user_a)
        .def_readonly("user_b", &PairAlignment::user_b)
        .def_readonly("shared_tags", &PairAlignment::shared_tags)
        .def_readonly("shared_groups", &PairAlignment::shared_groups)
        .def_readonly("sigma_tags", &PairAlignment::sigma_tags)
        .def_readonly("sigma_groups", &PairAlignment::sigma_groups);

    m.def("pair_alignment", &pair_alignment, py::arg("folksonomy"), py::arg("groups"),
          py::arg("user_a"), py::arg("user_b"));

    m.def("bfs_distances", &bfs_distances, py::arg("graph"), py::arg("source"), py::arg("d_max"));

    py::class_<AlignmentConfig>(m, "AlignmentConfig")
        .def(py::init<>())
        .def_readwrite("sources", &AlignmentConfig::sources)
        .def_readwrite("d_max", &AlignmentConfig::d_max)
        .def_readwrite("seed", &AlignmentConfig::seed)
        .def_readwrite("exhaustive_d2", &AlignmentConfig::exhaustive_d2)
        .def_readwrite("hist_bin_width", &AlignmentConfig::hist_bin_width);

    py::class_<DistanceProfile>(m, "DistanceProfile")
        .def_readonly("distance", &DistanceProfile::distance)
        .def_readonly("mean_shared_tags", &DistanceProfile::mean_shared_tags)
        .def_readonly("mean_shared_groups", &DistanceProfile::mean_shared_groups)
        .def_readonly("mean_sigma_tags", &DistanceProfile::mean_sigma_tags)
        .def_readonly("mean_sigma_groups", &DistanceProfile::mean_sigma_groups)
        .def_readonly("pair_count", &DistanceProfile::pair_count);

    m.def("alignment_profile", &alignment_profile, py::arg("folksonomy"), py::arg("graph"),
          py::arg("groups"), py::arg("config"));

    m.def("alignment_histogram",
          [](const Folksonomy& f, const SocialGraph& g, const GroupMembership& gm, int d,
             const std::string& quantity, const AlignmentConfig& cfg) {
              return alignment_histogram(f, g, gm, d, quantity_from_string(quantity), cfg);
          },
          py::arg("folksonomy"), py::arg("graph"), py::arg("groups"), py::arg("d"),
          py::arg("quantity"), py::arg("config"));

    py::class_<ShuffleReport>(m, "ShuffleReport")
        .def_readonly("seed", &ShuffleReport::seed)
        .def_readonly("users_shuffled", &ShuffleReport::users_shuffled)
        .def_readonly("vocab_sizes_preserved", &ShuffleReport::vocab_sizes_preserved)
        .def_readonly("freq_multisets_preserved", &ShuffleReport::freq_multisets_preserved)
        .def_readonly("group_counts_preserved", &ShuffleReport::group_counts_preserved)
        .def("ok", &ShuffleReport::ok);

    m.def("shuffle_tags", &shuffle_tags, py::arg("folksonomy"), py::arg("seed"));
    m.def("shuffle_groups", &shuffle_groups, py::arg("groups"), py::arg("seed"));

    py::class_<TagProbabilityTable>(m, "TagProbabilityTable");
    m.def("tag_probabilities", &tag_probabilities, py::arg("folksonomy"));

    m.def("similarity",
          [](const std::string& spec, const Folksonomy& f, const TagProbabilityTable& probs,
             const std::string& a, const std::string& b) {
              return similarity(MeasureSpec::parse(spec), f, probs, a, b);
          },
          py::arg("spec"), py::arg("folksonomy"), py::arg("probs"), py::arg("user_a"),
          py::arg("user_b"));

    m.def("batch_similarity",
          [](const std::string& spec, const Folksonomy& f, const TagProbabilityTable& probs,
             const std::vector<std::pair<std::string, std::string>>& pairs) {
              return batch_similarity(MeasureSpec::parse(spec), f, probs, pairs);
          },
          py::arg("spec"), py::arg("folksonomy"), py::arg("probs"), py::arg("pairs"));

    m.def("all_measure_specs", [] {
        std::vector<std::string> out;
        for (const auto& s : MeasureSpec::all()) out.push_back(s.str());
        return out;
    });

    py::class_<SimilarityIndex>(m, "SimilarityIndex")
        .def(py::init([](Folksonomy& f, const std::string& spec) {
                 return new SimilarityIndex(f, MeasureSpec::parse(spec));
             }),
             py::arg("folksonomy"), py::arg("spec"), py::keep_alive<1, 2>())
        .def("apply_delta",
             [](SimilarityIndex& index, const std::string& op, const std::string& user,
                const std::string& item, const std::string& tag) {
                 AnnotationDelta delta;
                 delta.op = normalize_id(op) == "add" ? AnnotationDelta::Op::add
                                                      : AnnotationDelta::Op::remove;
                 delta.annotation = {user, item, tag};
                 index.apply_delta(delta);
             },
             py::arg("op"), py::arg("user"), py::arg("item"), py::arg("tag"))
        .def("score", &SimilarityIndex::score, py::arg("user_a"), py::arg("user_b"));

    py::class_<RocResult>(m, "RocResult")
        .def_readonly("points", &RocResult::points)
        .def_readonly("auc", &RocResult::auc);

    m.def("roc",
          [](const std::vector<std::tuple<double, bool>>& scored) {
              std::vector<ScoredPair> pairs;
              int i = 0;
              for (const auto& [score, label] : scored) {
                  ScoredPair sp;
                  sp.user_a = "a" + std::to_string(i);
                  sp.user_b = "b" + std::to_string(i++);
                  sp.score = score;
                  sp.label = label;
                  pairs.push_back(sp);
              }
              return roc(pairs);
          },
          py::arg("scored"), "ROC from a list of (score, label) pairs");

    m.def("relative_improvement", &relative_improvement, py::arg("auc_measure"),
          py::arg("auc_baseline"));

    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("user_count", &SynthConfig::user_count)
        .def_readwrite("tag_universe", &SynthConfig::tag_universe)
        .def_readwrite("item_universe", &SynthConfig::item_universe)
        .def_readwrite("group_universe", &SynthConfig::group_universe)
        .def_readwrite("community_count", &SynthConfig::community_count)
        .def_readwrite("activity_exponent", &SynthConfig::activity_exponent)
        .def_readwrite("homophily", &SynthConfig::homophily)
        .def_readwrite("assortativity", &SynthConfig::assortativity)
        .def_readwrite("seed", &SynthConfig::seed)
        .def_readwrite("vocab_scale", &SynthConfig::vocab_scale)
        .def_readwrite("mean_degree", &SynthConfig::mean_degree);

    py::class_<SynthData>(m, "SynthData")
        .def_readonly("folksonomy", &SynthData::folksonomy)
        .def_readonly("graph", &SynthData::graph)
        .def_readonly("groups", &SynthData::groups)
        .def_readonly("communities", &SynthData::communities)
        .def_readonly("clamped", &SynthData::clamped);

    m.def("generate", &generate, py::arg("config"));
}
