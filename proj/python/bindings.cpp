#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyperwalk/report_io.hpp"
#include "hyperwalk/tasks.hpp"

namespace py = pybind11;
using namespace hyperwalk;

namespace {

Weighting weighting_from_name(const std::string& name) {
    if (name == "uniform") return Weighting::uniform;
    if (name == "sender-first" || name == "sender_first") return Weighting::sender_first;
    if (name == "party-aware" || name == "party_aware") return Weighting::party_aware;
    throw InvalidArgument("unknown weighting '" + name + "'");
}

SamplerKind sampler_from_name(const std::string& name) {
    if (name == "alpha") return SamplerKind::alpha;
    if (name == "k-replace" || name == "k_replace") return SamplerKind::k_replace;
    if (name == "degree-matched" || name == "degree_matched") return SamplerKind::degree_matched;
    throw InvalidArgument("unknown sampler '" + name + "'");
}

std::vector<Method> methods_from_names(const std::vector<std::string>& names) {
    std::vector<Method> methods;
    for (const auto& name : names) methods.push_back(method_from_name(name));
    return methods;
}

Hypergraph hypergraph_from_edges(const std::vector<std::vector<std::string>>& edges,
                                 const std::string& weighting,
                                 const std::vector<double>& omega,
                                 const std::vector<std::vector<double>>& gamma) {
    Hypergraph h;
    if (!gamma.empty() && gamma.size() != edges.size())
        throw InvalidArgument("gamma list must match the edge list");
    if (!omega.empty() && omega.size() != edges.size())
        throw InvalidArgument("omega list must match the edge list");
    const Weighting mode = weighting_from_name(weighting);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        std::vector<NodeId> members;
        for (const auto& name : edges[e]) members.push_back(h.add_node(name));
        std::vector<double> g;
        if (!gamma.empty()) {
            g = gamma[e];
        } else {
            g.assign(members.size(), 1.0);
            if (mode == Weighting::sender_first && !g.empty()) g[0] = 2.0;
        }
        const double w = omega.empty() ? static_cast<double>(members.size()) : omega[e];
        h.add_edge(std::move(members), std::move(g), w);
    }
    return h;
}

PipelineConfig pipeline_from_kwargs(int folds, double probe_fraction, const std::string& sampler,
                                    double alpha, int k, const std::vector<std::string>& methods,
                                    int max_steps, int n_walks, const std::string& bins,
                                    int n_auc_samples, std::uint64_t seed, int threads) {
    PipelineConfig config;
    config.folds = folds;
    config.probe_fraction = probe_fraction;
    config.sampler = sampler_from_name(sampler);
    config.alpha = alpha;
    config.k_substitute = k;
    config.methods = methods_from_names(methods);
    config.max_steps = max_steps;
    config.n_walks = n_walks;
    config.bins = parse_bins(bins);
    config.n_auc_samples = n_auc_samples;
    config.seed = seed;
    config.threads = threads;
    return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Random walks on hypergraphs with edge-dependent vertex weights";

    py::register_exception<ConvergenceError>(m, "ConvergenceError");
    py::register_exception<FitError>(m, "FitError");

    py::class_<Hypergraph>(m, "Hypergraph")
        .def(py::init(&hypergraph_from_edges), py::arg("edges"),
             py::arg("weighting") = "uniform", py::arg("omega") = std::vector<double>{},
             py::arg("gamma") = std::vector<std::vector<double>>{},
             "Build from a list of hyperedges (lists of node names). gamma and "
             "omega override the weighting preset when given.")
        .def_property_readonly("node_count", &Hypergraph::node_count)
        .def_property_readonly("edge_count", &Hypergraph::edge_count)
        .def_property_readonly("nodes", &Hypergraph::node_names)
        .def("edge", [](const Hypergraph& h, EdgeId e) {
            std::vector<std::string> names;
            for (NodeId v : h.members(e)) names.push_back(h.node_name(v));
            return names;
        })
        .def("edge_ids", [](const Hypergraph& h, EdgeId e) { return h.members(e); })
        .def("omega", [](const Hypergraph& h, EdgeId e) { return h.omega(e); })
        .def("gamma",
             [](const Hypergraph& h, EdgeId e, const std::string& node) {
                 const auto v = h.find_node(node);
                 if (!v) throw InvalidArgument("unknown node '" + node + "'");
                 return h.gamma(e, *v);
             })
        .def("node_degree",
             [](const Hypergraph& h, const std::string& node) {
                 const auto v = h.find_node(node);
                 if (!v) throw InvalidArgument("unknown node '" + node + "'");
                 return h.node_degree(*v);
             })
        .def("edge_degree", [](const Hypergraph& h, EdgeId e) { return h.edge_degree(e); })
        .def("is_connected", [](const Hypergraph& h) { return is_connected(h); })
        .def("restrict",
             [](const Hypergraph& h, const std::vector<EdgeId>& keep) {
                 return restrict_edges(h, keep);
             })
        .def("__repr__", [](const Hypergraph& h) {
            return "<Hypergraph nodes=" + std::to_string(h.node_count()) +
                   " edges=" + std::to_string(h.edge_count()) + ">";
        });

    m.def(
        "load_hyperedge_list",
        [](const std::string& path, const std::string& weighting,
           const std::unordered_map<std::string, std::string>& parties) {
            std::unordered_map<std::string, Party> party_map;
            for (const auto& [node, party] : parties)
                party_map[node] = party == "D"   ? Party::democrat
                                  : party == "R" ? Party::republican
                                                 : Party::unknown;
            return load_hyperedge_list(path, weighting_from_name(weighting),
                                       party_map.empty() ? nullptr : &party_map);
        },
        py::arg("path"), py::arg("weighting") = "sender-first",
        py::arg("parties") = std::unordered_map<std::string, std::string>{});

    m.def(
        "build_from_cables",
        [](const std::vector<std::tuple<std::string, std::string, std::vector<std::string>,
                                        std::string>>& records,
           const std::string& level,
           const std::unordered_map<std::string, std::string>& country_map) {
            std::vector<CableRecord> cables;
            for (const auto& [id, sender, receivers, timestamp] : records)
                cables.push_back({id, sender, receivers, timestamp});
            return build_edvw_from_cables(
                cables, level == "country" ? CableLevel::country : CableLevel::city,
                country_map);
        },
        py::arg("records"), py::arg("level") = "city",
        py::arg("country_map") = std::unordered_map<std::string, std::string>{},
        "records: (id, sender, receivers, timestamp) tuples");

    py::class_<TransitionMatrix>(m, "TransitionMatrix")
        .def_property_readonly("P", [](const TransitionMatrix& t) { return Matrix(t.P); })
        .def_readonly("ordering", &TransitionMatrix::ordering)
        .def("to_json", [](const TransitionMatrix& t) { return to_json_string(t); });

    py::class_<StepTransitions>(m, "StepTransitions")
        .def_property_readonly("steps",
                               [](const StepTransitions& t) {
                                   std::vector<Matrix> out(t.steps.begin(), t.steps.end());
                                   return out;
                               })
        .def_readonly("n_walks", &StepTransitions::n_walks)
        .def_readonly("max_len", &StepTransitions::max_len)
        .def_readonly("ordering", &StepTransitions::ordering);

    m.def("markov_transition",
          [](const Hypergraph& h) { return markov_transition(incidence_matrices(h)); });
    m.def("clique_transition", &clique_transition);
    m.def("hyperwalk_estimate", &hyperwalk_estimate, py::arg("hypergraph"), py::arg("n_walks"),
          py::arg("max_len"), py::arg("seed"), py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("stationary", &stationary, py::arg("transition"), py::arg("tol") = 1e-12,
          py::arg("max_iters") = 1000000);

    py::class_<BalanceThresholds>(m, "BalanceThresholds")
        .def(py::init([](double reversible, double moderate_severe) {
                 return BalanceThresholds{reversible, moderate_severe};
             }),
             py::arg("tol_reversible") = 1e-10, py::arg("tol_moderate_severe") = 1e-4)
        .def_readwrite("tol_reversible", &BalanceThresholds::tol_reversible)
        .def_readwrite("tol_moderate_severe", &BalanceThresholds::tol_moderate_severe);

    py::class_<BalanceReport>(m, "BalanceReport")
        .def_readonly("reversible", &BalanceReport::reversible)
        .def_readonly("max_violation", &BalanceReport::max_violation)
        .def_readonly("mean_max_violation", &BalanceReport::mean_max_violation)
        .def_readonly("total_violations", &BalanceReport::total_violations)
        .def_readonly("moderate_violations", &BalanceReport::moderate_violations)
        .def_readonly("severe_violations", &BalanceReport::severe_violations)
        .def("to_json", [](const BalanceReport& r) { return to_json_string(r); });

    m.def("balance_report", &balance_report, py::arg("transition"), py::arg("pi"),
          py::arg("thresholds") = BalanceThresholds{}, py::arg("stationary_tol") = 1e-8);

    py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
        .def_property_readonly("S", [](const SimilarityMatrix& s) { return Matrix(s.S); })
        .def_readonly("steps_used", &SimilarityMatrix::steps_used)
        .def_readonly("ordering", &SimilarityMatrix::ordering);

    m.def("similarity_avg",
          py::overload_cast<const TransitionMatrix&, int>(&similarity_avg));
    m.def("similarity_avg", py::overload_cast<const StepTransitions&, int>(&similarity_avg));
    m.def("similarity_steps",
          py::overload_cast<const TransitionMatrix&, int>(&similarity_steps));
    m.def("similarity_steps",
          py::overload_cast<const StepTransitions&, int>(&similarity_steps));

    m.def("gjs_divergence", &gjs_divergence, py::arg("rows"),
          py::arg("weights") = std::vector<double>{});
    m.def("hyperedge_score",
          [](const SimilarityMatrix& s, const std::vector<NodeId>& members) {
              return hyperedge_score(s, members);
          });
    m.def("hyperedge_score_named",
          [](const SimilarityMatrix& s, const Hypergraph& h,
             const std::vector<std::string>& members) {
              std::vector<NodeId> ids;
              for (const auto& name : members) {
                  const auto v = h.find_node(name);
                  if (!v) throw InvalidArgument("unknown node '" + name + "'");
                  ids.push_back(*v);
              }
              return hyperedge_score(s, ids);
          });

    py::class_<FoldSplit>(m, "FoldSplit")
        .def_readonly("train", &FoldSplit::train)
        .def_readonly("probe", &FoldSplit::probe)
        .def_readonly("fold_index", &FoldSplit::fold_index)
        .def_readonly("seed", &FoldSplit::seed)
        .def_readonly("actual_fraction", &FoldSplit::actual_fraction);

    m.def("split_train_probe", &split_train_probe, py::arg("hypergraph"),
          py::arg("probe_fraction"), py::arg("seed"), py::arg("fold_index") = 0);

    py::class_<FakeEdge>(m, "FakeEdge")
        .def_readonly("members", &FakeEdge::members)
        .def_readonly("source_probe", &FakeEdge::source_probe)
        .def_readonly("replaced", &FakeEdge::replaced);

    py::class_<NegativeSet>(m, "NegativeSet")
        .def_readonly("fakes", &NegativeSet::fakes)
        .def_readonly("warnings", &NegativeSet::warnings);

    m.def("sample_alpha", &sample_alpha, py::arg("hypergraph"), py::arg("probes"),
          py::arg("alpha"), py::arg("seed"));
    m.def("sample_k_replace", &sample_k_replace, py::arg("hypergraph"), py::arg("probes"),
          py::arg("k"), py::arg("seed"));
    m.def("sample_degree_matched", &sample_degree_matched, py::arg("hypergraph"),
          py::arg("probes"), py::arg("k"), py::arg("seed"));

    m.def("auc", &auc, py::arg("true_scores"), py::arg("fake_scores"));

    py::class_<DetectionReport>(m, "DetectionReport")
        .def_readonly("folds", &DetectionReport::folds)
        .def("mean_auc",
             [](const DetectionReport& r, const std::string& method,
                const std::string& bin) -> py::object {
                 for (std::size_t m = 0; m < r.methods.size(); ++m)
                     for (std::size_t b = 0; b < r.bins.size(); ++b)
                         if (method_name(r.methods[m]) == method && bin_label(r.bins[b]) == bin)
                             if (auto agg = r.aggregate(m, b))
                                 return py::make_tuple(agg->mean, agg->stddev);
                 return py::make_tuple(py::none(), py::none());
             })
        .def("to_json", [](const DetectionReport& r) { return to_json_string(r); })
        .def("to_csv", [](const DetectionReport& r) { return detection_csv(r); });

    py::class_<PredictionReport>(m, "PredictionReport")
        .def_readonly("folds", &PredictionReport::folds)
        .def_readonly("method_names", &PredictionReport::method_names)
        .def("ratio",
             [](const PredictionReport& r, const std::string& method, const std::string& bin,
                const std::string& category) -> py::object {
                 PredictionReport::Category cat = category == "seen"
                                                      ? PredictionReport::Category::seen
                                                  : category == "novel"
                                                      ? PredictionReport::Category::novel
                                                      : PredictionReport::Category::overall;
                 for (std::size_t m = 0; m < r.method_names.size(); ++m)
                     for (std::size_t b = 0; b < r.bins.size(); ++b)
                         if (r.method_names[m] == method && bin_label(r.bins[b]) == bin)
                             if (auto agg = r.ratio(m, b, cat))
                                 return py::make_tuple(agg->mean, agg->stddev);
                 return py::make_tuple(py::none(), py::none());
             },
             py::arg("method"), py::arg("bin"), py::arg("category") = "overall")
        .def("to_json", [](const PredictionReport& r) { return to_json_string(r); })
        .def("to_csv", [](const PredictionReport& r) { return prediction_csv(r); });

    m.def(
        "run_detection",
        [](const Hypergraph& h, int folds, double probe_fraction, const std::string& sampler,
           double alpha, int k, const std::vector<std::string>& methods, int max_steps,
           int n_walks, const std::string& bins, int n_auc_samples, std::uint64_t seed,
           int threads) {
            return run_detection(
                h, pipeline_from_kwargs(folds, probe_fraction, sampler, alpha, k, methods,
                                        max_steps, n_walks, bins, n_auc_samples, seed, threads));
        },
        py::arg("hypergraph"), py::arg("folds") = 10, py::arg("probe_fraction") = 0.1,
        py::arg("sampler") = "alpha", py::arg("alpha") = 0.5, py::arg("k") = 2,
        py::arg("methods") = std::vector<std::string>{"markov", "clique", "hyperwalk"},
        py::arg("max_steps") = 10, py::arg("n_walks") = 10000, py::arg("bins") = "2-",
        py::arg("n_auc_samples") = 1000, py::arg("seed") = 0, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "gap_over_steps",
        [](const Hypergraph& h, int folds, double probe_fraction, const std::string& sampler,
           double alpha, int k, const std::vector<std::string>& methods, int max_steps,
           int n_walks, std::uint64_t seed, int threads) {
            GapCurves curves;
            {
                // release only around the computation; the dict below needs
                // the GIL back
                py::gil_scoped_release release;
                curves = gap_over_steps(
                    h, pipeline_from_kwargs(folds, probe_fraction, sampler, alpha, k, methods,
                                            max_steps, n_walks, "2-", 1000, seed, threads));
            }
            py::dict out;
            for (std::size_t m = 0; m < curves.methods.size(); ++m)
                out[py::str(method_name(curves.methods[m]))] = curves.gap[m];
            return out;
        },
        py::arg("hypergraph"), py::arg("folds") = 10, py::arg("probe_fraction") = 0.1,
        py::arg("sampler") = "alpha", py::arg("alpha") = 0.5, py::arg("k") = 2,
        py::arg("methods") = std::vector<std::string>{"markov", "clique", "hyperwalk"},
        py::arg("max_steps") = 10, py::arg("n_walks") = 10000, py::arg("seed") = 0,
        py::arg("threads") = 0);

    py::class_<ExpFit>(m, "ExpFit")
        .def_readonly("a", &ExpFit::a)
        .def_readonly("b", &ExpFit::b)
        .def_readonly("c", &ExpFit::c)
        .def_readonly("residual", &ExpFit::residual)
        .def_readonly("stderr_a", &ExpFit::stderr_a)
        .def_readonly("stderr_b", &ExpFit::stderr_b)
        .def_readonly("stderr_c", &ExpFit::stderr_c);

    m.def("fit_exponential", &fit_exponential, py::arg("y"),
          py::arg("x") = std::vector<double>{});

    py::class_<IntruderLine>(m, "IntruderLine")
        .def_readonly("slope", &IntruderLine::slope)
        .def_readonly("intercept", &IntruderLine::intercept)
        .def_readonly("r_squared", &IntruderLine::r_squared);

    m.def("intruder_line",
          [](const std::vector<std::pair<double, ExpFit>>& fits) { return intruder_line(fits); });
    m.def("predict_intruders", &predict_intruders, py::arg("line"), py::arg("a_query"));

    m.def(
        "guess_with_refinement",
        [](const std::vector<NodeId>& preserved, int missing,
           const std::vector<SimilarityMatrix>& steps, const std::vector<NodeId>& pool,
           int n_passes, bool early_stop, int patience) {
            GuessConfig config;
            config.n_passes = n_passes;
            config.early_stop = early_stop;
            config.patience = patience;
            return guess_with_refinement(preserved, missing, steps, pool, config);
        },
        py::arg("preserved"), py::arg("missing"), py::arg("steps"), py::arg("pool"),
        py::arg("n_passes") = 4, py::arg("early_stop") = true, py::arg("patience") = 2);

    m.def(
        "run_prediction",
        [](const Hypergraph& h, int folds, double probe_fraction, double alpha,
           const std::vector<std::string>& methods, int max_steps, int n_walks,
           const std::string& bins, std::uint64_t seed, int threads, int trials, int n_passes,
           bool early_stop, int patience) {
            PredictionConfig config;
            config.pipeline =
                pipeline_from_kwargs(folds, probe_fraction, "alpha", alpha, 2, methods,
                                     max_steps, n_walks, bins, 1000, seed, threads);
            config.guess.trials = trials;
            config.guess.n_passes = n_passes;
            config.guess.early_stop = early_stop;
            config.guess.patience = patience;
            return run_prediction(h, config);
        },
        py::arg("hypergraph"), py::arg("folds") = 10, py::arg("probe_fraction") = 0.1,
        py::arg("alpha") = 0.5,
        py::arg("methods") = std::vector<std::string>{"markov", "clique", "hyperwalk"},
        py::arg("max_steps") = 10, py::arg("n_walks") = 10000, py::arg("bins") = "2-",
        py::arg("seed") = 0, py::arg("threads") = 0, py::arg("trials") = 1,
        py::arg("n_passes") = 4, py::arg("early_stop") = true, py::arg("patience") = 2,
        py::call_guard<py::gil_scoped_release>());
}
