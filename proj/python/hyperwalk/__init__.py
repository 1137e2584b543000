"""Random walks on hypergraphs with edge-dependent vertex weights.

Thin wrapper over the C++ extension. The main entry points:

- ``Hypergraph``: build from edge lists, ``load_hyperedge_list``,
  ``build_from_cables``
- transitions: ``markov_transition``, ``clique_transition``,
  ``hyperwalk_estimate``
- diagnostics: ``stationary``, ``balance_report``
- scoring: ``similarity_avg``, ``similarity_steps``, ``gjs_divergence``,
  ``hyperedge_score``
- benchmarks: ``run_detection``, ``run_prediction``, ``gap_over_steps``,
  ``fit_exponential``, ``intruder_line``
"""

from ._core import (  # noqa: F401
    BalanceReport,
    BalanceThresholds,
    ConvergenceError,
    DetectionReport,
    ExpFit,
    FakeEdge,
    FitError,
    FoldSplit,
    Hypergraph,
    IntruderLine,
    NegativeSet,
    PredictionReport,
    SimilarityMatrix,
    StepTransitions,
    TransitionMatrix,
    auc,
    balance_report,
    build_from_cables,
    clique_transition,
    fit_exponential,
    gap_over_steps,
    gjs_divergence,
    guess_with_refinement,
    hyperedge_score,
    hyperedge_score_named,
    hyperwalk_estimate,
    intruder_line,
    load_hyperedge_list,
    markov_transition,
    predict_intruders,
    run_detection,
    run_prediction,
    sample_alpha,
    sample_degree_matched,
    sample_k_replace,
    similarity_avg,
    similarity_steps,
    split_train_probe,
    stationary,
)

__version__ = "0.1.0"
