#ifndef HYPERWALK_SAMPLING_HPP
#define HYPERWALK_SAMPLING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hyperwalk/hypergraph.hpp"

namespace hyperwalk {

/// Disjoint training/probe edge split.
///
/// Probes are drawn in seeded random order; a candidate is accepted only if
/// the training hypergraph that remains still spans every node and is
/// connected, and the candidate is not a strict subset of any remaining
/// training edge. Sampling stops at the target fraction or when no
/// acceptable candidate is left.
struct FoldSplit {
    std::vector<EdgeId> train;
    std::vector<EdgeId> probe;
    int fold_index = 0;
    std::uint64_t seed = 0;
    double requested_fraction = 0.0;
    double actual_fraction = 0.0;
};

FoldSplit split_train_probe(const Hypergraph& h, double probe_fraction, std::uint64_t seed,
                            int fold_index = 0);

enum class SamplerKind { alpha, k_replace, degree_matched };

/// A fake hyperedge derived from a probe by node substitution.
struct FakeEdge {
    std::vector<NodeId> members;  // sorted
    EdgeId source_probe;
    int replaced;
};

struct NegativeSet {
    std::vector<FakeEdge> fakes;
    SamplerKind strategy = SamplerKind::alpha;
    double alpha = 0.0;
    int k = 0;
    std::vector<std::string> warnings;
};

/// Number of members substituted for a probe of the given size under the
/// alpha strategy: floor((1-alpha)*|e|) clamped to [1, |e|-1].
int alpha_replacement_count(std::size_t edge_size, double alpha);

/// Replaces floor((1-alpha)*|e|) members (clamped to [1, |e|-1]) of each
/// probe with uniform-random distinct outside nodes; resamples until the
/// fake is absent from H's edge set, skipping the probe (with a warning)
/// after the retry budget.
NegativeSet sample_alpha(const Hypergraph& h, const std::vector<EdgeId>& probes, double alpha,
                         std::uint64_t seed);

/// Replaces min(k, |e|-1) members uniformly.
NegativeSet sample_k_replace(const Hypergraph& h, const std::vector<EdgeId>& probes, int k,
                             std::uint64_t seed);

/// Replaces min(k, |e|-1) members; each replacement is drawn from the
/// outside nodes whose unweighted degree |E(v)| is nearest the replaced
/// node's degree (binary search over the degree-sorted node array, seeded
/// uniform choice among equal-distance candidates).
NegativeSet sample_degree_matched(const Hypergraph& h, const std::vector<EdgeId>& probes, int k,
                                  std::uint64_t seed);

}  // namespace hyperwalk

#endif
