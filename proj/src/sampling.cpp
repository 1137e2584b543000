#include "hyperwalk/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "hyperwalk/rng.hpp"

namespace hyperwalk {

namespace {

constexpr int kRetryBudget = 100;

// Connectivity over the full node set with an edge subset active. A node
// losing its last incident edge counts as a disconnection.
bool train_set_connected(const Hypergraph& h, const std::vector<bool>& active,
                         const std::vector<int>& active_deg) {
    for (NodeId v = 0; static_cast<std::size_t>(v) < h.node_count(); ++v)
        if (active_deg[v] == 0) return false;
    std::vector<bool> node_seen(h.node_count(), false);
    std::vector<bool> edge_seen(h.edge_count(), false);
    std::vector<NodeId> stack{0};
    node_seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (EdgeId e : h.incident_edges(v)) {
            if (!active[e] || edge_seen[e]) continue;
            edge_seen[e] = true;
            for (NodeId w : h.members(e)) {
                if (!node_seen[w]) {
                    node_seen[w] = true;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
    }
    return reached == h.node_count();
}

// Strict subset of any *other* active edge.
bool is_strict_subset_of_active(const Hypergraph& h, EdgeId candidate,
                                const std::vector<bool>& active) {
    const auto& cand = h.sorted_members(candidate);
    for (EdgeId other : h.incident_edges(cand[0])) {
        if (other == candidate || !active[other]) continue;
        const auto& sup = h.sorted_members(other);
        if (sup.size() <= cand.size()) continue;
        if (std::includes(sup.begin(), sup.end(), cand.begin(), cand.end())) return true;
    }
    return false;
}

}  // namespace

FoldSplit split_train_probe(const Hypergraph& h, double probe_fraction, std::uint64_t seed,
                            int fold_index) {
    if (!(probe_fraction >= 0.0 && probe_fraction < 1.0))
        throw InvalidArgument("split_train_probe: probe_fraction must be in [0, 1)");
    if (!is_connected(h))
        throw InvalidArgument("split_train_probe: hypergraph is disconnected");

    FoldSplit split;
    split.fold_index = fold_index;
    split.seed = seed;
    split.requested_fraction = probe_fraction;

    const std::size_t n_edges = h.edge_count();
    const auto target = static_cast<std::size_t>(std::floor(probe_fraction * n_edges));

    std::vector<EdgeId> order(n_edges);
    for (std::size_t e = 0; e < n_edges; ++e) order[e] = static_cast<EdgeId>(e);
    RngStream rng(seed, {0x5171u});
    rng.shuffle(order);

    std::vector<bool> active(n_edges, true);
    std::vector<int> active_deg(h.node_count());
    for (NodeId v = 0; static_cast<std::size_t>(v) < h.node_count(); ++v)
        active_deg[v] = static_cast<int>(h.incident_count(v));

    for (EdgeId candidate : order) {
        if (split.probe.size() >= target) break;
        bool orphan = false;
        for (NodeId v : h.members(candidate))
            if (active_deg[v] == 1) orphan = true;
        if (orphan) continue;
        if (is_strict_subset_of_active(h, candidate, active)) continue;
        active[candidate] = false;
        for (NodeId v : h.members(candidate)) --active_deg[v];
        if (!train_set_connected(h, active, active_deg)) {
            active[candidate] = true;
            for (NodeId v : h.members(candidate)) ++active_deg[v];
            continue;
        }
        split.probe.push_back(candidate);
    }
    for (std::size_t e = 0; e < n_edges; ++e)
        if (active[e]) split.train.push_back(static_cast<EdgeId>(e));
    std::sort(split.probe.begin(), split.probe.end());
    split.actual_fraction =
        n_edges == 0 ? 0.0 : static_cast<double>(split.probe.size()) / static_cast<double>(n_edges);
    return split;
}

int alpha_replacement_count(std::size_t edge_size, double alpha) {
    const auto m = static_cast<long>(std::floor((1.0 - alpha) * static_cast<double>(edge_size)));
    const long hi = static_cast<long>(edge_size) - 1;
    return static_cast<int>(std::clamp(m, 1L, hi));
}

namespace {

// Shared substitution loop. `pick_replacement` returns the substitute for
// the member at `position`, honoring the in-progress member set.
template <typename PickFn>
NegativeSet substitute_nodes(const Hypergraph& h, const std::vector<EdgeId>& probes,
                             SamplerKind strategy,
                             const std::function<int(std::size_t)>& replacement_count,
                             PickFn pick_replacement, std::uint64_t seed) {
    NegativeSet out;
    out.strategy = strategy;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const EdgeId probe = probes[p];
        const auto& members = h.members(probe);
        const int m = replacement_count(members.size());
        RngStream rng(seed, {0xFA4Eu, static_cast<std::uint64_t>(p)});
        bool placed = false;
        for (int attempt = 0; attempt < kRetryBudget && !placed; ++attempt) {
            auto positions = rng.sample_without_replacement(members.size(), m);
            std::vector<bool> replaced_pos(members.size(), false);
            for (std::size_t pos : positions) replaced_pos[pos] = true;
            std::vector<NodeId> fake;
            std::vector<bool> in_fake(h.node_count(), false);
            for (NodeId v : members) in_fake[v] = true;  // block all originals while picking
            bool ok = true;
            for (std::size_t i = 0; i < members.size() && ok; ++i)
                if (!replaced_pos[i]) fake.push_back(members[i]);
            for (std::size_t i = 0; i < members.size() && ok; ++i) {
                if (!replaced_pos[i]) continue;
                NodeId sub = pick_replacement(members[i], in_fake, rng, ok);
                if (!ok) break;
                in_fake[sub] = true;
                fake.push_back(sub);
            }
            if (!ok) break;  // pool exhausted; retrying cannot help
            std::sort(fake.begin(), fake.end());
            if (h.has_edge_set(fake)) continue;
            out.fakes.push_back({std::move(fake), probe, m});
            placed = true;
        }
        if (!placed)
            out.warnings.push_back("probe edge " + std::to_string(probe) +
                                   ": could not build a fake outside E, skipped");
    }
    return out;
}

NodeId pick_uniform_outside(const Hypergraph& h, const std::vector<bool>& blocked, RngStream& rng,
                            bool& ok) {
    std::size_t free_count = 0;
    for (NodeId v = 0; static_cast<std::size_t>(v) < h.node_count(); ++v)
        if (!blocked[v]) ++free_count;
    if (free_count == 0) {
        ok = false;
        return -1;
    }
    // rejection sampling keeps the draw uniform over the free nodes
    for (;;) {
        NodeId v = static_cast<NodeId>(rng.uniform_index(h.node_count()));
        if (!blocked[v]) return v;
    }
}

}  // namespace

NegativeSet sample_alpha(const Hypergraph& h, const std::vector<EdgeId>& probes, double alpha,
                         std::uint64_t seed) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw InvalidArgument("sample_alpha: alpha must be in [0, 1)");
    auto set = substitute_nodes(
        h, probes, SamplerKind::alpha,
        [alpha](std::size_t size) { return alpha_replacement_count(size, alpha); },
        [&h](NodeId, const std::vector<bool>& blocked, RngStream& rng, bool& ok) {
            return pick_uniform_outside(h, blocked, rng, ok);
        },
        seed);
    set.alpha = alpha;
    return set;
}

NegativeSet sample_k_replace(const Hypergraph& h, const std::vector<EdgeId>& probes, int k,
                             std::uint64_t seed) {
    if (k < 1) throw InvalidArgument("sample_k_replace: k must be >= 1");
    auto set = substitute_nodes(
        h, probes, SamplerKind::k_replace,
        [k](std::size_t size) { return std::min<int>(k, static_cast<int>(size) - 1); },
        [&h](NodeId, const std::vector<bool>& blocked, RngStream& rng, bool& ok) {
            return pick_uniform_outside(h, blocked, rng, ok);
        },
        seed);
    set.k = k;
    return set;
}

NegativeSet sample_degree_matched(const Hypergraph& h, const std::vector<EdgeId>& probes, int k,
                                  std::uint64_t seed) {
    if (k < 1) throw InvalidArgument("sample_degree_matched: k must be >= 1");

    // (degree, node) sorted ascending; ties resolved by node id so the
    // array, and with it every seeded run, is deterministic.
    std::vector<std::pair<std::size_t, NodeId>> by_degree(h.node_count());
    for (NodeId v = 0; static_cast<std::size_t>(v) < h.node_count(); ++v)
        by_degree[v] = {h.incident_count(v), v};
    std::sort(by_degree.begin(), by_degree.end());

    auto pick = [&h, &by_degree](NodeId replaced, const std::vector<bool>& blocked, RngStream& rng,
                                 bool& ok) -> NodeId {
        const auto target = static_cast<long>(h.incident_count(replaced));
        const long n = static_cast<long>(by_degree.size());
        auto it = std::lower_bound(by_degree.begin(), by_degree.end(),
                                   std::make_pair(static_cast<std::size_t>(target), NodeId{0}));
        long right = it - by_degree.begin();
        long left = right - 1;
        std::vector<NodeId> nearest;
        long best = -1;
        // widen symmetrically in degree distance, collecting every candidate
        // at the smallest distance that has any unblocked node
        while (left >= 0 || right < n) {
            const long dl = left >= 0 ? target - static_cast<long>(by_degree[left].first)
                                      : std::numeric_limits<long>::max();
            const long dr = right < n ? static_cast<long>(by_degree[right].first) - target
                                      : std::numeric_limits<long>::max();
            const long d = std::min(dl, dr);
            if (best >= 0 && d > best) break;
            if (dl == d) {
                if (!blocked[by_degree[left].second]) {
                    nearest.push_back(by_degree[left].second);
                    best = d;
                }
                --left;
            }
            if (dr == d) {
                if (right < n && !blocked[by_degree[right].second]) {
                    nearest.push_back(by_degree[right].second);
                    best = d;
                }
                ++right;
            }
        }
        if (nearest.empty()) {
            ok = false;
            return -1;
        }
        std::sort(nearest.begin(), nearest.end());
        return nearest[rng.uniform_index(nearest.size())];
    };

    auto set = substitute_nodes(
        h, probes, SamplerKind::degree_matched,
        [k](std::size_t size) { return std::min<int>(k, static_cast<int>(size) - 1); }, pick,
        seed);
    set.k = k;
    return set;
}

}  // namespace hyperwalk
