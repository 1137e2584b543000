#ifndef HYPERWALK_TESTS_FIXTURES_HPP
#define HYPERWALK_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperwalk/hypergraph.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk::testing {

// Two diplomatic cables: C1 Tunis -> {Ankara, Istanbul, Bruxelles},
// C2 Rabat -> {Tunis}.
inline std::vector<CableRecord> two_cable_records() {
    return {
        {"C1", "Embassy Tunis",
         {"Embassy Ankara", "Consulate Istanbul", "Embassy Bruxelles"}, "2008-01-15"},
        {"C2", "Embassy Rabat", {"Embassy Tunis"}, "2008-02-02"},
    };
}

inline std::unordered_map<std::string, std::string> cable_country_map() {
    return {{"Tunis", "Tunisia"},
            {"Ankara", "Turkiye"},
            {"Istanbul", "Turkiye"},
            {"Bruxelles", "Belgium"},
            {"Rabat", "Morocco"}};
}

inline Hypergraph two_cable_city_hypergraph() {
    return build_edvw_from_cables(two_cable_records(), CableLevel::city, {});
}

// Three fully coupled nodes with gamma asymmetry across edges; the Markov
// walk on it violates the Kolmogorov cycle condition, so it is a known
// non-reversible case.
inline Hypergraph asymmetric_gamma_hypergraph() {
    Hypergraph h;
    const NodeId a = h.add_node("a");
    const NodeId b = h.add_node("b");
    const NodeId c = h.add_node("c");
    h.add_edge({a, b, c}, {1.0, 2.0, 1.0}, 1.0);
    h.add_edge({a, b}, {1.0, 3.0}, 1.0);
    h.add_edge({b, c}, {2.0, 1.0}, 1.0);
    return h;
}

// Connected random EDVW hypergraph: a spanning chain plus random extra
// edges. With edge_independent = true, gamma_e(v) depends only on v.
inline Hypergraph random_hypergraph(RngStream& rng, int max_nodes = 10,
                                    bool edge_independent = false) {
    const int n = 3 + static_cast<int>(rng.uniform_index(std::max(1, max_nodes - 2)));
    Hypergraph h;
    for (int v = 0; v < n; ++v) h.add_node("v" + std::to_string(v));
    std::vector<double> node_gamma(n);
    for (int v = 0; v < n; ++v) node_gamma[v] = 0.5 + 2.0 * rng.next_double();

    auto gamma_for = [&](NodeId v) {
        return edge_independent ? node_gamma[v] : 0.5 + 2.0 * rng.next_double();
    };
    auto add = [&](std::vector<NodeId> members) {
        std::vector<double> gamma;
        for (NodeId v : members) gamma.push_back(gamma_for(v));
        h.add_edge(std::move(members), std::move(gamma), 0.5 + 2.5 * rng.next_double());
    };

    for (int v = 0; v + 1 < n; ++v) add({static_cast<NodeId>(v), static_cast<NodeId>(v + 1)});
    const int extra = 1 + static_cast<int>(rng.uniform_index(n));
    for (int i = 0; i < extra; ++i) {
        const int size = 2 + static_cast<int>(rng.uniform_index(std::min(n, 5) - 1));
        auto picks = rng.sample_without_replacement(n, size);
        std::vector<NodeId> members(picks.begin(), picks.end());
        add(std::move(members));
    }
    return h;
}

struct PlantedConfig {
    int communities = 10;
    int community_size = 12;
    int small_edges = 8;       // random size 3..6 edges per community
    int large_edges = 3;       // random size 9..12 edges per community
    int bridge_span = 4;       // bridges from c to c+1..c+span
    double bridge_omega = 20.0;
    std::uint64_t seed = 20240531;
};

// Planted-community hypergraph: per community, three size-4 partition edges
// (covering every node) plus random small and large within-community edges;
// heavy size-4 bridge edges (two nodes per side) tie community c to its
// next `bridge_span` neighbors so the chain mixes globally. First member of
// every edge carries gamma 2, the rest 1.
inline Hypergraph planted_community_hypergraph(const PlantedConfig& config = {}) {
    RngStream rng(config.seed, {0x91A7ED5u});
    Hypergraph h;
    const int n = config.communities * config.community_size;
    for (int v = 0; v < n; ++v) {
        char name[16];
        std::snprintf(name, sizeof(name), "n%03d", v);
        h.add_node(name);
    }
    auto add_edge = [&](std::vector<NodeId> members, double omega) {
        std::vector<double> gamma(members.size(), 1.0);
        gamma[0] = 2.0;
        h.add_edge(std::move(members), std::move(gamma), omega);
    };
    auto community_node = [&](int c, std::size_t offset) {
        return static_cast<NodeId>(c * config.community_size + static_cast<int>(offset));
    };

    for (int c = 0; c < config.communities; ++c) {
        // partition edges guarantee coverage of all members
        std::vector<std::size_t> order(config.community_size);
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        for (int part = 0; part < 3; ++part) {
            std::vector<NodeId> members;
            for (int i = 0; i < 4; ++i) members.push_back(community_node(c, order[part * 4 + i]));
            add_edge(std::move(members), 4.0);
        }
        for (int i = 0; i < config.small_edges; ++i) {
            const int size = 3 + static_cast<int>(rng.uniform_index(4));
            auto picks = rng.sample_without_replacement(config.community_size, size);
            std::vector<NodeId> members;
            for (auto p : picks) members.push_back(community_node(c, p));
            add_edge(std::move(members), static_cast<double>(size));
        }
        for (int i = 0; i < config.large_edges; ++i) {
            const int size = 9 + static_cast<int>(rng.uniform_index(4));
            auto picks = rng.sample_without_replacement(config.community_size, size);
            std::vector<NodeId> members;
            for (auto p : picks) members.push_back(community_node(c, p));
            add_edge(std::move(members), static_cast<double>(size));
        }
    }
    const int span_cap = std::min(config.bridge_span, config.communities - 1);
    for (int c = 0; c < config.communities; ++c) {
        for (int span = 1; span <= span_cap; ++span) {
            const int other = (c + span) % config.communities;
            auto left = rng.sample_without_replacement(config.community_size, 2);
            auto right = rng.sample_without_replacement(config.community_size, 2);
            std::vector<NodeId> members{community_node(c, left[0]), community_node(c, left[1]),
                                        community_node(other, right[0]),
                                        community_node(other, right[1])};
            add_edge(std::move(members), config.bridge_omega);
        }
    }
    return h;
}

}  // namespace hyperwalk::testing

#endif
