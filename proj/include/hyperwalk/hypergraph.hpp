#ifndef HYPERWALK_HYPERGRAPH_HPP
#define HYPERWALK_HYPERGRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Sparse>

#include "hyperwalk/types.hpp"

namespace hyperwalk {

/// Hypergraph with edge-dependent vertex weights.
///
/// Every hyperedge e carries a positive weight omega(e) and a positive
/// per-member weight gamma_e(v), defined exactly for v in e. Nodes and edges
/// keep insertion order so derived matrices and seeded runs are reproducible.
/// Repeated member sets are legal (multi-edges) and contribute independently
/// to node degrees. Instances are immutable once built and safe to share
/// across threads.
class Hypergraph {
public:
    Hypergraph() = default;

    /// Returns the id for `name`, creating the node if it is new.
    NodeId add_node(const std::string& name);

    /// Adds a hyperedge over distinct members with per-member gamma weights.
    /// Throws InvalidArgument for size < 2, duplicate members, or
    /// non-positive weights.
    EdgeId add_edge(std::vector<NodeId> members, std::vector<double> gamma, double omega);

    std::size_t node_count() const { return node_names_.size(); }
    std::size_t edge_count() const { return members_.size(); }

    const std::string& node_name(NodeId v) const { return node_names_.at(v); }
    const std::vector<std::string>& node_names() const { return node_names_; }
    std::optional<NodeId> find_node(const std::string& name) const;

    const std::vector<NodeId>& members(EdgeId e) const { return members_.at(e); }
    const std::vector<NodeId>& sorted_members(EdgeId e) const { return sorted_members_.at(e); }
    const std::vector<double>& member_gamma(EdgeId e) const { return gamma_.at(e); }
    double omega(EdgeId e) const { return omega_.at(e); }
    double gamma(EdgeId e, NodeId v) const;

    /// delta(e) = sum of gamma_e(v) over members.
    double edge_degree(EdgeId e) const { return edge_degree_.at(e); }
    /// d(v) = sum of omega(e) over incident edges.
    double node_degree(NodeId v) const { return node_degree_.at(v); }
    /// |E(v)|, the unweighted degree used for degree-matched sampling.
    std::size_t incident_count(NodeId v) const { return incident_.at(v).size(); }
    const std::vector<EdgeId>& incident_edges(NodeId v) const { return incident_.at(v); }

    /// True if some edge has exactly this member set (multiset of edges,
    /// compared as sets). `sorted` must be sorted ascending.
    bool has_edge_set(const std::vector<NodeId>& sorted) const;

    /// Checks the type invariants; throws InvalidArgument on violation.
    void validate() const;

private:
    std::vector<std::string> node_names_;
    std::unordered_map<std::string, NodeId> name_to_id_;
    std::vector<std::vector<NodeId>> members_;
    std::vector<std::vector<NodeId>> sorted_members_;
    std::vector<std::vector<double>> gamma_;
    std::vector<double> omega_;
    std::vector<double> edge_degree_;
    std::vector<double> node_degree_;
    std::vector<std::vector<EdgeId>> incident_;

    struct VecHash {
        std::size_t operator()(const std::vector<NodeId>& v) const;
    };
    std::unordered_set<std::vector<NodeId>, VecHash> edge_sets_;
};

/// Derived incidence and degree matrices.
///
/// R is |E| x |V| with R(e,v) = gamma_e(v); W is |V| x |E| with
/// W(v,e) = omega(e) for v in e; node_degree and edge_degree are the
/// diagonals of D_V and D_E.
struct WalkMatrices {
    Eigen::SparseMatrix<double, Eigen::RowMajor> R;
    Eigen::SparseMatrix<double, Eigen::RowMajor> W;
    Vector node_degree;
    Vector edge_degree;
    std::vector<std::string> ordering;
};

WalkMatrices incidence_matrices(const Hypergraph& h);

/// Hypergraph over the kept edges only; nodes left with no incident edge are
/// removed, surviving nodes keep their original relative order. Throws on an
/// empty keep set.
Hypergraph restrict_edges(const Hypergraph& h, const std::vector<EdgeId>& keep);

/// True iff the bipartite node-edge incidence graph is one component
/// covering every node. An edgeless graph with more than one node is
/// disconnected; a single-node graph is connected.
bool is_connected(const Hypergraph& h);

// ---------------------------------------------------------------------------
// Dataset ingestion

enum class Weighting { uniform, sender_first, party_aware };
enum class CableLevel { city, country };
enum class Party : std::uint8_t { democrat, republican, unknown };

struct CableRecord {
    std::string id;
    std::string sender;
    std::vector<std::string> receivers;
    std::string timestamp;  // ISO-8601 date; carried through, not interpreted
};

/// Ingestion diagnostics: rejected records, skipped lines, dropped edges.
struct LoadStats {
    std::size_t rejected_records = 0;
    std::size_t skipped_lines = 0;
    std::size_t dropped_edges = 0;
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
};

/// Node identity for a mission at a given level. City level strips a leading
/// "Embassy"/"Consulate"/"Mission" marker; country level additionally maps
/// the city through `country_of` (unmapped cities keep the city name and a
/// warning is recorded).
std::string normalize_mission(const std::string& mission, CableLevel level,
                              const std::unordered_map<std::string, std::string>& country_of,
                              LoadStats* stats = nullptr);

/// One hyperedge per cable: members are the sender plus receivers after
/// normalization and deduplication at the chosen level; gamma is 2 for the
/// node that is (or, at country level, contains) the sender and 1 otherwise;
/// omega(e) = number of distinct nodes. Edges that collapse to a single node
/// are dropped; records with no receivers are rejected and reported.
/// Throws InvalidArgument when `records` is empty.
Hypergraph build_edvw_from_cables(const std::vector<CableRecord>& records, CableLevel level,
                                  const std::unordered_map<std::string, std::string>& country_of = {},
                                  LoadStats* stats = nullptr);

/// Reads `id,sender,receivers,timestamp` CSV; receivers are ';'-separated.
std::vector<CableRecord> read_cable_csv(const std::string& path, LoadStats* stats = nullptr);

/// Reads a two-column `city,country` CSV.
std::unordered_map<std::string, std::string> read_country_map(const std::string& path);

/// Reads a two-column `node,party` CSV with party in {D, R}.
std::unordered_map<std::string, Party> read_party_map(const std::string& path);

/// Party-aware weights for one hyperedge. Only members with a known party
/// are weighted (the rest are excluded from the returned list). Homogeneous
/// edges get weight 1 everywhere; mixed edges get
/// 1 + s_v * sgn(r_e) * (1 - |r_e|) with r_e = (D_e - R_e)/(D_e + R_e) and
/// s_v = +1 for D, -1 for R.
std::vector<std::pair<std::string, double>> party_weights(
    const std::vector<std::string>& edge,
    const std::unordered_map<std::string, Party>& parties);

/// Loads a whitespace-separated hyperedge list (one edge per line, '#'
/// comments). Lines with fewer than two distinct tokens are skipped with a
/// warning. Weighting:
///   uniform      gamma = 1, omega = |e|
///   sender_first first token gets gamma 2, the rest 1, omega = |e|
///   party_aware  edge restricted to known-party members, gamma from
///                party_weights, omega = |e restricted|; requires `parties`
Hypergraph load_hyperedge_list(const std::string& path, Weighting weighting,
                               const std::unordered_map<std::string, Party>* parties = nullptr,
                               LoadStats* stats = nullptr);

}  // namespace hyperwalk

#endif
