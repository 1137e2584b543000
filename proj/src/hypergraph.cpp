#include "hyperwalk/hypergraph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hyperwalk {

std::size_t Hypergraph::VecHash::operator()(const std::vector<NodeId>& v) const {
    std::size_t h = v.size();
    for (NodeId x : v) h = h * 1000003u + static_cast<std::size_t>(x) + 0x9E3779B9u;
    return h;
}

NodeId Hypergraph::add_node(const std::string& name) {
    auto it = name_to_id_.find(name);
    if (it != name_to_id_.end()) return it->second;
    NodeId id = static_cast<NodeId>(node_names_.size());
    node_names_.push_back(name);
    name_to_id_.emplace(name, id);
    node_degree_.push_back(0.0);
    incident_.emplace_back();
    return id;
}

EdgeId Hypergraph::add_edge(std::vector<NodeId> members, std::vector<double> gamma, double omega) {
    if (members.size() < 2) throw InvalidArgument("add_edge: hyperedge needs >= 2 members");
    if (members.size() != gamma.size())
        throw InvalidArgument("add_edge: gamma size does not match members");
    if (!(omega > 0.0)) throw InvalidArgument("add_edge: omega must be positive");
    for (double g : gamma)
        if (!(g > 0.0)) throw InvalidArgument("add_edge: gamma weights must be positive");

    std::vector<NodeId> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1]) throw InvalidArgument("add_edge: duplicate member");
    for (NodeId v : members)
        if (v < 0 || static_cast<std::size_t>(v) >= node_names_.size())
            throw InvalidArgument("add_edge: unknown node id");

    EdgeId e = static_cast<EdgeId>(members_.size());
    double delta = 0.0;
    for (double g : gamma) delta += g;
    for (NodeId v : members) {
        node_degree_[v] += omega;
        incident_[v].push_back(e);
    }
    members_.push_back(std::move(members));
    sorted_members_.push_back(sorted);
    gamma_.push_back(std::move(gamma));
    omega_.push_back(omega);
    edge_degree_.push_back(delta);
    edge_sets_.insert(std::move(sorted));
    return e;
}

std::optional<NodeId> Hypergraph::find_node(const std::string& name) const {
    auto it = name_to_id_.find(name);
    if (it == name_to_id_.end()) return std::nullopt;
    return it->second;
}

double Hypergraph::gamma(EdgeId e, NodeId v) const {
    const auto& m = members_.at(e);
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] == v) return gamma_[e][i];
    throw InvalidArgument("gamma: node " + node_name(v) + " is not a member of edge " +
                          std::to_string(e));
}

bool Hypergraph::has_edge_set(const std::vector<NodeId>& sorted) const {
    return edge_sets_.find(sorted) != edge_sets_.end();
}

void Hypergraph::validate() const {
    for (NodeId v = 0; static_cast<std::size_t>(v) < node_count(); ++v)
        if (incident_[v].empty())
            throw InvalidArgument("validate: isolated node " + node_names_[v]);
    for (EdgeId e = 0; static_cast<std::size_t>(e) < edge_count(); ++e) {
        if (members_[e].size() < 2)
            throw InvalidArgument("validate: edge " + std::to_string(e) + " has < 2 members");
        if (!(omega_[e] > 0.0))
            throw InvalidArgument("validate: edge " + std::to_string(e) + " has omega <= 0");
        for (double g : gamma_[e])
            if (!(g > 0.0))
                throw InvalidArgument("validate: edge " + std::to_string(e) + " has gamma <= 0");
    }
}

WalkMatrices incidence_matrices(const Hypergraph& h) {
    const auto n_nodes = static_cast<Eigen::Index>(h.node_count());
    const auto n_edges = static_cast<Eigen::Index>(h.edge_count());
    WalkMatrices out;
    out.R.resize(n_edges, n_nodes);
    out.W.resize(n_nodes, n_edges);
    out.node_degree.resize(n_nodes);
    out.edge_degree.resize(n_edges);
    out.ordering = h.node_names();

    std::vector<Eigen::Triplet<double>> r_trip, w_trip;
    for (EdgeId e = 0; e < n_edges; ++e) {
        const auto& members = h.members(e);
        const auto& gamma = h.member_gamma(e);
        for (std::size_t i = 0; i < members.size(); ++i) {
            r_trip.emplace_back(e, members[i], gamma[i]);
            w_trip.emplace_back(members[i], e, h.omega(e));
        }
        out.edge_degree[e] = h.edge_degree(e);
        if (!(out.edge_degree[e] > 0.0))
            throw InvalidArgument("incidence_matrices: edge " + std::to_string(e) +
                                  " has zero degree");
    }
    for (NodeId v = 0; v < n_nodes; ++v) {
        out.node_degree[v] = h.node_degree(v);
        if (!(out.node_degree[v] > 0.0))
            throw InvalidArgument("incidence_matrices: node " + h.node_name(v) +
                                  " has zero degree");
    }
    out.R.setFromTriplets(r_trip.begin(), r_trip.end());
    out.W.setFromTriplets(w_trip.begin(), w_trip.end());
    return out;
}

Hypergraph restrict_edges(const Hypergraph& h, const std::vector<EdgeId>& keep) {
    if (keep.empty()) throw InvalidArgument("restrict_edges: empty edge subset");
    std::vector<bool> kept(h.edge_count(), false);
    for (EdgeId e : keep) {
        if (e < 0 || static_cast<std::size_t>(e) >= h.edge_count())
            throw InvalidArgument("restrict_edges: edge id out of range");
        kept[e] = true;
    }
    std::vector<bool> node_used(h.node_count(), false);
    for (EdgeId e = 0; static_cast<std::size_t>(e) < h.edge_count(); ++e)
        if (kept[e])
            for (NodeId v : h.members(e)) node_used[v] = true;

    Hypergraph out;
    for (NodeId v = 0; static_cast<std::size_t>(v) < h.node_count(); ++v)
        if (node_used[v]) out.add_node(h.node_name(v));
    for (EdgeId e = 0; static_cast<std::size_t>(e) < h.edge_count(); ++e) {
        if (!kept[e]) continue;
        std::vector<NodeId> members;
        members.reserve(h.members(e).size());
        for (NodeId v : h.members(e)) members.push_back(*out.find_node(h.node_name(v)));
        out.add_edge(std::move(members), h.member_gamma(e), h.omega(e));
    }
    return out;
}

bool is_connected(const Hypergraph& h) {
    if (h.node_count() <= 1) return true;
    if (h.edge_count() == 0) return false;
    std::vector<bool> node_seen(h.node_count(), false);
    std::vector<bool> edge_seen(h.edge_count(), false);
    std::vector<NodeId> stack{0};
    node_seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (EdgeId e : h.incident_edges(v)) {
            if (edge_seen[e]) continue;
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

// ---------------------------------------------------------------------------
// Ingestion

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

bool strip_prefix_word(std::string& s, const std::string& word) {
    if (s.size() <= word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(word[i])))
            return false;
    if (s[word.size()] != ' ') return false;
    s = trim(s.substr(word.size() + 1));
    return true;
}

}  // namespace

std::string normalize_mission(const std::string& mission, CableLevel level,
                              const std::unordered_map<std::string, std::string>& country_of,
                              LoadStats* stats) {
    std::string city = trim(mission);
    for (const char* marker : {"Embassy", "Consulate", "Mission", "USUN"})
        if (strip_prefix_word(city, marker)) break;
    if (level == CableLevel::city) return city;
    auto it = country_of.find(city);
    if (it != country_of.end()) return it->second;
    if (stats) stats->warn("no country mapping for city '" + city + "'; keeping city name");
    return city;
}

Hypergraph build_edvw_from_cables(const std::vector<CableRecord>& records, CableLevel level,
                                  const std::unordered_map<std::string, std::string>& country_of,
                                  LoadStats* stats) {
    if (records.empty())
        throw InvalidArgument("build_edvw_from_cables: no records; refusing to build an empty hypergraph");
    Hypergraph h;
    LoadStats local;
    LoadStats& st = stats ? *stats : local;
    for (const auto& rec : records) {
        if (rec.receivers.empty()) {
            ++st.rejected_records;
            st.warn("cable " + rec.id + ": no receivers, record rejected");
            continue;
        }
        const std::string sender_node = normalize_mission(rec.sender, level, country_of, &st);
        std::vector<std::string> order{sender_node};
        for (const auto& r : rec.receivers) {
            std::string node = normalize_mission(r, level, country_of, &st);
            if (std::find(order.begin(), order.end(), node) == order.end())
                order.push_back(std::move(node));
        }
        if (order.size() < 2) {
            ++st.dropped_edges;
            st.warn("cable " + rec.id + ": collapses to a single node at this level, dropped");
            continue;
        }
        std::vector<NodeId> members;
        std::vector<double> gamma;
        members.reserve(order.size());
        for (const auto& name : order) {
            members.push_back(h.add_node(name));
            gamma.push_back(name == sender_node ? 2.0 : 1.0);
        }
        h.add_edge(std::move(members), std::move(gamma), static_cast<double>(order.size()));
    }
    if (h.edge_count() == 0)
        throw InvalidArgument("build_edvw_from_cables: every record was rejected or degenerate");
    return h;
}

std::vector<CableRecord> read_cable_csv(const std::string& path, LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open cable CSV: " + path);
    LoadStats local;
    LoadStats& st = stats ? *stats : local;
    std::vector<CableRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (lineno == 1 && t.rfind("id,", 0) == 0) continue;  // header
        auto fields = split(t, ',');
        if (fields.size() != 4) {
            ++st.skipped_lines;
            st.warn(path + ":" + std::to_string(lineno) + ": expected 4 fields, got " +
                    std::to_string(fields.size()));
            continue;
        }
        CableRecord rec;
        rec.id = fields[0];
        rec.sender = fields[1];
        for (auto& r : split(fields[2], ';'))
            if (!r.empty()) rec.receivers.push_back(r);
        rec.timestamp = fields[3];
        records.push_back(std::move(rec));
    }
    return records;
}

std::unordered_map<std::string, std::string> read_country_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open country map: " + path);
    std::unordered_map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(t, ',');
        if (fields.size() != 2 || fields[0] == "city") continue;
        out[fields[0]] = fields[1];
    }
    return out;
}

std::unordered_map<std::string, Party> read_party_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open party map: " + path);
    std::unordered_map<std::string, Party> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(t, ',');
        if (fields.size() != 2 || fields[0] == "node") continue;
        if (fields[1] == "D")
            out[fields[0]] = Party::democrat;
        else if (fields[1] == "R")
            out[fields[0]] = Party::republican;
        else
            out[fields[0]] = Party::unknown;
    }
    return out;
}

std::vector<std::pair<std::string, double>> party_weights(
    const std::vector<std::string>& edge,
    const std::unordered_map<std::string, Party>& parties) {
    if (edge.empty()) throw InvalidArgument("party_weights: empty edge");
    std::vector<std::pair<std::string, Party>> known;
    long dem = 0, rep = 0;
    for (const auto& node : edge) {
        auto it = parties.find(node);
        Party p = it == parties.end() ? Party::unknown : it->second;
        if (p == Party::unknown) continue;
        known.emplace_back(node, p);
        (p == Party::democrat ? dem : rep)++;
    }
    std::vector<std::pair<std::string, double>> out;
    if (known.empty()) return out;
    const long total = dem + rep;
    const double r_e = total == 0 ? 0.0 : static_cast<double>(dem - rep) / static_cast<double>(total);
    const double sgn = r_e > 0.0 ? 1.0 : (r_e < 0.0 ? -1.0 : 0.0);
    const bool mixed = dem > 0 && rep > 0;
    out.reserve(known.size());
    for (const auto& [node, p] : known) {
        double w = 1.0;
        if (mixed) {
            const double s_v = p == Party::democrat ? 1.0 : -1.0;
            w = 1.0 + s_v * sgn * (1.0 - std::abs(r_e));
        }
        out.emplace_back(node, w);
    }
    return out;
}

Hypergraph load_hyperedge_list(const std::string& path, Weighting weighting,
                               const std::unordered_map<std::string, Party>* parties,
                               LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open hyperedge list: " + path);
    if (weighting == Weighting::party_aware && parties == nullptr)
        throw InvalidArgument("load_hyperedge_list: party_aware weighting needs a party map");
    LoadStats local;
    LoadStats& st = stats ? *stats : local;
    Hypergraph h;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream tokens(t);
        std::vector<std::string> order;
        std::string tok;
        while (tokens >> tok)
            if (std::find(order.begin(), order.end(), tok) == order.end()) order.push_back(tok);
        if (order.size() < 2) {
            ++st.skipped_lines;
            st.warn(path + ":" + std::to_string(lineno) + ": fewer than 2 distinct nodes, skipped");
            continue;
        }
        std::vector<std::string> names;
        std::vector<double> gamma;
        if (weighting == Weighting::party_aware) {
            auto weighted = party_weights(order, *parties);
            if (weighted.empty()) {
                ++st.dropped_edges;
                st.warn(path + ":" + std::to_string(lineno) + ": no known-party members, dropped");
                continue;
            }
            if (weighted.size() < 2) {
                ++st.dropped_edges;
                st.warn(path + ":" + std::to_string(lineno) +
                        ": fewer than 2 known-party members, dropped");
                continue;
            }
            for (auto& [node, w] : weighted) {
                names.push_back(node);
                gamma.push_back(w);
            }
        } else {
            names = order;
            gamma.assign(order.size(), 1.0);
            if (weighting == Weighting::sender_first) gamma[0] = 2.0;
        }
        std::vector<NodeId> members;
        members.reserve(names.size());
        for (const auto& name : names) members.push_back(h.add_node(name));
        h.add_edge(std::move(members), std::move(gamma), static_cast<double>(names.size()));
    }
    if (h.edge_count() == 0)
        throw Error("load_hyperedge_list: no usable hyperedges in " + path);
    return h;
}

}  // namespace hyperwalk
