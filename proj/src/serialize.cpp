// Copyright 2026 slcsim authors
// License: Apache-2.0

#include "slc/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace slc {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write " + path);
    out << content;
    if (!out) throw input_error("write failed for " + path);
}

namespace {

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw parse_error("malformed JSON in " + what);
    return j;
}

}  // namespace

ManipulationGraph graph_from_json_text(const std::string& text) {
    json j = parse_json(text, "graph");
    if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
        throw parse_error("graph JSON needs fields n and edges");
    }
    const long long n = j["n"].get<long long>();
    if (n < 0) throw parse_error("graph n must be nonnegative");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2) throw parse_error("edge must be a pair [u,v]");
        const long long u = e[0].get<long long>();
        const long long v = e[1].get<long long>();
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw parse_error("edge endpoint out of range");
        }
        if (u == v) throw parse_error("self-loop in graph file");
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    return ManipulationGraph(static_cast<NodeId>(n), edges);
}

std::string graph_to_json_text(const ManipulationGraph& g) {
    json j;
    j["n"] = g.node_count();
    j["edges"] = json::array();
    for (const auto& [u, v] : g.edges()) j["edges"].push_back({u, v});
    return j.dump(2) + "\n";
}

ManipulationGraph load_graph(const std::string& path) {
    try {
        return graph_from_json_text(read_text_file(path));
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

void save_graph(const ManipulationGraph& g, const std::string& path) {
    write_text_file(path, graph_to_json_text(g));
}

HypothesisClass class_from_json_text(const std::string& text) {
    json j = parse_json(text, "hypothesis class");
    if (!j.is_object() || !j.contains("n") || !j.contains("members")) {
        throw parse_error("class JSON needs fields n and members");
    }
    const long long n = j["n"].get<long long>();
    if (n < 0) throw parse_error("class n must be nonnegative");
    std::vector<Labeling> members;
    for (const auto& m : j["members"]) {
        if (!m.is_array() || m.size() != static_cast<std::size_t>(n)) {
            throw parse_error("member length must equal n");
        }
        std::vector<Label> labels;
        labels.reserve(m.size());
        for (const auto& y : m) labels.push_back(label_from_int(y.get<int>()));
        members.emplace_back(std::move(labels));
    }
    try {
        return HypothesisClass(static_cast<NodeId>(n), std::move(members));
    } catch (const input_error& e) {
        throw parse_error(e.what());
    }
}

std::string class_to_json_text(const HypothesisClass& hc) {
    json j;
    j["n"] = hc.node_count();
    j["members"] = json::array();
    for (const auto& m : hc.members()) {
        json row = json::array();
        for (NodeId x = 0; x < m.size(); ++x) row.push_back(label_to_int(m[x]));
        j["members"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

HypothesisClass load_class(const std::string& path) {
    try {
        return class_from_json_text(read_text_file(path));
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

void save_class(const HypothesisClass& hc, const std::string& path) {
    write_text_file(path, class_to_json_text(hc));
}

GraphClass load_graph_class(const std::string& path) {
    json j = parse_json(read_text_file(path), path);
    if (!j.is_object() || !j.contains("graphs") || !j["graphs"].is_array() ||
        j["graphs"].empty()) {
        throw parse_error(path + ": graph class listing needs a nonempty graphs array");
    }
    const auto base = std::filesystem::path(path).parent_path();
    std::vector<ManipulationGraph> members;
    for (const auto& entry : j["graphs"]) {
        std::filesystem::path p = entry.get<std::string>();
        if (p.is_relative()) p = base / p;
        members.push_back(load_graph(p.string()));
    }
    return GraphClass(std::move(members));
}

std::string sequence_to_json_text(const AgentSequence& s) {
    json j;
    j["agents"] = json::array();
    for (const Agent& a : s.agents) j["agents"].push_back({a.x, label_to_int(a.y)});
    if (s.has_round_graphs()) j["graphs"] = s.round_graph;
    if (s.certificate) {
        json c;
        c["hypothesis"] = s.certificate->hypothesis_index;
        c["effective_labels"] = json::array();
        for (Label y : s.certificate->effective_labels) {
            c["effective_labels"].push_back(label_to_int(y));
        }
        j["certificate"] = std::move(c);
    }
    if (!s.corrupted_rounds.empty()) j["corrupted_rounds"] = s.corrupted_rounds;
    return j.dump(2) + "\n";
}

AgentSequence sequence_from_json_text(const std::string& text, const GraphClass* gc) {
    json j = parse_json(text, "sequence");
    if (!j.is_object() || !j.contains("agents")) {
        throw parse_error("sequence JSON needs an agents array");
    }
    AgentSequence s;
    for (const auto& a : j["agents"]) {
        if (!a.is_array() || a.size() != 2) throw parse_error("agent must be a pair [x,y]");
        const long long x = a[0].get<long long>();
        if (x < 0) throw parse_error("agent feature must be nonnegative");
        s.agents.push_back({static_cast<NodeId>(x), label_from_int(a[1].get<int>())});
    }
    if (j.contains("graphs")) {
        if (gc == nullptr) {
            throw parse_error("sequence has per-round graph indices but no graph class "
                              "was supplied to resolve them");
        }
        for (const auto& idx : j["graphs"]) {
            const long long i = idx.get<long long>();
            if (i < 0 || static_cast<std::size_t>(i) >= gc->size()) {
                throw parse_error("round graph index out of range");
            }
            s.round_graph.push_back(static_cast<int>(i));
        }
        if (s.round_graph.size() != s.agents.size()) {
            throw parse_error("graphs list length must match agents length");
        }
        s.graph_pool = gc->members();
    }
    if (j.contains("certificate")) {
        RealizabilityCertificate cert;
        cert.hypothesis_index = j["certificate"]["hypothesis"].get<std::size_t>();
        for (const auto& y : j["certificate"]["effective_labels"]) {
            cert.effective_labels.push_back(label_from_int(y.get<int>()));
        }
        if (cert.effective_labels.size() != s.agents.size()) {
            throw parse_error("certificate length must match agents length");
        }
        s.certificate = std::move(cert);
    }
    if (j.contains("corrupted_rounds")) {
        for (const auto& t : j["corrupted_rounds"]) {
            s.corrupted_rounds.push_back(t.get<std::size_t>());
        }
    }
    return s;
}

AgentSequence load_sequence(const std::string& path, const GraphClass* gc) {
    try {
        return sequence_from_json_text(read_text_file(path), gc);
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

void save_sequence(const AgentSequence& s, const std::string& path) {
    write_text_file(path, sequence_to_json_text(s));
}

namespace {

json witness_to_json(const SLTreeWitness& t) {
    json j;
    j["x"] = t.root_feature;
    if (!t.children.empty()) {
        json kids = json::object();
        for (const auto& [edge, child] : t.children) {
            const std::string key = std::to_string(edge.first) + "," +
                                    (edge.second == Label::positive ? "+1" : "-1");
            kids[key] = witness_to_json(child);
        }
        j["children"] = std::move(kids);
    }
    return j;
}

SLTreeWitness witness_from_json(const json& j) {
    if (!j.is_object() || !j.contains("x")) throw parse_error("witness node needs field x");
    SLTreeWitness t;
    t.root_feature = j["x"].get<NodeId>();
    if (j.contains("children")) {
        for (const auto& [key, sub] : j["children"].items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos) throw parse_error("witness edge key must be v,y");
            const long long v = std::stoll(key.substr(0, comma));
            const std::string ys = key.substr(comma + 1);
            Label y;
            if (ys == "+1" || ys == "1") {
                y = Label::positive;
            } else if (ys == "-1") {
                y = Label::negative;
            } else {
                throw parse_error("witness edge label must be +1 or -1");
            }
            t.children.emplace(std::make_pair(static_cast<NodeId>(v), y),
                               witness_from_json(sub));
        }
    }
    return t;
}

}  // namespace

std::string witness_to_json_text(const SLTreeWitness& t) {
    return witness_to_json(t).dump(2) + "\n";
}

SLTreeWitness witness_from_json_text(const std::string& text) {
    return witness_from_json(parse_json(text, "witness"));
}

std::string transcript_to_csv(const Transcript& tr) {
    std::ostringstream out;
    out << "t,x,v,y,pred,mistake,graph_idx,classifier_digest\n";
    for (const TranscriptRow& r : tr.rows) {
        out << r.t << ',' << r.x << ',' << r.v << ',' << label_to_int(r.y) << ','
            << label_to_int(r.prediction) << ',' << (r.mistake ? 1 : 0) << ',' << r.graph_index
            << ',' << r.classifier_digest << '\n';
    }
    return out.str();
}

std::string transcript_summary_json(const Transcript& tr) {
    json j;
    j["rounds"] = tr.rows.size();
    j["mistakes"] = tr.mistakes;
    if (tr.opt_h) j["opt_h"] = *tr.opt_h;
    if (tr.opt_h_index) j["opt_h_index"] = *tr.opt_h_index;
    if (tr.opt_g) j["opt_g"] = *tr.opt_g;
    if (tr.opt_g_index) j["opt_g_index"] = *tr.opt_g_index;
    if (tr.regret) j["regret"] = *tr.regret;
    if (!tr.bounds.empty()) {
        j["bounds"] = json::array();
        for (const BoundCheck& b : tr.bounds) {
            j["bounds"].push_back({{"name", b.name},
                                   {"measured", b.measured},
                                   {"bound", b.bound},
                                   {"pass", b.pass}});
        }
    }
    if (!tr.epochs.empty()) {
        j["epochs"] = json::array();
        for (const EpochInfo& e : tr.epochs) {
            j["epochs"].push_back({{"k", e.k},
                                   {"budget", e.budget},
                                   {"first_round", e.first_round},
                                   {"last_round", e.last_round},
                                   {"mistakes", e.mistakes},
                                   {"threshold", e.threshold}});
        }
    }
    if (tr.experts) {
        j["experts"] = {{"count", tr.experts->count},
                        {"max_m", tr.experts->max_m},
                        {"cap", tr.experts->cap}};
    }
    if (!tr.weight_decay.empty()) {
        j["weight_decay"] = json::array();
        for (const auto& [before, after] : tr.weight_decay) {
            j["weight_decay"].push_back({before, after});
        }
    }
    return j.dump(2) + "\n";
}

void save_transcript(const Transcript& tr, const std::string& csv_path,
                     const std::string& summary_path) {
    write_text_file(csv_path, transcript_to_csv(tr));
    write_text_file(summary_path, transcript_summary_json(tr));
}

}  // namespace slc
