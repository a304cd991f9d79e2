// Copyright 2026 slcsim authors
// License: Apache-2.0

#pragma once

#include <string>

#include "slc/adversary.hpp"
#include "slc/dimension.hpp"
#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"
#include "slc/transcript.hpp"

namespace slc {

// Graph file: {"n": <int>, "edges": [[u,v], ...]}.
// Edges deduplicate on load; self-loops are parse errors.
ManipulationGraph load_graph(const std::string& path);
void save_graph(const ManipulationGraph& g, const std::string& path);
ManipulationGraph graph_from_json_text(const std::string& text);
std::string graph_to_json_text(const ManipulationGraph& g);

// Class file: {"n": <int>, "members": [[+-1,...], ...]}; duplicates rejected.
HypothesisClass load_class(const std::string& path);
void save_class(const HypothesisClass& hc, const std::string& path);
HypothesisClass class_from_json_text(const std::string& text);
std::string class_to_json_text(const HypothesisClass& hc);

// Graph class listing: {"graphs": ["relative/path.json", ...]}.
GraphClass load_graph_class(const std::string& path);

// Sequence file: {"agents": [[x,y],...], "graphs": [idx,...]?, "certificate"?}.
// Round-graph indices resolve against the supplied class when present.
AgentSequence load_sequence(const std::string& path, const GraphClass* gc = nullptr);
void save_sequence(const AgentSequence& s, const std::string& path);
std::string sequence_to_json_text(const AgentSequence& s);
AgentSequence sequence_from_json_text(const std::string& text, const GraphClass* gc = nullptr);

// Witness: nested {"x": id, "children": {"v,y": subtree}}.
std::string witness_to_json_text(const SLTreeWitness& t);
SLTreeWitness witness_from_json_text(const std::string& text);

// Transcript outputs.
std::string transcript_to_csv(const Transcript& tr);
std::string transcript_summary_json(const Transcript& tr);
void save_transcript(const Transcript& tr, const std::string& csv_path,
                     const std::string& summary_path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace slc
