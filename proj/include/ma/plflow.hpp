#pragma once

// The Fukaya-tree fiber-product recursion over exact PL pseudo-gradient
// dynamics: decorated multi-intersections I_T(x_1..x_d; y), the geometric m_1,
// and assembly of the A-infinity operations with seeded decoration families
// and bounded degeneracy-reseed.

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ma/ainfty.hpp"
#include "ma/flow.hpp"
#include "ma/mesh.hpp"
#include "ma/morse.hpp"
#include "ma/sets.hpp"
#include "ma/signs.hpp"
#include "ma/trees.hpp"

namespace ma::sets {

// Everything derived from one decorated field: tracer, separatrix curves with
// orientation coefficients, and the stable-curve cut locus.
struct FieldData {
  flow::FlowField field;
  // 1-dimensional stable/unstable sets per critical vertex, branch-weighted
  std::map<int, Curve> stable;
  std::map<int, Curve> unstable;
  Curve cut_locus;  // all 1-dim stable curves together

  const flow::FlowField& f() const { return field; }
};

}  // namespace ma::sets

namespace ma::plflow {

using sets::Curve;
using sets::FieldData;
using sets::Points;
using sets::Region;

// Builds field + separatrices; throws DegenerateConfiguration on any
// non-generic incidence (saddle-saddle connection, vertex hits, ...).
std::shared_ptr<FieldData> make_field_data(const mesh::Surface& s, const std::vector<Rat>& phi);

// ---------------------------------------------------------------------------
// Critical point inventory (in terms of the input Morse function f; the
// descended function is f for the Neumann variant and -f for the Dirichlet
// variant).

std::vector<morse::CriticalPoint> classify_critical_vertices(const mesh::Surface& s,
                                                             const std::vector<Rat>& f);
std::string critical_name(const mesh::Surface& s, int vertex);

// ---------------------------------------------------------------------------
// Multi-intersections.

struct Decoration {
  // decoration index per tree edge-id: field = fields[index]
  std::map<int, int> edge_field;
  std::vector<std::shared_ptr<FieldData>> fields;
  std::uint64_t seed = 0;
};

// Per-tree-vertex trace of the recursion, for reports.
struct TraceNode {
  int node = -1;
  std::string kind;  // "points" | "curve" | "region"
  int abstract_dim = 0;
  int fiber_dim = 0;
  std::vector<std::pair<std::string, std::string>> points;  // (chart point, coeff)
};

struct MultiIntersectionResult {
  trees::FukayaTree tree;
  std::vector<int> entries;  // critical vertices
  int output = -1;
  Int count = 0;
  std::vector<TraceNode> trace;
};

// Signed count <I_T(x_1..x_d), y> for a generic tree T. Entries/output are
// critical vertices of the shared classification. Throws
// DegenerateConfiguration on non-transverse incidences and DimensionMismatch
// when the degree filter is violated.
MultiIntersectionResult multi_intersection(const mesh::Surface& s, const trees::FukayaTree& t,
                                           const Decoration& d, const std::vector<int>& entries,
                                           int output, bool record_trace = false);

// ---------------------------------------------------------------------------
// Assembly.

struct AssembleOptions {
  int maxd = 3;
  std::uint64_t seed = 0;
  int max_reseeds = 5;
  signs::PrefactorStrategy prefactor = signs::PrefactorStrategy::Weighted;
  bool record_traces = false;
};

struct AssembleResult {
  ainfty::AInftyStructure structure;       // Dirichlet-variant, |x| = ind_{-f}
  morse::MorseComplexData m1_data;         // connection counts for m_1
  std::uint64_t seed_used = 0;             // seed after reseeds
  int reseeds = 0;
  std::vector<MultiIntersectionResult> traces;
};

// Builds the Dirichlet-variant A-infinity structure of f on a closed surface
// (or with boundary for m_1/m_2) by descending phi = -f with the g-standard
// decoration family derived from (seed, edge labels).
AssembleResult assemble_structure(const mesh::Surface& s, const std::vector<Rat>& f,
                                  const AssembleOptions& opt);

// Connection counts between degree-adjacent criticals of the descended
// function phi (used for both variants' differentials).
std::map<std::pair<std::string, std::string>, Int> connection_counts(
    const mesh::Surface& s, const FieldData& fd);

// Morse complex data of f in the chosen variant, counted geometrically.
morse::MorseComplexData complex_data(const mesh::Surface& s, const std::vector<Rat>& f,
                                     morse::Variant v, std::uint64_t seed, int max_reseeds = 5);

nlohmann::ordered_json result_to_json(const mesh::Surface& s, const MultiIntersectionResult& r);

// Function values from JSON ({"values": {"id": "p/q", ...}}).
std::vector<Rat> values_from_json(const nlohmann::json& j, int nv);

}  // namespace ma::plflow
