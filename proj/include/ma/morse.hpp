#pragma once

// Neumann / Dirichlet Morse complexes over Z from critical-point data and
// signed connection counts: grading rules, boundary matrices, d^2 = 0 and the
// C_k^D(f) = C_{n-k}^N(-f) duality check.

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ma/ainfty.hpp"
#include "ma/base.hpp"

namespace ma::morse {

enum class Locus { Interior, Boundary };
enum class Flavor { None, Neumann, Dirichlet };
enum class Variant { N, D };

struct CriticalPoint {
  std::string name;
  Locus locus = Locus::Interior;
  Flavor flavor = Flavor::None;  // None iff Interior
  int index = 0;                 // Morse index of f (interior) or f_boundary
};

struct MorseComplexData {
  int n = 0;  // ambient dimension
  std::vector<CriticalPoint> points;
  // (from, to) -> signed count of connecting orbits from `from` to `to`.
  std::map<std::pair<std::string, std::string>, Int> connections;
};

struct MorseComplex {
  Variant variant = Variant::N;
  int n = 0;
  // generators per homological degree k, ordered: interior first, then
  // boundary, each by (index, name)
  std::vector<std::vector<std::string>> gens;  // gens[k]
  // boundary[k] : C_k -> C_{k-1}; boundary[k][i][j] = <d g_j, h_i>
  std::vector<std::vector<std::vector<Int>>> boundary;

  int rank(int k) const {
    return (k >= 0 && k < static_cast<int>(gens.size())) ? static_cast<int>(gens[k].size()) : 0;
  }
};

// Homological degree of a generator in the chosen variant (Dirichlet points
// shift up by one); returns -1 when the point does not belong to the variant.
int variant_degree(const CriticalPoint& p, Variant v);

MorseComplex build_complex(const MorseComplexData& data, Variant v);
bool check_d_squared(const MorseComplex& c);

struct HomologySummary {
  std::vector<long long> betti;               // by homological degree 0..n
  std::vector<std::vector<Int>> torsion;      // by homological degree
};
HomologySummary complex_homology(const MorseComplex& c);

struct DualityReport {
  bool ok = true;
  std::vector<std::string> mismatches;
};
// C_k^D(f) = C_{n-k}^N(-f): graded rank equality and transposed-differential
// match up to a per-generator sign.
DualityReport duality_check(const MorseComplexData& data_f, const MorseComplexData& data_minus_f);

// The complex as an A-infinity structure with only m_1 (cohomological grading
// |x| = n - k).
ainfty::AInftyStructure as_ainfty(const MorseComplex& c);

MorseComplexData data_from_json(const nlohmann::json& j);
nlohmann::ordered_json data_to_json(const MorseComplexData& d);

}  // namespace ma::morse
