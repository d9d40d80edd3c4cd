#pragma once

// Graded free Z-modules with sparse A-infinity operations: defect computation
// for the relations, structure/morphism verification under either sign
// convention, the bar construction with homotopy defects, Smith-normal-form
// homology, convention conversion and Massey triple products.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ma/base.hpp"
#include "ma/signs.hpp"

namespace ma::ainfty {

using signs::Convention;
using signs::Deg;

using GenId = int;
using Word = std::vector<GenId>;
// Finitely supported Z-linear combination of generators (no zero entries).
using ZChain = std::map<GenId, Int>;
// Finitely supported Z-linear combination of tensor words.
using BarElement = std::map<Word, Int>;

void chain_add(ZChain& dst, GenId g, const Int& c);
void chain_add(ZChain& dst, const ZChain& src, const Int& scale = 1);
void bar_add(BarElement& dst, const Word& w, const Int& c);

struct Generator {
  std::string name;
  Deg degree = 0;
};

class GradedBasis {
 public:
  GenId add(const std::string& name, Deg degree);
  GenId id(const std::string& name) const;  // throws if absent
  const Generator& gen(GenId g) const { return gens_.at(static_cast<size_t>(g)); }
  Deg degree(GenId g) const { return gen(g).degree; }
  int size() const { return static_cast<int>(gens_.size()); }
  const std::vector<Generator>& all() const { return gens_; }
  std::vector<GenId> of_degree(Deg d) const;

 private:
  std::vector<Generator> gens_;
  std::map<std::string, GenId> index_;
};

struct Report {
  bool ok = true;
  std::vector<std::string> violations;
  void add(const std::string& v) {
    ok = false;
    violations.push_back(v);
  }
};

class AInftyStructure {
 public:
  GradedBasis basis;
  int maxd = 1;
  Convention convention = Convention::Keller;

  // deg(m_k output) must equal sum(deg inputs) + 2 - k.
  void set_op(int k, const Word& in, ZChain out);
  void add_op(int k, const Word& in, GenId out, const Int& coeff);
  const std::map<Word, ZChain>& ops(int k) const;
  ZChain apply(int k, const Word& in) const;   // zero when absent
  ZChain apply_lin(int k, const std::vector<ZChain>& in) const;

  bool op_zero(int k) const;  // true when m_k has no entries

 private:
  std::map<int, std::map<Word, ZChain>> ops_;
};

// Signed sum over j+k+l = d of m_{j+1+l}(1,...,m_k(...),...,1) on the inputs.
ZChain defect(const AInftyStructure& s, int d, const Word& inputs);
Report verify_structure(const AInftyStructure& s, int maxd);

struct AInftyMorphism {
  AInftyStructure source;
  AInftyStructure target;
  int maxd = 1;
  // deg(f_k output) must equal sum(deg inputs) + 1 - k.
  std::map<int, std::map<Word, ZChain>> maps;

  void set_map(int k, const Word& in, ZChain out);
  ZChain apply(int k, const Word& in) const;
  ZChain apply_lin(int k, const std::vector<ZChain>& in) const;

  static AInftyMorphism identity(const AInftyStructure& s);
};

Report verify_morphism(const AInftyMorphism& f, int maxd, Convention rhs_convention);

// Quasi-isomorphism check for f_1: induced map on homology is an iso over Q
// (rank argument) -- used by the continuation verifier.
bool f1_quasi_iso(const AInftyMorphism& f);

// Bar differential induced by the operations (applied to one element).
BarElement bar_differential(const AInftyStructure& s, const BarElement& x);
// Coalgebra morphism on the bar construction induced by morphism components.
BarElement bar_morphism(const AInftyMorphism& f, const BarElement& x);
// (F - G - D'H + HD)(word) for an (F,G)-coderivation H given by components.
BarElement homotopy_defect(const AInftyMorphism& f, const AInftyMorphism& g,
                           const std::map<int, std::map<Word, ZChain>>& h_components,
                           const Word& word);

struct HomologyEntry {
  Deg degree = 0;
  long long betti = 0;
  std::vector<Int> torsion;
};
// Integral homology of (A, m_1); requires m_1 . m_1 = 0 (NotAComplex).
std::vector<HomologyEntry> homology(const AInftyStructure& s);

// m_i -> (-1)^{i(i-1)/2} m_i ; toggles the convention tag.
AInftyStructure convert_convention(const AInftyStructure& s);

// Basis sign flip x_i -> eps_i x_i (eps = +-1); preserves validity exactly.
AInftyStructure flip_basis_signs(const AInftyStructure& s, const std::vector<int>& eps);

struct MasseyResult {
  ZChain representative;
  std::vector<ZChain> indeterminacy;  // generators of the indeterminacy submodule
};
MasseyResult massey3(const AInftyStructure& s, GenId a, GenId b, GenId c);

nlohmann::ordered_json to_json(const AInftyStructure& s);
AInftyStructure structure_from_json(const nlohmann::json& j);

}  // namespace ma::ainfty
