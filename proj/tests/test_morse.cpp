#include <doctest.h>

#include <nlohmann/json.hpp>

#include "ma/morse.hpp"

using namespace ma;
using namespace ma::morse;

namespace {

MorseComplexData interval_data() {
  // f on [0,1] with one interior minimum, both endpoints Dirichlet of index 0
  MorseComplexData d;
  d.n = 1;
  d.points.push_back({"m", Locus::Interior, Flavor::None, 0});
  d.points.push_back({"a", Locus::Boundary, Flavor::Dirichlet, 0});
  d.points.push_back({"b", Locus::Boundary, Flavor::Dirichlet, 0});
  d.connections[{"m", "a"}] = 1;    // orbits of the adapted field run m -> a
  d.connections[{"m", "b"}] = -1;
  return d;
}

MorseComplexData interval_minus_data() {
  // -f: interior maximum, endpoints Neumann of index 0
  MorseComplexData d;
  d.n = 1;
  d.points.push_back({"m", Locus::Interior, Flavor::None, 1});
  d.points.push_back({"a", Locus::Boundary, Flavor::Neumann, 0});
  d.points.push_back({"b", Locus::Boundary, Flavor::Neumann, 0});
  d.connections[{"m", "a"}] = 1;
  d.connections[{"m", "b"}] = -1;
  return d;
}

}  // namespace

TEST_CASE("interval Dirichlet complex: C_0 = {m}, C_1 = {a,b}, H = (0, Z)") {
  auto c = build_complex(interval_data(), Variant::D);
  CHECK(c.rank(0) == 1);
  CHECK(c.rank(1) == 2);
  CHECK(check_d_squared(c));
  auto h = complex_homology(c);
  CHECK(h.betti[0] == 0);
  CHECK(h.betti[1] == 1);
  CHECK(h.torsion[0].empty());
  CHECK(h.torsion[1].empty());
}

TEST_CASE("interval Neumann complex of the same f: only the minimum, H_0 = Z") {
  auto c = build_complex(interval_data(), Variant::N);
  CHECK(c.rank(0) == 1);
  CHECK(c.rank(1) == 0);
  auto h = complex_homology(c);
  CHECK(h.betti[0] == 1);
  CHECK(h.betti[1] == 0);
}

TEST_CASE("torus: four critical points, zero differential") {
  MorseComplexData d;
  d.n = 2;
  d.points.push_back({"min", Locus::Interior, Flavor::None, 0});
  d.points.push_back({"s1", Locus::Interior, Flavor::None, 1});
  d.points.push_back({"s2", Locus::Interior, Flavor::None, 1});
  d.points.push_back({"max", Locus::Interior, Flavor::None, 2});
  auto c = build_complex(d, Variant::N);
  CHECK(check_d_squared(c));
  auto h = complex_homology(c);
  CHECK(h.betti == std::vector<long long>({1, 2, 1}));
}

TEST_CASE("check_d_squared detects a corrupted entry") {
  MorseComplexData d;
  d.n = 2;
  d.points.push_back({"z", Locus::Interior, Flavor::None, 0});
  d.points.push_back({"y", Locus::Interior, Flavor::None, 1});
  d.points.push_back({"x", Locus::Interior, Flavor::None, 2});
  d.connections[{"y", "x"}] = 1;  // d x = y  (D variant counts incoming)
  d.connections[{"z", "y"}] = 1;  // d y = z
  auto c = build_complex(d, Variant::D);
  CHECK(!check_d_squared(c));

  MorseComplexData empty;
  empty.n = 2;
  CHECK(check_d_squared(build_complex(empty, Variant::N)));
}

TEST_CASE("grading violation is rejected") {
  MorseComplexData d;
  d.n = 2;
  d.points.push_back({"z", Locus::Interior, Flavor::None, 0});
  d.points.push_back({"x", Locus::Interior, Flavor::None, 2});
  d.connections[{"z", "x"}] = 1;  // degrees 0 and 2: not adjacent
  CHECK_THROWS_AS((void)build_complex(d, Variant::D), ma::Error);
}

TEST_CASE("duality interval: ranks match and differentials transpose") {
  auto rep = duality_check(interval_data(), interval_minus_data());
  CHECK(rep.ok);
}

TEST_CASE("duality on a closed torus is the Poincare rank flip") {
  MorseComplexData d;
  d.n = 2;
  d.points.push_back({"min", Locus::Interior, Flavor::None, 0});
  d.points.push_back({"s1", Locus::Interior, Flavor::None, 1});
  d.points.push_back({"s2", Locus::Interior, Flavor::None, 1});
  d.points.push_back({"max", Locus::Interior, Flavor::None, 2});
  MorseComplexData dm;
  dm.n = 2;
  dm.points.push_back({"min", Locus::Interior, Flavor::None, 2});
  dm.points.push_back({"s1", Locus::Interior, Flavor::None, 1});
  dm.points.push_back({"s2", Locus::Interior, Flavor::None, 1});
  dm.points.push_back({"max", Locus::Interior, Flavor::None, 0});
  CHECK(duality_check(d, dm).ok);
}

TEST_CASE("malformed flavor swap is reported") {
  auto bad = interval_minus_data();
  for (auto& p : bad.points)
    if (p.locus == Locus::Boundary) p.flavor = Flavor::Dirichlet;
  auto rep = duality_check(interval_data(), bad);
  CHECK(!rep.ok);
  CHECK(!rep.mismatches.empty());
}

TEST_CASE("as_ainfty carries the differential in cohomological grading") {
  auto c = build_complex(interval_data(), Variant::D);
  auto s = as_ainfty(c);
  CHECK(verify_structure(s, 1).ok);
  // |a| = n - k = 0 for the endpoints, |m| = 1
  CHECK(s.basis.degree(s.basis.id("a")) == 0);
  CHECK(s.basis.degree(s.basis.id("m")) == 1);
  auto da = s.apply(1, {s.basis.id("a")});
  REQUIRE(da.size() == 1);
  CHECK(da.at(s.basis.id("m")) == 1);
}

TEST_CASE("morse data json round trip") {
  auto d = interval_data();
  auto j = data_to_json(d);
  auto d2 = data_from_json(nlohmann::json::parse(j.dump()));
  CHECK(d2.n == d.n);
  CHECK(d2.points.size() == d.points.size());
  CHECK(d2.connections == d.connections);
}
