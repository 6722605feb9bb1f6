#include <doctest.h>

#include "latticespread/coupling.hpp"
#include "latticespread/geometry.hpp"

using namespace latticespread;

TEST_CASE("chain positions center on the middle site") {
  const auto g3 = LatticeGeometry::chain(3);
  CHECK(g3.position(0)[0] == -1.0);
  CHECK(g3.position(1)[0] == 0.0);
  CHECK(g3.position(2)[0] == 1.0);
  CHECK(g3.position(0)[1] == 0.0);

  const auto g = LatticeGeometry::chain(751);
  CHECK(g.origin_site == 375);
  CHECK(g.position(375)[0] == 0.0);
  CHECK(g.position(0)[0] == -375.0);
  CHECK(g.position(750)[0] == 375.0);
}

TEST_CASE("positions are antisymmetric about the origin site") {
  const auto g = LatticeGeometry::square(9, 7, 0.4, 0.8);
  const int n = g.size();
  for (int s = 0; s < n; ++s) {
    const int mirror = n - 1 - s;  // center site maps index s -> n-1-s
    const auto p = g.position(s);
    const auto q = g.position(mirror);
    CHECK(p[0] == doctest::Approx(-q[0]));
    CHECK(p[1] == doctest::Approx(-q[1]));
  }
}

TEST_CASE("row-major indexing round trips") {
  const auto g = LatticeGeometry::square(5, 4);
  for (int iy = 0; iy < 4; ++iy)
    for (int ix = 0; ix < 5; ++ix) {
      const int s = g.site_at(ix, iy);
      CHECK(g.index_x(s) == ix);
      CHECK(g.index_y(s) == iy);
    }
  CHECK(g.site_at(2, 2) == 12);
}

TEST_CASE("geometry validation rejects bad input") {
  LatticeGeometry g;
  g.dimension = 3;
  CHECK_THROWS_AS(g.validate(), Error);
  g.dimension = 1;
  g.n_x = 0;
  CHECK_THROWS_AS(g.validate(), Error);
  g.n_x = 5;
  g.n_y = 2;  // chain with n_y != 1
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("coupling model validation and units") {
  CHECK_THROWS_AS(CouplingModel(PowerLawCoupling{-1.0}), Error);
  CHECK_THROWS_AS(CouplingModel(WaveguideCoupling{0.0}), Error);

  const CouplingModel pl(PowerLawCoupling{2.0});
  CHECK(pl.is_hermitian());
  CHECK(pl.energy_unit() == "1/t0 (t0 = a^alpha)");

  FreeSpaceCoupling fs;
  fs.polarization = Eigen::Vector3cd(3.0, 0.0, 0.0);  // normalized on construction
  const CouplingModel m(fs);
  CHECK(!m.is_hermitian());
  CHECK(m.free_space().polarization.norm() == doctest::Approx(1.0));
  CHECK(m.energy_unit() == "gamma_a");

  FreeSpaceCoupling zero;
  zero.polarization.setZero();
  CHECK_THROWS_AS(CouplingModel{zero}, Error);
}
