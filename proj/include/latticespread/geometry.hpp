#pragma once

#include <array>

#include "latticespread/numeric.hpp"

namespace latticespread {

// Finite Bravais lattice with open boundaries. Sites are indexed row-major,
// site = iy * n_x + ix; positions are measured from origin_site so a centered
// chain of odd length puts x = 0 on the middle site.
struct LatticeGeometry {
  int dimension = 1;  // 1 or 2
  int n_x = 1;
  int n_y = 1;  // forced to 1 for chains
  double a_x = 1.0;
  double a_y = 1.0;
  int origin_site = 0;

  static LatticeGeometry chain(int n, double a = 1.0) {
    LatticeGeometry g;
    g.dimension = 1;
    g.n_x = n;
    g.n_y = 1;
    g.a_x = a;
    g.a_y = a;
    g.origin_site = (n - 1) / 2;
    g.validate();
    return g;
  }

  static LatticeGeometry square(int n_x, int n_y, double a_x = 1.0, double a_y = 1.0) {
    LatticeGeometry g;
    g.dimension = 2;
    g.n_x = n_x;
    g.n_y = n_y;
    g.a_x = a_x;
    g.a_y = a_y;
    g.origin_site = (n_y / 2) * n_x + n_x / 2;
    g.validate();
    return g;
  }

  void validate() const {
    require(dimension == 1 || dimension == 2, "geometry", "dimension must be 1 or 2");
    require(n_x >= 1 && n_y >= 1, "geometry", "lattice extents must be positive");
    require(dimension == 2 || n_y == 1, "geometry", "chains must have n_y == 1");
    require(a_x > 0.0 && a_y > 0.0, "geometry", "lattice spacings must be positive");
    require(origin_site >= 0 && origin_site < size(), "geometry", "origin_site out of range");
  }

  int size() const { return n_x * n_y; }

  int index_x(int site) const { return site % n_x; }
  int index_y(int site) const { return site / n_x; }
  int site_at(int ix, int iy) const { return iy * n_x + ix; }

  bool contains(int site) const { return site >= 0 && site < size(); }

  // Cartesian position of a site relative to origin_site.
  std::array<double, 2> position(int site) const {
    require(contains(site), "geometry", "site index out of range");
    const int ox = index_x(origin_site);
    const int oy = index_y(origin_site);
    return {(index_x(site) - ox) * a_x, (index_y(site) - oy) * a_y};
  }
};

}  // namespace latticespread
