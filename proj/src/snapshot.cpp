#include "latticespread/snapshot.hpp"

#include <cmath>

namespace latticespread {

SectionProfile cross_section(const WaveformSnapshot& snap, const LatticeGeometry& geom,
                             SectionKind kind) {
  require(snap.amplitudes.size() == geom.size(), "section", "snapshot/geometry mismatch");
  SectionProfile p;
  p.kind = kind;
  p.time = snap.time;

  const int ox = geom.index_x(geom.origin_site);
  const int oy = geom.index_y(geom.origin_site);

  auto push = [&](int site, double coord) {
    p.sites.push_back(site);
    p.coordinate.push_back(coord);
    p.probability.push_back(std::norm(snap.amplitudes[site]));
  };

  switch (kind) {
    case SectionKind::Row:
      for (int ix = 0; ix < geom.n_x; ++ix)
        push(geom.site_at(ix, oy), (ix - ox) * geom.a_x);
      break;
    case SectionKind::Column:
      require(geom.dimension == 2, "section", "column cut needs a 2D lattice");
      for (int iy = 0; iy < geom.n_y; ++iy)
        push(geom.site_at(ox, iy), (iy - oy) * geom.a_y);
      break;
    case SectionKind::DiagonalMain:
    case SectionKind::DiagonalAnti: {
      require(geom.dimension == 2 && geom.n_x == geom.n_y, "section",
              "diagonal cut needs a square lattice");
      const bool main_diag = (kind == SectionKind::DiagonalMain);
      require(main_diag ? (ox == oy) : (oy == geom.n_y - 1 - ox), "section",
              "diagonal cut must pass through the origin site");
      const double step = std::hypot(geom.a_x, geom.a_y);
      for (int t = 0; t < geom.n_x; ++t) {
        const int ix = t;
        const int iy = main_diag ? t : geom.n_y - 1 - t;
        push(geom.site_at(ix, iy), (t - ox) * step);
      }
      break;
    }
    case SectionKind::Radial: {
      require(geom.dimension == 2, "section", "radial profile needs a 2D lattice");
      const double rmax = std::hypot(std::max(ox, geom.n_x - 1 - ox) * geom.a_x,
                                     std::max(oy, geom.n_y - 1 - oy) * geom.a_y);
      const int nbins = static_cast<int>(std::floor(rmax)) + 1;
      std::vector<double> acc(nbins, 0.0);
      std::vector<int> cnt(nbins, 0);
      for (int s = 0; s < geom.size(); ++s) {
        const auto pos = geom.position(s);
        const int b = std::min(nbins - 1,
                               static_cast<int>(std::floor(std::hypot(pos[0], pos[1]))));
        acc[b] += std::norm(snap.amplitudes[s]);
        ++cnt[b];
      }
      for (int b = 0; b < nbins; ++b) {
        if (cnt[b] == 0) continue;
        p.coordinate.push_back(b + 0.5);
        p.probability.push_back(acc[b] / cnt[b]);
      }
      break;
    }
  }
  return p;
}

}  // namespace latticespread
