#pragma once

#include <cmath>
#include <numbers>

#include "vorwave/errors.hpp"

namespace vorwave {

// One-sided first-derivative weights on offsets 0..5 from an edge. Their error
// expansion matches the 3-point central difference through fifth order, so the
// truncation error stays smooth across the edge row.
inline constexpr double kEdgeWeights[6] = {-3.0, 8.0, -10.0, 7.5, -3.0, 0.5};

// Half-period strip [0,L] x [-m,0] in (q,p). Nq, Np count intervals, so there
// are (Nq+1) x (Np+1) nodes. p is a stretched image of uniform zeta in [0,1]:
//   p(zeta) = -m + m[(1-beta) zeta + beta sin(pi zeta / 2)]
// which clusters rows toward the surface for beta in (0,1).
struct StripGrid {
  int Nq = 64;
  int Np = 48;
  double L = std::numbers::pi;
  double m = 1.0;
  double stretch = 0.0;

  StripGrid() = default;
  StripGrid(int nq, int np, double l, double flux, double beta)
      : Nq(nq), Np(np), L(l), m(flux), stretch(beta) {
    validate();
  }

  void validate() const {
    if (Nq < 4 || Np < 5) throw DomainError("grid: need Nq >= 4 and Np >= 5 intervals");
    if (!(L > 0.0) || !(m > 0.0)) throw DomainError("grid: L and m must be positive");
    if (!(stretch >= 0.0 && stretch < 1.0)) throw DomainError("grid: stretch must lie in [0,1)");
  }

  int nodes() const { return (Nq + 1) * (Np + 1); }
  // q-major, p fastest
  int index(int i, int j) const { return i * (Np + 1) + j; }

  double dq() const { return L / Nq; }
  double dzeta() const { return 1.0 / Np; }
  double q(int i) const { return L * i / Nq; }
  double zeta(int j) const { return static_cast<double>(j) / Np; }

  double p(int j) const {
    if (j == Np) return 0.0;
    if (j == 0) return -m;
    const double z = zeta(j);
    return -m + m * ((1.0 - stretch) * z + stretch * std::sin(0.5 * std::numbers::pi * z));
  }
  // dp/dzeta and d2p/dzeta2
  double dp(int j) const {
    return m * ((1.0 - stretch) + stretch * 0.5 * std::numbers::pi * std::cos(0.5 * std::numbers::pi * zeta(j)));
  }
  double d2p(int j) const {
    const double k = 0.5 * std::numbers::pi;
    return -m * stretch * k * k * std::sin(k * zeta(j));
  }
};

}  // namespace vorwave
