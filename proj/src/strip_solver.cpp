#include "vorwave/strip_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "vorwave/errors.hpp"
#include "vorwave/laminar.hpp"

namespace vorwave {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Discrete operator for one HeightField configuration. Rows and columns share
// the numbering of unknown nodes (i, j >= 1); Q and the constraint take the last slot.
class StripSystem {
 public:
  explicit StripSystem(const HeightField& hf) : hf_(hf), grid_(hf.grid) {
    const int Np = grid_.Np;
    gam_.resize(Np + 1);
    dp_.resize(Np + 1);
    d2p_.resize(Np + 1);
    for (int j = 0; j <= Np; ++j) {
      gam_[j] = hf.vf.gamma(-grid_.p(j));
      dp_[j] = grid_.dp(j);
      d2p_[j] = grid_.d2p(j);
    }
  }

  int n_h() const { return (grid_.Nq + 1) * grid_.Np; }
  int size() const { return n_h() + 1; }
  int col(int i, int j) const { return i * grid_.Np + (j - 1); }
  int reflect(int i) const {
    if (i < 0) return -i;
    if (i > grid_.Nq) return 2 * grid_.Nq - i;
    return i;
  }

  // F(x) and optionally its Jacobian
  std::vector<double> evaluate(const std::vector<double>& x, const Constraint& c,
                               std::vector<Triplet>* jac) const {
    const int Nq = grid_.Nq, Np = grid_.Np;
    const double dq = grid_.dq(), dz = grid_.dzeta();
    const double Q = x[n_h()];
    auto H = [&](int i, int j) { return j == 0 ? 0.0 : x[col(reflect(i), j)]; };
    std::vector<double> F(size(), 0.0);

    for (int i = 0; i <= Nq; ++i) {
      for (int j = 1; j < Np; ++j) {
        const int row = col(i, j);
        auto emit = [&](int ii, int jj, double w) {
          if (jac && jj > 0) jac->emplace_back(row, col(reflect(ii), jj), w);
        };
        const double hq = (H(i + 1, j) - H(i - 1, j)) / (2 * dq);
        const double hqq = (H(i + 1, j) - 2 * H(i, j) + H(i - 1, j)) / (dq * dq);
        const double hz = (H(i, j + 1) - H(i, j - 1)) / (2 * dz);
        const double hzz = (H(i, j + 1) - 2 * H(i, j) + H(i, j - 1)) / (dz * dz);
        const double hqz =
            (H(i + 1, j + 1) - H(i + 1, j - 1) - H(i - 1, j + 1) + H(i - 1, j - 1)) / (4 * dq * dz);
        const double a = dp_[j], b = d2p_[j], gm = gam_[j];
        const double hp = hz / a, hpp = (hzz - (b / a) * hz) / (a * a), hqp = hqz / a;
        F[row] = (1 + hq * hq) * hpp - 2 * hq * hp * hqp + hp * hp * hqq + gm * hp * hp * hp;
        if (!jac) continue;
        const double Rq = 2 * hq * hpp - 2 * hp * hqp;
        const double Rp = -2 * hq * hqp + 2 * hp * hqq + 3 * gm * hp * hp;
        const double Rpp = 1 + hq * hq, Rqp = -2 * hq * hp, Rqq = hp * hp;
        const double Rz = Rp / a - Rpp * b / (a * a * a);
        const double Rzz = Rpp / (a * a), Rqz = Rqp / a;
        emit(i + 1, j, Rq / (2 * dq) + Rqq / (dq * dq));
        emit(i - 1, j, -Rq / (2 * dq) + Rqq / (dq * dq));
        emit(i, j, -2 * Rqq / (dq * dq) - 2 * Rzz / (dz * dz));
        emit(i, j + 1, Rz / (2 * dz) + Rzz / (dz * dz));
        emit(i, j - 1, -Rz / (2 * dz) + Rzz / (dz * dz));
        const double wx = Rqz / (4 * dq * dz);
        emit(i + 1, j + 1, wx);
        emit(i + 1, j - 1, -wx);
        emit(i - 1, j + 1, -wx);
        emit(i - 1, j - 1, wx);
      }
      // Bernoulli on the surface
      const int j = Np, row = col(i, j);
      const double hq = (H(i + 1, j) - H(i - 1, j)) / (2 * dq);
      double hz = 0.0;
      for (int k = 0; k < 6; ++k) hz -= kEdgeWeights[k] * H(i, j - k);
      hz /= dz;
      const double a = dp_[j], hp = hz / a;
      F[row] = (1 + hq * hq) / (2 * hp * hp) + hf_.g * H(i, j) - Q;
      if (jac) {
        const double Sq = hq / (hp * hp);
        const double Sz = -(1 + hq * hq) / (hp * hp * hp) / a;
        jac->emplace_back(row, col(reflect(i + 1), j), Sq / (2 * dq));
        jac->emplace_back(row, col(reflect(i - 1), j), -Sq / (2 * dq));
        jac->emplace_back(row, col(i, j), hf_.g);
        for (int k = 0; k < 6; ++k)
          if (j - k > 0) jac->emplace_back(row, col(i, j - k), -kEdgeWeights[k] * Sz / dz);
        jac->emplace_back(row, n_h(), -1.0);
      }
    }

    const int crow = n_h();
    switch (c.kind) {
      case ConstraintKind::fixed_Q:
        F[crow] = Q - c.value;
        if (jac) jac->emplace_back(crow, n_h(), 1.0);
        break;
      case ConstraintKind::fixed_amplitude:
        F[crow] = x[col(0, Np)] - x[col(Nq, Np)] - c.value;
        if (jac) {
          jac->emplace_back(crow, col(0, Np), 1.0);
          jac->emplace_back(crow, col(Nq, Np), -1.0);
        }
        break;
      case ConstraintKind::arclength: {
        const auto w = arclength_weights(grid_);
        double acc = 0.0;
        for (int k = 0; k < size(); ++k) {
          acc += w[k] * c.tangent[k] * (x[k] - c.base[k]);
          if (jac && c.tangent[k] != 0.0) jac->emplace_back(crow, k, w[k] * c.tangent[k]);
        }
        F[crow] = acc - c.value;
        break;
      }
    }
    return F;
  }

 private:
  const HeightField& hf_;
  const StripGrid& grid_;
  std::vector<double> gam_, dp_, d2p_;
};

double max_abs(const std::vector<double>& v) {
  double r = 0.0;
  for (double a : v) r = std::max(r, std::abs(a));
  return r;
}

double min_hp(const HeightField& hf) {
  const auto hp = height_p(hf);
  double r = HUGE_VAL;
  for (double a : hp) r = std::min(r, std::isfinite(a) ? a : -HUGE_VAL);
  return r;
}

void check_constraint(const HeightField& hf, const Constraint& c) {
  if (c.kind == ConstraintKind::arclength) {
    const std::size_t n = static_cast<std::size_t>((hf.grid.Nq + 1) * hf.grid.Np + 1);
    if (c.base.size() != n || c.tangent.size() != n)
      throw PreconditionError("arclength constraint: base/tangent size mismatch");
  }
}

}  // namespace

HeightField make_height_field(const StripGrid& grid, const VorticityFunction& vf, double g) {
  grid.validate();
  if (std::abs(vf.m() - grid.m) > 1e-12 * grid.m)
    throw DomainError("height field: vorticity flux m differs from grid m");
  HeightField hf;
  hf.grid = grid;
  hf.vf = vf;
  hf.g = g;
  hf.h.assign(grid.nodes(), 0.0);
  return hf;
}

std::vector<double> height_p(const HeightField& hf) {
  const auto& gr = hf.grid;
  const int Np = gr.Np;
  const double dz = gr.dzeta();
  std::vector<double> out(gr.nodes());
  for (int i = 0; i <= gr.Nq; ++i) {
    for (int j = 0; j <= Np; ++j) {
      double hz = 0.0;
      if (j == 0) {
        for (int k = 0; k < 6; ++k) hz += kEdgeWeights[k] * hf.at(i, k);
        hz /= dz;
      } else if (j == Np) {
        for (int k = 0; k < 6; ++k) hz -= kEdgeWeights[k] * hf.at(i, Np - k);
        hz /= dz;
      } else {
        hz = (hf.at(i, j + 1) - hf.at(i, j - 1)) / (2 * dz);
      }
      out[gr.index(i, j)] = hz / gr.dp(j);
    }
  }
  return out;
}

std::vector<double> relative_speed_u(const HeightField& hf) {
  auto u = height_p(hf);
  for (double& a : u) a = -1.0 / a;
  return u;
}

std::vector<double> pack_unknowns(const HeightField& hf) {
  const auto& gr = hf.grid;
  std::vector<double> x((gr.Nq + 1) * gr.Np + 1);
  for (int i = 0; i <= gr.Nq; ++i)
    for (int j = 1; j <= gr.Np; ++j) x[i * gr.Np + j - 1] = hf.at(i, j);
  x.back() = hf.Q;
  return x;
}

void unpack_unknowns(const std::vector<double>& x, HeightField& hf) {
  const auto& gr = hf.grid;
  for (int i = 0; i <= gr.Nq; ++i) {
    hf.at(i, 0) = 0.0;
    for (int j = 1; j <= gr.Np; ++j) hf.at(i, j) = x[i * gr.Np + j - 1];
  }
  hf.Q = x.back();
}

std::vector<double> arclength_weights(const StripGrid& grid) {
  const int n_h = (grid.Nq + 1) * grid.Np;
  std::vector<double> w(n_h + 1, 1.0 / n_h);
  w.back() = 1e-2;
  return w;
}

std::vector<double> residual(const HeightField& hf) {
  if (min_hp(hf) <= 0.0) throw StagnationError("residual: h_p <= 0 (u >= 0) somewhere on the grid");
  StripSystem sys(hf);
  Constraint none;
  none.value = hf.Q;
  const auto F = sys.evaluate(pack_unknowns(hf), none, nullptr);
  const auto& gr = hf.grid;
  std::vector<double> out(gr.nodes(), 0.0);
  for (int i = 0; i <= gr.Nq; ++i) {
    out[gr.index(i, 0)] = hf.at(i, 0);
    for (int j = 1; j <= gr.Np; ++j) out[gr.index(i, j)] = F[sys.col(i, j)];
  }
  return out;
}

std::vector<double> system_residual(const HeightField& hf, const Constraint& c) {
  check_constraint(hf, c);
  StripSystem sys(hf);
  return sys.evaluate(pack_unknowns(hf), c, nullptr);
}

std::vector<std::vector<double>> dense_jacobian(const HeightField& hf, const Constraint& c) {
  check_constraint(hf, c);
  StripSystem sys(hf);
  std::vector<Triplet> trips;
  sys.evaluate(pack_unknowns(hf), c, &trips);
  std::vector<std::vector<double>> J(sys.size(), std::vector<double>(sys.size(), 0.0));
  for (const auto& t : trips) J[t.row()][t.col()] += t.value();
  return J;
}

NewtonResult newton_solve(const HeightField& initial, const Constraint& constraint, const NewtonOptions& opts) {
  check_constraint(initial, constraint);
  if (min_hp(initial) <= 0.0) throw StagnationError("newton: initial field has h_p <= 0");

  NewtonResult res{initial, 0, 0.0};
  HeightField& hf = res.field;
  StripSystem sys(hf);
  std::vector<double> x = pack_unknowns(hf);
  std::vector<double> F = sys.evaluate(x, constraint, nullptr);
  double norm = max_abs(F);
  const double norm0 = norm;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;

  for (int it = 0;; ++it) {
    if (norm < opts.tol_factor * std::max(1.0, std::abs(x.back()))) {
      res.iterations = it;
      res.residual_norm = norm;
      return res;
    }
    if (it >= opts.max_iterations) {
      std::ostringstream os;
      os << "newton: no convergence after " << it << " iterations (residual " << norm << ")";
      throw NoConvergenceError(os.str());
    }
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(sys.size()) * 12);
    sys.evaluate(x, constraint, &trips);
    SpMat J(sys.size(), sys.size());
    J.setFromTriplets(trips.begin(), trips.end());
    J.makeCompressed();
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw NumericError("newton: singular Jacobian");
    Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(F.data(), static_cast<Eigen::Index>(F.size()));
    Eigen::VectorXd dx = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !dx.allFinite()) throw NumericError("newton: linear solve failed");

    double t = 1.0;
    std::vector<double> trial(x.size());
    for (int halving = 0;; ++halving) {
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] + t * dx[static_cast<Eigen::Index>(k)];
      unpack_unknowns(trial, hf);
      if (min_hp(hf) > opts.hp_min) break;
      if (halving >= opts.max_halvings)
        throw StagnationError("newton: h_p floor reached after step halving (approaching stagnation)");
      t *= 0.5;
    }
    x = trial;
    F = sys.evaluate(x, constraint, nullptr);
    norm = max_abs(F);
    if (!std::isfinite(norm) || norm > opts.divergence_factor * std::max(norm0, 1e-300))
      throw NoConvergenceError("newton: iteration diverging");
  }
}

HeightField discrete_laminar(const StripGrid& grid, const VorticityFunction& vf, double g, double lambda) {
  LaminarFlow lam(vf, lambda, g);
  const int Np = grid.Np;
  const double dz = grid.dzeta();
  std::vector<double> s(Np + 1);
  for (int j = 0; j <= Np; ++j) s[j] = grid.p(j);
  const auto H0 = lam.heights(s);

  Eigen::VectorXd H(Np + 1);
  for (int j = 0; j <= Np; ++j) H[j] = H0[j];
  H[0] = 0.0;
  std::vector<double> gam(Np + 1), a(Np + 1), b(Np + 1);
  for (int j = 0; j <= Np; ++j) {
    gam[j] = vf.gamma(-grid.p(j));
    a[j] = grid.dp(j);
    b[j] = grid.d2p(j);
  }
  const double target = 1.0 / std::sqrt(lambda);
  Eigen::SparseLU<SpMat> lu;
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXd F(Np);
    std::vector<Triplet> trips;
    for (int j = 1; j < Np; ++j) {
      const double hz = (H[j + 1] - H[j - 1]) / (2 * dz), hzz = (H[j + 1] - 2 * H[j] + H[j - 1]) / (dz * dz);
      const double hp = hz / a[j], hpp = (hzz - b[j] / a[j] * hz) / (a[j] * a[j]);
      F[j - 1] = hpp + gam[j] * hp * hp * hp;
      const double Rz = 3 * gam[j] * hp * hp / a[j] - b[j] / (a[j] * a[j] * a[j]);
      const double Rzz = 1.0 / (a[j] * a[j]);
      trips.emplace_back(j - 1, j - 1, -2 * Rzz / (dz * dz));
      if (j + 1 <= Np) trips.emplace_back(j - 1, j, Rzz / (dz * dz) + Rz / (2 * dz));
      if (j - 1 >= 1) trips.emplace_back(j - 1, j - 2, Rzz / (dz * dz) - Rz / (2 * dz));
    }
    double hz = 0.0;
    for (int k = 0; k < 6; ++k) hz -= kEdgeWeights[k] * H[Np - k];
    F[Np - 1] = hz / (dz * a[Np]) - target;
    for (int k = 0; k < 6; ++k)
      if (Np - k >= 1) trips.emplace_back(Np - 1, Np - k - 1, -kEdgeWeights[k] / (dz * a[Np]));
    SpMat J(Np, Np);
    J.setFromTriplets(trips.begin(), trips.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw NumericError("discrete_laminar: singular Jacobian");
    Eigen::VectorXd dH = lu.solve(-F);
    H.segment(1, Np) += dH;
    if (!dH.allFinite()) throw NumericError("discrete_laminar: non-finite update");
    // quadratic convergence: an update this small leaves the residual at roundoff
    if (dH.cwiseAbs().maxCoeff() <= 1e-12 * H.cwiseAbs().maxCoeff()) break;
    if (it == 39) throw NoConvergenceError("discrete_laminar: no convergence");
  }

  HeightField hf = make_height_field(grid, vf, g);
  for (int i = 0; i <= grid.Nq; ++i)
    for (int j = 0; j <= Np; ++j) hf.at(i, j) = H[j];
  hf.Q = 0.5 * lambda + g * H[Np];
  return hf;
}

namespace {

Eigen::MatrixXd mode_operator(const HeightField& lam, double lambda) {
  const auto& gr = lam.grid;
  const int Np = gr.Np;
  const double dz = gr.dzeta(), dq = gr.dq();
  const double k = std::numbers::pi / gr.L;
  const double kh2 = (2.0 - 2.0 * std::cos(k * dq)) / (dq * dq);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(Np, Np);
  auto H = [&](int j) { return lam.at(0, j); };
  for (int j = 1; j < Np; ++j) {
    const double a = gr.dp(j), b = gr.d2p(j), gm = lam.vf.gamma(-gr.p(j));
    const double hp = (H(j + 1) - H(j - 1)) / (2 * dz) / a;
    const double c1 = 3 * gm * hp * hp / a - b / (a * a * a);
    const double c2 = 1.0 / (a * a);
    M(j - 1, j - 1) = -2 * c2 / (dz * dz) - kh2 * hp * hp;
    if (j + 1 <= Np) M(j - 1, j) = c2 / (dz * dz) + c1 / (2 * dz);
    if (j - 1 >= 1) M(j - 1, j - 2) = c2 / (dz * dz) - c1 / (2 * dz);
  }
  const double a = gr.dp(Np), inv_hp3 = std::pow(lambda, 1.5);
  M(Np - 1, Np - 1) = lam.g;
  for (int k = 0; k < 6; ++k)
    if (Np - k >= 1) M(Np - 1, Np - k - 1) += inv_hp3 * kEdgeWeights[k] / (dz * a);
  for (int r = 0; r < Np; ++r) {
    const double s = M.row(r).cwiseAbs().maxCoeff();
    if (s > 0) M.row(r) /= s;
  }
  return M;
}

int det_sign(const Eigen::MatrixXd& M) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  int sign = static_cast<int>(std::lround(lu.permutationP().determinant()));
  const auto& U = lu.matrixLU();
  for (Eigen::Index r = 0; r < U.rows(); ++r) {
    if (U(r, r) == 0.0) return 0;
    if (U(r, r) < 0.0) sign = -sign;
  }
  return sign;
}

}  // namespace

int mode_determinant_sign(const StripGrid& grid, const VorticityFunction& vf, double g, double lambda) {
  const auto lam = discrete_laminar(grid, vf, g, lambda);
  return det_sign(mode_operator(lam, lambda));
}

Bifurcation find_bifurcation(const StripGrid& grid, const VorticityFunction& vf, double g, double lambda_lo,
                             double lambda_hi) {
  Bifurcation bif;
  bif.lambda_c = lambda_c(vf, g);
  const double thr = vf.lambda_threshold();
  double hi = std::isnan(lambda_hi) ? bif.lambda_c : lambda_hi;
  double lo = std::isnan(lambda_lo) ? thr : lambda_lo;
  lo = std::max(lo, thr + 1e-9 * std::max(1.0, std::abs(hi)));
  if (!(hi > lo)) throw NotFoundError("find_bifurcation: empty lambda range");

  auto sign_at = [&](double lam) { return mode_determinant_sign(grid, vf, g, lam); };
  const int samples = 400;
  const double step = (hi - lo) / samples;
  double upper = hi;
  int s_upper = sign_at(upper);
  double lower = upper;
  bool found = s_upper == 0;
  for (int k = 1; k <= samples && !found; ++k) {
    lower = hi - k * step;
    if (k == samples) lower = lo;
    const int s = sign_at(lower);
    if (s == 0 || s != s_upper) {
      found = true;
      if (s == 0) upper = lower;
    } else {
      upper = lower;
    }
  }
  if (!found) throw NotFoundError("find_bifurcation: no sign change of the mode determinant in range");

  if (upper != lower) {
    int s_hi = sign_at(upper);
    while (upper - lower > 1e-13 * std::abs(upper)) {
      const double mid = 0.5 * (upper + lower);
      const int s = sign_at(mid);
      if (s == 0) {
        upper = lower = mid;
        break;
      }
      if (s == s_hi)
        upper = mid;
      else
        lower = mid;
    }
  }
  bif.lambda_star = 0.5 * (upper + lower);
  if (!(bif.lambda_star < bif.lambda_c))
    throw PreconditionError("find_bifurcation: bifurcation point is not below lambda_c");

  bif.laminar = discrete_laminar(grid, vf, g, bif.lambda_star);
  Eigen::MatrixXd M = mode_operator(bif.laminar, bif.lambda_star);
  const int Np = grid.Np;
  M.row(Np - 1).setZero();
  M(Np - 1, Np - 1) = 1.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(Np);
  rhs[Np - 1] = 1.0;
  Eigen::VectorXd phi = M.partialPivLu().solve(rhs);
  bif.mode.assign(Np + 1, 0.0);
  for (int j = 1; j <= Np; ++j) bif.mode[j] = phi[j - 1];
  return bif;
}

HeightField seed_from_mode(const Bifurcation& bif, double amplitude) {
  HeightField hf = bif.laminar;
  const auto& gr = hf.grid;
  const double k = std::numbers::pi / gr.L;
  for (int i = 0; i <= gr.Nq; ++i)
    for (int j = 1; j <= gr.Np; ++j) hf.at(i, j) += 0.5 * amplitude * bif.mode[j] * std::cos(k * gr.q(i));
  return hf;
}

double trough_vortex_value(const HeightField& hf) {
  const auto& gr = hf.grid;
  const double dz = gr.dzeta();
  const int i = gr.Nq, N = gr.Np;
  double hz = 0.0;
  for (int k = 0; k < 6; ++k) hz -= kEdgeWeights[k] * hf.at(i, N - k);
  const double hp = hz / dz / gr.dp(N);
  return hf.g - hf.vf.gamma(0.0) * (-1.0 / hp);
}

namespace {

double weighted_norm(const std::vector<double>& a, const std::vector<double>& w) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += w[k] * a[k] * a[k];
  return std::sqrt(acc);
}

BranchPoint make_point(const HeightField& hf, double step, int iterations) {
  BranchPoint bp;
  bp.field = hf;
  bp.Q = hf.Q;
  bp.amplitude = hf.amplitude();
  bp.step = step;
  bp.newton_iterations = iterations;
  const auto u = relative_speed_u(hf);
  bp.max_u = *std::max_element(u.begin(), u.end());
  bp.trough_value = trough_vortex_value(hf);
  return bp;
}

}  // namespace

Branch continue_branch(const StripGrid& grid, const VorticityFunction& vf, double g,
                       const ContinuationOptions& opts) {
  Branch br;
  const Bifurcation bif = find_bifurcation(grid, vf, g);
  br.lambda_star = bif.lambda_star;
  br.lambda_c = bif.lambda_c;
  br.eps_stag = std::isnan(opts.eps_stag) ? 0.05 * std::sqrt(bif.lambda_star) : opts.eps_stag;
  br.points.push_back(make_point(bif.laminar, 0.0, 0));
  if (opts.steps <= 0) {
    br.stop_reason = "max_steps";
    return br;
  }

  const double band = 1e-9 * g;
  // returns true if the point is accepted; sets stop_reason when continuation ends
  auto screen = [&](const BranchPoint& bp) -> bool {
    if (bp.amplitude <= br.points.back().amplitude) {
      br.stop_reason = "amplitude_turning";
      return false;
    }
    if (bp.max_u >= -br.eps_stag) {
      br.stop_reason = "near_stagnation";
      return false;
    }
    br.points.push_back(bp);
    if (bp.trough_value <= opts.trough_margin + band) {
      br.stop_reason = "trough_margin";
      return true;
    }
    if (static_cast<int>(br.points.size()) - 1 >= opts.steps) br.stop_reason = "max_steps";
    return true;
  };

  NewtonOptions nopt;
  nopt.max_iterations = opts.newton_max_iterations;
  nopt.divergence_factor = 1e4;

  // start: fixed amplitude along the bifurcating mode
  double a0 = opts.ds0;
  NewtonResult first;
  bool ok = false;
  for (int halving = 0; halving <= opts.max_halvings && !ok; ++halving) {
    try {
      Constraint c{ConstraintKind::fixed_amplitude, a0, {}, {}};
      first = newton_solve(seed_from_mode(bif, a0), c, nopt);
      ok = true;
    } catch (const NumericError&) {
      a0 *= 0.5;
    } catch (const StagnationError&) {
      a0 *= 0.5;
    }
  }
  if (!ok) {
    br.stop_reason = "newton_failure";
    return br;
  }
  const auto w = arclength_weights(grid);
  std::vector<double> x_prev = pack_unknowns(bif.laminar);
  std::vector<double> x_cur = pack_unknowns(first.field);
  std::vector<double> diff(x_cur.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = x_cur[k] - x_prev[k];
  const double first_step = weighted_norm(diff, w);
  // step lengths are specified in amplitude units
  const double per_amplitude = first_step / a0;
  const double ds_max = opts.ds_max * per_amplitude;
  double s_total = first_step;
  first.field.arclength = s_total;
  if (!screen(make_point(first.field, first_step, first.iterations)) || !br.stop_reason.empty()) return br;

  double ds = std::min(first_step, ds_max);
  while (br.stop_reason.empty()) {
    std::vector<double> tangent(x_cur.size());
    for (std::size_t k = 0; k < tangent.size(); ++k) tangent[k] = (x_cur[k] - x_prev[k]);
    const double tn = weighted_norm(tangent, w);
    for (double& t : tangent) t /= tn;

    bool solved = false;
    NewtonResult nr;
    for (int halving = 0; halving <= opts.max_halvings; ++halving) {
      HeightField guess = br.points.back().field;
      std::vector<double> xp(x_cur.size());
      for (std::size_t k = 0; k < xp.size(); ++k) xp[k] = x_cur[k] + ds * tangent[k];
      unpack_unknowns(xp, guess);
      try {
        Constraint c{ConstraintKind::arclength, ds, x_cur, tangent};
        nr = newton_solve(guess, c, nopt);
        solved = true;
        break;
      } catch (const NumericError&) {
      } catch (const StagnationError&) {
      }
      ds *= 0.5;
    }
    if (!solved) {
      br.stop_reason = "newton_failure";
      break;
    }
    s_total += ds;
    nr.field.arclength = s_total;
    if (!screen(make_point(nr.field, ds, nr.iterations))) break;
    x_prev = x_cur;
    x_cur = pack_unknowns(nr.field);
    if (nr.iterations <= opts.fast_iterations) ds = std::min(ds * opts.growth, ds_max);
  }
  return br;
}

}  // namespace vorwave
