#include "vorwave/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vorwave/errors.hpp"

namespace vorwave {

LogicalGrid::LogicalGrid(int n1, int n2, double h1, double h2)
    : n1_(n1), n2_(n2), h1_(h1), h2_(h2) {
  if (n1 < 2 || n2 < 5) throw DomainError("logical grid: need N1 >= 2 and N2 >= 5");
  if (!(h1 > 0.0) || !(h2 > 0.0)) throw DomainError("logical grid: spacings must be positive");
}

std::vector<double> LogicalGrid::d1(const std::vector<double>& f, Parity parity) const {
  std::vector<double> out(f.size());
  const double s = 0.5 / h1_;
  for (int j = 0; j <= n2_; ++j) {
    for (int i = 0; i <= n1_; ++i) {
      double lo, hi;
      if (i == 0) {
        hi = f[index(1, j)];
        lo = parity == Parity::even ? hi : 2.0 * f[index(0, j)] - hi;
      } else if (i == n1_) {
        lo = f[index(n1_ - 1, j)];
        hi = parity == Parity::even ? lo : 2.0 * f[index(n1_, j)] - lo;
      } else {
        lo = f[index(i - 1, j)];
        hi = f[index(i + 1, j)];
      }
      out[index(i, j)] = s * (hi - lo);
    }
  }
  return out;
}

std::vector<double> LogicalGrid::d2(const std::vector<double>& f) const {
  std::vector<double> out(f.size());
  const double s = 0.5 / h2_;
  for (int i = 0; i <= n1_; ++i) {
    const double* col = f.data() + index(i, 0);
    double* o = out.data() + index(i, 0);
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < 6; ++k) {
      lo += kEdgeWeights[k] * col[k];
      hi -= kEdgeWeights[k] * col[n2_ - k];
    }
    o[0] = lo / h2_;
    o[n2_] = hi / h2_;
    for (int j = 1; j < n2_; ++j) o[j] = s * (col[j + 1] - col[j - 1]);
  }
  return out;
}

std::vector<double> WaveField::dx(const std::vector<double>& f, Parity parity) const {
  const auto f1 = grid.d1(f, parity);
  const auto f2 = grid.d2(f);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = (y2[k] * f1[k] - y1[k] * f2[k]) / jac[k];
  return out;
}

std::vector<double> WaveField::dy(const std::vector<double>& f, Parity parity) const {
  const auto f1 = grid.d1(f, parity);
  const auto f2 = grid.d2(f);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = (x1[k] * f2[k] - x2[k] * f1[k]) / jac[k];
  return out;
}

std::vector<double> WaveField::surface_dx(const std::vector<double>& f, Parity parity) const {
  const int n = grid.N1();
  const double h = grid.h1();
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) {
    double lo, hi;
    if (i == 0) {
      hi = f[1];
      lo = parity == Parity::even ? hi : 2.0 * f[0] - hi;
    } else if (i == n) {
      lo = f[n - 1];
      hi = parity == Parity::even ? lo : 2.0 * f[n] - lo;
    } else {
      lo = f[i - 1];
      hi = f[i + 1];
    }
    out[i] = (hi - lo) / (2.0 * h * x1[surface(i)]);
  }
  return out;
}

void WaveField::derive() {
  const int n = nodes();
  jac.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    jac[k] = x1[k] * y2[k] - x2[k] * y1[k];
    if (!(jac[k] > 0.0)) throw NumericError("wave field: degenerate coordinate map");
  }
  ux = dx(u, Parity::even);
  uy = dy(u, Parity::even);
  vx = dx(v, Parity::odd);
  vy = dy(v, Parity::odd);
  uxx = dx(ux, Parity::odd);
  uxy = dy(ux, Parity::odd);
  omega.assign(n, 0.0);
  for (int k = 0; k < n; ++k) omega[k] = vx[k] - uy[k];
}

WaveField reconstruct(const HeightField& hf) {
  const StripGrid& sg = hf.grid;
  sg.validate();
  const int nq = sg.Nq, np = sg.Np;
  WaveField wf;
  wf.grid = LogicalGrid(nq, np, sg.dq(), sg.dzeta());
  wf.has_bed = true;
  wf.g = hf.g;
  wf.Q = hf.Q;
  wf.L = sg.L;
  wf.m = sg.m;

  // zero-mean surface fixes d
  double mean = 0.0;
  for (int i = 0; i <= nq; ++i) mean += (i == 0 || i == nq ? 0.5 : 1.0) * hf.at(i, np);
  wf.d = mean / nq;

  const int n = sg.nodes();
  wf.c1.resize(n);
  wf.c2.resize(n);
  wf.x.resize(n);
  wf.y.resize(n);
  for (int i = 0; i <= nq; ++i) {
    for (int j = 0; j <= np; ++j) {
      const int k = sg.index(i, j);
      wf.c1[k] = sg.q(i);
      wf.c2[k] = sg.p(j);
      wf.x[k] = sg.q(i);
      wf.y[k] = hf.h[k] - wf.d;
    }
  }
  wf.x1.assign(n, 1.0);
  wf.x2.assign(n, 0.0);
  wf.y1 = wf.grid.d1(hf.h, Parity::even);
  wf.y2 = wf.grid.d2(hf.h);

  const VorticityFunction& vf = hf.vf;
  const auto hp = height_p(hf);
  wf.u.resize(n);
  wf.v.resize(n);
  wf.P.resize(n);
  wf.psi.resize(n);
  wf.gam.resize(n);
  wf.dgam.resize(n);
  wf.d2gam.resize(n);
  wf.Gam.resize(n);
  for (int i = 0; i <= nq; ++i) {
    for (int j = 0; j <= np; ++j) {
      const int k = sg.index(i, j);
      if (!(hp[k] > 0.0) || !(wf.y2[k] > 0.0)) throw StagnationError("reconstruct: h_p <= 0 at a node");
      const double psi = std::clamp(-sg.p(j), 0.0, sg.m);
      wf.u[k] = -1.0 / hp[k];
      wf.v[k] = wf.u[k] * wf.y1[k];
      wf.psi[k] = psi;
      wf.gam[k] = vf.gamma(psi, 0);
      wf.dgam[k] = vf.gamma(psi, 1);
      wf.d2gam[k] = vf.gamma(psi, 2);
      wf.Gam[k] = vf.Gamma(-psi);
      wf.P[k] = wf.Q - 0.5 * (wf.u[k] * wf.u[k] + wf.v[k] * wf.v[k]) - wf.g * hf.h[k] + wf.Gam[k];
    }
  }
  wf.derive();

  wf.eta.resize(nq + 1);
  for (int i = 0; i <= nq; ++i) wf.eta[i] = wf.y[sg.index(i, np)];
  wf.eta_x = wf.surface_dx(wf.eta, Parity::even);
  wf.eta_xx.resize(nq + 1);
  const double dq = sg.dq();
  for (int i = 0; i <= nq; ++i) {
    const double lo = wf.eta[i == 0 ? 1 : i - 1];
    const double hi = wf.eta[i == nq ? nq - 1 : i + 1];
    wf.eta_xx[i] = (hi - 2.0 * wf.eta[i] + lo) / (dq * dq);
  }
  return wf;
}

SurfaceTrace surface_trace(const WaveField& wf) {
  SurfaceTrace t;
  for (int i = 0; i <= wf.grid.N1(); ++i) {
    const int k = wf.surface(i);
    t.x.push_back(wf.x[k]);
    t.u.push_back(wf.u[k]);
    t.v.push_back(wf.v[k]);
    t.ux.push_back(wf.ux[k]);
    t.vx.push_back(wf.vx[k]);
    t.uy.push_back(wf.uy[k]);
    t.uxx.push_back(wf.uxx[k]);
    t.uxy.push_back(wf.uxy[k]);
  }
  return t;
}

FieldConsistency field_consistency(const WaveField& wf, int margin) {
  const auto Px = wf.dx(wf.P, Parity::even);
  const auto Py = wf.dy(wf.P, Parity::even);
  const auto psix = wf.dx(wf.psi, Parity::even);
  const auto psiy = wf.dy(wf.psi, Parity::even);
  FieldConsistency c;
  const int n1 = wf.grid.N1(), n2 = wf.grid.N2();
  for (int i = 0; i <= n1; ++i) {
    for (int j = margin; j <= n2 - margin; ++j) {
      const int k = wf.at(i, j);
      c.euler_u = std::max(c.euler_u, std::abs(wf.u[k] * wf.ux[k] + wf.v[k] * wf.uy[k] + Px[k]));
      c.euler_v = std::max(c.euler_v, std::abs(wf.u[k] * wf.vx[k] + wf.v[k] * wf.vy[k] + Py[k] + wf.g));
      c.divergence = std::max(c.divergence, std::abs(wf.ux[k] + wf.vy[k]));
      c.psi_y = std::max(c.psi_y, std::abs(psiy[k] - wf.u[k]));
      c.psi_x = std::max(c.psi_x, std::abs(psix[k] + wf.v[k]));
      c.vorticity = std::max(c.vorticity, std::abs(wf.omega[k] - wf.gam[k]));
    }
  }
  double mean = 0.0, span = 0.0;
  for (int i = 0; i <= n1; ++i) {
    const int k = wf.surface(i);
    c.kinematic = std::max(c.kinematic, std::abs(wf.v[k] - wf.eta_x[i] * wf.u[k]));
    c.dynamic = std::max(c.dynamic, std::abs(wf.P[k] - wf.patm));
    if (i > 0) {
      const double dx = wf.x[k] - wf.x[wf.surface(i - 1)];
      mean += 0.5 * dx * (wf.eta[i] + wf.eta[i - 1]);
      span += dx;
    }
  }
  c.mean_eta = span > 0.0 ? mean / span : 0.0;
  return c;
}

namespace {

const char* kBaseColumns[] = {"x", "y", "u", "v", "P", "psi", "omega", "ux", "uy", "vx", "vy", "uxx", "uxy"};
const char* kVorticityColumns[] = {"gamma", "dgamma", "d2gamma", "Gamma"};

}  // namespace

void write_field_csv(const WaveField& wf, const std::string& path, bool with_vorticity_columns) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot write " + path);
  std::fprintf(f, "%s,%s", wf.coord1.c_str(), wf.coord2.c_str());
  for (const char* c : kBaseColumns) std::fprintf(f, ",%s", c);
  if (with_vorticity_columns)
    for (const char* c : kVorticityColumns) std::fprintf(f, ",%s", c);
  std::fprintf(f, "\n");
  for (int k = 0; k < wf.nodes(); ++k) {
    const double P = wf.P[k] - wf.patm;
    const double row[] = {wf.c1[k], wf.c2[k], wf.x[k], wf.y[k], wf.u[k], wf.v[k], P,
                          wf.psi[k], wf.omega[k], wf.ux[k], wf.uy[k], wf.vx[k], wf.vy[k],
                          wf.uxx[k], wf.uxy[k]};
    bool first = true;
    for (double x : row) {
      std::fprintf(f, first ? "%.17g" : ",%.17g", x);
      first = false;
    }
    if (with_vorticity_columns) {
      const double extra[] = {wf.gam[k], wf.dgam[k], wf.d2gam[k], wf.Gam[k]};
      for (double x : extra) std::fprintf(f, ",%.17g", x);
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

WaveField read_field_csv(const std::string& path, const CsvFieldInputs& in) {
  std::ifstream is(path);
  if (!is) throw PreconditionError("cannot open field file " + path);
  std::string line;
  if (!std::getline(is, line)) throw PreconditionError("empty field file " + path);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      while (!tok.empty() && (tok.back() == '\r' || tok.back() == ' ')) tok.pop_back();
      header.push_back(tok);
    }
  }
  std::map<std::string, int> col;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) col[header[c]] = c;
  if (header.size() < 2) throw PreconditionError("field file: malformed header");
  for (const char* c : kBaseColumns)
    if (!col.count(c)) throw PreconditionError(std::string("field file: missing column ") + c);
  const bool carries_gamma = col.count("gamma") && col.count("dgamma") && col.count("d2gamma") && col.count("Gamma");
  if (!carries_gamma && !in.vf) throw PreconditionError("field file: vorticity function required");

  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> r;
    r.reserve(header.size());
    const char* s = line.c_str();
    char* end = nullptr;
    for (std::size_t c = 0; c < header.size(); ++c) {
      r.push_back(std::strtod(s, &end));
      if (end == s) throw PreconditionError("field file: bad number in " + path);
      s = (*end == ',') ? end + 1 : end;
    }
    rows.push_back(std::move(r));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw PreconditionError("field file: no rows");
  int n2p1 = 1;
  while (n2p1 < n && rows[n2p1][0] == rows[0][0]) ++n2p1;
  if (n % n2p1 != 0) throw PreconditionError("field file: rows do not form a grid");
  const int N2 = n2p1 - 1, N1 = n / n2p1 - 1;
  if (N1 < 2 || N2 < 5) throw PreconditionError("field file: grid too small");

  WaveField wf;
  wf.coord1 = header[0];
  wf.coord2 = header[1];
  wf.has_bed = !carries_gamma;
  wf.g = in.g;
  wf.m = in.m;
  wf.grid = LogicalGrid(N1, N2, rows[n2p1][0] - rows[0][0], 1.0 / N2);
  auto column = [&](const char* name) {
    std::vector<double> v(n);
    const int c = col.at(name);
    for (int k = 0; k < n; ++k) v[k] = rows[k][c];
    return v;
  };
  wf.c1.resize(n);
  wf.c2.resize(n);
  for (int k = 0; k < n; ++k) {
    wf.c1[k] = rows[k][0];
    wf.c2[k] = rows[k][1];
  }
  wf.x = column("x");
  wf.y = column("y");
  wf.u = column("u");
  wf.v = column("v");
  wf.P = column("P");
  wf.psi = column("psi");
  wf.omega = column("omega");
  wf.ux = column("ux");
  wf.uy = column("uy");
  wf.vx = column("vx");
  wf.vy = column("vy");
  wf.uxx = column("uxx");
  wf.uxy = column("uxy");
  for (double uk : wf.u)
    if (!(uk < 0.0)) throw StagnationError("field file: u >= 0 at a node");

  wf.x1 = wf.grid.d1(wf.x, Parity::odd);
  wf.x2 = wf.grid.d2(wf.x);
  wf.y1 = wf.grid.d1(wf.y, Parity::even);
  wf.y2 = wf.grid.d2(wf.y);
  wf.jac.resize(n);
  for (int k = 0; k < n; ++k) {
    wf.jac[k] = wf.x1[k] * wf.y2[k] - wf.x2[k] * wf.y1[k];
    if (!(wf.jac[k] > 0.0)) throw PreconditionError("field file: degenerate coordinate map");
  }
  wf.L = wf.x[wf.surface(N1)] - wf.x[wf.surface(0)];

  if (carries_gamma) {
    wf.gam = column("gamma");
    wf.dgam = column("dgamma");
    wf.d2gam = column("d2gamma");
    wf.Gam = column("Gamma");
    wf.d = 0.0;
  } else {
    wf.gam.resize(n);
    wf.dgam.resize(n);
    wf.d2gam.resize(n);
    wf.Gam.resize(n);
    const double mm = in.vf->m();
    for (int k = 0; k < n; ++k) {
      const double psi = std::clamp(wf.psi[k], 0.0, mm);
      wf.gam[k] = in.vf->gamma(psi, 0);
      wf.dgam[k] = in.vf->gamma(psi, 1);
      wf.d2gam[k] = in.vf->gamma(psi, 2);
      wf.Gam[k] = in.vf->Gamma(-psi);
    }
    if (wf.m == 0.0) wf.m = mm;
    wf.d = -wf.y[wf.at(0, 0)];
  }
  // Bernoulli constant: mean over nodes of the total head
  double q = 0.0;
  for (int k = 0; k < n; ++k)
    q += wf.P[k] + 0.5 * (wf.u[k] * wf.u[k] + wf.v[k] * wf.v[k]) + wf.g * (wf.y[k] + wf.d) - wf.Gam[k];
  wf.Q = q / n;

  wf.eta.resize(N1 + 1);
  for (int i = 0; i <= N1; ++i) wf.eta[i] = wf.y[wf.surface(i)];
  wf.eta_x = wf.surface_dx(wf.eta, Parity::even);
  wf.eta_xx = wf.surface_dx(wf.eta_x, Parity::odd);
  return wf;
}

}  // namespace vorwave
