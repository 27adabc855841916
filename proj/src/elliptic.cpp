#include "stratawave/elliptic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include <Eigen/LU>

#include "stratawave/parallel.hpp"
#include "stratawave/spectral.hpp"

namespace stratawave {

using cplx = std::complex<double>;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void GridSpec::validate() const {
  require(nx >= 8 && (nx & (nx - 1)) == 0, ErrorCode::invalid_argument, "grid: nx must be a power of two >= 8");
  require(ny >= 5, ErrorCode::invalid_argument, "grid: ny must be >= 5");
  require(periods >= 1, ErrorCode::invalid_argument, "grid: periods must be >= 1");
  require(tol > 0 && max_iter >= 1 && restart >= 1, ErrorCode::invalid_argument, "grid: bad solver settings");
}

OperatorCoefficients operator_coefficients(Layer layer, double eta, double deta, double ddeta, double y) {
  OperatorCoefficients c;
  if (layer == Layer::lower) {
    const double D = 1.0 + eta, a = 1.0 + y;
    c.cxy = -2.0 * a * deta / D;
    c.cyy_minus_one = (a * a * deta * deta - eta * (2.0 + eta)) / (D * D);
    c.cy = -a * (D * ddeta - 2.0 * deta * deta) / (D * D);
  } else {
    const double D = 1.0 - eta, a = 1.0 - y;
    c.cxy = -2.0 * a * deta / D;
    c.cyy_minus_one = (a * a * deta * deta + eta * (2.0 - eta)) / (D * D);
    c.cy = -a * (D * ddeta + 2.0 * deta * deta) / (D * D);
  }
  c.cyy = 1.0 + c.cyy_minus_one;
  return c;
}

namespace detail {

namespace {
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Discretization {
  int nx = 0, ny = 0, periods = 1, k = 1, nh = 0;
  double length = 0.0;
  std::vector<double> x, t, kappa;
  std::vector<double> y_lower, y_upper;  // node heights, index 0 is the interface
  Eigen::MatrixXd Dt, Dtt;
  Eigen::MatrixXcd analysis;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;  // per mode: 4 Dtt - kappa^2 on interior rows
  fftw_plan r2c = nullptr, c2r = nullptr;

  Discretization(int nx_, int ny_, int periods_, int k_) : nx(nx_), ny(ny_), periods(periods_), k(k_) {
    nh = nx / 2 + 1;
    length = 2.0 * pi * periods / k;
    x.resize(nx);
    for (int i = 0; i < nx; ++i) x[i] = length * i / nx;
    kappa.resize(nh);
    for (int m = 0; m < nh; ++m) kappa[m] = 2.0 * pi * m / length;
    const int n = ny - 1;
    t = spectral::chebyshev_points(n);
    Dt = spectral::chebyshev_diff_matrix(n);
    y_lower.resize(ny);
    y_upper.resize(ny);
    for (int j = 0; j < ny; ++j) {
      y_lower[j] = 0.5 * (t[j] - 1.0);
      y_upper[j] = 0.5 * (1.0 - t[j]);
    }
    Dtt = Dt * Dt;
    analysis = spectral::chebyshev_analysis_matrix(n).cast<cplx>();
    lu.resize(nh);
    const Eigen::MatrixXd inner = 4.0 * Dtt.block(1, 1, n - 1, n - 1);
    for (int m = 0; m < nh; ++m) {
      Eigen::MatrixXd M = inner;
      M.diagonal().array() -= kappa[m] * kappa[m];
      lu[m].compute(M);
    }
    std::vector<double> rin(static_cast<std::size_t>(nx) * ny);
    std::vector<cplx> cin(static_cast<std::size_t>(nh) * ny);
    std::lock_guard lock(fftw_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_many_dft_r2c(1, &nx, ny, rin.data(), nullptr, 1, nx,
                                 reinterpret_cast<fftw_complex*>(cin.data()), nullptr, 1, nh, flags);
    c2r = fftw_plan_many_dft_c2r(1, &nx, ny, reinterpret_cast<fftw_complex*>(cin.data()), nullptr, 1, nh,
                                 rin.data(), nullptr, 1, nx, flags | FFTW_DESTROY_INPUT);
    if (!r2c || !c2r) fail(ErrorCode::numerical_failure, "FFTW planning failed");
  }

  ~Discretization() {
    std::lock_guard lock(fftw_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }

  Discretization(const Discretization&) = delete;
  Discretization& operator=(const Discretization&) = delete;

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }

  // rows of length nx -> rows of length nh
  void forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  // destroys `in`; output normalized
  void backward(cplx* in, double* out) const {
    fftw_execute_dft_c2r(c2r, reinterpret_cast<fftw_complex*>(in), out);
    const double s = 1.0 / nx;
    for (std::size_t q = 0; q < size(); ++q) out[q] *= s;
  }
};

std::shared_ptr<const Discretization> discretization(const GridSpec& g, int k) {
  static std::mutex m;
  static std::map<std::tuple<int, int, int, int>, std::shared_ptr<const Discretization>> cache;
  const auto key = std::make_tuple(g.nx, g.ny, g.periods, k);
  {
    std::lock_guard lock(m);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto d = std::make_shared<const Discretization>(g.nx, g.ny, g.periods, k);
  std::lock_guard lock(m);
  return cache.emplace(key, d).first->second;
}

}  // namespace detail

using detail::Discretization;

namespace {

double layer_sign(Layer l) { return l == Layer::lower ? 1.0 : -1.0; }

double node_y(Layer l, double t) { return l == Layer::lower ? 0.5 * (t - 1.0) : 0.5 * (1.0 - t); }

struct OperatorGrids {
  std::vector<double> cxy, cyy, cy;
};

class LinearProblem {
 public:
  LinearProblem(const Discretization& d, Layer layer, OperatorGrids coeffs)
      : d_(d), sgn_(layer_sign(layer)), c_(std::move(coeffs)),
        hat_(static_cast<std::size_t>(d.nh) * d.ny), hat2_(hat_.size()), tmp_(d.size()), vx_(d.size()),
        vxx_(d.size()) {}

  // out = A v on interior rows, zero on the boundary rows
  void apply(const std::vector<double>& v, std::vector<double>& out) {
    const int nx = d_.nx, ny = d_.ny, nh = d_.nh;
    d_.forward(v.data(), hat_.data());
    for (int j = 0; j < ny; ++j) {
      for (int m = 0; m < nh; ++m) {
        const std::size_t q = static_cast<std::size_t>(j) * nh + m;
        const double kap = d_.kappa[m];
        hat2_[q] = (m == nh - 1) ? cplx(0.0) : cplx(0.0, kap) * hat_[q];
        hat_[q] *= -kap * kap;
      }
    }
    d_.backward(hat_.data(), vxx_.data());
    d_.backward(hat2_.data(), vx_.data());
    Eigen::Map<const RowMat> V(v.data(), ny, nx);
    Eigen::Map<RowMat> Vx(vx_.data(), ny, nx);
    RowMat Vy = (2.0 * sgn_) * (d_.Dt * V);
    RowMat Vyy = 4.0 * (d_.Dtt * V);
    RowMat Vxy = (2.0 * sgn_) * (d_.Dt * Vx);
    out.resize(d_.size());
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t q = static_cast<std::size_t>(j) * nx + i;
        out[q] = (j == 0 || j == ny - 1)
                     ? 0.0
                     : vxx_[q] + c_.cxy[q] * Vxy(j, i) + c_.cyy[q] * Vyy(j, i) + c_.cy[q] * Vy(j, i);
      }
    }
  }

  // z = L^{-1} r with L the flat-interface Laplacian and zero boundary rows
  void precondition(const std::vector<double>& r, std::vector<double>& z) {
    const int ny = d_.ny, nh = d_.nh, n = ny - 1;
    tmp_ = r;
    for (int i = 0; i < d_.nx; ++i) {
      tmp_[i] = 0.0;
      tmp_[static_cast<std::size_t>(n) * d_.nx + i] = 0.0;
    }
    d_.forward(tmp_.data(), hat_.data());
    Eigen::MatrixXd rhs(n - 1, 2);
    for (int m = 0; m < nh; ++m) {
      for (int j = 1; j < n; ++j) {
        const cplx h = hat_[static_cast<std::size_t>(j) * nh + m];
        rhs(j - 1, 0) = h.real();
        rhs(j - 1, 1) = h.imag();
      }
      const Eigen::MatrixXd sol = d_.lu[m].solve(rhs);
      for (int j = 1; j < n; ++j) hat_[static_cast<std::size_t>(j) * nh + m] = cplx(sol(j - 1, 0), sol(j - 1, 1));
      hat_[m] = 0.0;
      hat_[static_cast<std::size_t>(n) * nh + m] = 0.0;
    }
    z.resize(d_.size());
    d_.backward(hat_.data(), z.data());
  }

 private:
  const Discretization& d_;
  double sgn_;
  OperatorGrids c_;
  std::vector<cplx> hat_, hat2_;
  std::vector<double> tmp_, vx_, vxx_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
};

// Left-preconditioned restarted GMRES (modified Gram-Schmidt, Givens rotations).
GmresResult gmres(LinearProblem& P, const std::vector<double>& rhs, std::vector<double>& x, const GridSpec& g) {
  const std::size_t n = rhs.size();
  std::vector<double> b, r(n), w(n), Ax(n);
  P.precondition(rhs, b);
  const double bnorm = norm(b);
  GmresResult res;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return res;
  }
  const int m = g.restart;
  std::vector<std::vector<double>> V(m + 1, std::vector<double>(n));
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  std::vector<double> cs(m), sn(m), gv(m + 1);

  auto true_residual = [&]() {
    P.apply(x, Ax);
    for (std::size_t q = 0; q < n; ++q) w[q] = rhs[q] - Ax[q];
    P.precondition(w, r);
    return norm(r);
  };

  double beta = true_residual();
  while (true) {
    res.relative_residual = beta / bnorm;
    if (beta <= g.tol * bnorm) return res;
    if (res.iterations >= g.max_iter) break;
    for (std::size_t q = 0; q < n; ++q) V[0][q] = r[q] / beta;
    std::fill(gv.begin(), gv.end(), 0.0);
    gv[0] = beta;
    H.setZero();
    int used = 0;
    for (int j = 0; j < m && res.iterations < g.max_iter; ++j) {
      P.apply(V[j], Ax);
      P.precondition(Ax, w);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = dot(w, V[i]);
        for (std::size_t q = 0; q < n; ++q) w[q] -= H(i, j) * V[i][q];
      }
      H(j + 1, j) = norm(w);
      if (H(j + 1, j) > 0.0)
        for (std::size_t q = 0; q < n; ++q) V[j + 1][q] = w[q] / H(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double tmp = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = tmp;
      }
      const double rr = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = rr == 0.0 ? 1.0 : H(j, j) / rr;
      sn[j] = rr == 0.0 ? 0.0 : H(j + 1, j) / rr;
      H(j, j) = rr;
      H(j + 1, j) = 0.0;
      gv[j + 1] = -sn[j] * gv[j];
      gv[j] = cs[j] * gv[j];
      ++res.iterations;
      used = j + 1;
      if (std::abs(gv[j + 1]) <= 0.5 * g.tol * bnorm || H(j, j) == 0.0) break;
    }
    // back substitution
    std::vector<double> y(used);
    for (int i = used - 1; i >= 0; --i) {
      double s = gv[i];
      for (int l = i + 1; l < used; ++l) s -= H(i, l) * y[l];
      y[i] = H(i, i) == 0.0 ? 0.0 : s / H(i, i);
    }
    for (int i = 0; i < used; ++i)
      for (std::size_t q = 0; q < n; ++q) x[q] += y[i] * V[i][q];
    const double prev = beta;
    beta = true_residual();
    if (!std::isfinite(beta)) fail(ErrorCode::numerical_failure, "elliptic solve: non-finite residual");
    // stagnation at the roundoff floor
    if (beta > 0.9 * prev && beta <= 1e3 * g.tol * bnorm) {
      res.relative_residual = beta / bnorm;
      return res;
    }
  }
  if (res.relative_residual > 1e-9) {
    std::ostringstream os;
    os << "elliptic solve did not converge: relative residual " << res.relative_residual << " after "
       << res.iterations << " iterations";
    fail(ErrorCode::numerical_failure, os.str());
  }
  return res;
}

LayerSolution solve_layer(Layer layer, double lambda, double omega_l, const WaveProfile& profile,
                          const GridSpec& grid, const LayerSolution* warm) {
  grid.validate();
  const auto disc = detail::discretization(grid, profile.k());
  const Discretization& d = *disc;
  const int nx = d.nx, ny = d.ny;
  OperatorGrids c;
  c.cxy.resize(d.size());
  c.cyy.resize(d.size());
  c.cy.resize(d.size());
  std::vector<double> rhs(d.size(), 0.0);
  // laminar lifting: wb = omega y^2/2 below, omega_bar y^2/2 + lambda y above
  auto wb = [&](double y) { return layer == Layer::lower ? 0.5 * omega_l * y * y : 0.5 * omega_l * y * y + lambda * y; };
  auto wb_y = [&](double y) { return layer == Layer::lower ? omega_l * y : omega_l * y + lambda; };
  for (int i = 0; i < nx; ++i) {
    const auto e = profile.evaluate(d.x[i]);
    for (int j = 0; j < ny; ++j) {
      const double y = node_y(layer, d.t[j]);
      const auto oc = operator_coefficients(layer, e[0], e[1], e[2], y);
      const std::size_t q = static_cast<std::size_t>(j) * nx + i;
      c.cxy[q] = oc.cxy;
      c.cyy[q] = oc.cyy;
      c.cy[q] = oc.cy;
      if (j > 0 && j < ny - 1) rhs[q] = -omega_l * oc.cyy_minus_one - oc.cy * wb_y(y);
    }
  }
  LinearProblem P(d, layer, std::move(c));
  std::vector<double> v(d.size(), 0.0);
  if (warm && warm->layer() == layer && warm->grid().nx == nx && warm->grid().ny == ny &&
      warm->grid().periods == grid.periods && warm->profile().k() == profile.k()) {
    const auto& wv = warm->values();
    const double lam0 = warm->lambda();
    for (int j = 1; j < ny - 1; ++j) {
      const double y = node_y(layer, d.t[j]);
      const double base0 = layer == Layer::lower ? 0.5 * omega_l * y * y : 0.5 * omega_l * y * y + lam0 * y;
      for (int i = 0; i < nx; ++i) {
        const std::size_t q = static_cast<std::size_t>(j) * nx + i;
        v[q] = wv[q] - base0;
      }
    }
  }
  const auto gr = gmres(P, rhs, v, grid);
  std::vector<double> w(d.size());
  const auto& ys = layer == Layer::lower ? d.y_lower : d.y_upper;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t q = static_cast<std::size_t>(j) * nx + i;
      w[q] = wb(ys[j]) + ((j == 0 || j == ny - 1) ? 0.0 : v[q]);
    }
  }
  return LayerSolution(layer, profile, lambda, grid, disc, std::move(w), gr.iterations, gr.relative_residual);
}

}  // namespace

TransformedOperator build_operator(Layer layer, const WaveProfile& profile, const GridSpec& grid) {
  grid.validate();
  require(profile.sup_norm() < 1.0, ErrorCode::invalid_profile, "build_operator: |eta| must be < 1");
  const auto disc = detail::discretization(grid, profile.k());
  TransformedOperator op;
  op.layer = layer;
  op.profile = profile;
  op.nx = disc->nx;
  op.ny = disc->ny;
  op.x = disc->x;
  op.y.resize(op.ny);
  for (int j = 0; j < op.ny; ++j) op.y[j] = j == 0 ? 0.0 : node_y(layer, disc->t[j]);
  const std::size_t n = disc->size();
  op.cxy.resize(n);
  op.cyy.resize(n);
  op.cyy_minus_one.resize(n);
  op.cy.resize(n);
  for (int i = 0; i < op.nx; ++i) {
    const auto e = profile.evaluate(op.x[i]);
    for (int j = 0; j < op.ny; ++j) {
      const auto c = operator_coefficients(layer, e[0], e[1], e[2], op.y[j]);
      const std::size_t q = static_cast<std::size_t>(j) * op.nx + i;
      op.cxy[q] = c.cxy;
      op.cyy[q] = c.cyy;
      op.cyy_minus_one[q] = c.cyy_minus_one;
      op.cy[q] = c.cy;
    }
  }
  return op;
}

// ---------------------------------------------------------------------------

LayerSolution::LayerSolution(Layer layer, WaveProfile profile, double lambda, GridSpec grid,
                             std::shared_ptr<const detail::Discretization> disc, std::vector<double> w,
                             int iterations, double residual)
    : layer_(layer), profile_(std::move(profile)), lambda_(lambda), grid_(grid), disc_(std::move(disc)),
      w_(std::move(w)), iterations_(iterations), residual_(residual) {
  const Discretization& d = *disc_;
  const int ny = d.ny, nh = d.nh, n = ny - 1;
  RowMatC hat(ny, nh);
  d.forward(w_.data(), hat.data());
  // fold the real-transform weights into the coefficients
  for (int m = 0; m < nh; ++m) {
    const double wt = (m == 0 || m == nh - 1) ? 1.0 : 2.0;
    hat.col(m) *= wt / d.nx;
  }
  const RowMatC C = d.analysis * hat;
  c0_.assign(C.data(), C.data() + C.size());
  c1_.assign(c0_.size(), 0.0);
  c2_.assign(c0_.size(), 0.0);
  std::vector<cplx> col(ny);
  for (int m = 0; m < nh; ++m) {
    for (int p = 0; p <= n; ++p) col[p] = c0_[static_cast<std::size_t>(p) * nh + m];
    const auto d1 = spectral::chebyshev_derivative_coeffs<cplx>(col);
    const auto d2 = spectral::chebyshev_derivative_coeffs<cplx>(d1);
    for (int p = 0; p <= n; ++p) {
      c1_[static_cast<std::size_t>(p) * nh + m] = d1[p];
      c2_[static_cast<std::size_t>(p) * nh + m] = d2[p];
    }
  }
}

const std::vector<double>& LayerSolution::x() const { return disc_->x; }

const std::vector<double>& LayerSolution::y() const {
  return layer_ == Layer::lower ? disc_->y_lower : disc_->y_upper;
}

Derivatives LayerSolution::reference(double x, double y) const {
  const Discretization& d = *disc_;
  const int nh = d.nh, n = d.ny - 1;
  const double t = std::clamp(layer_ == Layer::lower ? 2.0 * y + 1.0 : 1.0 - 2.0 * y, -1.0, 1.0);
  std::vector<cplx> b(6 * static_cast<std::size_t>(nh), 0.0);
  cplx* b1[3] = {b.data(), b.data() + nh, b.data() + 2 * nh};
  cplx* b2[3] = {b.data() + 3 * nh, b.data() + 4 * nh, b.data() + 5 * nh};
  const std::vector<cplx>* cs[3] = {&c0_, &c1_, &c2_};
  for (int p = n; p >= 1; --p) {
    for (int a = 0; a < 3; ++a) {
      const cplx* c = cs[a]->data() + static_cast<std::size_t>(p) * nh;
      for (int m = 0; m < nh; ++m) {
        const cplx b0 = 2.0 * t * b1[a][m] - b2[a][m] + c[m];
        b2[a][m] = b1[a][m];
        b1[a][m] = b0;
      }
    }
  }
  Derivatives out;
  const double sgn = layer_sign(layer_);
  double f = 0, fx = 0, fxx = 0, ft = 0, ftx = 0, ftt = 0;
  const cplx step = std::polar(1.0, d.kappa[1] * x);
  cplx ph(1.0, 0.0);
  for (int m = 0; m < nh; ++m) {
    if (m % 16 == 0) ph = std::polar(1.0, d.kappa[m] * x);
    const cplx g0 = t * b1[0][m] - b2[0][m] + (*cs[0])[m];
    const cplx g1 = t * b1[1][m] - b2[1][m] + (*cs[1])[m];
    const cplx g2 = t * b1[2][m] - b2[2][m] + (*cs[2])[m];
    const double kap = d.kappa[m];
    const cplx e0 = g0 * ph, e1 = g1 * ph;
    f += e0.real();
    fxx -= kap * kap * e0.real();
    ft += e1.real();
    ftt += (g2 * ph).real();
    if (m != nh - 1) {
      fx -= kap * e0.imag();
      ftx -= kap * e1.imag();
    }
    ph *= step;
  }
  out.f = f;
  out.fx = fx;
  out.fxx = fxx;
  out.fy = 2.0 * sgn * ft;
  out.fxy = 2.0 * sgn * ftx;
  out.fyy = 4.0 * ftt;
  return out;
}

std::vector<double> LayerSolution::trace_wy() const {
  const Discretization& d = *disc_;
  std::vector<double> out(d.nx, 0.0);
  const double sgn = layer_sign(layer_);
  for (int i = 0; i < d.nx; ++i) {
    double s = 0.0;
    for (int j = 0; j < d.ny; ++j) s += d.Dt(0, j) * w_[static_cast<std::size_t>(j) * d.nx + i];
    out[i] = 2.0 * sgn * s;
  }
  return out;
}

std::vector<double> LayerSolution::trace_wx() const {
  const Discretization& d = *disc_;
  std::vector<double> row(w_.begin(), w_.begin() + d.nx);
  // single-row spectral derivative by direct DFT (rows are short)
  std::vector<double> out(d.nx, 0.0);
  for (int m = 1; m < d.nh - 1; ++m) {
    cplx acc(0.0);
    for (int i = 0; i < d.nx; ++i) acc += row[i] * std::polar(1.0, -2.0 * pi * m * i / d.nx);
    for (int i = 0; i < d.nx; ++i) {
      const cplx e = acc * std::polar(1.0, 2.0 * pi * m * i / d.nx);
      out[i] -= 2.0 / d.nx * d.kappa[m] * e.imag();
    }
  }
  return out;
}

FieldGrid LayerSolution::field_grid() const {
  const Discretization& d = *disc_;
  FieldGrid g;
  g.layer = layer_;
  g.nx = d.nx;
  g.ny = d.ny;
  g.x = d.x;
  g.y = y();
  g.values.resize(d.size());
  for (int i = 0; i < d.nx; ++i)
    for (int j = 0; j < d.ny; ++j) g.at(i, j) = w_[static_cast<std::size_t>(j) * d.nx + i];
  return g;
}

LayerSolution solve_lower(const WaveProfile& profile, const FluidParams& params, const GridSpec& grid,
                          const LayerSolution* warm) {
  return solve_layer(Layer::lower, 0.0, params.omega, profile, grid, warm);
}

LayerSolution solve_upper(double lambda, const WaveProfile& profile, const FluidParams& params,
                          const GridSpec& grid, const LayerSolution* warm) {
  require(std::isfinite(lambda), ErrorCode::invalid_argument, "solve_upper: lambda must be finite");
  return solve_layer(Layer::upper, lambda, params.omega_bar, profile, grid, warm);
}

namespace {

std::vector<double> boundary_operator(const WaveProfile& profile, const LayerSolution& sol, double s) {
  const auto& x = sol.x();
  const auto wy = sol.trace_wy();
  const auto wx = sol.trace_wx();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto e = profile.evaluate(x[i]);
    const double D = 1.0 + s * e[0];
    out[i] = wx[i] * wx[i] - 2.0 * e[1] / D * wx[i] * wy[i] + (1.0 + e[1] * e[1]) / (D * D) * wy[i] * wy[i];
  }
  return out;
}

}  // namespace

std::vector<double> boundary_B(const WaveProfile& profile, const LayerSolution& lower) {
  require(lower.layer() == Layer::lower, ErrorCode::invalid_argument, "boundary_B needs the lower-layer field");
  return boundary_operator(profile, lower, 1.0);
}

std::vector<double> boundary_Bbar(const WaveProfile& profile, const LayerSolution& upper) {
  require(upper.layer() == Layer::upper, ErrorCode::invalid_argument, "boundary_Bbar needs the upper-layer field");
  return boundary_operator(profile, upper, -1.0);
}

namespace {

// d/dx of periodic samples over [0, length), by FFT; the mean mode and Nyquist are dropped
std::vector<double> periodic_derivative(std::vector<double> f, double length) {
  const int n = static_cast<int>(f.size());
  const int nh = n / 2 + 1;
  std::vector<cplx> c(nh);
  fftw_plan fwd, bwd;
  {
    std::lock_guard lock(detail::fftw_mutex());
    fwd = fftw_plan_dft_r2c_1d(n, f.data(), reinterpret_cast<fftw_complex*>(c.data()), FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(c.data()), f.data(), FFTW_ESTIMATE);
  }
  fftw_execute(fwd);
  c[0] = 0.0;
  if (n % 2 == 0) c[nh - 1] = 0.0;
  for (int m = 1; m < nh; ++m) c[m] *= cplx(0.0, 2.0 * pi * m / length) / static_cast<double>(n);
  fftw_execute(bwd);
  {
    std::lock_guard lock(detail::fftw_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  return f;
}

}  // namespace

PsiEvaluation evaluate_Psi(double lambda, const WaveProfile& profile, const FluidParams& params,
                           const GridSpec& grid, const PsiEvaluation* warm) {
  params.validate();
  PsiEvaluation out;
  out.lower = std::make_shared<LayerSolution>(
      solve_lower(profile, params, grid, warm ? warm->lower.get() : nullptr));
  out.upper = std::make_shared<LayerSolution>(
      solve_upper(lambda, profile, params, grid, warm ? warm->upper.get() : nullptr));
  const auto B = boundary_B(profile, *out.lower);
  const auto Bb = boundary_Bbar(profile, *out.upper);
  out.x = out.lower->x();
  const std::size_t n = out.x.size();
  std::vector<double> N(n), curv(n, 0.0), slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = profile.evaluate(out.x[i]);
    N[i] = params.rho_bar * Bb[i] - params.rho * B[i] + 2.0 * params.g * (params.rho_bar - params.rho) * e[0];
    slope[i] = e[1] / std::sqrt(1.0 + e[1] * e[1]);
  }
  // curvature as the derivative of eta' / sqrt(1 + eta'^2): mean zero on the grid as well
  if (params.sigma != 0.0) {
    curv = periodic_derivative(slope, grid.periods * profile.period());
    for (double& v : curv) v *= 2.0 * params.sigma;
  }
  out.Q = periodic_mean(N);
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = N[i] - out.Q + curv[i];
  return out;
}

std::vector<double> Psi(double lambda, const WaveProfile& profile, const FluidParams& params, const GridSpec& grid) {
  return evaluate_Psi(lambda, profile, params, grid).values;
}

std::vector<double> frechet_dPsi(double lambda, const WaveProfile& profile, const FluidParams& params,
                                 const WaveProfile& direction, const GridSpec& grid, double h,
                                 const PsiEvaluation* base) {
  require(direction.k() == profile.k(), ErrorCode::invalid_argument, "frechet_dPsi: direction has a different k");
  const double dn = direction.sup_norm();
  if (dn == 0.0) return std::vector<double>(static_cast<std::size_t>(grid.nx), 0.0);
  if (h <= 0.0) h = 1e-5 * std::max(1.0, profile.sup_norm());
  const std::size_t n = std::max(profile.harmonics(), direction.harmonics());
  std::vector<double> cp(n), cm(n);
  for (std::size_t j = 1; j <= n; ++j) {
    cp[j - 1] = profile.coeff(j) + h * direction.coeff(j) / dn;
    cm[j - 1] = profile.coeff(j) - h * direction.coeff(j) / dn;
  }
  const auto plus = evaluate_Psi(lambda, WaveProfile(profile.k(), cp), params, grid, base);
  const auto minus = evaluate_Psi(lambda, WaveProfile(profile.k(), cm), params, grid, base ? base : &plus);
  std::vector<double> out(plus.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (plus.values[i] - minus.values[i]) * dn / (2.0 * h);
  return out;
}

std::vector<double> directional_hessian(double Lambda, const FluidParams& params, int k, const GridSpec& grid, int n,
                                        double eps) {
  require(n >= 2 && eps > 0, ErrorCode::invalid_argument, "directional_hessian: need n >= 2 and eps > 0");
  const auto zero = evaluate_Psi(Lambda, WaveProfile::flat(k), params, grid);
  auto second = [&](double e) {
    const auto p = evaluate_Psi(Lambda, WaveProfile(k, {e}), params, grid, &zero);
    const auto m = evaluate_Psi(Lambda, WaveProfile(k, {-e}), params, grid, &p);
    std::vector<double> d(p.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (p.values[i] + m.values[i] - 2.0 * zero.values[i]) / (e * e);
    return d;
  };
  const auto h1 = second(eps);
  const auto h2 = second(0.5 * eps);
  std::vector<double> r(h1.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (4.0 * h2[i] - h1[i]) / 3.0;
  return cosine_coefficients(r, n, grid.periods);
}

}  // namespace stratawave
