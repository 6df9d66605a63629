#include "qgse/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgse {

namespace {

void fix_sign(Eigen::VectorXd& z) {
  Eigen::Index imax = 0;
  double best = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (std::abs(z(i)) > best) {
      best = std::abs(z(i));
      imax = i;
    }
  }
  if (z(imax) < 0) z = -z;
}

// unpreconditioned CG for the positive definite M_h, matrix-free
void cg_solve(const DiscretizedHamiltonian& H, const Eigen::VectorXd& b, Eigen::VectorXd& x,
              double rel_tol, int max_iter) {
  const auto n = b.size();
  Eigen::VectorXd r = b, p, Ap(n);
  x.setZero(n);
  p = r;
  double rs = r.squaredNorm();
  const double stop = rel_tol * rel_tol * b.squaredNorm();
  for (int it = 0; it < max_iter && rs > stop; ++it) {
    apply_mh(H, {p.data(), static_cast<std::size_t>(n)}, {Ap.data(), static_cast<std::size_t>(n)});
    const double alpha = rs / p.dot(Ap);
    x += alpha * p;
    r -= alpha * Ap;
    const double rs_new = r.squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
}

}  // namespace

DenseSpectrum dense_spectrum(const DiscretizedHamiltonian& H) {
  if (H.grid.points() > kDenseThreshold)
    throw std::length_error("dense_spectrum: m^d exceeds the dense threshold");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_dense(H));
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  return DenseSpectrum{es.eigenvalues(), es.eigenvectors()};
}

SpectralResult ground_state(const DiscretizedHamiltonian& H) {
  if (H.grid.points() <= kDenseThreshold) {
    const DenseSpectrum spec = dense_spectrum(H);
    SpectralResult res;
    res.e1 = spec.values(0);
    res.z1 = spec.vectors.col(0);
    fix_sign(res.z1);
    res.method = "dense";
    Eigen::VectorXd Mz(res.z1.size());
    apply_mh(H, {res.z1.data(), static_cast<std::size_t>(res.z1.size())},
             {Mz.data(), static_cast<std::size_t>(Mz.size())});
    res.residual = (Mz - res.e1 * res.z1).norm();
    return res;
  }
  return ground_state_iterative(H);
}

SpectralResult ground_state_iterative(const DiscretizedHamiltonian& H, int max_outer) {
  const std::int64_t n = H.grid.points();
  const double norm_bound = H.norm_bound();

  // the sine tensor state is an O(1)-overlap starting guess
  std::vector<double> psi = sine_ground_tensor(H.grid);
  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(psi.data(), n);
  x.normalize();
  Eigen::VectorXd y(n), Mx(n);

  // iterate to the residual floor, not just the acceptance tolerance:
  // the Rayleigh quotient gains accuracy quadratically in the residual
  double theta = 0.0, resid = 1e300, prev = 1e300;
  for (int it = 0; it < max_outer; ++it) {
    cg_solve(H, x, y, 1e-13, 20000);
    x = y.normalized();
    apply_mh(H, {x.data(), static_cast<std::size_t>(n)}, {Mx.data(), static_cast<std::size_t>(n)});
    theta = x.dot(Mx);
    resid = (Mx - theta * x).norm();
    if (resid <= 1e-12 * norm_bound || resid > 0.9 * prev) break;
    prev = resid;
  }
  if (resid > 1e-8 * norm_bound)
    throw std::runtime_error("ground_state_iterative: no convergence, residual " +
                             std::to_string(resid));
  fix_sign(x);
  return SpectralResult{theta, x, "iterative", resid};
}

double ground_energy_only(const DiscretizedHamiltonian& H) {
  if (H.grid.points() <= 8192) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_dense(H), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    return es.eigenvalues()(0);
  }
  return ground_state_iterative(H).e1;
}

double OverlapSpectrum::mass() const {
  double s = 0.0;
  for (double c : coefficients) s += c * c;
  return s;
}

OverlapSpectrum overlap_spectrum(const DiscretizedHamiltonian& H, const DenseSpectrum& spec,
                                 int count) {
  const std::int64_t n = H.grid.points();
  count = static_cast<int>(std::min<std::int64_t>(count, n));
  std::vector<double> psi = sine_ground_tensor(H.grid);
  Eigen::Map<Eigen::VectorXd> psi_v(psi.data(), n);
  OverlapSpectrum out;
  out.coefficients.resize(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    out.coefficients[static_cast<std::size_t>(k)] = spec.vectors.col(k).dot(psi_v);
  out.d1_squared = out.coefficients[0] * out.coefficients[0];
  return out;
}

OverlapSpectrum overlap_spectrum(const DiscretizedHamiltonian& H, int count) {
  return overlap_spectrum(H, dense_spectrum(H), count);
}

ExactPropagator::ExactPropagator(const DiscretizedHamiltonian& H, const DenseSpectrum& spec)
    : spec_(spec), two_d_(2.0 * H.grid.d) {}

ExactPropagator::ExactPropagator(const DiscretizedHamiltonian& H)
    : ExactPropagator(H, dense_spectrum(H)) {}

void ExactPropagator::apply(double t, std::span<std::complex<double>> state) const {
  const Eigen::Index n = spec_.values.size();
  if (static_cast<Eigen::Index>(state.size()) != n)
    throw std::invalid_argument("ExactPropagator: state length mismatch");
  Eigen::VectorXd re(n), im(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    re(i) = state[static_cast<std::size_t>(i)].real();
    im(i) = state[static_cast<std::size_t>(i)].imag();
  }
  Eigen::VectorXd wre = spec_.vectors.transpose() * re;
  Eigen::VectorXd wim = spec_.vectors.transpose() * im;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ang = t * spec_.values(i) / two_d_;
    const double c = std::cos(ang), s = std::sin(ang);
    const double r = wre(i), j = wim(i);
    wre(i) = c * r - s * j;
    wim(i) = s * r + c * j;
  }
  re.noalias() = spec_.vectors * wre;
  im.noalias() = spec_.vectors * wim;
  for (Eigen::Index i = 0; i < n; ++i)
    state[static_cast<std::size_t>(i)] = {re(i), im(i)};
}

PerturbationReport perturbation_check(const PotentialSpec& V, const PotentialSpec& Vbar,
                                      const GridSpec& g) {
  // untruncated evaluations: the identity is about the exact discrete operators
  const QueryConfig no_trunc{-1};
  const DiscretizedHamiltonian Hv = discretize(V, g, no_trunc);
  const DiscretizedHamiltonian Hb = discretize(Vbar, g, no_trunc);
  const SpectralResult gv = ground_state(Hv);
  const SpectralResult gb = ground_state(Hb);

  PerturbationReport rep;
  rep.e1_v = gv.e1;
  rep.e1_vbar = gb.e1;
  for (std::int64_t i = 0; i < g.points(); ++i) {
    const double dv = Hv.v[static_cast<std::size_t>(i)] - Hb.v[static_cast<std::size_t>(i)];
    rep.first_order += dv * gb.z1(i) * gb.z1(i);
    rep.delta_inf = std::max(rep.delta_inf, std::abs(dv));
  }
  rep.residual = rep.e1_v - rep.e1_vbar - rep.first_order;
  return rep;
}

}  // namespace qgse
