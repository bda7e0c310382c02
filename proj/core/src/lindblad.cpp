#include "ringqed/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "ringqed/errors.hpp"

namespace ringqed {

namespace {

constexpr Complex I{0.0, 1.0};

SparseComplex to_sparse(const ComplexMatrix& m) {
  SparseComplex s = m.sparseView(Complex(1.0, 0.0), 1e-300);
  s.makeCompressed();
  return s;
}

SparseComplex sparse_identity(Eigen::Index n) {
  SparseComplex id(n, n);
  id.setIdentity();
  return id;
}

// Column-stacking Kronecker product of sparse matrices.
SparseComplex sparse_kron(const SparseComplex& a, const SparseComplex& b) {
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseComplex::InnerIterator ia(a, ka); ia; ++ia) {
      for (Eigen::Index kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseComplex::InnerIterator ib(b, kb); ib; ++ib) {
          trip.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                            ia.value() * ib.value());
        }
      }
    }
  }
  SparseComplex out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

double scaled_max(const ComplexMatrix& err, const ComplexMatrix& y0, const ComplexMatrix& y1,
                  double rtol, double atol) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    worst = std::max(worst, std::abs(err(i)) / scale);
  }
  return worst;
}

// Dense LU for moderate sizes, sparse LU beyond.
class ShiftedSolver {
 public:
  explicit ShiftedSolver(const SparseComplex& a) {
    lu_.analyzePattern(a);
    lu_.factorize(a);
    if (lu_.info() != Eigen::Success) {
      throw ConvergenceError("sparse LU factorization failed: " + lu_.lastErrorMessage(),
                             std::numeric_limits<double>::infinity());
    }
  }

  ComplexMatrix solve(const ComplexMatrix& b) const { return lu_.solve(b); }

 private:
  // solve() is logically const but SparseLU's is not.
  mutable Eigen::SparseLU<SparseComplex, Eigen::COLAMDOrdering<int>> lu_;
};

double sparse_inf_norm(const SparseComplex& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (SparseComplex::InnerIterator it(a, k); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return rows.maxCoeff();
}

ComplexMatrix unvec(const Eigen::VectorXcd& v, Eigen::Index n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

}  // namespace

void EvolutionSpec::validate() const {
  if (t_grid.empty()) throw ValidationError("evolution time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw ValidationError("time grid must be strictly increasing");
  }
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ValidationError("rtol and atol must be positive");
  if (!(max_step > 0.0)) throw ValidationError("max_step must be positive");
}

LindbladGenerator::LindbladGenerator(const Operator& H, const JumpList& jumps)
    : layout_(H.layout()) {
  ComplexMatrix h_eff = H.matrix();
  for (const auto& j : jumps) {
    if (!(j.op.layout() == layout_)) throw LayoutError("jump operator layout differs from H");
    if (j.rate < 0.0 || !std::isfinite(j.rate)) throw ValidationError("jump rates must be non-negative");
    if (j.rate == 0.0) continue;
    const ComplexMatrix l = std::sqrt(j.rate) * j.op.matrix();
    h_eff -= 0.5 * I * (l.adjoint() * l);
    jumps_.push_back(to_sparse(l));
    jumps_adj_.push_back(to_sparse(l.adjoint()));
  }
  h_eff_ = to_sparse(h_eff);
  h_eff_adj_ = to_sparse(h_eff.adjoint());
}

void LindbladGenerator::apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
  out.noalias() = -I * (h_eff_ * rho);
  out.noalias() += I * (rho * h_eff_adj_);
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    const ComplexMatrix lr = jumps_[k] * rho;
    out.noalias() += lr * jumps_adj_[k];
  }
}

void LindbladGenerator::apply_hermitian(const ComplexMatrix& rho, ComplexMatrix& out) const {
  const ComplexMatrix x = -I * (h_eff_ * rho);
  out = x + x.adjoint();
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    const ComplexMatrix lr = jumps_[k] * rho;
    out.noalias() += lr * jumps_adj_[k];
  }
}

SparseComplex LindbladGenerator::superoperator() const {
  // vec(A X B) = (B^T kron A) vec(X)
  const auto n = static_cast<Eigen::Index>(dim());
  const SparseComplex id = sparse_identity(n);
  const SparseComplex h_dag_t = h_eff_adj_.transpose();
  SparseComplex out = -I * sparse_kron(id, h_eff_) + I * sparse_kron(h_dag_t, id);
  for (const auto& l : jumps_) {
    const SparseComplex l_conj = l.conjugate();
    out += sparse_kron(l_conj, l);
  }
  out.makeCompressed();
  return out;
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const Operator& H, const JumpList& jumps) {
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != H.dim()) {
    throw DimensionError("lindblad_rhs: state and Hamiltonian dimensions differ");
  }
  LindbladGenerator gen(H, jumps);
  ComplexMatrix out(rho.rows(), rho.cols());
  gen.apply(rho, out);
  return out;
}

ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& H, const JumpList& jumps) {
  if (!(rho.layout() == H.layout())) throw LayoutError("lindblad_rhs: layouts differ");
  return lindblad_rhs(rho.matrix(), H, jumps);
}

void evolve(const DensityMatrix& rho0, const LindbladGenerator& gen, const EvolutionSpec& spec,
            const Observer& observer) {
  spec.validate();
  if (!(rho0.layout() == gen.layout())) throw LayoutError("evolve: initial state layout differs");

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2; (void)c3; (void)c4; (void)c5;

  const SpaceLayout& layout = rho0.layout();
  const auto n = static_cast<Eigen::Index>(layout.dim());
  ComplexMatrix y = rho0.matrix();
  ComplexMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), k5(n, n), k6(n, n), k7(n, n);
  ComplexMatrix tmp(n, n), y_new(n, n), err(n, n);

  double t = spec.t_grid.front();
  observer(t, rho0);
  gen.apply_hermitian(y, k1);

  const double span = spec.t_grid.back() - t;
  double h;
  {
    const double d0 = scaled_max(y, y, y, spec.rtol, spec.atol);
    const double d1 = scaled_max(k1, y, y, spec.rtol, spec.atol);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, spec.max_step, span > 0.0 ? span : h});
  }

  std::size_t steps = 0;
  for (std::size_t target_idx = 1; target_idx < spec.t_grid.size(); ++target_idx) {
    const double target = spec.t_grid[target_idx];
    while (t < target) {
      if (++steps > spec.max_steps) throw IntegrationError("evolve: step budget exhausted", t);
      const double remaining = target - t;
      const bool clipped = h >= remaining;
      const double step = clipped ? remaining : h;
      if (step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        throw IntegrationError("evolve: step size underflow", t);
      }

      tmp = y + step * a21 * k1;
      gen.apply_hermitian(tmp, k2);
      tmp = y + step * (a31 * k1 + a32 * k2);
      gen.apply_hermitian(tmp, k3);
      tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      gen.apply_hermitian(tmp, k4);
      tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      gen.apply_hermitian(tmp, k5);
      tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      gen.apply_hermitian(tmp, k6);
      y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      gen.apply_hermitian(y_new, k7);
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double en = scaled_max(err, y, y_new, spec.rtol, spec.atol);
      if (!std::isfinite(en)) throw IntegrationError("evolve: non-finite state", t);
      if (en <= 1.0) {
        t = clipped ? target : t + step;
        y = hermitian_part(y_new);
        k1 = hermitian_part(k7);
        const double fac = en == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 10.0);
        h = clipped ? std::max(h, step * fac) : step * fac;
      } else {
        h = step * std::clamp(0.9 * std::pow(en, -0.2), 0.2, 1.0);
      }
      h = std::min(h, spec.max_step);
    }
    observer(t, DensityMatrix(layout, y));
  }
}

Trajectory evolve(const DensityMatrix& rho0, const Operator& H, const JumpList& jumps,
                  const EvolutionSpec& spec) {
  if (!(rho0.layout() == H.layout())) throw LayoutError("evolve: initial state layout differs");
  const LindbladGenerator gen(H, jumps);
  Trajectory traj;
  traj.times.reserve(spec.t_grid.size());
  traj.states.reserve(spec.t_grid.size());
  evolve(rho0, gen, spec, [&](double t, const DensityMatrix& rho) {
    traj.times.push_back(t);
    traj.states.push_back(rho);
  });
  return traj;
}

namespace {

struct Block {
  Eigen::VectorXcd values;
  ComplexMatrix vectors;  // unit columns
  double residual;
};

/// Eigenpairs of l nearest `shift` by shift-invert subspace iteration with a
/// few guard vectors and Rayleigh-Ritz extraction.
/// With a positive kernel_tol only the pairs with |lambda| <= sqrt(kernel_tol)
/// are required to converge, so the block edge may sit inside a cluster.
Block nearest_eigenpairs(const SparseComplex& l, Complex shift, Eigen::Index count, std::mt19937_64& rng,
                         double tol, int max_iter, double kernel_tol = 0.0) {
  const Eigen::Index nn = l.rows();
  if (count < 1 || count > nn) throw ValidationError("slow_modes: bad block size");
  const Eigen::Index m = std::min(nn, count + std::max<Eigen::Index>(4, count));
  const double norm = sparse_inf_norm(l);
  const ShiftedSolver solver(SparseComplex(l - shift * sparse_identity(nn)));
  std::normal_distribution<double> normal;
  ComplexMatrix v(nn, m);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));

  Block b;
  b.residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    v = solver.solve(v);
    Eigen::HouseholderQR<ComplexMatrix> qr(v);
    v = qr.householderQ() * ComplexMatrix::Identity(nn, m);
    const ComplexMatrix t = v.adjoint() * (l * v);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(t);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index c) {
      return std::abs(es.eigenvalues()(a) - shift) < std::abs(es.eigenvalues()(c) - shift);
    });
    b.values.resize(count);
    b.vectors.resize(nn, count);
    b.residual = 0.0;
    Eigen::Index tested = 0;
    for (Eigen::Index k = 0; k < count; ++k) {
      const Eigen::Index j = order[static_cast<std::size_t>(k)];
      b.values(k) = es.eigenvalues()(j);
      b.vectors.col(k) = (v * es.eigenvectors().col(j)).normalized();
      if (kernel_tol > 0.0 && std::abs(b.values(k)) > std::sqrt(kernel_tol)) continue;
      const double r = (l * b.vectors.col(k) - b.values(k) * b.vectors.col(k)).norm();
      b.residual = std::max(b.residual, r / norm);
      ++tested;
    }
    if (kernel_tol > 0.0 && tested == 0) b.residual = std::numeric_limits<double>::infinity();
    if (b.residual <= tol) break;
  }
  if (!(b.residual <= 1e3 * tol)) {
    throw ConvergenceError("slow_modes: shift-invert iteration did not converge", b.residual);
  }
  return b;
}

ComplexMatrix kernel_columns(const Block& b, double tol) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < b.values.size(); ++k) {
    if (std::abs(b.values(k)) <= tol) keep.push_back(k);
  }
  ComplexMatrix out(b.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = b.vectors.col(keep[j]);
  return out;
}

}  // namespace

SlowModes slow_modes(const LindbladGenerator& gen, std::span<const SlowModeRequest> requests,
                     double tol, int max_iter) {
  const SparseComplex l = gen.superoperator();
  const auto n = static_cast<Eigen::Index>(gen.dim());
  SlowModes out;
  std::mt19937_64 rng(12345);
  for (const auto& req : requests) {
    const Block b = nearest_eigenpairs(l, req.shift, req.count, rng, tol, max_iter);
    for (Eigen::Index k = 0; k < req.count; ++k) {
      out.eigenvalues.push_back(b.values(k));
      out.modes.push_back(unvec(b.vectors.col(k), n));
    }
    out.residual = std::max(out.residual, b.residual);
  }
  return out;
}

DensityMatrix asymptotic_state(const LindbladGenerator& gen, const DensityMatrix& rho0, double kernel_tol) {
  if (!(rho0.layout() == gen.layout())) throw LayoutError("asymptotic_state: initial state layout differs");
  const SparseComplex l = gen.superoperator();
  const SparseComplex la = l.adjoint();
  const auto n = static_cast<Eigen::Index>(gen.dim());
  const Eigen::Index nn = l.rows();
  std::mt19937_64 rng(12345);
  for (Eigen::Index count = 4; count <= std::min<Eigen::Index>(32, nn); count *= 2) {
    const ComplexMatrix right = kernel_columns(nearest_eigenpairs(l, Complex(1e-3, 0.0), count, rng, 1e-12, 200, kernel_tol),
                                               kernel_tol);
    if (right.cols() == count) continue;
    const ComplexMatrix left = kernel_columns(nearest_eigenpairs(la, Complex(1e-3, 0.0), count, rng, 1e-12, 200, kernel_tol),
                                              kernel_tol);
    if (left.cols() != right.cols() || right.cols() == 0) {
      throw DegeneracyError("asymptotic_state: left and right kernels differ in dimension",
                            static_cast<double>(right.cols()));
    }
    const Eigen::Map<const Eigen::VectorXcd> v0(rho0.matrix().data(), nn);
    const ComplexMatrix overlap = left.adjoint() * right;
    const Eigen::VectorXcd c = overlap.fullPivLu().solve(left.adjoint() * v0);
    ComplexMatrix m = hermitian_part(unvec(right * c, n));
    m /= m.trace().real();
    return DensityMatrix(gen.layout(), std::move(m));
  }
  throw DegeneracyError("asymptotic_state: kernel larger than 31", 0.0);
}

namespace {

DensityMatrix integrate_to_convergence(const LindbladGenerator& gen, const SteadySpec& spec,
                                       double conv_tol) {
  const SpaceLayout& layout = gen.layout();
  DensityMatrix rho = spec.initial ? *spec.initial : DensityMatrix::basis_state(layout, 0);
  if (!(rho.layout() == layout)) throw LayoutError("steady_state: initial state layout differs");
  const auto n = static_cast<Eigen::Index>(layout.dim());
  ComplexMatrix d(n, n);
  double t = 0.0;
  double window = 1.0;
  double rtol = spec.rtol;
  double atol = spec.atol;
  double residual = std::numeric_limits<double>::infinity();
  while (true) {
    gen.apply(rho.matrix(), d);
    const double previous = residual;
    residual = d.norm();
    if (residual <= conv_tol) return rho;
    if (t >= spec.t_cap) break;
    // A stalled residual is step-controller noise at the stability limit, so
    // tighten the tolerances.
    if (residual > 0.5 * previous && rtol > 1e-13) {
      rtol = std::max(rtol / 10.0, 1e-13);
      atol = std::max(atol / 10.0, 1e-16);
    }
    const double next = std::min(t + window, spec.t_cap);
    EvolutionSpec es{{t, next}, rtol, atol};
    evolve(rho, gen, es, [&](double, const DensityMatrix& r) { rho = r; });
    t = next;
    window = std::min(2.0 * window, 50.0);
  }
  throw ConvergenceError("steady_state: t_cap reached before convergence", residual);
}

DensityMatrix nullspace_state(const LindbladGenerator& gen, const SteadySpec& spec) {
  const SlowModeRequest req[] = {{Complex(1e-3, 0.0), 2}};
  SlowModes modes = slow_modes(gen, req);
  std::size_t k0 = std::abs(modes.eigenvalues[0]) <= std::abs(modes.eigenvalues[1]) ? 0 : 1;
  const double gap = std::abs(modes.eigenvalues[1 - k0]);
  if (gap <= spec.degeneracy_tol) {
    if (spec.initial) return asymptotic_state(gen, *spec.initial, spec.degeneracy_tol);
    throw DegeneracyError("steady_state: Liouvillian kernel is degenerate", gap);
  }
  ComplexMatrix m = modes.modes[k0];
  const Complex tr = m.trace();
  if (std::abs(tr) < 1e-14) throw DegeneracyError("steady_state: kernel vector is traceless", gap);
  m = hermitian_part(m / tr);
  m /= m.trace().real();
  return DensityMatrix(gen.layout(), std::move(m));
}

}  // namespace

DensityMatrix symmetric_steady_state(const LindbladGenerator& gen, std::span<const std::size_t> perm,
                                     const SteadySpec& spec) {
  const std::size_t n = gen.dim();
  if (perm.size() != n) throw DimensionError("symmetric_steady_state: permutation size differs");
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || perm[perm[i]] != i) throw ValidationError("symmetric_steady_state: not an involution");
  }
  // Orthonormal basis of the invariant vectors, one column per orbit of (i, j) -> (perm i, perm j).
  const std::size_t nn = n * n;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::Index cols = 0;
  for (std::size_t k = 0; k < nn; ++k) {
    const std::size_t i = k % n, j = k / n;
    const std::size_t partner = perm[i] + perm[j] * n;
    if (partner < k) continue;
    if (partner == k) {
      trip.emplace_back(static_cast<Eigen::Index>(k), cols, 1.0);
    } else {
      trip.emplace_back(static_cast<Eigen::Index>(k), cols, std::numbers::sqrt2 / 2.0);
      trip.emplace_back(static_cast<Eigen::Index>(partner), cols, std::numbers::sqrt2 / 2.0);
    }
    ++cols;
  }
  SparseComplex basis(static_cast<Eigen::Index>(nn), cols);
  {
    Eigen::SparseMatrix<double> real_basis(static_cast<Eigen::Index>(nn), cols);
    real_basis.setFromTriplets(trip.begin(), trip.end());
    basis = real_basis.cast<Complex>();
  }
  const SparseComplex l = gen.superoperator();
  SparseComplex reduced = SparseComplex(basis.transpose()) * l * basis;
  reduced.makeCompressed();
  std::mt19937_64 rng(12345);
  const Block b = nearest_eigenpairs(reduced, Complex(1e-3, 0.0), std::min<Eigen::Index>(2, cols), rng, 1e-12, 200);
  const Eigen::Index k0 = std::abs(b.values(0)) <= std::abs(b.values(1)) ? 0 : 1;
  const double gap = std::abs(b.values(1 - k0));
  if (gap <= spec.degeneracy_tol) throw DegeneracyError("symmetric_steady_state: kernel is degenerate", gap);
  const Eigen::VectorXcd v = basis * b.vectors.col(k0);
  ComplexMatrix m = unvec(v, static_cast<Eigen::Index>(n));
  const Complex tr = m.trace();
  if (std::abs(tr) < 1e-14) throw DegeneracyError("symmetric_steady_state: kernel vector is traceless", gap);
  m = hermitian_part(m / tr);
  m /= m.trace().real();
  DensityMatrix rho(gen.layout(), std::move(m));
  const double conv_tol = spec.conv_tol > 0.0 ? spec.conv_tol : 1e-10 * static_cast<double>(n);
  ComplexMatrix d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  gen.apply(rho.matrix(), d);
  if (d.norm() > conv_tol) throw ConvergenceError("symmetric_steady_state: residual exceeds tolerance", d.norm());
  return rho;
}

DensityMatrix steady_state(const LindbladGenerator& gen, const SteadySpec& spec) {
  if (!(spec.conv_tol >= 0.0) || !(spec.t_cap > 0.0)) throw ValidationError("bad steady-state spec");
  const double conv_tol = spec.conv_tol > 0.0 ? spec.conv_tol : 1e-10 * static_cast<double>(gen.dim());
  DensityMatrix rho = spec.method == SteadyMethod::nullspace ? nullspace_state(gen, spec)
                                                             : integrate_to_convergence(gen, spec, conv_tol);
  const auto n = static_cast<Eigen::Index>(gen.dim());
  ComplexMatrix d(n, n);
  gen.apply(rho.matrix(), d);
  if (d.norm() > conv_tol) {
    throw ConvergenceError("steady_state: residual exceeds tolerance", d.norm());
  }
  return rho;
}

DensityMatrix steady_state(const Operator& H, const JumpList& jumps, const SteadySpec& spec) {
  const bool dissipative = std::any_of(jumps.begin(), jumps.end(), [](const Jump& j) { return j.rate > 0.0; });
  if (!dissipative) throw ValidationError("steady_state needs at least one jump with positive rate");
  return steady_state(LindbladGenerator(H, jumps), spec);
}

SlowManifoldPropagator::SlowManifoldPropagator(const SlowModes& modes, const DensityMatrix& rho,
                                               double t0)
    : layout_(rho.layout()), eigenvalues_(modes.eigenvalues), modes_(modes.modes), t0_(t0) {
  if (modes_.empty()) throw ValidationError("slow manifold needs at least one mode");
  const Eigen::Index nn = rho.matrix().size();
  ComplexMatrix basis(nn, static_cast<Eigen::Index>(modes_.size()));
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (modes_[k].size() != nn) throw DimensionError("slow mode size differs from state");
    basis.col(static_cast<Eigen::Index>(k)) =
        Eigen::Map<const Eigen::VectorXcd>(modes_[k].data(), nn);
  }
  const Eigen::Map<const Eigen::VectorXcd> v(rho.matrix().data(), nn);
  coeffs_ = basis.colPivHouseholderQr().solve(Eigen::VectorXcd(v));
  residual_ = (basis * coeffs_ - v).norm() / v.norm();
}

DensityMatrix SlowManifoldPropagator::at(double t) const {
  ComplexMatrix m = ComplexMatrix::Zero(modes_.front().rows(), modes_.front().cols());
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    m += coeffs_(static_cast<Eigen::Index>(k)) * std::exp(eigenvalues_[k] * (t - t0_)) * modes_[k];
  }
  m = hermitian_part(m);
  m /= m.trace().real();
  return DensityMatrix(layout_, std::move(m));
}

}  // namespace ringqed
