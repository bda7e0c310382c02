#include "ringqed/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "ringqed/errors.hpp"

namespace ringqed {

namespace {

int canonical_rank(Factor f) {
  switch (f) {
    case Factor::internal: return 0;
    case Factor::external: return 1;
    case Factor::modeCW:
    case Factor::modeS: return 2;
    case Factor::modeCCW:
    case Factor::modeA: return 3;
  }
  return -1;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

}  // namespace

std::string_view to_string(Factor f) {
  switch (f) {
    case Factor::internal: return "internal";
    case Factor::external: return "external";
    case Factor::modeCW: return "modeCW";
    case Factor::modeCCW: return "modeCCW";
    case Factor::modeS: return "modeS";
    case Factor::modeA: return "modeA";
  }
  return "unknown";
}

SpaceLayout::SpaceLayout(std::vector<FactorSpec> factors, ExternalBasis basis)
    : factors_(std::move(factors)), basis_(basis) {
  if (factors_.empty()) throw LayoutError("layout needs at least one factor");
  int last = -1;
  for (const auto& f : factors_) {
    if (f.dim == 0) throw LayoutError("factor " + std::string(to_string(f.label)) + " has dim 0");
    const int rank = canonical_rank(f.label);
    if (rank <= last) {
      throw LayoutError("factor " + std::string(to_string(f.label)) +
                        " is duplicated or out of canonical order");
    }
    last = rank;
    dim_ *= f.dim;
  }
}

bool SpaceLayout::contains(Factor f) const noexcept {
  return std::any_of(factors_.begin(), factors_.end(),
                     [f](const FactorSpec& s) { return s.label == f; });
}

std::size_t SpaceLayout::position(Factor f) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == f) return i;
  }
  throw LayoutError("layout has no factor " + std::string(to_string(f)));
}

std::size_t SpaceLayout::factor_dim(Factor f) const { return factors_[position(f)].dim; }

SpaceLayout SpaceLayout::subset(std::span<const Factor> keep) const {
  if (keep.empty()) throw LayoutError("partial layout needs at least one factor");
  std::vector<FactorSpec> out;
  for (Factor f : keep) position(f);
  for (const auto& s : factors_) {
    if (std::find(keep.begin(), keep.end(), s.label) != keep.end()) out.push_back(s);
  }
  return SpaceLayout(std::move(out), basis_);
}

SpaceLayout SpaceLayout::with_basis(ExternalBasis basis) const {
  SpaceLayout copy = *this;
  copy.basis_ = basis;
  return copy;
}

SpaceLayout SpaceLayout::relabeled(Factor from, Factor to) const {
  std::vector<FactorSpec> out = factors_;
  out[position(from)].label = to;
  return SpaceLayout(std::move(out), basis_);
}

ComplexMatrix SpaceLayout::lift(Factor f, const ComplexMatrix& local) const {
  const std::size_t pos = position(f);
  if (static_cast<std::size_t>(local.rows()) != factors_[pos].dim) {
    throw DimensionError("operator on " + std::string(to_string(f)) + " has dim " +
                         std::to_string(local.rows()) + ", factor has " +
                         std::to_string(factors_[pos].dim));
  }
  require_square(local, "lift");
  std::size_t before = 1;
  std::size_t after = 1;
  for (std::size_t i = 0; i < pos; ++i) before *= factors_[i].dim;
  for (std::size_t i = pos + 1; i < factors_.size(); ++i) after *= factors_[i].dim;
  const auto n_before = static_cast<Eigen::Index>(before);
  const auto n_after = static_cast<Eigen::Index>(after);
  return kron({ComplexMatrix::Identity(n_before, n_before), local,
               ComplexMatrix::Identity(n_after, n_after)});
}

Operator::Operator(SpaceLayout layout, ComplexMatrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  require_square(matrix_, "Operator");
  if (static_cast<std::size_t>(matrix_.rows()) != layout_.dim()) {
    throw DimensionError("matrix dim " + std::to_string(matrix_.rows()) +
                         " does not match layout dim " + std::to_string(layout_.dim()));
  }
}

Operator Operator::adjoint() const { return Operator(layout_, matrix_.adjoint()); }

bool Operator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

namespace {
void require_same_layout(const Operator& a, const Operator& b) {
  if (!(a.layout() == b.layout())) throw LayoutError("operator layouts differ");
}
}  // namespace

Operator operator+(const Operator& a, const Operator& b) {
  require_same_layout(a, b);
  return Operator(a.layout_, a.matrix_ + b.matrix_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_layout(a, b);
  return Operator(a.layout_, a.matrix_ - b.matrix_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_layout(a, b);
  return Operator(a.layout_, a.matrix_ * b.matrix_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(a.layout_, s * a.matrix_); }

DensityMatrix::DensityMatrix(SpaceLayout layout, ComplexMatrix matrix)
    : DensityMatrix(Operator(std::move(layout), std::move(matrix))) {}

DensityMatrix::DensityMatrix(Operator op) : op_(std::move(op)) {
  const ComplexMatrix& m = op_.matrix();
  if (!all_finite(m)) throw InvalidStateError("density matrix has non-finite entries");
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-6) {
    throw InvalidStateError("density matrix is not Hermitian (max |rho - rho^dag| = " +
                            std::to_string(skew) + ")");
  }
  op_ = Operator(op_.layout(), hermitian_part(m));
  const Complex tr = op_.matrix().trace();
  if (std::abs(tr - 1.0) > trace_tolerance) {
    throw InvalidStateError("density matrix trace is " + std::to_string(tr.real()) + "+" +
                            std::to_string(tr.imag()) + "i");
  }
}

DensityMatrix DensityMatrix::pure(SpaceLayout layout, const ComplexVector& psi) {
  if (static_cast<std::size_t>(psi.size()) != layout.dim()) {
    throw DimensionError("state vector size does not match layout");
  }
  return DensityMatrix(std::move(layout), psi * psi.adjoint());
}

DensityMatrix DensityMatrix::basis_state(SpaceLayout layout, std::size_t index) {
  if (index >= layout.dim()) throw DimensionError("basis index out of range");
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(layout.dim()));
  psi(static_cast<Eigen::Index>(index)) = 1.0;
  return pure(std::move(layout), psi);
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_positive(double tol) const { return min_eigenvalue() >= -tol; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "kron");
  require_square(b, "kron");
  const Eigen::Index na = a.rows();
  const Eigen::Index nb = b.rows();
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
  }
  return out;
}

ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) throw DimensionError("kron of an empty list");
  auto it = factors.begin();
  ComplexMatrix out = *it;
  require_square(out, "kron");
  for (++it; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

ComplexMatrix kron(const Operator& a, const Operator& b) { return kron(a.matrix(), b.matrix()); }

ComplexMatrix annihilation(std::size_t n_max) {
  if (n_max == 0) throw DimensionError("annihilation operator needs n_max >= 1");
  const auto n = static_cast<Eigen::Index>(n_max + 1);
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

ComplexMatrix number_operator(std::size_t n_max) {
  const ComplexMatrix a = annihilation(n_max);
  return a.adjoint() * a;
}

PauliSet pauli_set() {
  PauliSet p;
  p.plus = ComplexMatrix::Zero(2, 2);
  p.plus(1, 0) = 1.0;
  p.minus = p.plus.adjoint();
  p.x = p.plus + p.minus;
  p.y = Complex(0, -1) * (p.plus - p.minus);
  p.z = p.plus * p.minus - p.minus * p.plus;
  return p;
}

Complex expectation(const Operator& obs, const DensityMatrix& rho) {
  if (!(obs.layout() == rho.layout())) throw LayoutError("expectation: layouts differ");
  // Tr(O rho) = sum_ij O_ij rho_ji
  return (obs.matrix().cwiseProduct(rho.matrix().transpose())).sum();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Factor> keep) {
  const SpaceLayout& layout = rho.layout();
  const SpaceLayout reduced = layout.subset(keep);
  const auto factors = layout.factors();
  const std::size_t nf = factors.size();

  std::vector<bool> kept(nf);
  for (std::size_t i = 0; i < nf; ++i) kept[i] = reduced.contains(factors[i].label);

  // Split every full index into (kept index, traced index).
  const std::size_t n = layout.dim();
  std::size_t traced_dim = 1;
  for (std::size_t i = 0; i < nf; ++i) {
    if (!kept[i]) traced_dim *= factors[i].dim;
  }
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups(traced_dim);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rem = idx;
    std::size_t k_idx = 0, t_idx = 0, k_stride = 1, t_stride = 1;
    for (std::size_t i = nf; i-- > 0;) {
      const std::size_t d = factors[i].dim;
      const std::size_t digit = rem % d;
      rem /= d;
      if (kept[i]) {
        k_idx += digit * k_stride;
        k_stride *= d;
      } else {
        t_idx += digit * t_stride;
        t_stride *= d;
      }
    }
    groups[t_idx].emplace_back(idx, k_idx);
  }

  const auto nk = static_cast<Eigen::Index>(reduced.dim());
  ComplexMatrix out = ComplexMatrix::Zero(nk, nk);
  const ComplexMatrix& m = rho.matrix();
  for (const auto& g : groups) {
    for (const auto& [i, ki] : g) {
      for (const auto& [j, kj] : g) {
        out(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(kj)) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return DensityMatrix(reduced, std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<Factor> keep) {
  return partial_trace(rho, std::span<const Factor>(keep.begin(), keep.size()));
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

}  // namespace ringqed
