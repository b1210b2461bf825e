// Copyright 2026 The fibergate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fibergate/hilbert.h"

#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "fibergate/errors.h"

namespace fibergate {

char level_name(Level l) {
  switch (l) {
    case Level::g: return 'g';
    case Level::f: return 'f';
    case Level::e: return 'e';
  }
  return '?';
}

HilbertSpace::HilbertSpace(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw ParameterError("n_max", "must be >= 1");
  const int f = n_max + 1;
  dim_ = kAtomDim * kAtomDim * f * f * f;
}

int HilbertSpace::index(const BasisLabel& b) const {
  const int f = fock_dim();
  return (((static_cast<int>(b.atom1) * kAtomDim + static_cast<int>(b.atom2)) * f + b.n1) * f + b.n2) * f + b.nb;
}

BasisLabel HilbertSpace::label(int index) const {
  const int f = fock_dim();
  BasisLabel b;
  b.nb = index % f;
  index /= f;
  b.n2 = index % f;
  index /= f;
  b.n1 = index % f;
  index /= f;
  b.atom2 = static_cast<Level>(index % kAtomDim);
  b.atom1 = static_cast<Level>(index / kAtomDim);
  return b;
}

bool HilbertSpace::interior(int index) const {
  const BasisLabel b = label(index);
  return b.n1 < n_max_ && b.n2 < n_max_ && b.nb < n_max_;
}

HilbertSpace build_space(int n_max) { return HilbertSpace(n_max); }

QOperator::QOperator(HilbertSpace space, SparseMatrix m) : space_(space), m_(std::move(m)) {
  if (m_.rows() != space_.dim() || m_.cols() != space_.dim()) {
    throw Error("operator dimension does not match the Hilbert space");
  }
  m_.makeCompressed();
}

QOperator QOperator::adjoint() const { return QOperator(space_, SparseMatrix(m_.adjoint())); }

bool QOperator::is_hermitian(double tol) const { return max_abs(*this - adjoint()) < tol; }

void QOperator::export_triplets(std::ostream& os) const {
  const auto prec = os.precision(17);
  for (int k = 0; k < m_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m_, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
  os.precision(prec);
}

QOperator& QOperator::operator+=(const QOperator& o) {
  if (!(o.space_ == space_)) throw Error("operator spaces differ");
  m_ = SparseMatrix(m_ + o.m_);
  return *this;
}

QOperator& QOperator::operator-=(const QOperator& o) {
  if (!(o.space_ == space_)) throw Error("operator spaces differ");
  m_ = SparseMatrix(m_ - o.m_);
  return *this;
}

QOperator& QOperator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

QOperator operator*(const QOperator& a, const QOperator& b) {
  if (!(a.space_ == b.space_)) throw Error("operator spaces differ");
  return QOperator(a.space_, SparseMatrix(a.m_ * b.m_));
}

QOperator commutator(const QOperator& a, const QOperator& b) { return a * b - b * a; }

double max_abs(const QOperator& a) {
  double m = 0;
  const SparseMatrix& s = a.matrix();
  for (int k = 0; k < s.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(s, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

QState::QState(HilbertSpace space, Eigen::VectorXcd amplitudes) : space_(space), amps_(std::move(amplitudes)) {
  if (amps_.size() != space_.dim()) throw Error("state dimension does not match the Hilbert space");
  if (std::abs(amps_.norm() - 1.0) > 1e-9) throw Error("state is not normalized");
}

namespace {

enum class Factor { atom1, atom2, cavity1, cavity2, fiber };

int local_index(const BasisLabel& b, Factor f) {
  switch (f) {
    case Factor::atom1: return static_cast<int>(b.atom1);
    case Factor::atom2: return static_cast<int>(b.atom2);
    case Factor::cavity1: return b.n1;
    case Factor::cavity2: return b.n2;
    case Factor::fiber: return b.nb;
  }
  return 0;
}

void set_local_index(BasisLabel& b, Factor f, int v) {
  switch (f) {
    case Factor::atom1: b.atom1 = static_cast<Level>(v); break;
    case Factor::atom2: b.atom2 = static_cast<Level>(v); break;
    case Factor::cavity1: b.n1 = v; break;
    case Factor::cavity2: b.n2 = v; break;
    case Factor::fiber: b.nb = v; break;
  }
}

// Embeds a single-factor matrix by tensoring with identity elsewhere.
QOperator embed(const HilbertSpace& space, Factor f, const Eigen::MatrixXcd& local) {
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (int col = 0; col < space.dim(); ++col) {
    const BasisLabel b = space.label(col);
    const int j = local_index(b, f);
    for (int i = 0; i < local.rows(); ++i) {
      const cplx v = local(i, j);
      if (v == cplx(0)) continue;
      BasisLabel out = b;
      set_local_index(out, f, i);
      triplets.emplace_back(space.index(out), col, v);
    }
  }
  SparseMatrix m(space.dim(), space.dim());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return QOperator(space, std::move(m));
}

Factor mode_factor(Mode m) {
  switch (m) {
    case Mode::cavity1: return Factor::cavity1;
    case Mode::cavity2: return Factor::cavity2;
    case Mode::fiber: return Factor::fiber;
  }
  return Factor::fiber;
}

}  // namespace

QOperator identity(const HilbertSpace& space) {
  SparseMatrix m(space.dim(), space.dim());
  m.setIdentity();
  return QOperator(space, std::move(m));
}

QOperator zero_operator(const HilbertSpace& space) {
  return QOperator(space, SparseMatrix(space.dim(), space.dim()));
}

QOperator mode_annihilation(const HilbertSpace& space, Mode which) {
  const int f = space.fock_dim();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(f, f);
  for (int n = 1; n < f; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return embed(space, mode_factor(which), a);
}

QOperator mode_number(const HilbertSpace& space, Mode which) {
  const QOperator a = mode_annihilation(space, which);
  return a.adjoint() * a;
}

QOperator atomic_projector(const HilbertSpace& space, int which_atom, Level bra, Level ket) {
  if (which_atom != 1 && which_atom != 2) throw Error("atom index must be 1 or 2");
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(kAtomDim, kAtomDim);
  p(static_cast<int>(bra), static_cast<int>(ket)) = 1.0;
  return embed(space, which_atom == 1 ? Factor::atom1 : Factor::atom2, p);
}

Eigen::Matrix3d normal_mode_coefficients() {
  const double h = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix3d c;
  // columns: a1, e^{i phi} a2, b
  c << h, -h, 0,
       0.5, 0.5, h,
       0.5, 0.5, -h;
  return c;
}

QOperator normal_mode(const HilbertSpace& space, NormalMode which, double phi) {
  const Eigen::Matrix3d c = normal_mode_coefficients();
  const int row = static_cast<int>(which);
  const cplx phase = std::polar(1.0, phi);
  return c(row, 0) * mode_annihilation(space, Mode::cavity1) +
         cplx(c(row, 1)) * phase * mode_annihilation(space, Mode::cavity2) +
         c(row, 2) * mode_annihilation(space, Mode::fiber);
}

QOperator excited_number(const HilbertSpace& space) {
  return atomic_projector(space, 1, Level::e, Level::e) + atomic_projector(space, 2, Level::e, Level::e);
}

QOperator photon_number(const HilbertSpace& space) {
  return mode_number(space, Mode::cavity1) + mode_number(space, Mode::cavity2) + mode_number(space, Mode::fiber);
}

QState basis_state(const HilbertSpace& space, Level a1, Level a2, int n1, int n2, int nb) {
  for (int n : {n1, n2, nb}) {
    if (n < 0 || n > space.n_max()) {
      throw Error("occupation " + std::to_string(n) + " outside [0, " + std::to_string(space.n_max()) + "]");
    }
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  v(space.index({a1, a2, n1, n2, nb})) = 1.0;
  return QState(space, std::move(v));
}

}  // namespace fibergate
