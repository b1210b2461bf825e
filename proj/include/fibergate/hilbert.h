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

#pragma once

// Truncated composite space atom1 (x) atom2 (x) cavity1 (x) cavity2 (x) fiber
// and the sparse operator algebra on it.

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fibergate {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

enum class Level : int { g = 0, f = 1, e = 2 };
enum class Mode : int { cavity1 = 0, cavity2 = 1, fiber = 2 };
enum class NormalMode : int { c0 = 0, c1 = 1, c2 = 2 };

inline constexpr int kAtomDim = 3;
inline constexpr int kModeCount = 3;

char level_name(Level l);

struct BasisLabel {
  Level atom1 = Level::g;
  Level atom2 = Level::g;
  int n1 = 0;  // cavity 1
  int n2 = 0;  // cavity 2
  int nb = 0;  // fiber

  int photons() const { return n1 + n2 + nb; }
  bool operator==(const BasisLabel&) const = default;
};

/// Flat index enumerates (atom1, atom2, n1, n2, nb) in row-major order with
/// atom levels ordered (g, f, e).
class HilbertSpace {
 public:
  /// Throws ParameterError for n_max < 1.
  explicit HilbertSpace(int n_max);

  int n_max() const { return n_max_; }
  int fock_dim() const { return n_max_ + 1; }
  int dim() const { return dim_; }

  int index(const BasisLabel& b) const;
  BasisLabel label(int index) const;

  /// True when every mode occupation is below the cutoff.
  bool interior(int index) const;

  bool operator==(const HilbertSpace&) const = default;

 private:
  int n_max_;
  int dim_;
};

HilbertSpace build_space(int n_max);

class QOperator {
 public:
  QOperator(HilbertSpace space, SparseMatrix m);

  const HilbertSpace& space() const { return space_; }
  const SparseMatrix& matrix() const { return m_; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m_); }

  QOperator adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  /// Restriction to rows and columns whose basis states satisfy `keep`.
  template <class Pred>
  Eigen::MatrixXcd restricted(Pred keep) const;

  /// Plain-text sparse triplets, one "row col re im" per line.
  void export_triplets(std::ostream& os) const;

  QOperator& operator+=(const QOperator& o);
  QOperator& operator-=(const QOperator& o);
  QOperator& operator*=(cplx s);

  friend QOperator operator+(QOperator a, const QOperator& b) { return a += b; }
  friend QOperator operator-(QOperator a, const QOperator& b) { return a -= b; }
  friend QOperator operator*(QOperator a, cplx s) { return a *= s; }
  friend QOperator operator*(cplx s, QOperator a) { return a *= s; }
  friend QOperator operator*(double s, QOperator a) { return a *= cplx(s); }
  friend QOperator operator*(const QOperator& a, const QOperator& b);

 private:
  HilbertSpace space_;
  SparseMatrix m_;
};

QOperator commutator(const QOperator& a, const QOperator& b);

/// Largest entrywise modulus.
double max_abs(const QOperator& a);

class QState {
 public:
  /// Throws Error when the amplitudes are not normalized within 1e-9.
  QState(HilbertSpace space, Eigen::VectorXcd amplitudes);

  const HilbertSpace& space() const { return space_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  cplx overlap(const QState& other) const { return amps_.dot(other.amps_); }

 private:
  HilbertSpace space_;
  Eigen::VectorXcd amps_;
};

QOperator identity(const HilbertSpace& space);
QOperator zero_operator(const HilbertSpace& space);

/// Truncated ladder operator on one physical mode; top row of a^dagger is zero.
QOperator mode_annihilation(const HilbertSpace& space, Mode which);
QOperator mode_number(const HilbertSpace& space, Mode which);

/// |bra><ket| on atom `which_atom` (1 or 2), identity elsewhere.
QOperator atomic_projector(const HilbertSpace& space, int which_atom, Level bra, Level ket);

/// c0 = (a1 - e^{i phi} a2)/sqrt2, c1 = (a1 + e^{i phi} a2 + sqrt2 b)/2,
/// c2 = (a1 + e^{i phi} a2 - sqrt2 b)/2.
QOperator normal_mode(const HilbertSpace& space, NormalMode which, double phi);

/// Rows of the 3x3 matrix mapping (a1, e^{i phi} a2, b) to (c0, c1, c2).
Eigen::Matrix3d normal_mode_coefficients();

/// Total excited-state population operator |e1><e1| + |e2><e2|.
QOperator excited_number(const HilbertSpace& space);
/// a1^dagger a1 + a2^dagger a2 + b^dagger b.
QOperator photon_number(const HilbertSpace& space);

/// Throws Error for out-of-range occupations.
QState basis_state(const HilbertSpace& space, Level a1, Level a2, int n1 = 0, int n2 = 0, int nb = 0);

template <class Pred>
Eigen::MatrixXcd QOperator::restricted(Pred keep) const {
  std::vector<int> idx;
  for (int i = 0; i < space_.dim(); ++i) {
    if (keep(space_.label(i))) idx.push_back(i);
  }
  const Eigen::MatrixXcd d = dense();
  Eigen::MatrixXcd out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = d(idx[i], idx[j]);
  }
  return out;
}

}  // namespace fibergate
