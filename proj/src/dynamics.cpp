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

#include "fibergate/dynamics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "fibergate/errors.h"

namespace fibergate {

namespace {

using Mat = Eigen::MatrixXcd;

// H(t) = S + sum_w (e^{iwt} B_w + e^{-iwt} B_w^dagger), with terms of equal
// frequency merged. Narrow right-hand sides are multiplied term by term;
// wide ones (density matrices) go through a single sparse matrix whose
// values are refreshed in place on a fixed union sparsity pattern.
class CompiledGenerator {
 public:
  CompiledGenerator(const TimeDependentOperator& h, const SparseMatrix& extra_static)
      : static_(h.static_part().matrix() + extra_static) {
    static_.makeCompressed();
    for (const auto& term : h.terms()) {
      auto it = std::find_if(groups_.begin(), groups_.end(),
                             [&](const Group& g) { return g.freq == term.frequency; });
      if (it == groups_.end()) {
        groups_.push_back({term.frequency, SparseMatrix(term.amplitude * term.op.matrix()), {}, {}, {}});
      } else {
        it->op = SparseMatrix(it->op + term.amplitude * term.op.matrix());
      }
    }
    std::vector<Eigen::Triplet<cplx>> pattern;
    auto collect = [&](const SparseMatrix& m) {
      for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) pattern.emplace_back(it.row(), it.col(), 1.0);
      }
    };
    collect(static_);
    for (auto& g : groups_) {
      g.op.makeCompressed();
      g.op_adj = SparseMatrix(g.op.adjoint());
      g.op_adj.makeCompressed();
      collect(g.op);
      collect(g.op_adj);
    }
    pattern_.resize(static_.rows(), static_.cols());
    pattern_.setFromTriplets(pattern.begin(), pattern.end());
    pattern_.makeCompressed();
    static_vals_ = align(static_);
    for (auto& g : groups_) {
      g.vals = align(g.op);
      g.vals_adj = align(g.op_adj);
    }
  }

  // out = H(t) x
  void apply(double t, const Mat& x, Mat& out) {
    if (x.cols() <= 8) {
      out.noalias() = static_ * x;
      for (const auto& g : groups_) {
        const cplx c = std::polar(1.0, g.freq * t);
        tmp_.noalias() = g.op * x;
        out += c * tmp_;
        tmp_.noalias() = g.op_adj * x;
        out += std::conj(c) * tmp_;
      }
      return;
    }
    fill(t);
    out.noalias() = pattern_ * x;
  }

 private:
  struct Group {
    double freq;
    SparseMatrix op;
    SparseMatrix op_adj;
    std::vector<cplx> vals;
    std::vector<cplx> vals_adj;
  };

  std::vector<cplx> align(const SparseMatrix& m) const {
    std::vector<cplx> v(pattern_.nonZeros(), cplx(0));
    const int* outer = pattern_.outerIndexPtr();
    const int* inner = pattern_.innerIndexPtr();
    for (int row = 0; row < m.outerSize(); ++row) {
      for (SparseMatrix::InnerIterator it(m, row); it; ++it) {
        const int* begin = inner + outer[row];
        const int* end = inner + outer[row + 1];
        const int* pos = std::lower_bound(begin, end, static_cast<int>(it.col()));
        v[pos - inner] += it.value();
      }
    }
    return v;
  }

  void fill(double t) {
    cplx* vals = pattern_.valuePtr();
    const std::size_t n = static_vals_.size();
    std::copy(static_vals_.begin(), static_vals_.end(), vals);
    for (const auto& g : groups_) {
      const cplx c = std::polar(1.0, g.freq * t);
      const cplx cc = std::conj(c);
      for (std::size_t i = 0; i < n; ++i) vals[i] += c * g.vals[i] + cc * g.vals_adj[i];
    }
  }

  SparseMatrix static_;
  std::vector<Group> groups_;
  SparseMatrix pattern_;
  std::vector<cplx> static_vals_;
  Mat tmp_;
};

double row_sum_norm(const SparseMatrix& m) {
  double best = 0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double s = 0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

double resolve_dt(const TimeDependentOperator& h, const IntegratorConfig& cfg) {
  const double bound = step_bound(h);
  if (cfg.dt > 0) {
    if (cfg.dt > bound * (1 + 1e-12)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "dt = %.6g exceeds the step bound %.6g (2pi/omega_max/20)", cfg.dt, bound);
      throw IntegratorError(buf);
    }
    return cfg.dt;
  }
  return std::min(bound, cfg.max_dt);
}

// Drives either integrator. `f(t, y, out)` evaluates the right-hand side;
// `on_step(t, y, record)` is called at t_start and after every accepted step.
template <class Rhs, class OnStep>
void integrate(Rhs&& f, Mat& y, double t_start, double t_final, double dt, const IntegratorConfig& cfg,
               Trajectory& traj, OnStep&& on_step) {
  if (!(t_final > 0)) throw ParameterError("t_final", "must be > 0");
  const double record_dt = cfg.record_stride > 0 ? 1.0 / cfg.record_stride : t_final;
  on_step(t_start, y, true);

  if (cfg.method == Method::rk4) {
    const long n = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    if (n > cfg.max_steps) {
      throw IntegratorError("step limit exceeded: " + std::to_string(n) + " steps requested, limit " +
                            std::to_string(cfg.max_steps));
    }
    const double h = t_final / static_cast<double>(n);
    const long every = std::max(1L, std::lround(record_dt / h));
    Mat k1, k2, k3, k4, tmp;
    for (long i = 0; i < n; ++i) {
      const double t = t_start + h * static_cast<double>(i);
      f(t, y, k1);
      tmp = y + (h / 2) * k1;
      f(t + h / 2, tmp, k2);
      tmp = y + (h / 2) * k2;
      f(t + h / 2, tmp, k3);
      tmp = y + h * k3;
      f(t + h, tmp, k4);
      y += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const bool last = i + 1 == n;
      on_step(t_start + h * static_cast<double>(i + 1), y, last || (i + 1) % every == 0);
    }
    traj.steps = n;
    traj.dt = h;
    return;
  }

  // Dormand-Prince 5(4) with first-same-as-last reuse.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                          e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

  Mat k1, k2, k3, k4, k5, k6, k7, tmp, ynew, err;
  double t = t_start;
  const double t_end = t_start + t_final;
  double h = std::min(dt, record_dt);
  double next_record = t_start + record_dt;
  double smallest = h;
  long steps = 0;
  f(t, y, k1);
  while (t < t_end - 1e-12 * t_final) {
    if (steps >= cfg.max_steps) throw IntegratorError("step limit exceeded in adaptive integration");
    const double target = std::min(next_record, t_end);
    const bool clipped = t + h >= target - 1e-12 * t_final;
    const double step = clipped ? target - t : h;

    tmp = y + step * a21 * k1;
    f(t + c2 * step, tmp, k2);
    tmp = y + step * (a31 * k1 + a32 * k2);
    f(t + c3 * step, tmp, k3);
    tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * step, tmp, k4);
    tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * step, tmp, k5);
    tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + step, tmp, k6);
    ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + step, ynew, k7);
    err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = cfg.tolerance * (1.0 + std::max(y.cwiseAbs().maxCoeff(), ynew.cwiseAbs().maxCoeff()));
    const double ratio = err.cwiseAbs().maxCoeff() / scale;
    ++steps;
    if (ratio <= 1.0) {
      t = clipped ? target : t + step;
      y.swap(ynew);
      k1.swap(k7);
      smallest = std::min(smallest, step);
      const bool record = clipped && (target == next_record || target == t_end);
      if (clipped && target == next_record) next_record += record_dt;
      on_step(t, y, record || t >= t_end - 1e-12 * t_final);
    }
    const double factor = ratio == 0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    if (!clipped || ratio > 1.0) h = step * factor;
    if (h < 1e-14 * t_final) throw IntegratorError("adaptive step size underflow");
  }
  traj.steps = steps;
  traj.dt = smallest;
}

double expectation(const SparseMatrix& op, const Mat& y) {
  if (y.cols() == 1) return std::real(y.col(0).dot(op * y.col(0)));
  // tr(O rho) = sum_ij O_ij rho_ji
  cplx s = 0;
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(op, k); it; ++it) s += it.value() * y(it.col(), it.row());
  }
  return s.real();
}

void track(Trajectory& traj, const std::string& name, double value, bool record) {
  auto [it, inserted] = traj.peaks.try_emplace(name, value);
  if (!inserted) it->second = std::max(it->second, value);
  if (record) traj.observables[name].push_back(value);
}

}  // namespace

double step_bound(const TimeDependentOperator& h) {
  const double w = std::max(h.max_frequency(), row_sum_norm(h.static_part().matrix()));
  if (w == 0) return std::numeric_limits<double>::infinity();
  return 2 * std::numbers::pi / w / 20;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << 't';
  for (const auto& [name, _] : observables) os << ',' << name;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", times[i]);
    os << buf;
    for (const auto& [_, values] : observables) {
      std::snprintf(buf, sizeof buf, ",%.12g", i < values.size() ? values[i] : std::nan(""));
      os << buf;
    }
    os << '\n';
  }
}

void CollapseSet::add(std::string name, QOperator op, double rate) {
  if (!std::isfinite(rate) || rate < 0) throw ParameterError(name, "collapse rate must be finite and >= 0");
  channels_.push_back({std::move(name), std::move(op), rate});
}

CollapseSet gate_collapse_set(const HilbertSpace& space, const ModelParams& p, double branching_to_g,
                              ModeDecayBasis modes) {
  if (!(branching_to_g >= 0 && branching_to_g <= 1)) {
    throw ParameterError("branching_to_g", "must lie in [0, 1]");
  }
  CollapseSet set;
  set.add("atom1_e_to_g", atomic_projector(space, 1, Level::g, Level::e), branching_to_g * p.gamma);
  set.add("atom1_e_to_f", atomic_projector(space, 1, Level::f, Level::e), (1 - branching_to_g) * p.gamma);
  set.add("atom2_e_to_g", atomic_projector(space, 2, Level::g, Level::e), branching_to_g * p.gamma);
  set.add("atom2_e_to_f", atomic_projector(space, 2, Level::f, Level::e), (1 - branching_to_g) * p.gamma);
  if (modes == ModeDecayBasis::physical) {
    set.add("cavity1", mode_annihilation(space, Mode::cavity1), p.kappa);
    set.add("cavity2", mode_annihilation(space, Mode::cavity2), p.kappa);
    set.add("fiber", mode_annihilation(space, Mode::fiber), p.kappa);
  } else {
    set.add("c0", normal_mode(space, NormalMode::c0, p.phi), p.kappa);
    set.add("c1", normal_mode(space, NormalMode::c1, p.phi), p.kappa);
    set.add("c2", normal_mode(space, NormalMode::c2, p.phi), p.kappa);
  }
  return set;
}

Trajectory evolve_pure(const TimeDependentOperator& h, const QState& psi0, double t_final,
                       const IntegratorConfig& cfg, const std::vector<Observable>& observables, double t_start) {
  if (!(psi0.space() == h.space())) throw Error("state and Hamiltonian live on different spaces");
  return evolve_pure(h, psi0.amplitudes(), t_final, cfg, observables, t_start);
}

Trajectory evolve_pure(const TimeDependentOperator& h, const Eigen::VectorXcd& psi0, double t_final,
                       const IntegratorConfig& cfg, const std::vector<Observable>& observables, double t_start) {
  if (psi0.size() != h.space().dim()) throw Error("state dimension does not match the Hamiltonian");
  if (std::abs(psi0.norm() - 1) > std::max(1e-9, cfg.drift_abort)) throw Error("initial state is not normalized");
  const double dt = resolve_dt(h, cfg);
  CompiledGenerator gen(h, SparseMatrix(h.space().dim(), h.space().dim()));
  Mat y = psi0;
  Trajectory traj;

  auto rhs = [&](double t, const Mat& x, Mat& out) {
    gen.apply(t, x, out);
    out *= cplx(0, -1);
  };
  auto on_step = [&](double t, const Mat& state, bool record) {
    const double norm = state.norm();
    const double drift = std::abs(norm - 1);
    if (drift > cfg.drift_abort) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "norm drift %.3e exceeds %.1e at t = %.6g", drift, cfg.drift_abort, t);
      throw IntegratorError(buf);
    }
    track(traj, "norm_drift", drift, false);
    for (const auto& o : observables) track(traj, o.name, expectation(o.op.matrix(), state), record);
    if (record) {
      traj.times.push_back(t);
      traj.observables["norm"].push_back(norm);
      if (cfg.store_states) traj.states.push_back(state);
    }
  };
  integrate(rhs, y, t_start, t_final, dt, cfg, traj, on_step);
  traj.final_state = std::move(y);
  return traj;
}

Trajectory evolve_lindblad(const TimeDependentOperator& h, const Eigen::MatrixXcd& rho0,
                           const CollapseSet& collapse, double t_final, const IntegratorConfig& cfg,
                           const std::vector<Observable>& observables, double t_start) {
  const int dim = h.space().dim();
  if (rho0.rows() != dim || rho0.cols() != dim) throw Error("density matrix dimension does not match");
  if (std::abs(rho0.trace() - cplx(1)) > 1e-10) throw Error("initial density matrix must have unit trace");
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw Error("initial density matrix is not Hermitian");
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho0, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw Error("initial density matrix is not positive semidefinite");
  }

  // Non-Hermitian part -i/2 sum rate L^dagger L folded into the generator.
  SparseMatrix damping(dim, dim);
  struct Jump {
    SparseMatrix op;
    SparseMatrix op_adj;
    double rate;
  };
  std::vector<Jump> jumps;
  for (const auto& c : collapse.channels()) {
    if (!(c.op.space() == h.space())) throw Error("collapse operator lives on a different space");
    if (c.rate == 0) continue;
    const SparseMatrix& l = c.op.matrix();
    damping = SparseMatrix(damping + cplx(0, -0.5 * c.rate) * SparseMatrix(l.adjoint() * l));
    jumps.push_back({l, SparseMatrix(l.adjoint()), c.rate});
  }
  const double dt = resolve_dt(h, cfg);
  CompiledGenerator gen(h, damping);
  Mat y = rho0;
  Mat heff_rho, lr;
  Trajectory traj;

  auto rhs = [&](double t, const Mat& rho, Mat& out) {
    gen.apply(t, rho, heff_rho);
    heff_rho *= cplx(0, -1);
    out = heff_rho + heff_rho.adjoint();
    for (const auto& j : jumps) {
      lr.noalias() = j.op * rho;
      out.noalias() += j.rate * (lr * j.op_adj);
    }
  };
  auto on_step = [&](double t, const Mat& rho, bool record) {
    const double tr = rho.trace().real();
    const double drift = std::abs(tr - 1);
    if (drift > cfg.drift_abort) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "trace drift %.3e exceeds %.1e at t = %.6g", drift, cfg.drift_abort, t);
      throw IntegratorError(buf);
    }
    track(traj, "trace_drift", drift, false);
    for (const auto& o : observables) track(traj, o.name, expectation(o.op.matrix(), rho), record);
    if (record) {
      traj.times.push_back(t);
      traj.observables["trace"].push_back(tr);
      const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
      traj.observables["hermiticity"].push_back(herm);
      track(traj, "hermiticity", herm, false);
      if (cfg.check_positivity) {
        Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
        traj.observables["min_eigenvalue"].push_back(es.eigenvalues().minCoeff());
      }
      if (cfg.store_states) traj.states.push_back(rho);
    }
  };
  integrate(rhs, y, t_start, t_final, dt, cfg, traj, on_step);
  traj.final_state = std::move(y);
  return traj;
}

Eigen::MatrixXcd pure_density(const QState& psi) { return psi.amplitudes() * psi.amplitudes().adjoint(); }

double wrap_phase(double x) {
  const double two_pi = 2 * std::numbers::pi;
  double w = std::fmod(x, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  if (w > std::numbers::pi) w -= two_pi;
  return w;
}

std::vector<double> phase_of(const Trajectory& traj, const QState& reference) {
  if (traj.states.size() != traj.times.size()) {
    throw Error("trajectory has no stored states; enable store_states");
  }
  std::vector<double> out;
  out.reserve(traj.states.size());
  double prev = 0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const Mat& s = traj.states[i];
    if (s.cols() != 1 || s.rows() != reference.space().dim()) throw Error("phase_of needs pure-state snapshots");
    const cplx ov = reference.amplitudes().dot(s.col(0));
    if (std::abs(ov) < 0.5) {
      char buf[120];
      std::snprintf(buf, sizeof buf, "overlap %.3g < 0.5 at t = %.6g; phase is ill-defined", std::abs(ov),
                    traj.times[i]);
      throw LeakageError("reference", buf);
    }
    const double a = std::arg(ov);
    prev = i == 0 ? a : prev + wrap_phase(a - prev);
    out.push_back(prev);
  }
  return out;
}

}  // namespace fibergate
