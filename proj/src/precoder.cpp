#include "precoder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "config.hpp"
#include "frontend.hpp"
#include "json.hpp"
#include "scene.hpp"

namespace rist {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
// 10-degree boxes; the slack keeps grid points on the box edge inside.
constexpr double kBoxHalfWidthRad = 5.0 * kDegToRad + 1e-9;
}  // namespace

AngularGrid AngularGrid::uniform_deg(double lo_deg, double hi_deg, int count) {
  AngularGrid g;
  g.angles.resize(count);
  for (int i = 0; i < count; ++i)
    g.angles[i] =
        (lo_deg + (hi_deg - lo_deg) * i / (count - 1)) * kDegToRad;
  g.validate();
  return g;
}

AngularGrid AngularGrid::standard() { return uniform_deg(-90.0, 90.0, 181); }

void AngularGrid::validate() const {
  if (angles.size() < 2) throw DomainError("AngularGrid: need at least 2 angles");
  for (std::size_t i = 0; i + 1 < angles.size(); ++i)
    if (angles[i] >= angles[i + 1])
      throw DomainError("AngularGrid: angles must be strictly increasing");
  if (angles.front() < -kPi / 2 - 1e-12 || angles.back() > kPi / 2 + 1e-12)
    throw DomainError("AngularGrid: angles must lie in [-pi/2, pi/2]");
}

DesiredBeampattern desired_beampattern(const std::vector<double>& target_angles,
                                       double ris_angle, double beta,
                                       int num_targets, const AngularGrid& grid) {
  if (beta <= 0.0 || beta >= 1.0)
    throw ConfigError({"beta must be in (0, 1)"});
  if (num_targets < 1) throw ConfigError({"num_targets must be >= 1"});
  grid.validate();
  const double lo = grid.angles.front(), hi = grid.angles.back();
  for (const double t : target_angles)
    if (t < lo || t > hi)
      throw DomainError("desired_beampattern: target angle outside grid span");
  if (ris_angle < lo || ris_angle > hi)
    throw DomainError("desired_beampattern: RIS angle outside grid span");

  DesiredBeampattern d;
  d.grid = grid;
  d.values.assign(grid.size(), 0.0);
  const double target_height = (1.0 - beta) / num_targets;
  for (int l = 0; l < grid.size(); ++l) {
    const double theta = grid.angles[l];
    for (const double t : target_angles)
      if (std::abs(theta - t) <= kBoxHalfWidthRad) d.values[l] += target_height;
    if (std::abs(theta - ris_angle) <= kBoxHalfWidthRad) d.values[l] += beta;
  }
  return d;
}

DesiredBeampattern desired_beampattern_radar(
    const std::vector<double>& target_angles, const AngularGrid& grid) {
  grid.validate();
  DesiredBeampattern d;
  d.grid = grid;
  d.values.assign(grid.size(), 0.0);
  const double height = 1.0 / static_cast<double>(target_angles.size());
  for (int l = 0; l < grid.size(); ++l)
    for (const double t : target_angles)
      if (std::abs(grid.angles[l] - t) <= kBoxHalfWidthRad)
        d.values[l] += height;
  return d;
}

std::vector<double> beampattern(const HermitianMatrix& r, const AngularGrid& grid) {
  grid.validate();
  const int m = r.dim();
  std::vector<double> j(grid.size());
  for (int l = 0; l < grid.size(); ++l) {
    const CVec a = steering_vector(grid.angles[l], m);
    const CVec v = mat_vec(r.mat(), a);
    j[l] = dot_conj(a, v).real();
  }
  return j;
}

double optimal_tau(std::span<const double> j, std::span<const double> d) {
  if (j.size() != d.size()) throw DimensionError("optimal_tau: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t l = 0; l < d.size(); ++l) {
    num += d[l] * j[l];
    den += d[l] * d[l];
  }
  if (den <= 0.0) throw DomainError("optimal_tau: desired pattern is all zero");
  return num / den;
}

namespace {

// Precomputed machinery for L(R, tau) = (1/D) sum_l (J_l - tau d_l)^2 with
// J_l = a_l^H R a_l.
class MismatchObjective {
 public:
  MismatchObjective(const DesiredBeampattern& d, int m) : d_(d.values), m_(m) {
    d.grid.validate();
    if (d.values.size() != static_cast<std::size_t>(d.grid.size()))
      throw DimensionError("desired pattern length != grid size");
    double sum = 0.0;
    for (const double v : d_) {
      if (v < 0.0) throw DomainError("desired pattern must be nonnegative");
      sum += v;
    }
    if (sum <= 0.0) throw DomainError("desired pattern must have positive sum");
    steer_.reserve(d.grid.size());
    for (const double theta : d.grid.angles)
      steer_.push_back(steering_vector(theta, m));
  }

  int grid_size() const { return static_cast<int>(steer_.size()); }

  std::vector<double> pattern(const CMat& r) const {
    std::vector<double> j(steer_.size());
    for (std::size_t l = 0; l < steer_.size(); ++l) {
      const CVec v = mat_vec(r, steer_[l]);
      j[l] = dot_conj(steer_[l], v).real();
    }
    return j;
  }

  double tau_opt(const std::vector<double>& j) const {
    return optimal_tau(j, d_);
  }

  double value(const std::vector<double>& j, double tau) const {
    double acc = 0.0;
    for (std::size_t l = 0; l < j.size(); ++l) {
      const double e = j[l] - tau * d_[l];
      acc += e * e;
    }
    return acc / static_cast<double>(j.size());
  }

  // (2/D) sum_l (J_l - tau d_l) a_l a_l^H
  CMat gradient(const std::vector<double>& j, double tau) const {
    CMat g(m_, m_);
    const double scale = 2.0 / static_cast<double>(j.size());
    for (std::size_t l = 0; l < steer_.size(); ++l) {
      const double c = scale * (j[l] - tau * d_[l]);
      if (c == 0.0) continue;
      const CVec& a = steer_[l];
      for (int r = 0; r < m_; ++r)
        for (int s = r; s < m_; ++s)
          g(r, s) += c * a[r] * std::conj(a[s]);
    }
    for (int r = 0; r < m_; ++r) {
      g(r, r) = g(r, r).real();
      for (int s = r + 1; s < m_; ++s) g(s, r) = std::conj(g(r, s));
    }
    return g;
  }

 private:
  std::vector<CVec> steer_;
  std::vector<double> d_;
  int m_;
};

}  // namespace

HermitianMatrix project_unit_diag_psd(const HermitianMatrix& a) {
  const int n = a.dim();
  CMat x = a.mat();
  CMat p(n, n), q(n, n);
  constexpr int kMaxIters = 2000;
  constexpr double kTol = 1e-9;  // bounds both constraint violations
  for (int iter = 0; iter < kMaxIters; ++iter) {
    const CMat y = nearest_psd(hermitian_unchecked(x + p)).mat();
    p = (x + p) - y;
    CMat w = y + q;
    for (int i = 0; i < n; ++i) w(i, i) = 1.0;
    q = (y + q) - w;
    const double drift = frobenius_norm(w - y);
    x = std::move(w);
    if (drift <= kTol) break;
  }
  return hermitian_unchecked(std::move(x));
}

RelaxedSolution solve_relaxed_sdp(const DesiredBeampattern& d, int num_antennas,
                                  const SolverOptions& opts) {
  const MismatchObjective obj(d, num_antennas);

  CMat r = CMat::identity(num_antennas);
  std::vector<double> j = obj.pattern(r);
  double tau = obj.tau_opt(j);
  double objective = obj.value(j, tau);

  RelaxedSolution sol;
  sol.objective_trace.push_back(objective);

  double step = 1.0 / (2.0 * num_antennas * num_antennas);
  bool converged = false;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    sol.iterations = iter;
    const CMat g = obj.gradient(j, tau);

    bool accepted = false;
    CMat r_new;
    std::vector<double> j_new;
    double tau_new = tau, obj_new = objective;
    for (int ls = 0; ls < 60 && step >= 1e-18; ++ls) {
      CMat cand = r - step * g;
      r_new = project_unit_diag_psd(hermitian_unchecked(std::move(cand))).mat();
      j_new = obj.pattern(r_new);
      tau_new = obj.tau_opt(j_new);
      obj_new = obj.value(j_new, tau_new);
      if (obj_new < objective) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = true;  // no feasible descent left: stationary
      break;
    }

    const double delta = objective - obj_new;
    r = std::move(r_new);
    j = std::move(j_new);
    tau = tau_new;
    objective = obj_new;
    sol.objective_trace.push_back(objective);
    step *= 1.6;

    if (delta <= opts.tol * std::max(1.0, objective)) {
      converged = true;
      break;
    }
  }

  sol.r_z_star = hermitian_unchecked(std::move(r));
  sol.tau = tau;

  if (!converged) {
    auto last = std::make_shared<RelaxedSolution>(sol);
    throw ConvergenceError(
        "solve_relaxed_sdp: no convergence after " +
            std::to_string(opts.max_iters) + " iterations (objective " +
            std::to_string(objective) + ")",
        std::move(last));
  }
  return sol;
}

HermitianMatrix invert_arcsine(const HermitianMatrix& r_z_star) {
  const int n = r_z_star.dim();
  for (int i = 0; i < n; ++i)
    if (std::abs(r_z_star(i, i).real() - 1.0) > 1e-6)
      throw DomainError("invert_arcsine: input diagonal must be 1");
  CMat scaled = r_z_star.mat();
  scaled *= kPi / 2.0;
  CMat out = csin_elementwise(scaled);
  for (int i = 0; i < n; ++i) out(i, i) = 1.0;  // sin(pi/2) exactly
  return hermitian_unchecked(std::move(out));
}

PrecoderFactorization build_precoder(const HermitianMatrix& r_x_hat) {
  const int n = r_x_hat.dim();
  const EigenDecomposition ed = hermitian_eig(r_x_hat);

  // Eigenvalues in (-1e-10, 0) count as zero; only genuinely negative terms
  // are dropped.
  int rank = 0;
  while (rank < n && ed.eigenvalues[rank] > -1e-10) ++rank;

  CMat w(n, n);
  CMat r(n, n);
  for (int k = 0; k < rank; ++k) {
    const double lambda = std::max(ed.eigenvalues[k], 0.0);
    const double root = std::sqrt(lambda);
    for (int i = 0; i < n; ++i) w(i, k) = root * ed.eigenvectors(i, k);
    if (lambda == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const cplx qik = ed.eigenvectors(i, k);
      r(i, i) += lambda * std::norm(qik);
      for (int j = i + 1; j < n; ++j)
        r(i, j) += lambda * qik * std::conj(ed.eigenvectors(j, k));
    }
  }
  for (int i = 0; i < n; ++i) {
    r(i, i) = r(i, i).real();
    for (int j = i + 1; j < n; ++j) r(j, i) = std::conj(r(i, j));
  }

  return {hermitian_unchecked(std::move(r)), std::move(w)};
}

std::string design_kind_name(DesignKind kind) {
  switch (kind) {
    case DesignKind::proposed:
      return "proposed";
    case DesignKind::unquantized_isac:
      return "unquantized_isac";
    case DesignKind::unquantized_radar:
      return "unquantized_radar";
  }
  return "unknown";
}

HermitianMatrix PrecoderDesign::radiated_covariance() const {
  if (kind == DesignKind::proposed)
    return arcsine_covariance(r_x_tilde_circ);
  return r_z_star;
}

DesignInputs design_inputs_from_config(const ExperimentConfig& cfg) {
  DesignInputs in;
  in.num_antennas = cfg.num_antennas;
  in.target_angles = cfg.target_angles_rad();
  in.ris_angle = cfg.ris_angle_from_bs();
  in.beta = cfg.beta;
  in.grid = AngularGrid::standard();
  return in;
}

PrecoderDesign design_precoder(const DesignInputs& in, DesignKind kind,
                               const SolverOptions& opts) {
  PrecoderDesign d;
  d.kind = kind;
  d.desired =
      kind == DesignKind::unquantized_radar
          ? desired_beampattern_radar(in.target_angles, in.grid)
          : desired_beampattern(in.target_angles, in.ris_angle, in.beta,
                                static_cast<int>(in.target_angles.size()),
                                in.grid);

  RelaxedSolution sol = solve_relaxed_sdp(d.desired, in.num_antennas, opts);
  d.r_z_star = sol.r_z_star;
  d.tau = sol.tau;
  d.objective_trace = std::move(sol.objective_trace);
  d.iterations = sol.iterations;

  d.r_x_hat = kind == DesignKind::proposed ? invert_arcsine(d.r_z_star)
                                           : d.r_z_star;
  PrecoderFactorization fact = build_precoder(d.r_x_hat);
  d.r_x_circ = std::move(fact.r_x_circ);
  d.w_circ = std::move(fact.w_circ);
  d.r_x_tilde_circ = normalize_covariance(d.r_x_circ);
  return d;
}

PrecoderDesign design_precoder(const ExperimentConfig& cfg, DesignKind kind,
                               const SolverOptions& opts) {
  DesignInputs in = design_inputs_from_config(cfg);
  return design_precoder(in, kind, opts);
}

namespace {

using nlohmann::json;

json cmat_json(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string design_to_json(const PrecoderDesign& d) {
  json j;
  j["kind"] = design_kind_name(d.kind);
  j["tau"] = d.tau;
  j["iterations"] = d.iterations;
  j["objective_trace"] = d.objective_trace;
  json deg = json::array();
  for (const double a : d.desired.grid.angles) deg.push_back(a / kDegToRad);
  j["grid_deg"] = std::move(deg);
  j["desired"] = d.desired.values;
  j["r_z_star"] = cmat_json(d.r_z_star.mat());
  j["r_x_hat"] = cmat_json(d.r_x_hat.mat());
  j["r_x_circ"] = cmat_json(d.r_x_circ.mat());
  j["r_x_tilde_circ"] = cmat_json(d.r_x_tilde_circ.mat());
  j["w_circ"] = cmat_json(d.w_circ);
  return j.dump(2);
}

std::string beampattern_csv(const PrecoderDesign& d) {
  const std::vector<double> j_unq = beampattern(
      d.kind == DesignKind::proposed ? d.r_x_tilde_circ : d.r_z_star,
      d.desired.grid);
  const std::vector<double> j_q =
      d.kind == DesignKind::proposed
          ? beampattern(d.radiated_covariance(), d.desired.grid)
          : j_unq;

  std::ostringstream os;
  os.precision(10);
  os << "angle_deg,J_quantized,J_unquantized,d_scaled\n";
  for (int l = 0; l < d.desired.grid.size(); ++l) {
    os << d.desired.grid.angles[l] / kDegToRad << "," << j_q[l] << ","
       << j_unq[l] << "," << d.tau * d.desired.values[l] << "\n";
  }
  return os.str();
}

}  // namespace rist
