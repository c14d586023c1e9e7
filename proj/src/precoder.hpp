#pragma once

#include <memory>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace rist {

struct ExperimentConfig;

struct AngularGrid {
  std::vector<double> angles;  // radians, strictly increasing in [-pi/2, pi/2]

  static AngularGrid uniform_deg(double lo_deg, double hi_deg, int count);
  // 181 angles, 1 degree spacing over [-90, 90].
  static AngularGrid standard();

  int size() const { return static_cast<int>(angles.size()); }
  void validate() const;
};

struct DesiredBeampattern {
  AngularGrid grid;
  std::vector<double> values;  // nonnegative, sum > 0
};

// Superposition of 10-degree-wide boxes: (1-beta)/num_targets on each target
// box, beta on the RIS box; overlapping boxes sum.
DesiredBeampattern desired_beampattern(const std::vector<double>& target_angles,
                                       double ris_angle, double beta,
                                       int num_targets, const AngularGrid& grid);
// Target boxes only, equal strength (the radar-only reference pattern).
DesiredBeampattern desired_beampattern_radar(
    const std::vector<double>& target_angles, const AngularGrid& grid);

// J(theta_l) = a^H(theta_l) R a(theta_l) per grid angle.
std::vector<double> beampattern(const HermitianMatrix& r, const AngularGrid& grid);

// Closed-form minimizer of (1/D) sum (J_l - tau d_l)^2 over tau.
double optimal_tau(std::span<const double> j, std::span<const double> d);

struct SolverOptions {
  int max_iters = 5000;
  double tol = 1e-8;  // relative objective-change tolerance
};

struct RelaxedSolution {
  HermitianMatrix r_z_star;
  double tau = 0.0;
  std::vector<double> objective_trace;  // accepted objective values, non-increasing
  int iterations = 0;
};

// Thrown when the relaxed solve hits max_iters without meeting tol; carries
// the last iterate so callers can inspect or flag partial output.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, std::shared_ptr<RelaxedSolution> last)
      : Error(msg), last_(std::move(last)) {}
  const std::shared_ptr<RelaxedSolution>& last_iterate() const { return last_; }

 private:
  std::shared_ptr<RelaxedSolution> last_;
};

// Dykstra alternating projections onto {PSD} cap {unit diagonal}; constraint
// violations are below 1e-8 on return. The box constraint |Re|,|Im| <= 1 is
// implied: a PSD matrix with unit diagonal has all entries in the unit box.
HermitianMatrix project_unit_diag_psd(const HermitianMatrix& a);

// Relaxed covariance design: minimize the beampattern mismatch L(R_z, tau)
// over PSD unit-diagonal R_z, alternating a closed-form tau update with
// projected gradient descent (backtracking step, Dykstra projection).
RelaxedSolution solve_relaxed_sdp(const DesiredBeampattern& d, int num_antennas,
                                  const SolverOptions& opts = {});

// R_x_hat = csin((pi/2) R_z_star); Hermitian, unit diagonal, not necessarily PSD.
HermitianMatrix invert_arcsine(const HermitianMatrix& r_z_star);

struct PrecoderFactorization {
  HermitianMatrix r_x_circ;  // nearest PSD matrix
  CMat w_circ;               // M x M, scaled eigenvector columns then zeros
};

// Drops negative-eigenvalue terms and factors the remainder:
// W = [sqrt(l_1) q_1, ..., sqrt(l_r) q_r, 0] with W W^H = R_x_circ.
PrecoderFactorization build_precoder(const HermitianMatrix& r_x_hat);

enum class DesignKind { proposed, unquantized_isac, unquantized_radar };

std::string design_kind_name(DesignKind kind);

struct PrecoderDesign {
  DesignKind kind = DesignKind::proposed;
  DesiredBeampattern desired;
  HermitianMatrix r_z_star;        // relaxed solution
  HermitianMatrix r_x_hat;         // arcsine pre-image (= r_z_star for baselines)
  HermitianMatrix r_x_circ;        // PSD-recovered transmit covariance
  HermitianMatrix r_x_tilde_circ;  // unit-diagonal normalization of r_x_circ
  CMat w_circ;                     // transmit precoder
  double tau = 0.0;
  std::vector<double> objective_trace;
  int iterations = 0;

  // Covariance of what actually radiates: the arcsine image of the
  // normalized transmit covariance for the 1-bit chain, the relaxed solution
  // itself for the unquantized baselines.
  HermitianMatrix radiated_covariance() const;
};

struct DesignInputs {
  int num_antennas = 16;
  std::vector<double> target_angles;  // radians
  double ris_angle = 0.0;             // radians
  double beta = 0.2;
  AngularGrid grid = AngularGrid::standard();
};

DesignInputs design_inputs_from_config(const ExperimentConfig& cfg);

// Full pipeline: desired pattern -> relaxed solve -> arcsine inversion ->
// nearest-PSD recovery -> factorization. Baseline kinds skip the arcsine
// steps and factor the relaxed solution directly.
PrecoderDesign design_precoder(const DesignInputs& in,
                               DesignKind kind = DesignKind::proposed,
                               const SolverOptions& opts = {});
PrecoderDesign design_precoder(const ExperimentConfig& cfg,
                               DesignKind kind = DesignKind::proposed,
                               const SolverOptions& opts = {});

// Matrices as nested [re, im] arrays.
std::string design_to_json(const PrecoderDesign& d);

// CSV columns: angle_deg, J_quantized, J_unquantized, d_scaled. J_quantized
// is the radiated pattern (arcsine image) for the proposed design and equals
// J_unquantized for the unquantized baselines.
std::string beampattern_csv(const PrecoderDesign& d);

}  // namespace rist
