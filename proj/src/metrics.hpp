#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"
#include "precoder.hpp"
#include "scene.hpp"

namespace rist {

struct IlluminationEntry {
  double angle_rad = 0.0;
  double power_linear = 0.0;
};

struct IlluminationReport {
  std::vector<IlluminationEntry> per_target;
  double worst_case = 0.0;  // min over targets
  std::string reference;    // which covariance was scored
};

// rho * g^H R_z g
double illumination_power(const HermitianMatrix& r_z, std::span<const cplx> g,
                          double rho);

// Scores the design's radiated covariance (arcsine image for the 1-bit
// chain, the relaxed solution for unquantized baselines) against every
// target channel in the scene.
IlluminationReport worst_case_illumination(const PrecoderDesign& design,
                                           const Scene& scene, double rho);

double to_db(double linear);

std::string illumination_csv_header();
std::string illumination_csv_rows(double beta, const IlluminationReport& rep);

}  // namespace rist
