#include "metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rist {

double illumination_power(const HermitianMatrix& r_z, std::span<const cplx> g,
                          double rho) {
  if (static_cast<int>(g.size()) != r_z.dim())
    throw DimensionError("illumination_power: channel length != covariance dim");
  if (rho <= 0.0) throw DomainError("illumination_power: rho must be > 0");
  const CVec v = mat_vec(r_z.mat(), g);
  return rho * dot_conj(g, v).real();
}

IlluminationReport worst_case_illumination(const PrecoderDesign& design,
                                           const Scene& scene, double rho) {
  if (scene.g.empty())
    throw DomainError("worst_case_illumination: scene has no targets");
  const HermitianMatrix r = design.radiated_covariance();
  IlluminationReport rep;
  rep.reference = design_kind_name(design.kind);
  rep.worst_case = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < scene.g.size(); ++m) {
    IlluminationEntry e;
    e.angle_rad = scene.target_angles[m];
    e.power_linear = illumination_power(r, scene.g[m], rho);
    rep.worst_case = std::min(rep.worst_case, e.power_linear);
    rep.per_target.push_back(e);
  }
  return rep;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

std::string illumination_csv_header() {
  return "beta,scheme,target_angle_deg,power_linear,power_db,worst_case_db\n";
}

std::string illumination_csv_rows(double beta, const IlluminationReport& rep) {
  constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;
  std::ostringstream os;
  os.precision(10);
  const double worst_db = to_db(rep.worst_case);
  for (const auto& e : rep.per_target) {
    os << beta << "," << rep.reference << "," << e.angle_rad * kRadToDeg << ","
       << e.power_linear << "," << to_db(e.power_linear) << "," << worst_db
       << "\n";
  }
  return os.str();
}

}  // namespace rist
