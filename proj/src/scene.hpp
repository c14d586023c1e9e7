#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"

namespace rist {

struct ExperimentConfig;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);
// Azimuth of `to` as seen from `from`: atan2(dy, dx).
double azimuth(const Vec3& from, const Vec3& to);

struct ChannelModelParams {
  double pathloss_offset_db = 30.0;
  double pathloss_exponent_coeff_db = 22.0;
  double rician_k_factor_db = 10.0;
  double noise_variance = 1.0;
};

// One Monte-Carlo draw of the physical scene: geometry plus channel
// realizations for the BS-RIS link, per-user RIS-user links and per-target
// BS-target links.
struct Scene {
  Vec3 bs_position;
  Vec3 ris_position;
  std::vector<Vec3> user_positions;
  std::vector<double> target_angles;  // radians
  CMat h_br;                          // N x M
  std::vector<CVec> h_ru;             // per user, length N
  std::vector<CVec> g;                // per target, length M
};

// Half-wavelength ULA response: entry i = exp(-j pi i sin theta).
CVec steering_vector(double theta, int m);

// 30 + 22 log10(d) dB.
double pathloss_db(double d);
// Linear power gain 10^(-pathloss_db/10).
double pathloss_gain(double d);

// LOS target link: sqrt(gain) * a(theta).
CVec gen_target_channel(double theta, double distance_m, int m);

// Rician mixture around a unit-average-power LOS profile:
// sqrt(gain) * (sqrt(k/(1+k)) los + sqrt(1/(1+k)) CN(0,1)).
CVec gen_rician_channel(std::span<const cplx> los_component, double gain,
                        double k_factor_db, PhiloxStream& rng);
CMat gen_rician_matrix(const CMat& los_component, double gain,
                       double k_factor_db, PhiloxStream& rng);

// Uniform over the rectangle hanging right/down from the top-left corner.
Vec3 sample_user_position(const Vec3& top_left_corner, double size_x,
                          double size_y, PhiloxStream& rng);

// Draws every channel of one Monte-Carlo trial. Sub-streams are derived from
// (config.master_seed, realization), so trials are independent and the same
// trial index always reproduces the same scene.
Scene build_scene(const ExperimentConfig& cfg, std::uint64_t realization,
                  int num_users);

// Complex numbers serialize as [re, im] pairs.
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);

}  // namespace rist
