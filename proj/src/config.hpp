#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ris.hpp"
#include "scene.hpp"

namespace rist {

// Full experiment parameterization. Defaults reproduce the reference
// scenario: 16-antenna ULA, 100-element RIS at (50,50,10) m, two targets at
// -45 and 0 degrees, 64-PSK, 1e4 channel realizations x 200 symbols.
struct ExperimentConfig {
  int num_antennas = 16;
  int num_ris_elements = 100;
  int num_users = 1;
  int zf_users = 2;

  std::vector<double> target_angles_deg = {-45.0, 0.0};
  double target_distance_m = 80.0;

  double beta = 0.2;
  std::vector<double> beta_list = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> sep_beta_list = {0.1, 0.3, 0.5, 0.7, 0.9};

  int psk_order = 64;
  std::vector<PhaseResolution> ris_bits_list = {
      PhaseResolution::from_bits(2), PhaseResolution::from_bits(4),
      PhaseResolution::infinite()};

  // Total transmit power P in dB over unit noise; the per-antenna constraint
  // is rho = P / num_antennas.
  std::vector<double> total_power_db_list = {100.0, 104.0, 108.0, 112.0,
                                             116.0, 120.0, 124.0, 128.0};
  double sep_operating_power_db = 118.0;

  double noise_var = 1.0;
  int realizations = 10000;
  int symbols_per_realization = 200;
  double rician_k_db = 10.0;
  std::uint64_t master_seed = 1729;

  Vec3 bs_position{0.0, 0.0, 0.0};
  Vec3 ris_position{50.0, 50.0, 10.0};
  Vec3 user_region_corner{10.0, 50.0, 0.0};  // top-left
  double user_region_size_x = 30.0;
  double user_region_size_y = 50.0;

  std::vector<std::string> schemes = {"RIST", "MRT", "QMRT", "ZF"};

  int num_targets() const { return static_cast<int>(target_angles_deg.size()); }
  std::vector<double> target_angles_rad() const;
  double ris_angle_from_bs() const;  // azimuth of the RIS seen from the BS

  ChannelModelParams channel_params() const {
    return {30.0, 22.0, rician_k_db, noise_var};
  }

  // Canonical key = value snapshot (also the digest input).
  std::string to_text() const;
  std::string digest() const;  // 16 hex chars, FNV-1a over to_text()

  // Throws ConfigError listing every violation.
  void validate() const;
};

// Parses "key = value" lines ('#' starts a comment, lists are
// comma-separated). Unknown keys and malformed values are collected and
// reported together with line numbers.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Applies a single "key = value" override (used by the C API / CLI flags).
void apply_config_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value);

}  // namespace rist
