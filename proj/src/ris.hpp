#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"

namespace rist {

// Discrete RIS phase resolution. bits == 0 denotes infinite precision
// (continuous phases); otherwise the feasible set is
// F = { e^{j k delta_omega} : k = 0 .. 2^bits - 1 } with delta_omega = 2 pi / 2^bits.
struct PhaseResolution {
  int bits = 0;

  static PhaseResolution infinite() { return {0}; }
  static PhaseResolution from_bits(int b);
  static PhaseResolution parse(const std::string& text);

  bool is_infinite() const { return bits == 0; }
  int num_levels() const { return 1 << bits; }
  double delta_omega() const;
  std::string to_string() const;

  friend bool operator==(const PhaseResolution&, const PhaseResolution&) = default;
};

// Instantaneous phase state of the surface. Phases are kept as angles in
// [0, 2 pi); for finite resolution, omega angles are exact grid multiples
// k * delta_omega, so feasible-set membership checks are exact.
struct RisState {
  std::vector<double> phi_angles;
  std::vector<double> omega_angles;
  PhaseResolution resolution;
};

RisState make_ris_state(std::span<const cplx> phi, std::span<const cplx> omega,
                        PhaseResolution resolution);

// For finite resolution: every omega angle is bitwise equal to some
// k * delta_omega. Always true for infinite resolution.
bool omega_in_feasible_set(const RisState& state);

// Debug trace, one row per (symbol, element): n,i,omega_angle
std::string ris_trace_csv_header();
std::string ris_trace_csv_rows(int symbol_index, const RisState& state);

// h_c[i] = conj(h_ru[i]) * (H_br z)[i]
CVec cascade_channel(std::span<const cplx> h_ru, const CMat& h_br,
                     std::span<const cplx> z);

// SNR-maximizing phases phi[i] = e^{-j angle(h_c[i])}; the aligned gain
// sum_i phi[i] h_c[i] = sum_i |h_c[i]| is real and nonnegative. Zero entries
// get phi[i] = 1 (any unit value is optimal there).
CVec optimal_phase(std::span<const cplx> h_c);

// omega[i] = phi[i] * s, |s| = 1.
CVec embed_symbol(std::span<const cplx> phi, cplx s);

// Nearest grid index per entry; exact midpoints resolve to the smaller index.
std::vector<int> project_discrete_indices(std::span<const cplx> omega,
                                          PhaseResolution resolution);
// Nearest feasible phases; passthrough for infinite resolution.
CVec project_discrete(std::span<const cplx> omega, PhaseResolution resolution);

// |phi^T h_c|^2 / sigma2
double instantaneous_snr(std::span<const cplx> phi, std::span<const cplx> h_c,
                         double sigma2);

}  // namespace rist
