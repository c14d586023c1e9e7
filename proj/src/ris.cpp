#include "ris.hpp"

#include <cmath>
#include <cstdio>

namespace rist {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PhaseResolution PhaseResolution::from_bits(int b) {
  if (b < 1 || b > 30)
    throw DomainError("PhaseResolution: bits must be in [1, 30] or infinite");
  return {b};
}

PhaseResolution PhaseResolution::parse(const std::string& text) {
  if (text == "inf" || text == "INF" || text == "infinite") return infinite();
  try {
    return from_bits(std::stoi(text));
  } catch (const std::logic_error&) {
    throw DomainError("PhaseResolution: cannot parse '" + text + "'");
  }
}

double PhaseResolution::delta_omega() const {
  if (is_infinite())
    throw DomainError("PhaseResolution: delta_omega undefined for infinite bits");
  return kTwoPi / num_levels();
}

std::string PhaseResolution::to_string() const {
  return is_infinite() ? "inf" : std::to_string(bits);
}

CVec cascade_channel(std::span<const cplx> h_ru, const CMat& h_br,
                     std::span<const cplx> z) {
  if (static_cast<int>(h_ru.size()) != h_br.rows())
    throw DimensionError("cascade_channel: h_ru length != rows(H_br)");
  CVec hc = mat_vec(h_br, z);
  for (std::size_t i = 0; i < hc.size(); ++i) hc[i] *= std::conj(h_ru[i]);
  return hc;
}

CVec optimal_phase(std::span<const cplx> h_c) {
  CVec phi(h_c.size());
  for (std::size_t i = 0; i < h_c.size(); ++i) {
    const double mag = std::abs(h_c[i]);
    phi[i] = (mag == 0.0) ? cplx(1.0, 0.0) : std::conj(h_c[i]) / mag;
  }
  return phi;
}

CVec embed_symbol(std::span<const cplx> phi, cplx s) {
  if (std::abs(std::abs(s) - 1.0) > 1e-9)
    throw DomainError("embed_symbol: symbol must be unit modulus");
  CVec omega(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) omega[i] = phi[i] * s;
  return omega;
}

std::vector<int> project_discrete_indices(std::span<const cplx> omega,
                                          PhaseResolution resolution) {
  if (resolution.is_infinite())
    throw DomainError("project_discrete_indices: resolution is infinite");
  const int levels = resolution.num_levels();
  const double step = resolution.delta_omega();
  std::vector<int> idx(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    double ang = std::arg(omega[i]);
    if (ang < 0.0) ang += kTwoPi;
    const double x = ang / step;
    int k = static_cast<int>(std::floor(x));
    const double frac = x - k;
    if (frac > 0.5) ++k;  // exact midpoint keeps the smaller index
    idx[i] = k % levels;
  }
  return idx;
}

CVec project_discrete(std::span<const cplx> omega, PhaseResolution resolution) {
  if (resolution.is_infinite()) return CVec(omega.begin(), omega.end());
  const double step = resolution.delta_omega();
  const std::vector<int> idx = project_discrete_indices(omega, resolution);
  CVec out(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i)
    out[i] = std::polar(1.0, idx[i] * step);
  return out;
}

double instantaneous_snr(std::span<const cplx> phi, std::span<const cplx> h_c,
                         double sigma2) {
  if (sigma2 <= 0.0) throw DomainError("instantaneous_snr: sigma2 must be > 0");
  return std::norm(dot_plain(phi, h_c)) / sigma2;
}

namespace {

double wrap_angle(cplx v) {
  double ang = std::arg(v);
  if (ang < 0.0) ang += kTwoPi;
  return ang;
}

}  // namespace

RisState make_ris_state(std::span<const cplx> phi, std::span<const cplx> omega,
                        PhaseResolution resolution) {
  if (phi.size() != omega.size())
    throw DimensionError("make_ris_state: length mismatch");
  RisState state;
  state.resolution = resolution;
  state.phi_angles.reserve(phi.size());
  state.omega_angles.reserve(omega.size());
  for (const cplx v : phi) state.phi_angles.push_back(wrap_angle(v));
  if (resolution.is_infinite()) {
    for (const cplx v : omega) state.omega_angles.push_back(wrap_angle(v));
  } else {
    // store the exact grid multiples the projection selected
    const double step = resolution.delta_omega();
    for (const int k : project_discrete_indices(omega, resolution))
      state.omega_angles.push_back(k * step);
  }
  return state;
}

bool omega_in_feasible_set(const RisState& state) {
  if (state.resolution.is_infinite()) return true;
  const double step = state.resolution.delta_omega();
  const int levels = state.resolution.num_levels();
  for (const double ang : state.omega_angles) {
    bool found = false;
    for (int k = 0; k < levels && !found; ++k) found = (ang == k * step);
    if (!found) return false;
  }
  return true;
}

std::string ris_trace_csv_header() { return "n,i,omega_angle\n"; }

std::string ris_trace_csv_rows(int symbol_index, const RisState& state) {
  std::string out;
  for (std::size_t i = 0; i < state.omega_angles.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g\n", symbol_index, i,
                  state.omega_angles[i]);
    out += buf;
  }
  return out;
}

}  // namespace rist
