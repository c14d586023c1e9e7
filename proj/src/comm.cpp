#include "comm.hpp"

#include <cmath>
#include <sstream>

#include "config.hpp"
#include "frontend.hpp"
#include "parallel.hpp"

namespace rist {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PskConstellation::PskConstellation(int order_in) : order(order_in) {
  if (order < 2 || (order & (order - 1)) != 0)
    throw DomainError("PskConstellation: order must be a power of two >= 2");
}

cplx PskConstellation::point(int index) const { return psk_map(index, order); }

cplx psk_map(int index, int order) {
  if (order < 2) throw DomainError("psk_map: order must be >= 2");
  if (index < 0 || index >= order)
    throw DomainError("psk_map: index " + std::to_string(index) +
                      " out of range for order " + std::to_string(order));
  return std::polar(1.0, kTwoPi * index / order);
}

cplx received_sample(std::span<const cplx> omega, std::span<const cplx> h_ru,
                     const CMat& h_br, std::span<const cplx> z, double rho,
                     double sigma2, PhiloxStream& rng) {
  if (omega.size() != h_ru.size() ||
      static_cast<int>(h_ru.size()) != h_br.rows())
    throw DimensionError("received_sample: RIS-side length mismatch");
  if (rho <= 0.0) throw DomainError("received_sample: rho must be > 0");
  if (sigma2 < 0.0) throw DomainError("received_sample: sigma2 must be >= 0");
  const CVec u = mat_vec(h_br, z);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < omega.size(); ++i)
    acc += std::conj(h_ru[i]) * omega[i] * u[i];
  return std::sqrt(rho) * acc + std::sqrt(sigma2) * rng.cgaussian();
}

int ml_detect(cplx y, int order) {
  if (order < 2) throw DomainError("ml_detect: order must be >= 2");
  double ang = std::arg(y);  // arg(0) == 0, so y == 0 detects as index 0
  if (ang < 0.0) ang += kTwoPi;
  const long k = std::lround(ang / (kTwoPi / order));
  return static_cast<int>(k % order);
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "RIST") return Scheme::rist;
  if (name == "MRT") return Scheme::mrt;
  if (name == "QMRT") return Scheme::qmrt;
  if (name == "ZF") return Scheme::zf;
  throw DomainError("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::rist:
      return "RIST";
    case Scheme::mrt:
      return "MRT";
    case Scheme::qmrt:
      return "QMRT";
    case Scheme::zf:
      return "ZF";
  }
  return "?";
}

CVec mrt_precoder(std::span<const cplx> h_eff) {
  const double n = norm2(h_eff);
  if (n <= 0.0) throw DomainError("mrt_precoder: zero effective channel");
  CVec w(h_eff.begin(), h_eff.end());
  for (auto& v : w) v /= n;
  return w;
}

CVec qmrt_transmit(std::span<const cplx> w, cplx s) {
  CVec x(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) x[i] = w[i] * s;
  return one_bit_quantize(x);
}

namespace {

// Solves (A + eps I) X = B for small Hermitian positive semidefinite A via
// Gaussian elimination with partial pivoting.
CMat solve_small(CMat a, CMat b) {
  const int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(col, j), a(pivot, j));
        std::swap(b(col, j), b(pivot, j));
      }
    }
    const cplx d = a(col, col);
    if (std::abs(d) == 0.0)
      throw DomainError("zf_precoder: singular Gram matrix");
    for (int j = 0; j < n; ++j) {
      a(col, j) /= d;
      b(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = a(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        b(r, j) -= f * b(col, j);
      }
    }
  }
  return b;
}

}  // namespace

CMat zf_precoder(const CMat& h_users) {
  const int k = h_users.rows();
  const int m = h_users.cols();
  if (k < 1 || k > m) throw DimensionError("zf_precoder: need 1 <= K <= M");

  const CMat hh = mat_mul(h_users, h_users.adjoint());  // K x K Gram
  double trace = 0.0;
  for (int i = 0; i < k; ++i) trace += hh(i, i).real();
  if (trace <= 0.0) throw DomainError("zf_precoder: zero channel matrix");
  const double eps = 1e-8 * trace / k;

  CMat regularized = hh;
  for (int i = 0; i < k; ++i) regularized(i, i) += eps;
  const CMat inv = solve_small(std::move(regularized), CMat::identity(k));
  CMat w = mat_mul(h_users.adjoint(), inv);  // M x K

  const double fn = frobenius_norm(w);
  if (fn <= 0.0) throw DomainError("zf_precoder: degenerate precoder");
  w *= 1.0 / fn;
  return w;
}

CVec effective_channel(std::span<const cplx> h_ru, std::span<const cplx> omega,
                       const CMat& h_br) {
  if (h_ru.size() != omega.size() ||
      static_cast<int>(h_ru.size()) != h_br.rows())
    throw DimensionError("effective_channel: length mismatch");
  const int m = h_br.cols();
  CVec h(m);
  for (std::size_t i = 0; i < h_ru.size(); ++i) {
    const cplx c = h_ru[i] * std::conj(omega[i]);
    for (int j = 0; j < m; ++j)
      h[j] += c * std::conj(h_br(static_cast<int>(i), j));
  }
  return h;
}

CVec ris_phases_for_baselines(std::span<const cplx> h_ru, const CMat& h_br) {
  const std::size_t n = h_ru.size();
  CVec omega(n, cplx(1.0, 0.0));
  double gain = norm2(effective_channel(h_ru, omega, h_br));
  if (gain <= 0.0) throw DomainError("ris_phases_for_baselines: zero channel");

  constexpr int kMaxIters = 500;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    const CVec h_eff = effective_channel(h_ru, omega, h_br);
    const CVec v = mrt_precoder(h_eff);
    const CVec hv = mat_vec(h_br, v);
    double aligned = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx c = std::conj(h_ru[i]) * hv[i];
      const double mag = std::abs(c);
      omega[i] = (mag == 0.0) ? cplx(1.0, 0.0) : std::conj(c) / mag;
      aligned += mag;
    }
    if (aligned - gain <= 1e-8 * std::max(gain, 1e-300)) break;
    gain = aligned;
  }
  return omega;
}

namespace {

struct TrialResult {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
};

TrialResult run_rist_trial(const ExperimentConfig& cfg, const SepPoint& point,
                           const PrecoderDesign& design, std::uint64_t r) {
  const int m = cfg.num_antennas;
  const int order = cfg.psk_order;
  const int k = cfg.num_users;
  const double p_total = std::pow(10.0, point.total_power_db / 10.0);
  const double amp = std::sqrt(p_total / m);  // sqrt(rho)
  const double namp = std::sqrt(cfg.noise_var);

  const Scene scene = build_scene(cfg, r, k);
  std::vector<PhiloxStream> sym;
  for (int u = 0; u < k; ++u)
    sym.push_back(make_stream(cfg.master_seed, StreamRole::symbols, r, u));
  PhiloxStream wave = make_stream(cfg.master_seed, StreamRole::waveform, r, 0);
  PhiloxStream noise = make_stream(cfg.master_seed, StreamRole::noise, r, 0);

  TrialResult res;
  CVec t(m);
  for (int n = 0; n < cfg.symbols_per_realization; ++n) {
    const int u = n % k;
    const int idx = static_cast<int>(sym[u].next_pow2(order));
    const cplx s = psk_map(idx, order);

    for (auto& v : t) v = wave.cgaussian();
    const CVec x = mat_vec(design.w_circ, t);
    const CVec z = one_bit_quantize(x);

    const CVec h_c = cascade_channel(scene.h_ru[u], scene.h_br, z);
    const CVec phi = optimal_phase(h_c);
    const CVec omega = embed_symbol(phi, s);
    const CVec omega_q = project_discrete(omega, point.bits);

    const cplx y = amp * dot_plain(omega_q, h_c) + namp * noise.cgaussian();
    if (ml_detect(y, order) != idx) ++res.errors;
    ++res.trials;
  }
  return res;
}

TrialResult run_linear_trial(const ExperimentConfig& cfg, const SepPoint& point,
                             std::uint64_t r) {
  const int order = cfg.psk_order;
  const int k = cfg.num_users;
  const double p_total = std::pow(10.0, point.total_power_db / 10.0);
  const double namp = std::sqrt(cfg.noise_var);
  const bool quantized = point.scheme == Scheme::qmrt;
  const double amp = quantized ? std::sqrt(p_total / cfg.num_antennas)
                               : std::sqrt(p_total);

  const Scene scene = build_scene(cfg, r, k);
  std::vector<PhiloxStream> sym;
  std::vector<CVec> h_eff(k), w(k);
  std::vector<double> mrt_gain(k);
  for (int u = 0; u < k; ++u) {
    sym.push_back(make_stream(cfg.master_seed, StreamRole::symbols, r, u));
    const CVec omega = ris_phases_for_baselines(scene.h_ru[u], scene.h_br);
    h_eff[u] = effective_channel(scene.h_ru[u], omega, scene.h_br);
    w[u] = mrt_precoder(h_eff[u]);
    mrt_gain[u] = norm2(h_eff[u]);
  }
  PhiloxStream noise = make_stream(cfg.master_seed, StreamRole::noise, r, 0);

  TrialResult res;
  for (int n = 0; n < cfg.symbols_per_realization; ++n) {
    const int u = n % k;
    const int idx = static_cast<int>(sym[u].next_pow2(order));
    const cplx s = psk_map(idx, order);

    cplx y;
    if (quantized) {
      const CVec z = qmrt_transmit(w[u], s);
      y = amp * dot_conj(h_eff[u], z) + namp * noise.cgaussian();
    } else {
      y = amp * mrt_gain[u] * s + namp * noise.cgaussian();
    }
    if (ml_detect(y, order) != idx) ++res.errors;
    ++res.trials;
  }
  return res;
}

TrialResult run_zf_trial(const ExperimentConfig& cfg, const SepPoint& point,
                         std::uint64_t r) {
  const int order = cfg.psk_order;
  const int k = cfg.zf_users;
  const double p_amp = std::sqrt(std::pow(10.0, point.total_power_db / 10.0));
  const double namp = std::sqrt(cfg.noise_var);

  const Scene scene = build_scene(cfg, r, k);
  // Static surface aligned to the first user; the surface cannot precode, so
  // multi-user separation has to come from the BS side alone.
  const CVec omega = ris_phases_for_baselines(scene.h_ru[0], scene.h_br);

  CMat h(k, cfg.num_antennas);
  for (int u = 0; u < k; ++u) {
    const CVec h_eff = effective_channel(scene.h_ru[u], omega, scene.h_br);
    for (int j = 0; j < cfg.num_antennas; ++j) h(u, j) = std::conj(h_eff[j]);
  }
  const CMat w = zf_precoder(h);
  const CMat gains = mat_mul(h, w);  // K x K, ~diagonal

  std::vector<PhiloxStream> sym, noise;
  for (int u = 0; u < k; ++u) {
    sym.push_back(make_stream(cfg.master_seed, StreamRole::symbols, r, u));
    noise.push_back(make_stream(cfg.master_seed, StreamRole::noise, r, u));
  }

  TrialResult res;
  std::vector<int> idx(k);
  CVec s(k);
  for (int n = 0; n < cfg.symbols_per_realization; ++n) {
    for (int u = 0; u < k; ++u) {
      idx[u] = static_cast<int>(sym[u].next_pow2(order));
      s[u] = psk_map(idx[u], order);
    }
    for (int u = 0; u < k; ++u) {
      cplx y = 0.0;
      for (int j = 0; j < k; ++j) y += gains(u, j) * s[j];
      y = p_amp * y + namp * noise[u].cgaussian();
      if (ml_detect(y, order) != idx[u]) ++res.errors;
      ++res.trials;
    }
  }
  return res;
}

}  // namespace

SepEstimate simulate_sep(const ExperimentConfig& cfg, const SepPoint& point,
                         const PrecoderDesign* design, int workers) {
  std::optional<PrecoderDesign> local;
  if (point.scheme == Scheme::rist && design == nullptr) {
    DesignInputs in = design_inputs_from_config(cfg);
    in.beta = point.beta;
    local = design_precoder(in, DesignKind::proposed);
    design = &*local;
  }

  const int r = cfg.realizations;
  std::vector<TrialResult> results(r);
  parallel_for(r, workers, [&](int i) {
    switch (point.scheme) {
      case Scheme::rist:
        results[i] = run_rist_trial(cfg, point, *design, i);
        break;
      case Scheme::mrt:
      case Scheme::qmrt:
        results[i] = run_linear_trial(cfg, point, i);
        break;
      case Scheme::zf:
        results[i] = run_zf_trial(cfg, point, i);
        break;
    }
  });

  SepEstimate est;
  for (const auto& t : results) {
    est.errors += t.errors;
    est.trials += t.trials;
  }
  est.sep = est.trials ? static_cast<double>(est.errors) / est.trials : 0.0;
  est.config_digest = cfg.digest();
  return est;
}

std::string sep_csv_header() {
  return "scheme,M,N,K,psk_order,beta,bits,power_db,noise_var,trials,errors,"
         "sep,seed,wall_time_s\n";
}

std::string sep_csv_row(const ExperimentConfig& cfg, const SepPoint& point,
                        const SepEstimate& est) {
  std::ostringstream os;
  os.precision(10);
  const int k = point.scheme == Scheme::zf ? cfg.zf_users : cfg.num_users;
  os << scheme_name(point.scheme) << "," << cfg.num_antennas << ","
     << cfg.num_ris_elements << "," << k << "," << cfg.psk_order << ","
     << point.beta << ","
     << (point.scheme == Scheme::rist ? point.bits.to_string() : "inf") << ","
     << point.total_power_db << "," << cfg.noise_var << "," << est.trials
     << "," << est.errors << "," << est.sep << "," << cfg.master_seed
     << ",0.000\n";
  return os.str();
}

}  // namespace rist
