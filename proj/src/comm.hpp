#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "linalg.hpp"
#include "precoder.hpp"
#include "ris.hpp"
#include "rng.hpp"
#include "scene.hpp"

namespace rist {

struct ExperimentConfig;

struct PskConstellation {
  int order;

  explicit PskConstellation(int order_in);
  cplx point(int index) const;
};

// e^{j 2 pi index / order}
cplx psk_map(int index, int order);

// Eq-style received sample: sqrt(rho) h_ru^H diag(omega) H_br z + w with
// w ~ CN(0, sigma2). Equals sqrt(rho) omega^T h_c + w for the cascade h_c.
cplx received_sample(std::span<const cplx> omega, std::span<const cplx> h_ru,
                     const CMat& h_br, std::span<const cplx> z, double rho,
                     double sigma2, PhiloxStream& rng);

// Nearest-PSK-phase decision (the ML rule when the effective gain is real
// and nonnegative). y == 0 detects as index 0.
int ml_detect(cplx y, int order);

struct SepEstimate {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double sep = 0.0;
  std::string config_digest;
};

enum class Scheme { rist, mrt, qmrt, zf };

Scheme scheme_from_string(const std::string& name);
std::string scheme_name(Scheme s);

// One operating point of the SEP experiment. beta applies to the RIST
// design; bits only to RIST.
struct SepPoint {
  Scheme scheme = Scheme::rist;
  PhaseResolution bits = PhaseResolution::infinite();
  double total_power_db = 0.0;
  double beta = 0.2;
};

// w = h_eff / ||h_eff||
CVec mrt_precoder(std::span<const cplx> h_eff);

// MRT through the 1-bit DAC: Q(w s).
CVec qmrt_transmit(std::span<const cplx> w, cplx s);

// Rows of h_users are the per-user effective channels h_eff^H (K x M).
// Returns M x K with H W ~ diagonal; Frobenius-normalized to unit power.
CMat zf_precoder(const CMat& h_users);

// Static phases for the linear-precoding baselines: block-coordinate ascent
// on ||h_ru^H diag(omega) H_br|| alternating the MRT direction and the
// per-element phase alignment, starting from omega = 1.
CVec ris_phases_for_baselines(std::span<const cplx> h_ru, const CMat& h_br);

// Effective channel h_eff = (h_ru^H diag(omega) H_br)^H as an M-vector.
CVec effective_channel(std::span<const cplx> h_ru, std::span<const cplx> omega,
                       const CMat& h_br);

// Monte-Carlo SEP over config.realizations x config.symbols_per_realization
// symbols. Trials are keyed by (master_seed, realization), so results are
// independent of worker count, and channels/symbols/noise are shared across
// schemes and sweep points (paired comparisons). `design` must be the RIST
// precoder design matching point.beta (ignored for baselines; computed on
// demand when absent).
SepEstimate simulate_sep(const ExperimentConfig& cfg, const SepPoint& point,
                         const PrecoderDesign* design = nullptr,
                         int workers = 1);

// CSV row for the results table (schema:
// scheme,M,N,K,psk_order,beta,bits,power_db,noise_var,trials,errors,sep,seed,
// wall_time_s). wall_time_s is written as 0.000 so that data files are a pure
// function of (config, seed); timing lives in the run summary.
std::string sep_csv_header();
std::string sep_csv_row(const ExperimentConfig& cfg, const SepPoint& point,
                        const SepEstimate& est);

}  // namespace rist
