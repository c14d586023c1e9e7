// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. Scales are chosen to finish on a small CI box; every tolerance is
// fixed in code.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "comm.hpp"
#include "config.hpp"
#include "frontend.hpp"
#include "metrics.hpp"
#include "precoder.hpp"
#include "ris.hpp"
#include "runner.hpp"
#include "scene.hpp"

using namespace rist;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

// Fixed operating points for the SEP criteria (64-PSK, noise_var = 1,
// beta = 0.5). The ordering comparison runs with Rayleigh-like links
// (rician_k_db = 0): with a strongly LOS BS-RIS link the QMRT dither
// quasi-stratifies along the steering ramp and its error floor drops to the
// RIST b=2 floor, which empties the region where both orderings hold.
// kOpPowerDb sits where the infinite-precision curve is near 0.18. The ZF
// comparison keeps the default 10 dB K-factor: the near-rank-1 BS-RIS link
// is exactly what starves multi-user ZF, and kZfPowerDb is high enough that
// the TDM link is nearly clean while ZF stays interference limited.
constexpr double kOpPowerDb = 120.0;
constexpr double kOpRicianKDb = 0.0;
constexpr double kZfPowerDb = 130.0;
constexpr double kOpBeta = 0.5;

int g_failures = 0;

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void report(int index, const std::string& name, bool pass,
            const std::string& detail, double elapsed) {
  std::printf("[%s] %2d. %s: %s [%.1f s]\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str(), elapsed);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// --------------------------------------------------------------- criterion 1
void criterion_arcsine() {
  const double t0 = now_s();
  const int m = 8;
  const int samples = 1000000;
  double worst = 0.0;
  PhiloxStream seed_rng(2024, 1);
  for (int rep = 0; rep < 5; ++rep) {
    CMat w(m, m);
    for (auto& v : w.data()) v = seed_rng.cgaussian();
    const HermitianMatrix predicted = arcsine_covariance(
        normalize_covariance(hermitian_unchecked(mat_mul(w, w.adjoint()))));

    PhiloxStream rng(2024, 100 + rep);
    CMat acc(m, m);
    CVec t(m);
    for (int n = 0; n < samples; ++n) {
      for (auto& v : t) v = rng.cgaussian();
      const CVec z = one_bit_quantize(mat_vec(w, t));
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) acc(i, j) += z[i] * std::conj(z[j]);
    }
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const cplx emp = acc(i, j) / static_cast<double>(samples);
        worst = std::max(worst, std::abs(emp - predicted(i, j)));
      }
  }
  const double elapsed = now_s() - t0;
  const bool pass = worst < 5e-3 && elapsed < 60.0;
  report(1, "arcsine-law fidelity",
         pass, "max entrywise deviation " + fmt(worst) + " (bound 5e-3)",
         elapsed);
}

// --------------------------------------------------------------- criterion 2
void criterion_phase_optimality() {
  const double t0 = now_s();

  // (a) closed form beats 1e4 random competitors on 100 instances, N = 16
  int beaten = 0;
  PhiloxStream rng(2024, 200);
  for (int inst = 0; inst < 100; ++inst) {
    CVec h(16);
    for (auto& v : h) v = rng.cgaussian();
    const double best = instantaneous_snr(optimal_phase(h), h, 1.0);
    for (int c = 0; c < 10000; ++c) {
      CVec cand(16);
      for (auto& v : cand) v = std::polar(1.0, 2 * kPi * rng.uniform());
      if (instantaneous_snr(cand, h, 1.0) > best * (1.0 + 1e-12)) ++beaten;
    }
  }

  // (b) N = 4: projection vs the exhaustive discrete optimum, b = 1..5
  const int n = 4;
  const int instances = 100;
  double mean_gap[6] = {0};
  bool within_exhaustive = true;
  PhiloxStream rng2(2024, 201);
  std::vector<CVec> channels(instances);
  for (auto& h : channels) {
    h.resize(n);
    for (auto& v : h) v = rng2.cgaussian();
  }
  for (int bits = 1; bits <= 5; ++bits) {
    const PhaseResolution res = PhaseResolution::from_bits(bits);
    const int levels = res.num_levels();
    double acc = 0.0;
    for (const CVec& h : channels) {
      const CVec omega = embed_symbol(optimal_phase(h), cplx(1.0, 0.0));
      const double projected = std::norm(dot_plain(project_discrete(omega, res), h));

      // exhaustive search over levels^4 phase combinations
      double exhaustive = 0.0;
      std::vector<cplx> table(levels);
      for (int k = 0; k < levels; ++k)
        table[k] = std::polar(1.0, k * res.delta_omega());
      for (int k0 = 0; k0 < levels; ++k0) {
        const cplx p0 = table[k0] * h[0];
        for (int k1 = 0; k1 < levels; ++k1) {
          const cplx p1 = p0 + table[k1] * h[1];
          for (int k2 = 0; k2 < levels; ++k2) {
            const cplx p2 = p1 + table[k2] * h[2];
            for (int k3 = 0; k3 < levels; ++k3)
              exhaustive = std::max(exhaustive, std::norm(p2 + table[k3] * h[3]));
          }
        }
      }
      if (projected > exhaustive * (1.0 + 1e-12)) within_exhaustive = false;
      acc += (exhaustive - projected) / exhaustive;
    }
    mean_gap[bits] = acc / instances;
  }
  bool monotone = true;
  for (int bits = 1; bits < 5; ++bits)
    if (mean_gap[bits + 1] > mean_gap[bits] + 1e-12) monotone = false;

  const double elapsed = now_s() - t0;
  const bool pass = beaten == 0 && within_exhaustive && monotone && elapsed < 120.0;
  report(2, "closed-form phase optimality", pass,
         "competitors_beating=" + std::to_string(beaten) + ", mean rel gap b=1..5: " +
             fmt(mean_gap[1]) + " " + fmt(mean_gap[2]) + " " + fmt(mean_gap[3]) +
             " " + fmt(mean_gap[4]) + " " + fmt(mean_gap[5]),
         elapsed);
}

// --------------------------------------------------------------- criterion 3
void criterion_real_gain() {
  const double t0 = now_s();
  PhiloxStream rng(2024, 300);
  double worst = 0.0;
  for (int inst = 0; inst < 100000; ++inst) {
    CVec h(100);
    for (auto& v : h) v = rng.cgaussian();
    const cplx alpha = dot_plain(optimal_phase(h), h);
    worst = std::max(worst, std::abs(alpha.imag()));
  }
  const double elapsed = now_s() - t0;
  report(3, "purely-real aligned gain", worst < 1e-12,
         "max |Im(alpha)| = " + fmt(worst) + " (bound 1e-12)", elapsed);
}

// --------------------------------------------------------------- criterion 4
void criterion_m2_solver() {
  const double t0 = now_s();
  const AngularGrid grid = AngularGrid::standard();
  PhiloxStream rng(2024, 400);

  std::vector<cplx> coef(grid.size());
  for (int l = 0; l < grid.size(); ++l) {
    const CVec a = steering_vector(grid.angles[l], 2);
    coef[l] = std::conj(a[0]) * a[1];
  }

  double worst_excess = -1e300;
  for (int rep = 0; rep < 10; ++rep) {
    const double t1 = -70.0 + 60.0 * rng.uniform();
    const double t2 = 5.0 + 60.0 * rng.uniform();
    const double beta = 0.15 + 0.7 * rng.uniform();
    const DesiredBeampattern d =
        desired_beampattern({t1 * kDeg}, t2 * kDeg, beta, 1, grid);

    auto objective = [&](cplx c) {
      std::vector<double> j(grid.size());
      for (int l = 0; l < grid.size(); ++l)
        j[l] = 2.0 + 2.0 * (coef[l] * c).real();
      const double tau = optimal_tau(j, d.values);
      double acc = 0.0;
      for (int l = 0; l < grid.size(); ++l) {
        const double e = j[l] - tau * d.values[l];
        acc += e * e;
      }
      return acc / grid.size();
    };

    double grid_min = 1e300;
    for (int x = 0; x < 200; ++x)
      for (int y = 0; y < 200; ++y) {
        const cplx c(-1.0 + 2.0 * x / 199.0, -1.0 + 2.0 * y / 199.0);
        if (std::abs(c) > 1.0) continue;
        grid_min = std::min(grid_min, objective(c));
      }

    const RelaxedSolution sol = solve_relaxed_sdp(d, 2);
    worst_excess = std::max(worst_excess, sol.objective_trace.back() - grid_min);
  }
  const double elapsed = now_s() - t0;
  const bool pass = worst_excess <= 1e-3 && elapsed < 60.0;
  report(4, "M=2 relaxed solve vs brute-force grid", pass,
         "worst objective excess " + fmt(worst_excess) + " (bound 1e-3)",
         elapsed);
}

// --------------------------------------------------------------- criterion 5
void criterion_beampattern_shape() {
  const double t0 = now_s();
  ExperimentConfig cfg;  // defaults: M=16, targets -45/0, RIS 45, beta 0.2
  cfg.beta = 0.2;
  const PrecoderDesign d = design_precoder(cfg);
  const std::vector<double> j = beampattern(d.radiated_covariance(), d.desired.grid);

  const double centers[] = {-45.0, 0.0, 45.0};

  // median sidelobe: all angles > 10 deg away from every lobe center
  std::vector<double> side;
  for (int l = 0; l < d.desired.grid.size(); ++l) {
    const double deg = d.desired.grid.angles[l] / kDeg;
    bool in_lobe = false;
    for (const double c : centers)
      if (std::abs(deg - c) <= 10.0) in_lobe = true;
    if (!in_lobe) side.push_back(j[l]);
  }
  std::sort(side.begin(), side.end());
  const double median = side[side.size() / 2];

  bool pass = true;
  std::string detail;
  for (const double c : centers) {
    const int center_idx = static_cast<int>(c) + 90;
    int best = center_idx - 2;
    for (int l = center_idx - 2; l <= center_idx + 2; ++l)
      if (j[l] > j[best]) best = l;
    const bool local_max = j[best] >= j[best - 1] && j[best] >= j[best + 1];
    const double margin_db = 10.0 * std::log10(j[best] / median);
    if (!local_max || margin_db < 6.0) pass = false;
    detail += fmt(c) + " deg: +" + fmt(margin_db) + " dB; ";
  }
  const double elapsed = now_s() - t0;
  report(5, "quantized beampattern shape (beta=0.2)", pass,
         detail + "median sidelobe " + fmt(median), elapsed);
}

// --------------------------------------------------------------- criterion 6
void criterion_quantization_loss() {
  const double t0 = now_s();
  PhiloxStream rng(2024, 600);
  const double ris_angle = std::atan2(50.0, 50.0);

  bool pass = true;
  std::string detail;
  for (const double beta : {0.2, 0.5}) {
    double gap_sum = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
      // random well-separated two-target geometry away from the RIS lobe
      double a1 = 0.0, a2 = 0.0;
      do {
        a1 = (-70.0 + 140.0 * rng.uniform()) * kDeg;
        a2 = (-70.0 + 140.0 * rng.uniform()) * kDeg;
      } while (std::abs(a1 - a2) < 15.0 * kDeg ||
               std::abs(a1 - ris_angle) < 12.0 * kDeg ||
               std::abs(a2 - ris_angle) < 12.0 * kDeg);

      DesignInputs in;
      in.num_antennas = 16;
      in.target_angles = {a1, a2};
      in.ris_angle = ris_angle;
      in.beta = beta;

      const PrecoderDesign prop = design_precoder(in, DesignKind::proposed);
      const PrecoderDesign unq = design_precoder(in, DesignKind::unquantized_isac);

      const CVec g1 = gen_target_channel(a1, 80.0, 16);
      const CVec g2 = gen_target_channel(a2, 80.0, 16);
      const HermitianMatrix rq = prop.radiated_covariance();
      const HermitianMatrix ru = unq.radiated_covariance();
      const double wq = std::min(illumination_power(rq, g1, 1.0),
                                 illumination_power(rq, g2, 1.0));
      const double wu = std::min(illumination_power(ru, g1, 1.0),
                                 illumination_power(ru, g2, 1.0));
      gap_sum += std::abs(10.0 * std::log10(wu / wq));
    }
    const double mean_gap = gap_sum / 10.0;
    if (mean_gap > 2.5) pass = false;
    detail += "beta=" + fmt(beta) + ": mean |gap| " + fmt(mean_gap) + " dB; ";
  }
  const double elapsed = now_s() - t0;
  report(6, "quantization loss vs unquantized design", pass,
         detail + "(bound 2.5 dB)", elapsed);
}

// --------------------------------------------------------------- criterion 7
struct SepRun {
  double sep = 0.0;
  double se = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
};

SepRun run_sep_point(const ExperimentConfig& cfg, const SepPoint& point,
                     const PrecoderDesign* design, int workers) {
  const SepEstimate est = simulate_sep(cfg, point, design, workers);
  SepRun r;
  r.sep = est.sep;
  r.errors = est.errors;
  r.trials = est.trials;
  r.se = std::sqrt(std::max(est.sep * (1.0 - est.sep), 1e-30) /
                   static_cast<double>(est.trials));
  return r;
}

void criterion_sep_orderings() {
  const double t0 = now_s();
  const int workers = 4;

  ExperimentConfig cfg;  // 1e5 symbols per scheme
  cfg.realizations = 500;
  cfg.symbols_per_realization = 200;
  cfg.beta = kOpBeta;
  cfg.rician_k_db = kOpRicianKDb;
  cfg.total_power_db_list = {104, 108, 112, 116, 120, 124, 128, 132};

  std::map<double, PrecoderDesign> designs;
  auto design_at = [&](double beta) -> const PrecoderDesign* {
    auto it = designs.find(beta);
    if (it == designs.end()) {
      DesignInputs in = design_inputs_from_config(cfg);
      in.beta = beta;
      it = designs.emplace(beta, design_precoder(in)).first;
    }
    return &it->second;
  };

  const SepRun rist2 = run_sep_point(
      cfg, {Scheme::rist, PhaseResolution::from_bits(2), kOpPowerDb, kOpBeta},
      design_at(kOpBeta), workers);
  const SepRun rist4 = run_sep_point(
      cfg, {Scheme::rist, PhaseResolution::from_bits(4), kOpPowerDb, kOpBeta},
      design_at(kOpBeta), workers);
  const SepRun rist_inf = run_sep_point(
      cfg, {Scheme::rist, PhaseResolution::infinite(), kOpPowerDb, kOpBeta},
      design_at(kOpBeta), workers);
  const SepRun qmrt = run_sep_point(
      cfg, {Scheme::qmrt, PhaseResolution::infinite(), kOpPowerDb, kOpBeta},
      nullptr, workers);

  const bool b2_beats_qmrt = rist2.sep < qmrt.sep;
  const bool b4_near_inf = rist4.sep <= 1.2 * rist_inf.sep;

  // beta monotonicity at the operating power, b = inf
  bool beta_monotone = true;
  std::string beta_detail;
  {
    SepRun prev;
    bool first = true;
    for (const double beta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const SepRun cur = run_sep_point(
          cfg, {Scheme::rist, PhaseResolution::infinite(), kOpPowerDb, beta},
          design_at(beta), workers);
      beta_detail += fmt(cur.sep) + " ";
      if (!first &&
          cur.sep > prev.sep + 2.0 * std::sqrt(cur.se * cur.se + prev.se * prev.se))
        beta_monotone = false;
      prev = cur;
      first = false;
    }
  }

  // power monotonicity, b = inf, 8 points
  bool power_monotone = true;
  std::string power_detail;
  {
    SepRun prev;
    bool first = true;
    for (const double p_db : cfg.total_power_db_list) {
      const SepRun cur = run_sep_point(
          cfg, {Scheme::rist, PhaseResolution::infinite(), p_db, kOpBeta},
          design_at(kOpBeta), workers);
      power_detail += fmt(cur.sep) + " ";
      if (!first &&
          cur.sep > prev.sep + 2.0 * std::sqrt(cur.se * cur.se + prev.se * prev.se))
        power_monotone = false;
      prev = cur;
      first = false;
    }
  }

  const double elapsed = now_s() - t0;
  const bool pass =
      b2_beats_qmrt && b4_near_inf && beta_monotone && power_monotone &&
      elapsed < 900.0;
  report(7, "SEP orderings and monotonicity", pass,
         "b2=" + fmt(rist2.sep) + " qmrt=" + fmt(qmrt.sep) + " b4=" +
             fmt(rist4.sep) + " inf=" + fmt(rist_inf.sep) +
             " | beta sweep: " + beta_detail + "| power sweep: " + power_detail,
         elapsed);
}

// --------------------------------------------------------------- criterion 8
void criterion_zf_degradation() {
  const double t0 = now_s();
  const int workers = 4;
  ExperimentConfig cfg;
  cfg.realizations = 500;
  cfg.symbols_per_realization = 200;
  cfg.beta = kOpBeta;

  DesignInputs in = design_inputs_from_config(cfg);
  in.beta = kOpBeta;
  const PrecoderDesign design = design_precoder(in);

  const SepRun rist = run_sep_point(
      cfg, {Scheme::rist, PhaseResolution::infinite(), kZfPowerDb, kOpBeta},
      &design, workers);
  const SepRun zf = run_sep_point(
      cfg, {Scheme::zf, PhaseResolution::infinite(), kZfPowerDb, kOpBeta},
      nullptr, workers);

  // a zero-error RIST run still passes if ZF is at least 10x the resolution
  const double rist_floor =
      std::max(rist.sep, 1.0 / static_cast<double>(rist.trials));
  const bool pass = zf.sep >= 10.0 * rist_floor;
  const double elapsed = now_s() - t0;
  report(8, "ZF multi-user degradation", pass,
         "zf=" + fmt(zf.sep) + " rist_inf=" + fmt(rist.sep) + " (need 10x)",
         elapsed);
}

// --------------------------------------------------------------- criterion 9
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism() {
  const double t0 = now_s();
  ExperimentConfig cfg;
  cfg.num_antennas = 8;
  cfg.num_ris_elements = 16;
  cfg.ris_bits_list = {PhaseResolution::from_bits(2)};
  cfg.total_power_db_list = {100.0, 110.0};
  cfg.sep_beta_list = {0.3};
  cfg.beta_list = {0.2, 0.5};
  cfg.schemes = {"RIST", "QMRT"};
  cfg.validate();

  auto csv_of = [](const RunSummary& s, const std::string& needle) {
    for (const auto& p : s.outputs)
      if (p.find(needle) != std::string::npos) return slurp(p);
    return std::string("<missing " + needle + ">");
  };

  bool pass = true;
  std::string detail;

  {
    RunOptions o1{"acc_runs_det", 1, true};
    RunOptions o8{"acc_runs_det", 8, true};
    const RunSummary s1 = run_sep(cfg, o1);
    const RunSummary s8 = run_sep(cfg, o8);
    pass = pass && s1.ok && s8.ok;
    const bool power_same = csv_of(s1, "sep_power.csv") == csv_of(s8, "sep_power.csv");
    const bool beta_same = csv_of(s1, "sep_beta.csv") == csv_of(s8, "sep_beta.csv");
    pass = pass && power_same && beta_same;
    detail += std::string("sep workers 1 vs 8: ") +
              (power_same && beta_same ? "identical" : "DIFFER") + "; ";
  }
  {
    RunOptions o{"acc_runs_det", 4, true};
    const RunSummary a = run_beampattern(cfg, o);
    const RunSummary b = run_beampattern(cfg, o);
    pass = pass && a.ok && b.ok;
    bool same = true;
    for (const char* f :
         {"beampattern_proposed.csv", "beampattern_unquantized_isac.csv",
          "beampattern_unquantized_radar.csv", "illumination.csv"})
      same = same && csv_of(a, f) == csv_of(b, f);
    pass = pass && same;
    detail += std::string("beampattern rerun: ") + (same ? "identical" : "DIFFER");
  }
  std::filesystem::remove_all("acc_runs_det");

  report(9, "byte-identical reruns", pass, detail, now_s() - t0);
}

// -------------------------------------------------------------- criterion 10
void criterion_gradient_check() {
  const double t0 = now_s();
  PhiloxStream rng(2024, 1000);
  const AngularGrid grid = AngularGrid::uniform_deg(-90.0, 90.0, 61);
  const int m = 4;

  auto mismatch = [&](const DesiredBeampattern& d, const CMat& r, double tau) {
    const std::vector<double> j = beampattern(hermitian_unchecked(r), d.grid);
    double acc = 0.0;
    for (std::size_t l = 0; l < j.size(); ++l) {
      const double e = j[l] - tau * d.values[l];
      acc += e * e;
    }
    return acc / static_cast<double>(j.size());
  };

  double worst_rel = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const DesiredBeampattern d = desired_beampattern(
        {-0.8 + 0.6 * rng.uniform()}, 0.5 + 0.3 * rng.uniform(),
        0.2 + 0.6 * rng.uniform(), 1, grid);
    // random unit-diagonal PSD point
    CMat w(m, m + 1);
    for (auto& v : w.data()) v = rng.cgaussian();
    CMat r = mat_mul(w, w.adjoint());
    for (int i = 0; i < m; ++i) {
      const double s = 1.0 / std::sqrt(r(i, i).real());
      for (int j2 = 0; j2 < m; ++j2) {
        r(i, j2) *= s;
        r(j2, i) *= s;
      }
    }
    for (int i = 0; i < m; ++i) r(i, i) = 1.0;
    const double tau = 1.0 + 20.0 * rng.uniform();

    const std::vector<double> j = beampattern(hermitian_unchecked(r), grid);
    CMat g(m, m);
    for (int l = 0; l < grid.size(); ++l) {
      const CVec a = steering_vector(grid.angles[l], m);
      const double c = 2.0 / grid.size() * (j[l] - tau * d.values[l]);
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) g(p, q) += c * a[p] * std::conj(a[q]);
    }

    for (int dir = 0; dir < 3; ++dir) {
      CMat delta(m, m);
      for (int i = 0; i < m; ++i) {
        delta(i, i) = 2.0 * rng.uniform() - 1.0;
        for (int j2 = i + 1; j2 < m; ++j2) {
          delta(i, j2) =
              cplx(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
          delta(j2, i) = std::conj(delta(i, j2));
        }
      }
      const double h = 1e-6;
      const double fd =
          (mismatch(d, r + h * delta, tau) - mismatch(d, r - h * delta, tau)) /
          (2.0 * h);
      double inner = 0.0;
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
          inner += (std::conj(g(p, q)) * delta(p, q)).real();
      worst_rel = std::max(worst_rel,
                           std::abs(inner - fd) / std::max(std::abs(fd), 1e-12));
    }
  }
  const double elapsed = now_s() - t0;
  report(10, "analytic gradient vs finite differences", worst_rel < 1e-4,
         "worst relative error " + fmt(worst_rel) + " (bound 1e-4)", elapsed);
}

}  // namespace

int main() {
  std::printf("acceptance suite (tolerances fixed in code)\n");
  criterion_arcsine();
  criterion_phase_optimality();
  criterion_real_gain();
  criterion_m2_solver();
  criterion_beampattern_shape();
  criterion_quantization_loss();
  criterion_sep_orderings();
  criterion_zf_degradation();
  criterion_determinism();
  criterion_gradient_check();
  std::printf("%d/%d criteria passed\n", 10 - g_failures, 10);
  return g_failures == 0 ? 0 : 1;
}
