#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "comm.hpp"
#include "frontend.hpp"
#include "json.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "precoder.hpp"
#include "ris.hpp"

namespace rist {

namespace {

namespace fs = std::filesystem;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& outputs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  outputs.push_back(path);
}

ExperimentConfig effective_config(const ExperimentConfig& cfg, bool quick) {
  ExperimentConfig c = cfg;
  if (quick) {
    c.realizations = 100;
    c.symbols_per_realization = 50;
  }
  return c;
}

std::vector<double> effective_beta_list(const ExperimentConfig& cfg,
                                        bool quick) {
  if (!quick || cfg.beta_list.size() <= 3) return cfg.beta_list;
  return {cfg.beta_list.front(), cfg.beta_list[cfg.beta_list.size() / 2],
          cfg.beta_list.back()};
}

void log_line(const std::string& msg) { std::cerr << msg << "\n"; }

}  // namespace

std::string RunSummary::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_digest"] = config_digest;
  j["outputs"] = outputs;
  j["wall_time_s"] = wall_time_s;
  j["oracle_status"] = oracle_status;
  j["ok"] = ok;
  if (!error.empty()) j["error"] = error;
  return j.dump();
}

std::string make_run_dir(const std::string& base, const std::string& command,
                         const ExperimentConfig& cfg) {
  const auto now = std::chrono::system_clock::now();
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      now.time_since_epoch())
                      .count();
  const std::time_t secs = us / 1000000;
  char stamp[32];
  std::tm tm_utc{};
  gmtime_r(&secs, &tm_utc);
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm_utc);
  std::ostringstream dir;
  dir << base << "/" << command << "-" << stamp << "-" << (us % 1000000);
  fs::create_directories(dir.str());

  std::ofstream snap(dir.str() + "/config.resolved.txt", std::ios::binary);
  if (!snap) throw IoError("cannot write config snapshot in " + dir.str());
  snap << cfg.to_text();
  return dir.str();
}

// ---------------------------------------------------------------------------
// Oracle suite

namespace {

OracleResult oracle_arcsine(const ExperimentConfig& cfg, bool quick) {
  OracleResult res{"arcsine_law_monte_carlo", false, 0.0, quick ? 1e-2 : 5e-3,
                   ""};
  const int m = 8;
  const int t = quick ? 250000 : 1000000;
  double worst = 0.0;
  PhiloxStream wrng(cfg.master_seed, stream_id(StreamRole::generic, 90001));
  for (int rep = 0; rep < (quick ? 2 : 3); ++rep) {
    CMat w(m, m);
    for (auto& v : w.data()) v = wrng.cgaussian();
    PhiloxStream rng(cfg.master_seed,
                     stream_id(StreamRole::generic, 90100 + rep));
    const QuantizedWaveform wf = gen_quantized_waveform(w, t, 1.0, rng);

    CMat acc(m, m);
    for (int n = 0; n < t; ++n)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          acc(i, j) += wf.samples(i, n) * std::conj(wf.samples(j, n));
    acc *= 1.0 / t;

    const HermitianMatrix r_pred = arcsine_covariance(
        normalize_covariance(hermitian_unchecked(mat_mul(w, w.adjoint()))));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        worst = std::max(worst, std::abs(acc(i, j) - r_pred(i, j)));
  }
  res.measured = worst;
  res.pass = worst < res.bound;
  res.detail = "max entrywise |E[zz^H] - (2/pi)casin(R)|";
  return res;
}

OracleResult oracle_phase_optimality(const ExperimentConfig& cfg, bool quick) {
  OracleResult res{"theorem_phase_optimality", false, 0.0, 0.0, ""};
  const int n = 16;
  const int instances = quick ? 20 : 100;
  const int competitors = quick ? 2000 : 10000;
  int failures = 0;
  PhiloxStream rng(cfg.master_seed, stream_id(StreamRole::generic, 90200));
  for (int inst = 0; inst < instances; ++inst) {
    CVec h(n);
    for (auto& v : h) v = rng.cgaussian();
    const CVec phi = optimal_phase(h);
    const double best = instantaneous_snr(phi, h, 1.0);
    for (int c = 0; c < competitors; ++c) {
      CVec cand(n);
      for (auto& v : cand) v = std::polar(1.0, rng.uniform() * 2.0 * M_PI);
      if (instantaneous_snr(cand, h, 1.0) > best + 1e-12 * best) ++failures;
    }
  }
  res.measured = failures;
  res.pass = failures == 0;
  res.detail = "random competitors beating the closed form";
  return res;
}

OracleResult oracle_m2_grid(const ExperimentConfig& cfg, bool) {
  OracleResult res{"solver_m2_brute_force", false, 0.0, 1e-3, ""};
  const AngularGrid grid = AngularGrid::standard();
  const DesiredBeampattern d = desired_beampattern(
      {-0.6, 0.3}, 0.8, 0.4, 2, grid);

  std::vector<CVec> steer;
  for (const double theta : grid.angles) steer.push_back(steering_vector(theta, 2));
  auto objective = [&](cplx c) {
    std::vector<double> j(grid.size());
    for (int l = 0; l < grid.size(); ++l) {
      const CVec& a = steer[l];
      // a^H R a with R = [[1, c], [conj(c), 1]]
      j[l] = 2.0 + 2.0 * (std::conj(a[0]) * c * a[1]).real();
    }
    const double tau = optimal_tau(j, d.values);
    double acc = 0.0;
    for (int l = 0; l < grid.size(); ++l) {
      const double e = j[l] - tau * d.values[l];
      acc += e * e;
    }
    return acc / grid.size();
  };

  double grid_min = 1e300;
  const int steps = 200;
  for (int a = 0; a < steps; ++a) {
    for (int b = 0; b < steps; ++b) {
      const cplx c(-1.0 + 2.0 * a / (steps - 1), -1.0 + 2.0 * b / (steps - 1));
      if (std::abs(c) > 1.0) continue;
      grid_min = std::min(grid_min, objective(c));
    }
  }

  const RelaxedSolution sol = solve_relaxed_sdp(d, 2);
  res.measured = sol.objective_trace.back() - grid_min;
  res.pass = res.measured <= res.bound;
  res.detail = "solver objective minus 200x200 grid minimum";
  return res;
}

OracleResult oracle_discrete_projection(const ExperimentConfig& cfg, bool) {
  OracleResult res{"discrete_projection_exhaustive", false, 0.0, 0.0, ""};
  const PhaseResolution b3 = PhaseResolution::from_bits(3);
  PhiloxStream rng(cfg.master_seed, stream_id(StreamRole::generic, 90300));
  int failures = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    const cplx omega = std::polar(1.0, rng.uniform() * 2.0 * M_PI);
    const CVec proj = project_discrete(std::span<const cplx>(&omega, 1), b3);
    const double chosen = std::abs(std::arg(proj[0] * std::conj(omega)));
    for (int k = 0; k < b3.num_levels(); ++k) {
      const cplx cand = std::polar(1.0, k * b3.delta_omega());
      if (std::abs(std::arg(cand * std::conj(omega))) < chosen - 1e-12)
        ++failures;
    }
  }
  res.measured = failures;
  res.pass = failures == 0;
  res.detail = "grid candidates closer than the projected point (b=3)";
  return res;
}

OracleResult oracle_discrete_snr(const ExperimentConfig& cfg, bool) {
  // N = 4, b = 2: the projected closed form against all 4^4 phase vectors.
  OracleResult res{"discrete_snr_exhaustive_n4_b2", false, 0.0, 0.0, ""};
  const PhaseResolution b2 = PhaseResolution::from_bits(2);
  PhiloxStream rng(cfg.master_seed, stream_id(StreamRole::generic, 90500));
  int failures = 0;
  double worst_ratio = 1.0;
  for (int inst = 0; inst < 50; ++inst) {
    CVec h(4);
    for (auto& v : h) v = rng.cgaussian();
    const CVec omega = embed_symbol(optimal_phase(h), cplx(1.0, 0.0));
    const double projected = std::norm(dot_plain(project_discrete(omega, b2), h));
    double exhaustive = 0.0;
    for (int code = 0; code < 256; ++code) {
      CVec cand(4);
      int c = code;
      for (int i = 0; i < 4; ++i) {
        cand[i] = std::polar(1.0, (c & 3) * b2.delta_omega());
        c >>= 2;
      }
      exhaustive = std::max(exhaustive, std::norm(dot_plain(cand, h)));
    }
    if (projected > exhaustive * (1.0 + 1e-12)) ++failures;
    worst_ratio = std::min(worst_ratio, projected / exhaustive);
  }
  res.measured = failures;
  res.pass = failures == 0;
  res.detail = "worst projected/exhaustive SNR ratio " + std::to_string(worst_ratio);
  return res;
}

OracleResult oracle_detector(const ExperimentConfig& cfg, bool) {
  OracleResult res{"detector_full_search", false, 0.0, 0.0, ""};
  const int order = cfg.psk_order;
  PhiloxStream rng(cfg.master_seed, stream_id(StreamRole::generic, 90400));
  int mismatches = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const cplx y = rng.cgaussian();
    const int fast = ml_detect(y, order);
    int best = 0;
    double best_metric = -1e300;
    for (int k = 0; k < order; ++k) {
      const double metric = (y * std::conj(psk_map(k, order))).real();
      if (metric > best_metric) {
        best_metric = metric;
        best = k;
      }
    }
    if (fast != best) ++mismatches;
  }
  res.measured = mismatches;
  res.pass = mismatches == 0;
  res.detail = "nearest-phase vs argmax Re(y conj(c))";
  return res;
}

}  // namespace

std::vector<OracleResult> run_oracle_suite(const ExperimentConfig& cfg,
                                           bool quick) {
  std::vector<OracleResult> results;
  results.push_back(oracle_arcsine(cfg, quick));
  results.push_back(oracle_phase_optimality(cfg, quick));
  results.push_back(oracle_m2_grid(cfg, quick));
  results.push_back(oracle_discrete_projection(cfg, quick));
  results.push_back(oracle_discrete_snr(cfg, quick));
  results.push_back(oracle_detector(cfg, quick));
  return results;
}

// ---------------------------------------------------------------------------
// Commands

RunSummary run_beampattern(const ExperimentConfig& cfg_in,
                           const RunOptions& opts) {
  const double t0 = now_seconds();
  const ExperimentConfig cfg = effective_config(cfg_in, opts.quick);
  RunSummary summary;
  summary.command = "beampattern";
  summary.config_digest = cfg.digest();
  try {
    const std::string dir = make_run_dir(opts.out_dir, "beampattern", cfg);
    summary.outputs.push_back(dir + "/config.resolved.txt");

    std::map<std::string, PrecoderDesign> cache;
    auto design_at = [&](DesignKind kind, double beta) -> const PrecoderDesign& {
      const std::string key = design_kind_name(kind) + ":" +
                              (kind == DesignKind::unquantized_radar
                                   ? std::string("-")
                                   : std::to_string(beta));
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      DesignInputs in = design_inputs_from_config(cfg);
      in.beta = beta;
      PrecoderDesign d = design_precoder(in, kind);
      log_line("designed " + key + ": iterations=" +
               std::to_string(d.iterations) +
               " objective=" + std::to_string(d.objective_trace.back()));
      return cache.emplace(key, std::move(d)).first->second;
    };

    for (const DesignKind kind :
         {DesignKind::proposed, DesignKind::unquantized_isac,
          DesignKind::unquantized_radar}) {
      const PrecoderDesign& d = design_at(kind, cfg.beta);
      const std::string name = design_kind_name(kind);
      write_file(dir + "/beampattern_" + name + ".csv", beampattern_csv(d),
                 summary.outputs);
      write_file(dir + "/design_" + name + ".json", design_to_json(d),
                 summary.outputs);
    }

    // Worst-case illumination across the trade-off sweep; the target links
    // are deterministic LOS, so one scene draw serves every design.
    const Scene scene = build_scene(cfg, 0, 1);
    std::string illum = illumination_csv_header();
    for (const double beta : effective_beta_list(cfg, opts.quick)) {
      for (const DesignKind kind :
           {DesignKind::proposed, DesignKind::unquantized_isac,
            DesignKind::unquantized_radar}) {
        const PrecoderDesign& d = design_at(kind, beta);
        illum += illumination_csv_rows(
            beta, worst_case_illumination(d, scene, 1.0));
      }
    }
    write_file(dir + "/illumination.csv", illum, summary.outputs);
  } catch (const std::exception& e) {
    summary.ok = false;
    summary.error = e.what();
  }
  summary.wall_time_s = now_seconds() - t0;
  return summary;
}

RunSummary run_sep(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  const double t0 = now_seconds();
  const ExperimentConfig cfg = effective_config(cfg_in, opts.quick);
  RunSummary summary;
  summary.command = "sep";
  summary.config_digest = cfg.digest();
  try {
    const std::string dir = make_run_dir(opts.out_dir, "sep", cfg);
    summary.outputs.push_back(dir + "/config.resolved.txt");

    std::map<double, PrecoderDesign> designs;  // keyed by beta
    auto design_at = [&](double beta) -> const PrecoderDesign& {
      auto it = designs.find(beta);
      if (it != designs.end()) return it->second;
      DesignInputs in = design_inputs_from_config(cfg);
      in.beta = beta;
      return designs.emplace(beta, design_precoder(in, DesignKind::proposed))
          .first->second;
    };

    auto run_point = [&](const SepPoint& p) {
      const PrecoderDesign* d =
          p.scheme == Scheme::rist ? &design_at(p.beta) : nullptr;
      const SepEstimate est = simulate_sep(cfg, p, d, opts.workers);
      const double se =
          est.trials ? std::sqrt(est.sep * (1.0 - est.sep) /
                                 static_cast<double>(est.trials))
                     : 0.0;
      std::ostringstream msg;
      msg.precision(4);
      msg << "sep " << scheme_name(p.scheme) << " bits="
          << (p.scheme == Scheme::rist ? p.bits.to_string() : "inf")
          << " power_db=" << p.total_power_db << " beta=" << p.beta
          << " -> sep=" << est.sep << " (se=" << se << ", "
          << est.errors << "/" << est.trials << ")";
      log_line(msg.str());
      return est;
    };

    // Power sweep (one row per scheme/bits/power).
    std::string power_csv = sep_csv_header();
    for (const auto& scheme_str : cfg.schemes) {
      const Scheme scheme = scheme_from_string(scheme_str);
      if (scheme == Scheme::rist) {
        for (const auto& bits : cfg.ris_bits_list)
          for (const double p_db : cfg.total_power_db_list) {
            const SepPoint pt{scheme, bits, p_db, cfg.beta};
            power_csv += sep_csv_row(cfg, pt, run_point(pt));
          }
      } else {
        for (const double p_db : cfg.total_power_db_list) {
          const SepPoint pt{scheme, PhaseResolution::infinite(), p_db, cfg.beta};
          power_csv += sep_csv_row(cfg, pt, run_point(pt));
        }
      }
    }
    write_file(dir + "/sep_power.csv", power_csv, summary.outputs);

    // Trade-off sweep at the fixed operating power.
    std::string beta_csv = sep_csv_header();
    for (const auto& scheme_str : cfg.schemes) {
      const Scheme scheme = scheme_from_string(scheme_str);
      if (scheme == Scheme::rist) {
        for (const auto& bits : cfg.ris_bits_list)
          for (const double beta : cfg.sep_beta_list) {
            const SepPoint pt{scheme, bits, cfg.sep_operating_power_db, beta};
            beta_csv += sep_csv_row(cfg, pt, run_point(pt));
          }
      } else if (scheme == Scheme::qmrt) {
        for (const double beta : cfg.sep_beta_list) {
          const SepPoint pt{scheme, PhaseResolution::infinite(),
                            cfg.sep_operating_power_db, beta};
          beta_csv += sep_csv_row(cfg, pt, run_point(pt));
        }
      }
    }
    write_file(dir + "/sep_beta.csv", beta_csv, summary.outputs);
  } catch (const std::exception& e) {
    summary.ok = false;
    summary.error = e.what();
  }
  summary.wall_time_s = now_seconds() - t0;
  return summary;
}

RunSummary run_oracles(const ExperimentConfig& cfg_in, const RunOptions& opts) {
  const double t0 = now_seconds();
  const ExperimentConfig cfg = effective_config(cfg_in, opts.quick);
  RunSummary summary;
  summary.command = "oracles";
  summary.config_digest = cfg.digest();
  try {
    const std::string dir = make_run_dir(opts.out_dir, "oracles", cfg);
    summary.outputs.push_back(dir + "/config.resolved.txt");

    const std::vector<OracleResult> results = run_oracle_suite(cfg, opts.quick);
    std::ostringstream csv;
    csv.precision(10);
    csv << "oracle,pass,measured,bound,detail\n";
    bool all_pass = true;
    for (const auto& r : results) {
      all_pass = all_pass && r.pass;
      csv << r.name << "," << (r.pass ? "1" : "0") << "," << r.measured << ","
          << r.bound << "," << r.detail << "\n";
      log_line("oracle " + r.name + ": " + (r.pass ? "pass" : "FAIL") +
               " (measured " + std::to_string(r.measured) + ", bound " +
               std::to_string(r.bound) + ")");
    }
    write_file(dir + "/oracles.csv", csv.str(), summary.outputs);
    summary.oracle_status = all_pass ? "pass" : "fail";
    summary.ok = all_pass;
  } catch (const std::exception& e) {
    summary.ok = false;
    summary.error = e.what();
  }
  summary.wall_time_s = now_seconds() - t0;
  return summary;
}

RunSummary run_all(const ExperimentConfig& cfg, const RunOptions& opts) {
  const double t0 = now_seconds();
  RunSummary b = run_beampattern(cfg, opts);
  RunSummary s = run_sep(cfg, opts);
  RunSummary o = run_oracles(cfg, opts);

  RunSummary summary;
  summary.command = "all";
  summary.config_digest = b.config_digest;
  for (const auto* part : {&b, &s, &o})
    summary.outputs.insert(summary.outputs.end(), part->outputs.begin(),
                           part->outputs.end());
  summary.oracle_status = o.oracle_status;
  summary.ok = b.ok && s.ok && o.ok;
  for (const auto* part : {&b, &s, &o})
    if (!part->error.empty())
      summary.error += (summary.error.empty() ? "" : "; ") + part->error;
  summary.wall_time_s = now_seconds() - t0;
  return summary;
}

}  // namespace rist
