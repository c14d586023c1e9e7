#include "ristsim.h"

#include <cstring>
#include <string>

#include "comm.hpp"
#include "config.hpp"
#include "metrics.hpp"
#include "precoder.hpp"
#include "runner.hpp"
#include "scene.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

rist_status map_exception() {
  try {
    throw;
  } catch (const rist::ConfigError& e) {
    set_error(e.what());
    return RIST_ERR_PARSE;
  } catch (const rist::ConvergenceError& e) {
    set_error(e.what());
    return RIST_ERR_CONVERGENCE;
  } catch (const rist::DomainError& e) {
    set_error(e.what());
    return RIST_ERR_DOMAIN;
  } catch (const rist::DimensionError& e) {
    set_error(e.what());
    return RIST_ERR_INVALID_ARG;
  } catch (const rist::IoError& e) {
    set_error(e.what());
    return RIST_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return RIST_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return RIST_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

struct rist_config {
  rist::ExperimentConfig rep;
};

struct rist_design {
  rist::PrecoderDesign rep;
  std::vector<double> quantized;
  std::vector<double> unquantized;
};

const char* rist_version(void) { return "1.0.0"; }

const char* rist_last_error(void) { return g_last_error.c_str(); }

rist_status rist_config_create(rist_config** out) {
  if (!out) return RIST_ERR_INVALID_ARG;
  *out = new rist_config{};
  return RIST_OK;
}

rist_status rist_config_load(const char* path, rist_config** out) {
  if (!path || !out) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  try {
    auto cfg = rist::load_config(path);
    *out = new rist_config{std::move(cfg)};
    return RIST_OK;
  } catch (...) {
    *out = nullptr;
    return map_exception();
  }
}

rist_status rist_config_set(rist_config* cfg, const char* key,
                            const char* value) {
  if (!cfg || !key || !value) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  try {
    rist::apply_config_override(cfg->rep, key, value);
    cfg->rep.validate();
    return RIST_OK;
  } catch (...) {
    return map_exception();
  }
}

rist_status rist_config_text(const rist_config* cfg, char* buf, size_t cap,
                             size_t* size) {
  if (!cfg) {
    set_error("null config");
    return RIST_ERR_INVALID_ARG;
  }
  const std::string text = cfg->rep.to_text();
  if (size) *size = text.size();
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return RIST_OK;
}

rist_status rist_config_digest(const rist_config* cfg, char buf[17]) {
  if (!cfg || !buf) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  const std::string d = cfg->rep.digest();
  std::memcpy(buf, d.data(), 16);
  buf[16] = '\0';
  return RIST_OK;
}

void rist_config_free(rist_config* cfg) { delete cfg; }

namespace {

rist::DesignKind to_kind(rist_design_kind kind) {
  switch (kind) {
    case RIST_DESIGN_PROPOSED:
      return rist::DesignKind::proposed;
    case RIST_DESIGN_UNQUANTIZED:
      return rist::DesignKind::unquantized_isac;
    case RIST_DESIGN_RADAR_ONLY:
      return rist::DesignKind::unquantized_radar;
  }
  throw rist::DomainError("invalid design kind");
}

}  // namespace

rist_status rist_design_create(const rist_config* cfg, rist_design_kind kind,
                               rist_design** out) {
  if (!cfg || !out) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  try {
    cfg->rep.validate();
    auto d = std::make_unique<rist_design>();
    d->rep = rist::design_precoder(cfg->rep, to_kind(kind));
    d->quantized =
        rist::beampattern(d->rep.radiated_covariance(), d->rep.desired.grid);
    d->unquantized = rist::beampattern(
        d->rep.kind == rist::DesignKind::proposed ? d->rep.r_x_tilde_circ
                                                  : d->rep.r_z_star,
        d->rep.desired.grid);
    *out = d.release();
    return RIST_OK;
  } catch (...) {
    *out = nullptr;
    return map_exception();
  }
}

int rist_design_grid_size(const rist_design* d) {
  return d ? d->rep.desired.grid.size() : 0;
}

rist_status rist_design_angles_deg(const rist_design* d, double* out,
                                   size_t cap) {
  if (!d || !out) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  const auto& angles = d->rep.desired.grid.angles;
  if (cap < angles.size()) {
    set_error("buffer too small");
    return RIST_ERR_INVALID_ARG;
  }
  constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;
  for (std::size_t i = 0; i < angles.size(); ++i) out[i] = angles[i] * kRadToDeg;
  return RIST_OK;
}

rist_status rist_design_beampattern(const rist_design* d,
                                    rist_pattern_kind kind, double* out,
                                    size_t cap) {
  if (!d || !out) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  const std::vector<double>* src = nullptr;
  std::vector<double> desired;
  switch (kind) {
    case RIST_PATTERN_QUANTIZED:
      src = &d->quantized;
      break;
    case RIST_PATTERN_UNQUANTIZED:
      src = &d->unquantized;
      break;
    case RIST_PATTERN_DESIRED:
      desired.reserve(d->rep.desired.values.size());
      for (const double v : d->rep.desired.values)
        desired.push_back(d->rep.tau * v);
      src = &desired;
      break;
    default:
      set_error("invalid pattern kind");
      return RIST_ERR_INVALID_ARG;
  }
  if (cap < src->size()) {
    set_error("buffer too small");
    return RIST_ERR_INVALID_ARG;
  }
  std::memcpy(out, src->data(), src->size() * sizeof(double));
  return RIST_OK;
}

double rist_design_tau(const rist_design* d) { return d ? d->rep.tau : 0.0; }

double rist_design_objective(const rist_design* d) {
  return d && !d->rep.objective_trace.empty() ? d->rep.objective_trace.back()
                                              : 0.0;
}

int rist_design_iterations(const rist_design* d) {
  return d ? d->rep.iterations : 0;
}

rist_status rist_design_illumination(const rist_design* d,
                                     const rist_config* cfg,
                                     double* per_target, size_t cap,
                                     double* worst_case) {
  if (!d || !cfg || !worst_case) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  try {
    const rist::Scene scene = rist::build_scene(cfg->rep, 0, 1);
    const rist::IlluminationReport rep =
        rist::worst_case_illumination(d->rep, scene, 1.0);
    if (per_target) {
      if (cap < rep.per_target.size()) {
        set_error("buffer too small");
        return RIST_ERR_INVALID_ARG;
      }
      for (std::size_t i = 0; i < rep.per_target.size(); ++i)
        per_target[i] = rep.per_target[i].power_linear;
    }
    *worst_case = rep.worst_case;
    return RIST_OK;
  } catch (...) {
    return map_exception();
  }
}

void rist_design_free(rist_design* d) { delete d; }

rist_status rist_simulate_sep(const rist_config* cfg, const char* scheme,
                              int ris_bits, double total_power_db,
                              int workers, uint64_t* errors, uint64_t* trials,
                              double* sep) {
  if (!cfg || !scheme || !errors || !trials || !sep) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  try {
    cfg->rep.validate();
    rist::SepPoint point;
    point.scheme = rist::scheme_from_string(scheme);
    point.bits = ris_bits <= 0 ? rist::PhaseResolution::infinite()
                               : rist::PhaseResolution::from_bits(ris_bits);
    point.total_power_db = total_power_db;
    point.beta = cfg->rep.beta;
    const rist::SepEstimate est =
        rist::simulate_sep(cfg->rep, point, nullptr, std::max(1, workers));
    *errors = est.errors;
    *trials = est.trials;
    *sep = est.sep;
    return RIST_OK;
  } catch (...) {
    return map_exception();
  }
}

rist_status rist_run(const rist_config* cfg, const char* command,
                     const char* out_dir, int workers, int quick,
                     char** json_summary) {
  if (!cfg || !command || !out_dir) {
    set_error("null argument");
    return RIST_ERR_INVALID_ARG;
  }
  try {
    cfg->rep.validate();
    rist::RunOptions opts;
    opts.out_dir = out_dir;
    opts.workers = std::max(1, workers);
    opts.quick = quick != 0;

    const std::string cmd = command;
    rist::RunSummary summary;
    if (cmd == "beampattern")
      summary = rist::run_beampattern(cfg->rep, opts);
    else if (cmd == "sep")
      summary = rist::run_sep(cfg->rep, opts);
    else if (cmd == "oracles")
      summary = rist::run_oracles(cfg->rep, opts);
    else if (cmd == "all")
      summary = rist::run_all(cfg->rep, opts);
    else {
      set_error("unknown command '" + cmd +
                "' (expected beampattern, sep, oracles or all)");
      return RIST_ERR_INVALID_ARG;
    }

    if (json_summary) {
      const std::string text = summary.to_json();
      *json_summary = static_cast<char*>(std::malloc(text.size() + 1));
      if (*json_summary) std::memcpy(*json_summary, text.c_str(), text.size() + 1);
    }
    if (!summary.ok) {
      set_error(summary.error.empty() ? "run failed" : summary.error);
      return RIST_ERR_INTERNAL;
    }
    return RIST_OK;
  } catch (...) {
    return map_exception();
  }
}

void rist_string_free(char* s) { std::free(s); }

}  // extern "C"
