#include "lplab.h"

#include <cstring>
#include <string>

#include "lplab/equivalence.hpp"
#include "lplab/run.hpp"

namespace {

thread_local std::string t_last_error;

lplab_status map_code(lplab::Errc code) {
  using lplab::Errc;
  switch (code) {
    case Errc::config_invalid:
      return LPLAB_ERR_CONFIG;
    case Errc::io_failure:
      return LPLAB_ERR_IO;
    case Errc::eigen_failure:
    case Errc::not_even:
    case Errc::not_decaying:
    case Errc::tauberian_gap_uncovered:
      return LPLAB_ERR_NUMERIC;
    case Errc::hypothesis_violated:
    case Errc::profile_not_admissible:
    case Errc::exponent_too_small:
      return LPLAB_ERR_HYPOTHESIS;
    default:
      return LPLAB_ERR_INVALID_ARGUMENT;
  }
}

template <typename Fn>
lplab_status guarded(Fn&& fn) {
  try {
    fn();
    return LPLAB_OK;
  } catch (const lplab::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return LPLAB_ERR_UNKNOWN;
  }
}

lplab_status require_arg(bool ok, const char* msg) {
  if (ok) return LPLAB_OK;
  t_last_error = msg;
  return LPLAB_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct lplab_grid {
  lplab::Grid grid;
};
struct lplab_model {
  lplab::SpectralModel model;
};
struct lplab_profile {
  lplab::MultiplierProfile profile;
};

extern "C" {

const char* lplab_version(void) { return lplab::kVersion; }
const char* lplab_last_error(void) { return t_last_error.c_str(); }

lplab_status lplab_grid_create_torus(size_t size, double period, lplab_grid** out) {
  if (auto s = require_arg(out != nullptr, "null output handle")) return s;
  return guarded([&] {
    lplab::DomainParams p;
    p.period = period;
    *out = new lplab_grid{lplab::make_grid(lplab::GridKind::line_periodic, size, p)};
  });
}

lplab_status lplab_grid_create_halfline(size_t size, double radius, double bessel_lambda,
                                        lplab_grid** out) {
  if (auto s = require_arg(out != nullptr, "null output handle")) return s;
  return guarded([&] {
    lplab::DomainParams p;
    p.radius = radius;
    p.bessel_lambda = bessel_lambda;
    *out = new lplab_grid{lplab::make_grid(lplab::GridKind::halfline, size, p)};
  });
}

void lplab_grid_destroy(lplab_grid* grid) { delete grid; }

size_t lplab_grid_size(const lplab_grid* grid) { return grid ? grid->grid.size() : 0; }

lplab_status lplab_grid_points(const lplab_grid* grid, double* out, size_t len) {
  if (auto s = require_arg(grid && out, "null argument")) return s;
  if (auto s = require_arg(len >= grid->grid.size(), "buffer too small")) return s;
  std::memcpy(out, grid->grid.points.data(), grid->grid.size() * sizeof(double));
  return LPLAB_OK;
}

lplab_status lplab_grid_volume(const lplab_grid* grid, double x, double r, double* out) {
  if (auto s = require_arg(grid && out, "null argument")) return s;
  return guarded([&] { *out = lplab::volume(grid->grid, x, r); });
}

lplab_status lplab_grid_integrate(const lplab_grid* grid, const double* values, size_t len,
                                  double* out) {
  if (auto s = require_arg(grid && values && out, "null argument")) return s;
  return guarded([&] { *out = lplab::integrate(grid->grid, {values, len}); });
}

lplab_status lplab_profile_create(const char* tag, lplab_profile** out) {
  if (auto s = require_arg(tag && out, "null argument")) return s;
  return guarded([&] { *out = new lplab_profile{lplab::profile_from_tag(tag)}; });
}

void lplab_profile_destroy(lplab_profile* profile) { delete profile; }

lplab_status lplab_profile_eval(const lplab_profile* profile, const double* lambda,
                                double* out, size_t len) {
  if (auto s = require_arg(profile && lambda && out, "null argument")) return s;
  for (size_t i = 0; i < len; ++i) out[i] = profile->profile.eval(lambda[i]);
  return LPLAB_OK;
}

lplab_status lplab_model_create(const lplab_grid* grid, const char* model_tag,
                                double model_lambda, lplab_model** out) {
  if (auto s = require_arg(grid && model_tag && out, "null argument")) return s;
  return guarded([&] {
    const std::string tag = model_tag;
    lplab::ModelTag mt;
    if (tag == "laplacian")
      mt = lplab::ModelTag::laplacian;
    else if (tag == "bessel")
      mt = lplab::ModelTag::bessel;
    else if (tag == "bessel-schrodinger")
      mt = lplab::ModelTag::bessel_schrodinger;
    else
      lplab::fail(lplab::Errc::incompatible_model, "unknown model tag '" + tag + "'");
    *out = new lplab_model{lplab::build_operator(grid->grid, mt, model_lambda)};
  });
}

void lplab_model_destroy(lplab_model* model) { delete model; }

lplab_status lplab_model_spectrum(const lplab_model* model, double* out, size_t len) {
  if (auto s = require_arg(model && out, "null argument")) return s;
  const auto& spec = model->model.spectrum();
  if (auto s = require_arg(len >= static_cast<size_t>(spec.size()), "buffer too small"))
    return s;
  std::memcpy(out, spec.data(), static_cast<size_t>(spec.size()) * sizeof(double));
  return LPLAB_OK;
}

lplab_status lplab_model_apply_multiplier(const lplab_model* model,
                                          const lplab_profile* profile, double t,
                                          const double* field, double* out, size_t len) {
  if (auto s = require_arg(model && profile && field && out, "null argument")) return s;
  return guarded([&] {
    const auto n = static_cast<Eigen::Index>(model->model.size());
    lplab::require(len >= model->model.size(), lplab::Errc::length_mismatch,
                   "buffer too small");
    Eigen::Map<const Eigen::VectorXd> f(field, n);
    Eigen::VectorXd result = model->model.apply_multiplier(profile->profile, t, f);
    Eigen::Map<Eigen::VectorXd>(out, n) = result;
  });
}

lplab_status lplab_validate_config_text(const char* json_text) {
  if (auto s = require_arg(json_text != nullptr, "null config text")) return s;
  return guarded([&] { (void)lplab::parse_config(json_text); });
}

lplab_status lplab_validate_config_file(const char* path) {
  if (auto s = require_arg(path != nullptr, "null config path")) return s;
  return guarded([&] { (void)lplab::load_config(path); });
}

lplab_status lplab_run_config_file(const char* path, const char* out_dir,
                                   const char* formats_csv, int threads, int has_seed,
                                   uint64_t seed, int* hard_failure) {
  if (auto s = require_arg(path != nullptr, "null config path")) return s;
  return guarded([&] {
    lplab::ExperimentConfig cfg = lplab::load_config(path);
    if (out_dir) cfg.output.dir = out_dir;
    if (formats_csv) {
      cfg.output.formats.clear();
      std::string item;
      for (const char* c = formats_csv;; ++c) {
        if (*c == ',' || *c == '\0') {
          if (!item.empty()) cfg.output.formats.push_back(item);
          item.clear();
          if (*c == '\0') break;
        } else {
          item += *c;
        }
      }
      if (cfg.output.formats.empty())
        lplab::fail(lplab::Errc::config_invalid, "no output formats given");
    }
    if (threads > 0) cfg.threads = static_cast<std::size_t>(threads);
    if (has_seed) cfg.corpus.seed = seed;
    lplab::RunReport report;
    lplab::execute_and_write(cfg, &report);
    if (hard_failure) *hard_failure = report.hard_failure() ? 1 : 0;
  });
}

lplab_status lplab_list_builtins(char* buffer, size_t len) {
  if (auto s = require_arg(buffer != nullptr, "null buffer")) return s;
  std::string text = "profiles:";
  for (const auto& tag : lplab::builtin_profile_tags()) text += " " + tag;
  text += "\nmodels: laplacian bessel bessel-schrodinger\n";
  text += "weights: power\n";
  text += "families: single-mode random-band bump mixture\n";
  if (text.size() + 1 > len) {
    t_last_error = "buffer too small";
    return LPLAB_ERR_INVALID_ARGUMENT;
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return LPLAB_OK;
}

}  // extern "C"
