#include "lplab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lplab {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(Errc::config_invalid, where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key()))
      fail(Errc::config_invalid, where + ": unknown key '" + it.key() + "'");
}

template <typename T>
void read(const json& j, const std::string& where, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(Errc::config_invalid, where + "." + key + ": wrong type");
  }
}

ModelConfig parse_model(const json& j, const std::string& where) {
  ModelConfig m;
  check_keys(j, where, {"kind", "size", "period", "radius", "bessel_lambda", "model"});
  read(j, where, "kind", m.kind);
  read(j, where, "size", m.size);
  read(j, where, "period", m.period);
  read(j, where, "radius", m.radius);
  read(j, where, "bessel_lambda", m.bessel_lambda);
  read(j, where, "model", m.model);
  if (m.kind != "torus" && m.kind != "halfline")
    fail(Errc::config_invalid, where + ".kind: must be 'torus' or 'halfline'");
  if (m.model != "laplacian" && m.model != "bessel" && m.model != "bessel-schrodinger")
    fail(Errc::config_invalid, where + ".model: unknown model '" + m.model + "'");
  if (m.size < 8 || m.size > 4096)
    fail(Errc::config_invalid, where + ".size: must lie in [8, 4096]");
  if (!(m.period > 0.0) || !(m.radius > 0.0) || m.bessel_lambda < 0.0)
    fail(Errc::config_invalid, where + ": domain parameters out of range");
  return m;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(Errc::config_invalid, std::string("config is not valid JSON: ") + e.what());
  }

  check_keys(j, "config",
             {"schema_version", "models", "profiles", "ladder", "weights", "exponents",
              "corpus", "checks", "output", "threads"});
  ExperimentConfig cfg;
  read(j, "config", "schema_version", cfg.schema_version);
  if (cfg.schema_version != 1)
    fail(Errc::config_invalid, "config.schema_version: unsupported version");
  read(j, "config", "threads", cfg.threads);

  if (j.contains("models")) {
    check_keys(j["models"], "models", {"axis1", "axis2"});
    if (j["models"].contains("axis1")) cfg.axis1 = parse_model(j["models"]["axis1"], "models.axis1");
    if (j["models"].contains("axis2")) cfg.axis2 = parse_model(j["models"]["axis2"], "models.axis2");
  }
  if (j.contains("profiles")) {
    const auto& p = j["profiles"];
    check_keys(p, "profiles", {"axis1", "axis2", "comparison1", "comparison2"});
    read(p, "profiles", "axis1", cfg.profile1);
    read(p, "profiles", "axis2", cfg.profile2);
    read(p, "profiles", "comparison1", cfg.comparison_profile1);
    read(p, "profiles", "comparison2", cfg.comparison_profile2);
  }
  if (j.contains("ladder")) {
    const auto& l = j["ladder"];
    check_keys(l, "ladder", {"j_min", "j_max", "samples_per_octave"});
    read(l, "ladder", "j_min", cfg.ladder.j_min);
    read(l, "ladder", "j_max", cfg.ladder.j_max);
    read(l, "ladder", "samples_per_octave", cfg.ladder.samples_per_octave);
    if (cfg.ladder.j_min > cfg.ladder.j_max)
      fail(Errc::config_invalid, "ladder: j_min must not exceed j_max");
    if (cfg.ladder.j_min < -64 || cfg.ladder.j_max > 64)
      fail(Errc::config_invalid, "ladder: octaves must lie in [-64, 64]");
    if (cfg.ladder.samples_per_octave < 1 || cfg.ladder.samples_per_octave > 64)
      fail(Errc::config_invalid, "ladder.samples_per_octave: must lie in [1, 64]");
  }
  if (j.contains("weights")) {
    if (!j["weights"].is_array()) fail(Errc::config_invalid, "weights: expected an array");
    cfg.weights.clear();
    for (const auto& w : j["weights"]) {
      check_keys(w, "weights[]", {"kind", "a1", "a2"});
      WeightConfig wc;
      read(w, "weights[]", "kind", wc.kind);
      read(w, "weights[]", "a1", wc.a1);
      read(w, "weights[]", "a2", wc.a2);
      if (wc.kind != "power")
        fail(Errc::config_invalid, "weights[].kind: only 'power' is configurable");
      cfg.weights.push_back(wc);
    }
    if (cfg.weights.empty()) fail(Errc::config_invalid, "weights: must not be empty");
  }
  if (j.contains("exponents")) {
    const auto& e = j["exponents"];
    check_keys(e, "exponents", {"p", "lambda1", "lambda2", "lambda1_prime", "lambda2_prime"});
    read(e, "exponents", "p", cfg.exponents.p);
    read(e, "exponents", "lambda1", cfg.exponents.lambda1);
    read(e, "exponents", "lambda2", cfg.exponents.lambda2);
    read(e, "exponents", "lambda1_prime", cfg.exponents.lambda1p);
    read(e, "exponents", "lambda2_prime", cfg.exponents.lambda2p);
    for (double p : cfg.exponents.p)
      if (p <= 0.0) fail(Errc::config_invalid, "exponents.p: entries must be positive");
    if (cfg.exponents.p.empty()) fail(Errc::config_invalid, "exponents.p: must not be empty");
  }
  if (j.contains("corpus")) {
    const auto& c = j["corpus"];
    check_keys(c, "corpus", {"families", "count", "seed", "band_lo", "band_hi"});
    read(c, "corpus", "families", cfg.corpus.families);
    read(c, "corpus", "count", cfg.corpus.count);
    read(c, "corpus", "seed", cfg.corpus.seed);
    read(c, "corpus", "band_lo", cfg.corpus.band_lo);
    read(c, "corpus", "band_hi", cfg.corpus.band_hi);
    if (cfg.corpus.count == 0 || cfg.corpus.count > 10000)
      fail(Errc::config_invalid, "corpus.count: must lie in [1, 10000]");
    if (!(cfg.corpus.band_lo > 0.0) || !(cfg.corpus.band_hi > cfg.corpus.band_lo))
      fail(Errc::config_invalid, "corpus: band must satisfy 0 < band_lo < band_hi");
    for (const auto& f : cfg.corpus.families)
      if (f != "single-mode" && f != "random-band" && f != "bump" && f != "mixture")
        fail(Errc::config_invalid, "corpus.families: unknown family '" + f + "'");
  }
  if (j.contains("checks")) {
    const auto& c = j["checks"];
    check_keys(c, "checks",
               {"identities", "decay", "partition", "weights", "theorem", "inequalities",
                "submean", "refine"});
    read(c, "checks", "identities", cfg.checks.identities);
    read(c, "checks", "decay", cfg.checks.decay);
    read(c, "checks", "partition", cfg.checks.partition);
    read(c, "checks", "weights", cfg.checks.weights);
    read(c, "checks", "theorem", cfg.checks.theorem);
    read(c, "checks", "inequalities", cfg.checks.inequalities);
    read(c, "checks", "submean", cfg.checks.submean);
    read(c, "checks", "refine", cfg.checks.refine);
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, "output", {"dir", "formats", "dump_fields"});
    read(o, "output", "dir", cfg.output.dir);
    read(o, "output", "formats", cfg.output.formats);
    read(o, "output", "dump_fields", cfg.output.dump_fields);
    for (const auto& f : cfg.output.formats)
      if (f != "json" && f != "csv")
        fail(Errc::config_invalid, "output.formats: unknown format '" + f + "'");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::config_invalid, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["threads"] = c.threads;
  auto model = [](const ModelConfig& m) {
    json o;
    o["kind"] = m.kind;
    o["size"] = m.size;
    o["period"] = m.period;
    o["radius"] = m.radius;
    o["bessel_lambda"] = m.bessel_lambda;
    o["model"] = m.model;
    return o;
  };
  j["models"]["axis1"] = model(c.axis1);
  j["models"]["axis2"] = model(c.axis2);
  j["profiles"] = {{"axis1", c.profile1},
                   {"axis2", c.profile2},
                   {"comparison1", c.comparison_profile1},
                   {"comparison2", c.comparison_profile2}};
  j["ladder"] = {{"j_min", c.ladder.j_min},
                 {"j_max", c.ladder.j_max},
                 {"samples_per_octave", c.ladder.samples_per_octave}};
  j["weights"] = json::array();
  for (const auto& w : c.weights)
    j["weights"].push_back({{"kind", w.kind}, {"a1", w.a1}, {"a2", w.a2}});
  j["exponents"] = {{"p", c.exponents.p},
                    {"lambda1", c.exponents.lambda1},
                    {"lambda2", c.exponents.lambda2},
                    {"lambda1_prime", c.exponents.lambda1p},
                    {"lambda2_prime", c.exponents.lambda2p}};
  j["corpus"] = {{"families", c.corpus.families},
                 {"count", c.corpus.count},
                 {"seed", c.corpus.seed},
                 {"band_lo", c.corpus.band_lo},
                 {"band_hi", c.corpus.band_hi}};
  j["checks"] = {{"identities", c.checks.identities}, {"decay", c.checks.decay},
                 {"partition", c.checks.partition},   {"weights", c.checks.weights},
                 {"theorem", c.checks.theorem},       {"inequalities", c.checks.inequalities},
                 {"submean", c.checks.submean},       {"refine", c.checks.refine}};
  j["output"] = {{"dir", c.output.dir},
                 {"formats", c.output.formats},
                 {"dump_fields", c.output.dump_fields}};
  return j.dump(2);
}

}  // namespace lplab
