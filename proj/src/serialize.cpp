#include "parisi/serialize.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>

#include <nlohmann/json.hpp>

#include "parisi/errors.hpp"
#include "parisi/version.hpp"

namespace parisi {

using nlohmann::json;

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonWriter& JsonWriter::begin_object(const std::string& key) {
  if (!key.empty())
    key_prefix(key);
  else
    comma();
  out_ += '{';
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  need_comma_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
  if (!key.empty())
    key_prefix(key);
  else
    comma();
  out_ += '[';
  need_comma_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  need_comma_.pop_back();
  return *this;
}

void JsonWriter::comma() {
  if (!need_comma_.empty()) {
    if (need_comma_.back()) out_ += ',';
    need_comma_.back() = true;
  }
}

void JsonWriter::key_prefix(const std::string& key) {
  comma();
  out_ += '"';
  out_ += key;
  out_ += "\":";
}

JsonWriter& JsonWriter::field(const std::string& key, double v) {
  key_prefix(key);
  out_ += fmt17(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, int v) {
  return field(key, static_cast<long long>(v));
}

JsonWriter& JsonWriter::field(const std::string& key, long long v) {
  key_prefix(key);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld", v);
  out_ += buf;
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, bool v) {
  key_prefix(key);
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const std::string& v) {
  key_prefix(key);
  out_ += '"';
  out_ += v;
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::element(double v) {
  comma();
  out_ += fmt17(v);
  return *this;
}

JsonWriter& JsonWriter::element(const std::string& v) {
  comma();
  out_ += '"';
  out_ += v;
  out_ += '"';
  return *this;
}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cli: malformed config: ") + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError("cli: unknown key '" + it.key() + "' in " + where);
  }
}

Mixture mixture_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("cli: mixture must be an object");
  reject_unknown(j, {"coeffs", "coeffs_squared"}, "mixture");
  const bool squared = j.contains("coeffs_squared");
  if (squared == j.contains("coeffs"))
    throw ConfigError("cli: mixture needs exactly one of coeffs / coeffs_squared");
  const json& m = squared ? j.at("coeffs_squared") : j.at("coeffs");
  if (!m.is_object() || m.empty()) throw ConfigError("cli: mixture coeffs must be a {p: value} map");
  std::map<int, double> coeffs;
  for (auto it = m.begin(); it != m.end(); ++it) {
    int p = 0;
    try {
      p = std::stoi(it.key());
    } catch (...) {
      throw ConfigError("cli: mixture key '" + it.key() + "' is not an integer degree");
    }
    if (!it.value().is_number())
      throw ConfigError("cli: mixture coefficient at p=" + it.key() + " is not a number");
    coeffs[p] = it.value().get<double>();
  }
  if (coeffs.begin()->first < 2 || coeffs.rbegin()->first > Mixture::kMaxP)
    throw ConfigError("cli: mixture degrees must lie in [2, 64]");
  if (!squared) return Mixture::from_map(coeffs);
  std::vector<double> c2(static_cast<std::size_t>(coeffs.rbegin()->first - 1), 0.0);
  for (const auto& [p, v] : coeffs) c2[static_cast<std::size_t>(p - 2)] = v;
  return Mixture::from_squared(std::move(c2));
}

OrderParameter order_parameter_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("cli: order_parameter must be an object");
  reject_unknown(j, {"k", "q", "m"}, "order_parameter");
  if (!j.contains("k") || !j.at("k").is_number_integer())
    throw ConfigError("cli: order_parameter needs integer k");
  const int k = j.at("k").get<int>();
  auto read_list = [&](const char* key) {
    std::vector<double> v;
    if (!j.contains(key)) return v;
    if (!j.at(key).is_array()) throw ConfigError(std::string("cli: ") + key + " must be a list");
    for (const auto& e : j.at(key)) {
      if (!e.is_number()) throw ConfigError(std::string("cli: ") + key + " entries must be numbers");
      v.push_back(e.get<double>());
    }
    return v;
  };
  return OrderParameter(k, read_list("q"), read_list("m"));
}

GridSpec grid_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("cli: grid must be an object");
  reject_unknown(j, {"half_width", "spacing", "quad_nodes"}, "grid");
  GridSpec g;
  if (j.contains("half_width")) g.half_width = j.at("half_width").get<double>();
  if (j.contains("spacing"))
    g.spacing = j.at("spacing").get<double>();
  else
    g.spacing = g.half_width / 1024.0;
  if (j.contains("quad_nodes")) g.quad_nodes = j.at("quad_nodes").get<int>();
  g.validate();
  return g;
}

}  // namespace

Mixture mixture_from_json_text(const std::string& text) {
  return mixture_from_json(parse_json(text));
}

OrderParameter order_parameter_from_json_text(const std::string& text) {
  return order_parameter_from_json(parse_json(text));
}

std::string mixture_to_json(const Mixture& mix) {
  JsonWriter w;
  w.begin_object();
  w.begin_object("coeffs");
  const auto& c = mix.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    w.field(std::to_string(i + 2), c[i]);
  }
  w.end_object();
  w.end_object();
  return w.str();
}

std::string order_parameter_to_json(const OrderParameter& op) {
  JsonWriter w;
  w.begin_object();
  w.field("k", op.k());
  w.begin_array("q");
  for (int l = 0; l < op.k(); ++l) w.element(op.atom(l));
  w.end_array();
  w.begin_array("m");
  for (int l = 0; l + 1 < op.k(); ++l) w.element(op.cumulative(l));
  w.end_array();
  w.end_object();
  return w.str();
}

RunConfig parse_run_config(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ConfigError("cli: config root must be an object");
  reject_unknown(j,
                 {"mixture", "order_parameter", "gamma", "gamma_grid", "k", "grid", "seed",
                  "threads", "paths", "steps", "samples", "n_spins", "control",
                  "claimed_gamma", "tolerance", "out"},
                 "config");
  RunConfig cfg;
  if (j.contains("mixture")) cfg.mixture = mixture_from_json(j.at("mixture"));
  if (j.contains("order_parameter"))
    cfg.order_parameter = order_parameter_from_json(j.at("order_parameter"));
  if (j.contains("gamma")) {
    if (!j.at("gamma").is_number()) throw ConfigError("cli: gamma must be a number");
    cfg.gamma = j.at("gamma").get<double>();
  }
  if (j.contains("gamma_grid")) {
    const json& g = j.at("gamma_grid");
    if (g.is_array()) {
      for (const auto& e : g) cfg.gamma_grid.push_back(e.get<double>());
    } else if (g.is_object()) {
      reject_unknown(g, {"min", "max", "points"}, "gamma_grid");
      const double lo = g.at("min").get<double>(), hi = g.at("max").get<double>();
      const int n = g.at("points").get<int>();
      if (!(lo < hi) || n < 2) throw ConfigError("cli: bad gamma_grid range");
      for (int i = 0; i < n; ++i)
        cfg.gamma_grid.push_back(lo + (hi - lo) * i / (n - 1));
    } else {
      throw ConfigError("cli: gamma_grid must be a list or {min,max,points}");
    }
  }
  if (j.contains("k")) cfg.k = j.at("k").get<int>();
  if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("paths")) cfg.paths = j.at("paths").get<int>();
  if (j.contains("steps")) cfg.steps = j.at("steps").get<int>();
  if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
  if (j.contains("n_spins")) cfg.n_spins = j.at("n_spins").get<int>();
  if (j.contains("control")) {
    cfg.control = j.at("control").get<std::string>();
    if (cfg.control != "optimal" && cfg.control != "zero")
      throw ConfigError("cli: control must be 'optimal' or 'zero'");
  }
  if (j.contains("claimed_gamma")) cfg.claimed_gamma = j.at("claimed_gamma").get<double>();
  if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  return cfg;
}

std::string evaluation_to_json(const Evaluation& ev) {
  JsonWriter w;
  w.begin_object();
  w.field("version", std::string(kVersion));
  w.field("gamma", ev.gamma);
  w.field("p_hat", ev.p_hat);
  w.field("phi00", ev.phi00);
  w.field("dgamma_phi", ev.dgamma_phi);
  w.field("dgamma_p", ev.dgamma_p);
  w.begin_array("eu2");
  for (double e : ev.eu2.eu2) w.element(e);
  w.end_array();
  w.field("int_alpha_xi_prime", ev.moments.int_alpha_xi_prime);
  w.field("int_alpha_s_xi2", ev.moments.int_alpha_s_xi2);
  w.field("int_xi_dalpha", ev.moments.int_xi_dalpha);
  w.field("int_s_xiprime_dalpha", ev.moments.int_s_xiprime_dalpha);
  w.field("grid_half_width", ev.grid.half_width);
  w.field("grid_spacing", ev.grid.spacing);
  w.field("grid_quad_nodes", ev.grid.quad_nodes);
  w.end_object();
  return w.str();
}

std::string measure_to_json(const ParisiMeasure& pm) {
  JsonWriter w;
  w.begin_object();
  w.field("version", std::string(kVersion));
  w.field("gamma", pm.gamma);
  w.field("value", pm.value);
  w.field("overlap_moment", pm.overlap_moment);
  w.field("int_alpha_xiprime", pm.int_alpha_xiprime);
  w.field("converged", pm.converged);
  w.begin_array("residuals");
  for (double r : pm.residuals) w.element(r);
  w.end_array();
  w.begin_array("q");
  for (int l = 0; l < pm.op.k(); ++l) w.element(pm.op.atom(l));
  w.end_array();
  w.begin_array("m");
  for (int l = 0; l < pm.op.k(); ++l) w.element(pm.op.cumulative(l));
  w.end_array();
  w.end_object();
  return w.str();
}

std::string legendre_to_json(const LegendreResult& lr) {
  JsonWriter w;
  w.begin_object();
  const char* kind = lr.kind == LegendreResult::Kind::finite
                         ? "finite"
                         : lr.kind == LegendreResult::Kind::flat ? "flat" : "divergent";
  w.field("kind", std::string(kind));
  w.field("value", lr.value);
  w.field("argmax_lo", lr.argmax_lo);
  w.field("argmax_hi", lr.argmax_hi);
  w.field("slope_at_argmax", lr.slope_at_argmax);
  w.field("evaluations", lr.evaluations);
  w.end_object();
  return w.str();
}

std::string forward_report_to_json(const ForwardDualityReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.field("gamma", rep.gamma);
  w.field("p_hat_min", rep.p_hat_min);
  w.field("gamma_hat_value", rep.gamma_hat_value);
  w.field("reconstruction", rep.reconstruction);
  w.field("residual", rep.residual);
  w.field("pass", rep.pass);
  w.begin_array("panel");
  for (const auto& chk : rep.panel) {
    w.begin_object();
    w.field("label", chk.label);
    w.field("lhs", chk.lhs);
    w.field("rhs", chk.rhs);
    w.field("residual", chk.residual);
    w.field("pass", chk.pass);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::string inverse_report_to_json(const InverseDualityReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.field("claimed_gamma", rep.claimed_gamma);
  w.field("gamma_hat_value", rep.gamma_hat_value);
  w.field("sup_value", rep.sup_value);
  w.field("sup_gamma", rep.sup_gamma);
  w.field("residual", rep.residual);
  w.field("pass", rep.pass);
  w.end_object();
  return w.str();
}

std::string rem_mc_to_json(const RemMcResult& res) {
  JsonWriter w;
  w.begin_object();
  w.field("n_spins", res.n_spins);
  w.field("samples", res.samples);
  w.field("estimate", res.estimate);
  w.field("std_error", res.std_error);
  w.end_object();
  return w.str();
}

std::string objective_report_to_json(const MeanSe& objective, double cascade_phi00,
                                     const MartingaleReport& mart) {
  JsonWriter w;
  w.begin_object();
  w.field("objective_mean", objective.mean);
  w.field("objective_se", objective.se);
  w.field("cascade_phi00", cascade_phi00);
  w.field("gap_in_se",
          objective.se > 0 ? (objective.mean - cascade_phi00) / objective.se : 0.0);
  w.begin_array("checkpoints");
  for (const auto& cp : mart.checkpoints) {
    w.begin_object();
    w.field("q", cp.q);
    w.field("u_mean", cp.u_mean.mean);
    w.field("u_mean_se", cp.u_mean.se);
    w.field("u_sq", cp.u_sq.mean);
    w.field("u_sq_se", cp.u_sq.se);
    w.field("eu2_cascade", cp.eu2_cascade);
    w.field("u_mean_ok", cp.u_mean_ok);
    w.field("u_sq_ok", cp.u_sq_ok);
    w.end_object();
  }
  w.end_array();
  w.field("ito_gap", mart.ito_gap.mean);
  w.field("ito_gap_se", mart.ito_gap.se);
  w.field("ito_ok", mart.ito_ok);
  w.field("pass", mart.pass);
  w.end_object();
  return w.str();
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::string out =
      "gamma,beta,value,dvalue_fd,int_alpha_xiprime,overlap_moment,max_residual,converged\n";
  for (const auto& r : rows) {
    out += fmt17(r.gamma) + "," + fmt17(r.beta) + "," + fmt17(r.value) + "," +
           fmt17(r.dvalue_fd) + "," + fmt17(r.int_alpha_xiprime) + "," +
           fmt17(r.overlap_moment) + "," + fmt17(r.max_residual) + "," +
           (r.converged ? "1" : "0") + "\n";
  }
  return out;
}

std::string rem_to_csv(const std::vector<RemPoint>& points) {
  std::string out = "gamma,p_rem,regime\n";
  for (const auto& p : points)
    out += fmt17(p.gamma) + "," + fmt17(p.p_hat) + "," +
           (p.regime == RemPoint::Regime::high_temp ? "high_temp" : "low_temp") + "\n";
  return out;
}

std::string levels_to_csv(const LevelSolution& sol) {
  std::string out = "level,q,x,psi,dpsi\n";
  char head[64];
  const int n_pts = sol.grid.points();
  for (int l = 0; l < sol.levels(); ++l) {
    std::snprintf(head, sizeof head, "%d,", l);
    const std::string prefix = head + fmt17(sol.q[static_cast<std::size_t>(l)]) + ",";
    for (int j = 0; j < n_pts; ++j)
      out += prefix + fmt17(sol.grid.x(j)) + "," +
             fmt17(sol.psi[static_cast<std::size_t>(l)][j]) + "," +
             fmt17(sol.dpsi[static_cast<std::size_t>(l)][j]) + "\n";
  }
  return out;
}

}  // namespace parisi
