#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parisi/functional.hpp"
#include "parisi/legendre.hpp"
#include "parisi/parisi_min.hpp"
#include "parisi/rem.hpp"
#include "parisi/sde.hpp"

namespace parisi {

/// %.17g — round-trip exact output for diffable reports.
std::string fmt17(double v);

/// Minimal ordered JSON emitter with 17-significant-digit doubles.
class JsonWriter {
 public:
  JsonWriter& begin_object(const std::string& key = "");
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key = "");
  JsonWriter& end_array();
  JsonWriter& field(const std::string& key, double v);
  JsonWriter& field(const std::string& key, int v);
  JsonWriter& field(const std::string& key, long long v);
  JsonWriter& field(const std::string& key, bool v);
  JsonWriter& field(const std::string& key, const std::string& v);
  JsonWriter& element(double v);
  JsonWriter& element(const std::string& v);
  std::string str() const { return out_; }

 private:
  void comma();
  void key_prefix(const std::string& key);
  std::string out_;
  std::vector<bool> need_comma_;
};

// --- config parsing (strict: unknown keys are rejected) ------------------

Mixture mixture_from_json_text(const std::string& text);
OrderParameter order_parameter_from_json_text(const std::string& text);

std::string mixture_to_json(const Mixture& mix);
std::string order_parameter_to_json(const OrderParameter& op);

struct RunConfig {
  std::optional<Mixture> mixture;
  std::optional<OrderParameter> order_parameter;
  std::optional<double> gamma;
  std::vector<double> gamma_grid;
  int k = 3;
  std::optional<GridSpec> grid;
  std::uint64_t seed = 1;
  int threads = 0;
  int paths = 100000;
  int steps = 1000;
  int samples = 64;
  int n_spins = 16;
  std::string control = "optimal";
  std::optional<double> claimed_gamma;
  double tolerance = 1e-4;
  std::string out_dir;
};

/// Parses and fully validates a config document; throws ConfigError with the
/// offending key on any unknown or malformed entry.
RunConfig parse_run_config(const std::string& text);

// --- report emission ------------------------------------------------------

std::string evaluation_to_json(const Evaluation& ev);
std::string measure_to_json(const ParisiMeasure& pm);
std::string legendre_to_json(const LegendreResult& lr);
std::string forward_report_to_json(const ForwardDualityReport& rep);
std::string inverse_report_to_json(const InverseDualityReport& rep);
std::string rem_mc_to_json(const RemMcResult& res);
std::string objective_report_to_json(const MeanSe& objective, double cascade_phi00,
                                     const MartingaleReport& mart);

std::string scan_to_csv(const std::vector<ScanRow>& rows);
std::string rem_to_csv(const std::vector<RemPoint>& points);
std::string levels_to_csv(const LevelSolution& sol);

}  // namespace parisi
