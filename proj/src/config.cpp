#include "holobeam/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "holobeam/error.hpp"
#include "holobeam/grid.hpp"

namespace holobeam {

using nlohmann::json;

HmtConfig ExperimentConfig::channel(double pilot_dbm, double distance) const {
  HmtConfig c;
  c.aperture_width = aperture_width;
  c.aperture_length = aperture_length;
  c.wavelength = wavelength;
  c.element_pitch = element_pitch;
  c.radiation_factor = radiation_factor.value_or(1.6 * element_pitch / wavelength);
  c.distance = distance;
  c.pilot_power = dbm_to_watts(pilot_dbm);
  c.noise_power = dbm_to_watts(noise_dbm);
  if (data_power_dbm) c.data_power = dbm_to_watts(*data_power_dbm);
  return c;
}

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::invalid_config, msg); }

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) invalid("trials must be at least 1");
  if (pilot_power_dbm.empty()) invalid("pilot_power_dbm must not be empty");
  if (distance_m.empty()) invalid("distance_m must not be empty");
  if (budgets.empty()) invalid("budgets must not be empty");
  if (policies.empty()) invalid("policies must not be empty");
  for (double p : pilot_power_dbm) {
    if (!std::isfinite(p)) invalid("pilot powers must be finite");
  }
  if (!std::isfinite(noise_dbm)) invalid("noise_dbm must be finite");
  for (double d : distance_m) channel(pilot_power_dbm.front(), d).validate();
  std::uint64_t max_n = 0;
  for (std::uint64_t n : budgets) {
    if (n == 0) invalid("budgets must be positive");
    max_n = std::max(max_n, n);
  }
  if (total_slots < max_n) invalid("total_slots must be at least the largest budget");
  if (user_model.kind == UserModel::Kind::fixed) {
    const auto& u = user_model.location;
    if (!(std::abs(u.alpha1) <= 1.0) || !(std::abs(u.alpha2) <= 1.0)) {
      invalid("fixed user location must lie in [-1, 1]^2");
    }
  }
  if (beta2_init_index) {
    const auto grid = grid_for_axis(channel(pilot_power_dbm.front(), distance_m.front()),
                                    Axis::second);
    if (*beta2_init_index >= grid.size()) invalid("beta2_init index outside the grid");
  }
}

namespace {

std::vector<double> number_or_list(const json& v, const char* key) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) return v.get<std::vector<double>>();
  invalid(std::string(key) + " must be a number or a list of numbers");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) invalid("config must be a JSON object");

  static const std::set<std::string> known{
      "aperture_width", "aperture_length", "wavelength", "element_pitch",
      "radiation_factor", "noise_dbm", "pilot_power_dbm", "distance_m",
      "data_power_dbm", "budgets", "policies", "trials", "base_seed",
      "user_model", "total_slots", "beta2_init", "threads"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) invalid("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (doc.contains("aperture_width")) cfg.aperture_width = doc["aperture_width"].get<double>();
    if (doc.contains("aperture_length")) cfg.aperture_length = doc["aperture_length"].get<double>();
    if (doc.contains("wavelength")) cfg.wavelength = doc["wavelength"].get<double>();
    if (doc.contains("element_pitch")) cfg.element_pitch = doc["element_pitch"].get<double>();
    if (doc.contains("radiation_factor")) cfg.radiation_factor = doc["radiation_factor"].get<double>();
    if (doc.contains("noise_dbm")) cfg.noise_dbm = doc["noise_dbm"].get<double>();
    if (doc.contains("pilot_power_dbm")) {
      cfg.pilot_power_dbm = number_or_list(doc["pilot_power_dbm"], "pilot_power_dbm");
    }
    if (doc.contains("distance_m")) cfg.distance_m = number_or_list(doc["distance_m"], "distance_m");
    if (doc.contains("data_power_dbm")) cfg.data_power_dbm = doc["data_power_dbm"].get<double>();
    if (doc.contains("budgets")) cfg.budgets = doc["budgets"].get<std::vector<std::uint64_t>>();
    if (doc.contains("policies")) {
      cfg.policies.clear();
      for (const auto& p : doc["policies"]) cfg.policies.push_back(parse_policy(p.get<std::string>()));
    }
    if (doc.contains("trials")) cfg.trials = doc["trials"].get<std::uint64_t>();
    if (doc.contains("base_seed")) cfg.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("user_model")) {
      const auto& u = doc["user_model"];
      if (u.is_string() && u.get<std::string>() == "uniform") {
        cfg.user_model.kind = UserModel::Kind::uniform;
      } else if (u.is_object() && u.contains("fixed")) {
        const auto a = u["fixed"].get<std::vector<double>>();
        if (a.size() != 2) invalid("user_model.fixed must hold [alpha1, alpha2]");
        cfg.user_model.kind = UserModel::Kind::fixed;
        cfg.user_model.location = {a[0], a[1]};
      } else {
        invalid("user_model must be \"uniform\" or {\"fixed\": [alpha1, alpha2]}");
      }
    }
    if (doc.contains("total_slots")) cfg.total_slots = doc["total_slots"].get<std::uint64_t>();
    if (doc.contains("beta2_init")) {
      const auto& b = doc["beta2_init"];
      if (b.is_string() && b.get<std::string>() == "midpoint") {
        cfg.beta2_init_index.reset();
      } else if (b.is_number_unsigned()) {
        cfg.beta2_init_index = b.get<std::size_t>();
      } else {
        invalid("beta2_init must be \"midpoint\" or a grid index");
      }
    }
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<unsigned>();
  } catch (const json::exception& e) {
    invalid(std::string("config value has the wrong type: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_config) throw;
    invalid(e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& cfg) {
  json doc;
  doc["aperture_width"] = cfg.aperture_width;
  doc["aperture_length"] = cfg.aperture_length;
  doc["wavelength"] = cfg.wavelength;
  doc["element_pitch"] = cfg.element_pitch;
  if (cfg.radiation_factor) doc["radiation_factor"] = *cfg.radiation_factor;
  doc["noise_dbm"] = cfg.noise_dbm;
  doc["pilot_power_dbm"] = cfg.pilot_power_dbm;
  doc["distance_m"] = cfg.distance_m;
  if (cfg.data_power_dbm) doc["data_power_dbm"] = *cfg.data_power_dbm;
  doc["budgets"] = cfg.budgets;
  json policies = json::array();
  for (Policy p : cfg.policies) policies.push_back(std::string(to_string(p)));
  doc["policies"] = policies;
  doc["trials"] = cfg.trials;
  doc["base_seed"] = cfg.base_seed;
  if (cfg.user_model.kind == UserModel::Kind::uniform) {
    doc["user_model"] = "uniform";
  } else {
    doc["user_model"] = {{"fixed", {cfg.user_model.location.alpha1, cfg.user_model.location.alpha2}}};
  }
  doc["total_slots"] = cfg.total_slots;
  if (cfg.beta2_init_index) {
    doc["beta2_init"] = *cfg.beta2_init_index;
  } else {
    doc["beta2_init"] = "midpoint";
  }
  doc["threads"] = cfg.threads;
  return doc.dump(2) + "\n";
}

}  // namespace holobeam
