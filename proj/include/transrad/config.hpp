// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "transrad/applicability.hpp"
#include "transrad/constants.hpp"
#include "transrad/packets.hpp"
#include "transrad/radiation.hpp"
#include "transrad/toml.hpp"

namespace transrad {

// Units live at this boundary only: energies and momenta in eV inside,
// lengths in 1/eV, explicit suffixes in the config file.
namespace units {

inline std::pair<double, std::string> split_quantity(const TomlValue& v) {
  const std::string& s = v.as_string();
  char* end = nullptr;
  const double num = std::strtod(s.c_str(), &end);
  if (end == s.c_str())
    throw ConfigError("line " + std::to_string(v.line) + ": expected '<number> <unit>', got '" +
                      s + "'");
  std::size_t i = end - s.c_str();
  while (i < s.size() && s[i] == ' ') ++i;
  return {num, s.substr(i)};
}

inline double energy_ev(const TomlValue& v) {
  const auto [num, unit] = split_quantity(v);
  if (unit == "eV") return num;
  if (unit == "keV") return num * 1e3;
  if (unit == "MeV") return num * 1e6;
  if (unit == "GeV") return num * 1e9;
  throw ConfigError("line " + std::to_string(v.line) + ": unknown energy unit '" + unit + "'");
}

inline double length_inv_ev(const TomlValue& v) {
  const auto [num, unit] = split_quantity(v);
  double nm = 0.0;
  if (unit == "pm") nm = num * 1e-3;
  else if (unit == "nm") nm = num;
  else if (unit == "um") nm = num * 1e3;
  else if (unit == "mm") nm = num * 1e6;
  else
    throw ConfigError("line " + std::to_string(v.line) + ": unknown length unit '" + unit + "'");
  return nm / constants::hbar_c_ev_nm;
}

// Momentum widths accept energy units directly or a length via the hbar c
// conversion (sigma = hbar c / L).
inline double momentum_ev(const TomlValue& v) {
  const auto [num, unit] = split_quantity(v);
  (void)num;
  if (unit == "pm" || unit == "nm" || unit == "um" || unit == "mm")
    return 1.0 / length_inv_ev(v);
  return energy_ev(v);
}

inline double time_inv_ev(const TomlValue& v) {
  const auto [num, unit] = split_quantity(v);
  double seconds = 0.0;
  if (unit == "as") seconds = num * 1e-18;
  else if (unit == "fs") seconds = num * 1e-15;
  else if (unit == "ps") seconds = num * 1e-12;
  else if (unit == "ns") seconds = num * 1e-9;
  else
    throw ConfigError("line " + std::to_string(v.line) + ": unknown time unit '" + unit + "'");
  return seconds / constants::hbar_ev_s;
}

}  // namespace units

namespace detail_config {

inline void check_keys(const TomlSection& sec, const std::string& name,
                       const std::set<std::string>& allowed) {
  for (const auto& [key, value] : sec.values)
    if (!allowed.count(key))
      throw ConfigError("line " + std::to_string(value.line) + ": unknown key '" + key +
                        "' in [" + name + "]");
}

inline const TomlValue& require(const TomlSection& sec, const std::string& section,
                                const std::string& key) {
  auto it = sec.values.find(key);
  if (it == sec.values.end())
    throw ConfigError("[" + section + "] is missing required key '" + key + "'");
  return it->second;
}

inline const TomlValue* find(const TomlSection& sec, const std::string& key) {
  auto it = sec.values.find(key);
  return it == sec.values.end() ? nullptr : &it->second;
}

inline Vec3 number_triple(const TomlValue& v) {
  const auto& a = v.as_array();
  if (a.size() != 3)
    throw ConfigError("line " + std::to_string(v.line) + ": expected three numbers");
  return {a[0].as_number(), a[1].as_number(), a[2].as_number()};
}

inline Vec3 length_triple(const TomlValue& v) {
  const auto& a = v.as_array();
  if (a.size() != 3)
    throw ConfigError("line " + std::to_string(v.line) + ": expected three lengths");
  return {units::length_inv_ev(a[0]), units::length_inv_ev(a[1]), units::length_inv_ev(a[2])};
}

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail_config

struct RunConfig {
  ParticleParams particle{};
  std::optional<WavePacket> packet{};
  ScanGrid grid{};
  std::optional<PolarizationMode> polarization{};  // nullopt = summed over polarizations
  Method method = Method::ContractionFastPath;
  std::optional<ClosedFormName> closed_form_name{};
  QuadratureOptions quadrature{};
  double theta_max = constants::pi / 2.0 - 1e-3;
  std::string output_path{};
  ApplicabilityContext context{};
  std::vector<Vec3> bunch_centers{};
  std::uint64_t hash = 0;

  static RunConfig from_string(const std::string& text);
  static RunConfig load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
  }
};

inline RunConfig RunConfig::from_string(const std::string& text) {
  using namespace detail_config;
  const TomlTable toml = parse_toml(text);
  RunConfig cfg;
  cfg.hash = fnv1a(text);

  for (const auto& [name, sec] : toml.sections) {
    static const std::set<std::string> known = {"particle",      "packet", "detector", "method",
                                                "output",        "bunch",  "applicability"};
    if (!known.count(name))
      throw ConfigError("line " + std::to_string(sec.line) + ": unknown section [" + name + "]");
  }

  // [particle]
  {
    const TomlSection& sec = toml.at("particle");
    check_keys(sec, "particle", {"type", "anomaly", "mass", "charge", "moment_nuclear_magnetons"});
    const std::string type = require(sec, "particle", "type").as_string();
    const double anomaly = find(sec, "anomaly") ? find(sec, "anomaly")->as_number() : 0.0;
    if (type == "electron") {
      cfg.particle = ParticleParams::electron(anomaly);
    } else if (type == "neutron") {
      cfg.particle = ParticleParams::neutron();
    } else if (type == "custom") {
      const double mass = units::energy_ev(require(sec, "particle", "mass"));
      const double charge_units = require(sec, "particle", "charge").as_number();
      if (charge_units != 0.0) {
        cfg.particle = ParticleParams::charged(mass, charge_units * unit_charge(), anomaly);
      } else {
        const double kappa = find(sec, "moment_nuclear_magnetons")
                                 ? find(sec, "moment_nuclear_magnetons")->as_number()
                                 : 0.0;
        cfg.particle = ParticleParams::neutral(
            mass, kappa * unit_charge() / (2.0 * constants::proton_mass_ev));
      }
    } else {
      throw ConfigError("[particle] type must be electron, neutron or custom");
    }
  }

  // [packet]
  if (toml.has("packet")) {
    const TomlSection& sec = toml.at("packet");
    check_keys(sec, "packet",
               {"type", "momentum", "kinetic", "sigma", "centers", "weights", "zeta", "tau",
                "kappa", "b_spin", "vartheta", "sigma3", "sigma_perp", "l", "spin"});
    double pmag = 0.0;
    if (const TomlValue* v = find(sec, "momentum")) {
      pmag = units::momentum_ev(*v);
    } else if (const TomlValue* v2 = find(sec, "kinetic")) {
      const double t = units::energy_ev(*v2);
      const double p0 = cfg.particle.mass + t;
      pmag = std::sqrt(p0 * p0 - cfg.particle.mass * cfg.particle.mass);
    } else {
      throw ConfigError("[packet] needs 'momentum' or 'kinetic'");
    }
    const std::string type = require(sec, "packet", "type").as_string();
    if (type == "gaussian" || type == "spin") {
      const auto& sig = require(sec, "packet", "sigma").as_array();
      if (sig.size() != 3) throw ConfigError("[packet] sigma must have three entries");
      const Mat3 cov = Mat3::diag(std::pow(units::momentum_ev(sig[0]), 2),
                                  std::pow(units::momentum_ev(sig[1]), 2),
                                  std::pow(units::momentum_ev(sig[2]), 2));
      std::vector<Vec3> centers = {Vec3{}};
      std::vector<cplx> weights = {cplx(1.0)};
      if (const TomlValue* v = find(sec, "centers")) {
        centers.clear();
        for (const auto& c : v->as_array()) centers.push_back(length_triple(c));
        weights.assign(centers.size(), cplx(1.0));
      }
      if (const TomlValue* v = find(sec, "weights")) {
        weights.clear();
        for (const auto& wv : v->as_array()) {
          const auto& pair = wv.as_array();
          if (pair.size() != 2) throw ConfigError("[packet] weights entries are [re, im] pairs");
          weights.push_back(cplx(pair[0].as_number(), pair[1].as_number()));
        }
        if (weights.size() != centers.size())
          throw ConfigError("[packet] weights and centers must have equal length");
      }
      Vec3 zeta{};
      if (const TomlValue* v = find(sec, "zeta")) zeta = number_triple(*v);
      GaussianSuperposition g = GaussianSuperposition::make(
          Vec3{0.0, 0.0, -pmag}, cov, std::move(centers), std::move(weights), zeta);
      if (type == "gaussian") {
        cfg.packet.emplace(std::move(g));
      } else {
        SpinSuperposition s;
        s.envelope = std::move(g);
        s.tau = find(sec, "tau") ? number_triple(*find(sec, "tau")) : Vec3{0.0, 0.0, 1.0};
        s.kappa = find(sec, "kappa") ? find(sec, "kappa")->as_number() : 0.0;
        if (const TomlValue* v = find(sec, "b_spin")) s.b_spin = length_triple(*v);
        s.vartheta = find(sec, "vartheta") ? find(sec, "vartheta")->as_number() : 0.0;
        cfg.packet.emplace(std::move(s));
      }
    } else if (type == "twisted") {
      const double s3 = units::momentum_ev(require(sec, "packet", "sigma3"));
      const double sp = units::momentum_ev(require(sec, "packet", "sigma_perp"));
      const int l = static_cast<int>(require(sec, "packet", "l").as_number());
      int spin = 0;
      if (const TomlValue* v = find(sec, "spin")) {
        const std::string s = v->as_string();
        if (s == "natural") spin = 0;
        else if (s == "+1") spin = 1;
        else if (s == "-1") spin = -1;
        else
          throw ConfigError("[packet] spin must be 'natural', '+1' or '-1'");
      }
      cfg.packet.emplace(TwistedPacket::make(-pmag, s3, sp, l, spin));
    } else {
      throw ConfigError("[packet] type must be gaussian, spin or twisted");
    }
  }

  // [method]
  if (toml.has("method")) {
    const TomlSection& sec = toml.at("method");
    check_keys(sec, "method", {"mode", "rtol", "theta_max_margin"});
    if (const TomlValue* v = find(sec, "mode")) {
      const std::string mode = v->as_string();
      if (mode == "general") cfg.method = Method::GeneralQuadrature;
      else if (mode == "fastpath") cfg.method = Method::ContractionFastPath;
      else if (mode.rfind("closedform:", 0) == 0) {
        cfg.method = Method::ClosedForm;
        const auto name = closed_form_from_string(mode.substr(11));
        if (!name)
          throw ConfigError("line " + std::to_string(v->line) + ": unknown closed form '" +
                            mode.substr(11) + "'");
        cfg.closed_form_name = *name;
      } else {
        throw ConfigError("line " + std::to_string(v->line) + ": unknown method mode");
      }
    }
    if (const TomlValue* v = find(sec, "rtol")) cfg.quadrature.rtol = v->as_number();
    if (const TomlValue* v = find(sec, "theta_max_margin"))
      cfg.theta_max = constants::pi / 2.0 - v->as_number();
  }
  cfg.quadrature.method = cfg.method == Method::GeneralQuadrature
                              ? Method::GeneralQuadrature
                              : Method::ContractionFastPath;

  // [detector]
  {
    const TomlSection& sec = toml.at("detector");
    check_keys(sec, "detector",
               {"k0", "k0_range", "theta_deg", "theta_range_deg", "phi_deg", "phi_range_deg",
                "polarization"});
    auto fill_axis = [&](const char* list_key, const char* range_key, bool energy,
                         std::vector<double>& out) {
      const TomlValue* list = find(sec, list_key);
      const TomlValue* range = find(sec, range_key);
      if ((list == nullptr) == (range == nullptr))
        throw ConfigError(std::string("[detector] needs exactly one of '") + list_key + "' or '" +
                          range_key + "'");
      auto convert = [&](const TomlValue& v) {
        return energy ? units::energy_ev(v) : v.as_number() * constants::pi / 180.0;
      };
      if (list) {
        for (const auto& v : list->as_array()) out.push_back(convert(v));
      } else {
        const auto& r = range->as_array();
        if (r.size() != 3) throw ConfigError("[detector] range needs [min, max, count]");
        const double lo = convert(r[0]);
        const double hi = convert(r[1]);
        const int n = static_cast<int>(r[2].as_number());
        if (n < 1) throw ConfigError("[detector] range count must be >= 1");
        for (int i = 0; i < n; ++i)
          out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0));
      }
    };
    fill_axis("k0", "k0_range", true, cfg.grid.k0);
    fill_axis("theta_deg", "theta_range_deg", false, cfg.grid.theta);
    fill_axis("phi_deg", "phi_range_deg", false, cfg.grid.phi);
    for (double k0 : cfg.grid.k0)
      if (!(k0 > 0.0)) throw ConfigError("[detector] k0 must be positive");
    for (double th : cfg.grid.theta)
      if (!(th >= 0.0 && th <= cfg.theta_max))
        throw ConfigError("[detector] theta outside [0, theta_max]; grazing angles excluded");

    const std::string pol = require(sec, "detector", "polarization").as_string();
    if (pol == "summed") cfg.polarization = std::nullopt;
    else if (pol == "helicity+") cfg.polarization = PolarizationMode::HelicityPlus;
    else if (pol == "helicity-") cfg.polarization = PolarizationMode::HelicityMinus;
    else if (pol == "in_plane") cfg.polarization = PolarizationMode::LinearInPlane;
    else if (pol == "orthogonal") cfg.polarization = PolarizationMode::LinearOrthogonal;
    else
      throw ConfigError("[detector] polarization must be summed, helicity+, helicity-, "
                        "in_plane or orthogonal");
  }

  // [output]
  if (toml.has("output")) {
    const TomlSection& sec = toml.at("output");
    check_keys(sec, "output", {"path", "format"});
    cfg.output_path = require(sec, "output", "path").as_string();
    if (const TomlValue* v = find(sec, "format"))
      if (v->as_string() != "csv")
        throw ConfigError("line " + std::to_string(v->line) + ": only csv output is supported");
  }

  // [bunch]
  if (toml.has("bunch")) {
    const TomlSection& sec = toml.at("bunch");
    check_keys(sec, "bunch", {"count", "spacing", "centers"});
    if (const TomlValue* v = find(sec, "centers")) {
      for (const auto& c : v->as_array()) cfg.bunch_centers.push_back(length_triple(c));
    } else {
      const int count = static_cast<int>(require(sec, "bunch", "count").as_number());
      if (count < 1) throw ConfigError("[bunch] count must be >= 1");
      const Vec3 spacing = length_triple(require(sec, "bunch", "spacing"));
      for (int i = 0; i < count; ++i) cfg.bunch_centers.push_back(spacing * double(i));
    }
  }

  // [applicability]
  if (toml.has("applicability")) {
    const TomlSection& sec = toml.at("applicability");
    check_keys(sec, "applicability",
               {"plate_size", "interaction_time", "layer_thickness", "packet_p3_scale",
                "packet_pperp_scale"});
    if (const TomlValue* v = find(sec, "plate_size"))
      cfg.context.plate_size_perp = units::length_inv_ev(*v);
    if (const TomlValue* v = find(sec, "interaction_time"))
      cfg.context.interaction_time = units::time_inv_ev(*v);
    if (const TomlValue* v = find(sec, "layer_thickness"))
      cfg.context.layer_thickness = units::length_inv_ev(*v);
    if (const TomlValue* v = find(sec, "packet_p3_scale"))
      cfg.context.packet_p3_scale = units::momentum_ev(*v);
    if (const TomlValue* v = find(sec, "packet_pperp_scale"))
      cfg.context.packet_pperp_scale = units::momentum_ev(*v);
  }

  return cfg;
}

}  // namespace transrad
