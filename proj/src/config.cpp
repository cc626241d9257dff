#include "trawlkit/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "trawlkit/errors.hpp"

namespace trawlkit {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError(std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

std::size_t count(const json& j, const char* key) {
  if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
    throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return j.at(key).get<std::size_t>();
}

TrawlSpec trawl_from(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("trawl must be an object with a 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "exp" || kind == "exponential") return TrawlSpec::exponential(number(j, "lambda"));
    if (kind == "supgamma") return TrawlSpec::sup_gamma(number(j, "alpha"), number(j, "H"));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown trawl kind '" + kind + "'");
}

SeedSpec seed_from(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("seed law must be an object with a 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "negbin") {
      if (j.contains("m")) return SeedSpec::negbin_unchecked(number(j, "m"), number(j, "theta"));
      return SeedSpec::negbin(number(j, "theta"));
    }
    if (kind == "gamma") {
      if (j.contains("scale")) {
        return SeedSpec::gamma_unchecked(number(j, "shape"), number(j, "scale"));
      }
      return SeedSpec::gamma(number(j, "shape"));
    }
    if (kind == "gaussian") {
      const double mean = j.contains("mean") ? number(j, "mean") : 0.0;
      if (j.contains("variance")) return SeedSpec::gaussian_unchecked(mean, number(j, "variance"));
      return SeedSpec::gaussian(mean);
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown seed kind '" + kind + "'");
}

SimConfig sim_from(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  if (!j.contains("trawl")) throw ConfigError("missing 'trawl'");
  const json* law = nullptr;
  if (j.contains("marginal")) {
    law = &j.at("marginal");
  } else if (j.contains("seed") && j.at("seed").is_object()) {
    law = &j.at("seed");
  } else {
    throw ConfigError("missing seed law ('marginal')");
  }
  SimConfig cfg{trawl_from(j.at("trawl")), seed_from(*law)};
  if (j.contains("delta")) cfg.delta = number(j, "delta");
  if (j.contains("n")) cfg.n = count(j, "n");
  if (j.contains("tail_cutoff")) cfg.tail_cutoff = number(j, "tail_cutoff");
  if (j.contains("rng_seed")) {
    cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  } else if (j.contains("seed") && j.at("seed").is_number_integer()) {
    cfg.rng_seed = j.at("seed").get<std::uint64_t>();
  }
  if (!(cfg.delta > 0.0)) throw ConfigError("delta must be positive");
  if (cfg.n < 2) throw ConfigError("n must be at least 2");
  return cfg;
}

template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

}  // namespace

TrawlSpec parse_trawl_json(const std::string& text) {
  return guarded([&] { return trawl_from(parse_json(text)); });
}

SeedSpec parse_seed_json(const std::string& text) {
  return guarded([&] { return seed_from(parse_json(text)); });
}

SimConfig parse_sim_config(const std::string& text) {
  return guarded([&] { return sim_from(parse_json(text)); });
}

StudyCell parse_study_cell(const std::string& text) {
  const json j = parse_json(text);
  StudyCell cell{guarded([&] { return sim_from(j); })};
  try {
    if (j.contains("runs")) cell.runs = count(j, "runs");
    if (j.contains("report")) {
      const json& r = j.at("report");
      const std::string mode = r.value("mode", "fixed_t");
      if (mode == "fixed_t") {
        cell.mode = ReportMode::FixedT;
        cell.times = r.at("times").get<std::vector<double>>();
      } else if (mode == "fixed_i") {
        cell.mode = ReportMode::FixedI;
        cell.indices = r.at("indices").get<std::vector<std::size_t>>();
      } else {
        throw ConfigError("report mode must be fixed_t or fixed_i");
      }
    }
    if (j.contains("targets")) {
      cell.targets.clear();
      for (const auto& t : j.at("targets")) {
        cell.targets.push_back(study_target_from_string(t.get<std::string>()));
      }
    }
    if (j.contains("statistics")) {
      cell.stat_kinds.clear();
      for (const auto& s : j.at("statistics")) {
        cell.stat_kinds.push_back(stat_kind_from_string(s.get<std::string>()));
      }
    }
    if (j.contains("slices")) {
      const json& s = j.at("slices");
      cell.slice_horizons = s.at("horizons").get<std::vector<double>>();
      if (s.contains("methods")) {
        cell.slice_methods.clear();
        for (const auto& m : s.at("methods")) {
          cell.slice_methods.push_back(slice_method_from_string(m.get<std::string>()));
        }
      }
    }
    if (j.contains("levels")) cell.levels = j.at("levels").get<std::vector<double>>();
    if (j.contains("subset_of")) cell.subset_of = count(j, "subset_of");
    if (j.contains("grid_centering")) {
      cell.stat_opts.grid_centering = j.at("grid_centering").get<bool>();
    }
    if (j.contains("N_n")) cell.stat_opts.N_n = count(j, "N_n");
    if (j.contains("K_n")) cell.stat_opts.K_n = count(j, "K_n");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid study cell: ") + e.what());
  }
  for (double t : cell.times) {
    if (!(t >= 0.0)) throw ConfigError("report times must be non-negative");
  }
  for (double q : cell.levels) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("coverage levels must lie in (0,1)");
  }
  if (cell.runs < 2) throw ConfigError("runs must be at least 2");
  return cell;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace trawlkit
