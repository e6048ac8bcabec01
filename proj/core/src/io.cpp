#include "foilex/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "foilex/errors.hpp"

namespace foilex {
namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

std::vector<std::string> string_list(const json& value, const std::string& where) {
  if (!value.is_array()) throw InputError(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) throw InputError(where + " must be an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

Foil to_foil(const std::vector<std::string>& actions, std::string name) {
  Foil foil{std::move(name), {}};
  for (const auto& a : actions) foil.actions.push_back(normalize_action_name(a));
  return foil;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

LoadedModel load_model(const std::filesystem::path& domain_file,
                       const std::filesystem::path& problem_file,
                       const pddl::GroundingOptions& options) {
  auto domain = pddl::parse_domain(read_text_file(domain_file));
  auto problem = pddl::parse_problem(read_text_file(problem_file));
  LoadedModel out;
  out.model = std::make_shared<const PlanningModel>(pddl::ground(domain, problem, options));
  out.domain_name = domain.name;
  out.problem_name = problem.name;
  out.warnings = domain.warnings;
  out.warnings.insert(out.warnings.end(), problem.warnings.begin(), problem.warnings.end());
  return out;
}

std::string normalize_action_name(std::string_view text) {
  std::string s;
  for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto trim = [](std::string& v) {
    auto first = v.find_first_not_of(" \t\r\n");
    auto last = v.find_last_not_of(" \t\r\n");
    v = first == std::string::npos ? std::string() : v.substr(first, last - first + 1);
  };
  trim(s);
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw InputError("unbalanced action '" + std::string(text) + "'");
    s = s.substr(1, s.size() - 2);
    trim(s);
  }
  std::string out;
  bool gap = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      gap = true;
      continue;
    }
    if (gap && !out.empty()) out += '_';
    gap = false;
    out += c;
  }
  if (out.empty()) throw InputError("empty action name in foil");
  return out;
}

FoilFile parse_foil_file(std::string_view json_text) {
  json doc = parse_json(json_text, "foil file");
  if (!doc.is_object()) throw InputError("foil file must be a JSON object");
  FoilFile out;
  if (doc.contains("plan")) out.plan = to_foil(string_list(doc["plan"], "plan"), "plan");
  if (!doc.contains("foils") || !doc["foils"].is_array()) {
    throw InputError("foil file needs a \"foils\" array");
  }
  std::size_t index = 0;
  for (const auto& item : doc["foils"]) {
    ++index;
    std::string fallback = "foil" + std::to_string(index);
    if (item.is_array()) {
      out.foils.push_back(to_foil(string_list(item, fallback), fallback));
    } else if (item.is_object() && item.contains("actions")) {
      std::string name = item.value("name", fallback);
      out.foils.push_back(to_foil(string_list(item["actions"], name), name));
    } else {
      throw InputError(fallback + " must be an array or an object with \"actions\"");
    }
  }
  return out;
}

LatticeSource parse_lattice_file(std::string_view json_text) {
  json doc = parse_json(json_text, "lattice file");
  if (!doc.is_object()) throw InputError("lattice file must be a JSON object");
  LatticeSource out;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw InputError("lattice seed must be a nonnegative integer");
    out.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("fraction")) {
    if (!doc["fraction"].is_number()) throw InputError("lattice fraction must be a number");
    out.fraction = doc["fraction"].get<double>();
  }
  if (doc.contains("units")) {
    if (!doc["units"].is_object()) throw InputError("\"units\" must map ids to member lists");
    LatticeConfig config;
    std::string granularity = doc.value("granularity", std::string("predicate"));
    if (granularity == "predicate") {
      config.granularity = Granularity::kPredicate;
    } else if (granularity == "fluent") {
      config.granularity = Granularity::kFluent;
    } else {
      throw InputError("unknown granularity '" + granularity + "'");
    }
    for (const auto& [id, members] : doc["units"].items()) {
      auto list = string_list(members, "unit '" + id + "'");
      if (config.granularity == Granularity::kFluent) {
        for (auto& m : list) m = normalize_action_name(m);
      }
      config.units[id] = std::move(list);
    }
    out.config = std::move(config);
  } else if (!doc.contains("fraction")) {
    throw InputError("lattice file needs \"units\" or \"fraction\"");
  }
  return out;
}

LatticeSpec make_lattice(std::shared_ptr<const PlanningModel> base, const LatticeSource& source,
                         std::uint64_t seed) {
  if (source.config) return build_lattice(std::move(base), *source.config);
  return generate_lattice_config(std::move(base), source.fraction, source.seed.value_or(seed));
}

std::vector<ManifestEntry> parse_manifest(std::string_view json_text,
                                          const std::filesystem::path& base_dir) {
  json doc = parse_json(json_text, "manifest");
  if (!doc.is_object() || !doc.contains("problems") || !doc["problems"].is_array()) {
    throw InputError("manifest needs a \"problems\" array");
  }
  std::vector<ManifestEntry> out;
  for (const auto& item : doc["problems"]) {
    for (const char* key : {"domain", "domain_file", "problem_file", "foils"}) {
      if (!item.contains(key) || !item[key].is_string()) {
        throw InputError(std::string("manifest entry lacks \"") + key + "\"");
      }
    }
    ManifestEntry entry;
    entry.domain = item["domain"].get<std::string>();
    entry.domain_file = base_dir / item["domain_file"].get<std::string>();
    entry.problem_file = base_dir / item["problem_file"].get<std::string>();
    entry.foils_file = base_dir / item["foils"].get<std::string>();
    if (item.contains("lattice")) {
      entry.lattice =
          parse_lattice_file(read_text_file(base_dir / item["lattice"].get<std::string>()));
    } else if (item.contains("fraction")) {
      entry.lattice.fraction = item["fraction"].get<double>();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace foilex
