#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "foilex/execution.hpp"
#include "foilex/lattice.hpp"
#include "foilex/model.hpp"
#include "foilex/pddl.hpp"

namespace foilex {

/// Throws InputError when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

struct LoadedModel {
  std::shared_ptr<const PlanningModel> model;
  std::string domain_name;
  std::string problem_name;
  std::vector<std::string> warnings;
};

LoadedModel load_model(const std::filesystem::path& domain_file,
                       const std::filesystem::path& problem_file,
                       const pddl::GroundingOptions& options = {});

/// "navigate w0 w1", "(navigate w0 w1)" and "navigate_w0_w1" all map to
/// "navigate_w0_w1".
std::string normalize_action_name(std::string_view text);

struct FoilFile {
  Foil plan;
  FoilSet foils;
};

/// {"plan": [...], "foils": [[...], {"name": ..., "actions": [...]}, ...]}
FoilFile parse_foil_file(std::string_view json_text);

/// Either an explicit unit table or a random predicate selection.
struct LatticeSource {
  std::optional<LatticeConfig> config;
  double fraction = 0.5;
  std::optional<std::uint64_t> seed;
};

/// {"granularity": "predicate"|"fluent", "units": {"id": ["member", ...]}} or
/// {"fraction": 0.5, "seed": 7}.
LatticeSource parse_lattice_file(std::string_view json_text);

/// `seed` applies when the source does not fix one.
LatticeSpec make_lattice(std::shared_ptr<const PlanningModel> base, const LatticeSource& source,
                         std::uint64_t seed);

struct ManifestEntry {
  std::string domain;
  std::filesystem::path domain_file;
  std::filesystem::path problem_file;
  std::filesystem::path foils_file;
  LatticeSource lattice;
};

/// {"problems": [{"domain", "domain_file", "problem_file", "foils",
/// "lattice" (file) | "fraction"}]}; paths relative to `base_dir`.
std::vector<ManifestEntry> parse_manifest(std::string_view json_text,
                                          const std::filesystem::path& base_dir);

}  // namespace foilex
