#include "foilex/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "foilex/errors.hpp"

namespace foilex {
namespace {

using Clock = std::chrono::steady_clock;

std::string number(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_number(std::string_view text) {
  double value = 0;
  auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw InputError("malformed number '" + std::string(text) + "' in CSV");
  }
  return value;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

double bound_factor(std::size_t k) {
  return std::max(1.0, std::log(static_cast<double>(std::max<std::size_t>(k, 1))));
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "text") return OutputFormat::kText;
  if (text == "json") return OutputFormat::kJson;
  if (text == "csv") return OutputFormat::kCsv;
  throw InputError("unknown output format '" + std::string(text) + "'");
}

ExplainReport run_explain(const ExplainRequest& request) {
  LoadedModel loaded = load_model(request.domain_file, request.problem_file, request.grounding);
  FoilFile foils = parse_foil_file(read_text_file(request.foils_file));
  if (foils.foils.empty()) throw InputError("the foil file lists no foils");

  LatticeSource source;
  if (request.lattice_file) source = parse_lattice_file(read_text_file(*request.lattice_file));
  if (request.fraction) {
    source.config.reset();
    source.fraction = *request.fraction;
  }
  LatticeSpec lattice = make_lattice(loaded.model, source, request.seed);

  ExplainReport report;
  report.domain = loaded.domain_name;
  report.problem = loaded.problem_name;
  report.warnings = loaded.warnings;
  report.unit_ids = lattice.ids(lattice.all());
  report.total_cost = lattice.total_cost();
  report.plan_length = foils.plan.actions.size();
  if (!foils.plan.actions.empty()) report.plan_valid = validate_plan(*loaded.model, foils.plan);
  for (const auto& f : foils.foils) report.foil_names.push_back(f.name);

  const ExplanationProblem setup(lattice, foils.foils);
  for (UnitSet m : setup.mmin()) report.mmin.push_back(lattice.ids(m));
  report.k = setup.cover_bound_k();
  report.method = request.method;

  const ExplanationProblem problem(lattice, foils.foils, setup.mmin());
  auto start = Clock::now();
  report.explanation = explain(problem, request.method, request.search);
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  report.messages = render_explanation(report.explanation, lattice);
  return report;
}

std::string format_report(const ExplainReport& report, OutputFormat format) {
  const Explanation& e = report.explanation;
  std::ostringstream out;
  switch (format) {
    case OutputFormat::kText: {
      out << "domain " << report.domain << ", problem " << report.problem << "\n";
      for (const auto& w : report.warnings) out << "warning: " << w << "\n";
      out << "lattice: " << report.unit_ids.size() << " units, C_P = " << report.total_cost << "\n";
      if (report.plan_valid) {
        out << "plan: " << report.plan_length << " steps, " << (*report.plan_valid ? "valid" : "INVALID")
            << " in the robot model\n";
      }
      out << "foils: " << report.foil_names.size() << "\n";
      out << "minimal abstraction set (" << report.mmin.size() << "):\n";
      for (const auto& m : report.mmin) out << "  {" << join(m, ", ") << "}\n";
      out << "method: " << to_string(report.method) << ", k = " << report.k << "\n";
      out << "explanation: {" << join(e.ids, ", ") << "}, cost " << e.cost << ", size "
          << e.ids.size() << (e.verified ? "" : ", NOT VERIFIED") << "\n";
      for (const auto& m : report.messages) out << "  " << m.text << "\n";
      for (const auto& f : e.findings) out << "finding: " << f << "\n";
      out << "time: " << report.seconds << " s\n";
      break;
    }
    case OutputFormat::kJson: {
      nlohmann::json doc;
      doc["domain"] = report.domain;
      doc["problem"] = report.problem;
      doc["warnings"] = report.warnings;
      doc["units"] = report.unit_ids;
      doc["total_cost"] = report.total_cost;
      if (report.plan_valid) doc["plan_valid"] = *report.plan_valid;
      doc["foils"] = report.foil_names;
      doc["mmin"] = report.mmin;
      doc["k"] = report.k;
      doc["method"] = to_string(report.method);
      doc["explanation"] = {{"units", e.ids},
                            {"unit_costs", e.unit_costs},
                            {"cost", e.cost},
                            {"size", e.ids.size()},
                            {"verified", e.verified},
                            {"expanded", e.expanded},
                            {"findings", e.findings}};
      nlohmann::json messages = nlohmann::json::array();
      for (const auto& m : report.messages) messages.push_back(m.text);
      doc["messages"] = messages;
      doc["seconds"] = report.seconds;
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::kCsv: {
      out << "unit,kind,action,fluent,message\n";
      for (const auto& m : report.messages) {
        out << csv_field(m.unit) << ',' << to_string(m.update.kind) << ','
            << csv_field(m.update.action) << ',' << csv_field(m.update.fluent) << ','
            << csv_field(m.text) << "\n";
      }
      break;
    }
  }
  return out.str();
}

FoilSet foil_pool_sample(const LatticeSpec& lattice, const FoilSet& pool, std::size_t size,
                         std::uint64_t seed) {
  if (size > pool.size()) {
    throw InputError("foil pool has " + std::to_string(pool.size()) + " foils, " +
                     std::to_string(size) + " requested");
  }
  const PlanningModel top = project_model(lattice.base(), lattice.removal_mask(lattice.all()));
  for (const auto& foil : pool) {
    if (!validate_plan_nd(top, foil)) {
      throw InputError("pool foil '" + foil.name + "' is not valid in the most abstract model");
    }
    if (validate_plan_nd(lattice.base(), foil)) {
      throw InputError("pool foil '" + foil.name + "' is valid in the robot model");
    }
  }
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (order.size() - i));
    std::swap(order[i], order[j]);
  }
  order.resize(size);
  std::sort(order.begin(), order.end());
  FoilSet out;
  for (std::size_t i : order) out.push_back(pool[i]);
  return out;
}

std::string bench_csv_header() {
  return "domain,problem,seed,units,c_p,foils,method,cost,size,k,seconds";
}

std::string to_csv_line(const BenchmarkRow& row) {
  std::ostringstream out;
  out << csv_field(row.domain) << ',' << csv_field(row.problem) << ','
      << (row.seed ? std::to_string(*row.seed) : std::string()) << ',' << number(row.units) << ','
      << number(row.total_cost) << ',' << row.foils << ',' << csv_field(row.method) << ','
      << number(row.cost) << ',' << number(row.size) << ',' << number(row.k) << ','
      << number(row.seconds);
  return out.str();
}

std::vector<BenchmarkRow> parse_bench_csv(std::string_view text) {
  std::vector<BenchmarkRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != bench_csv_header()) throw InputError("unexpected benchmark CSV header");
      header = false;
      continue;
    }
    auto f = split_csv_line(line);
    if (f.size() != 11) throw InputError("benchmark CSV row with " + std::to_string(f.size()) + " fields");
    BenchmarkRow row;
    row.domain = f[0];
    row.problem = f[1];
    if (!f[2].empty()) row.seed = static_cast<std::uint64_t>(std::stoull(f[2]));
    row.units = parse_number(f[3]);
    row.total_cost = parse_number(f[4]);
    row.foils = static_cast<std::size_t>(std::stoull(f[5]));
    row.method = f[6];
    row.cost = parse_number(f[7]);
    row.size = parse_number(f[8]);
    row.k = parse_number(f[9]);
    row.seconds = parse_number(f[10]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchmarkRow> average_rows(const std::vector<BenchmarkRow>& rows) {
  struct Acc {
    BenchmarkRow sum;
    std::size_t n = 0;
  };
  std::vector<std::tuple<std::string, std::size_t, std::string>> order;
  std::map<std::tuple<std::string, std::size_t, std::string>, Acc> groups;
  for (const auto& row : rows) {
    if (row.average()) continue;
    auto key = std::make_tuple(row.domain, row.foils, row.method);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) {
      order.push_back(key);
      it->second.sum.domain = row.domain;
      it->second.sum.problem = "*";
      it->second.sum.foils = row.foils;
      it->second.sum.method = row.method;
    }
    Acc& acc = it->second;
    acc.sum.units += row.units;
    acc.sum.total_cost += row.total_cost;
    acc.sum.cost += row.cost;
    acc.sum.size += row.size;
    acc.sum.k += row.k;
    acc.sum.seconds += row.seconds;
    ++acc.n;
  }
  std::vector<BenchmarkRow> out;
  for (const auto& key : order) {
    Acc& acc = groups[key];
    auto n = static_cast<double>(acc.n);
    BenchmarkRow row = acc.sum;
    row.units /= n;
    row.total_cost /= n;
    row.cost /= n;
    row.size /= n;
    row.k /= n;
    row.seconds /= n;
    out.push_back(std::move(row));
  }
  return out;
}

BenchResult run_bench(const BenchOptions& options, std::ostream* log) {
  BenchResult result;
  auto note = [&](const std::string& line) {
    if (log) *log << line << std::endl;
  };
  auto fail = [&](const std::string& line) {
    result.failures.push_back(line);
    note("failed: " + line);
  };

  const auto manifest_dir = options.manifest.parent_path();
  auto entries = parse_manifest(read_text_file(options.manifest), manifest_dir);
  for (const auto& entry : entries) {
    LoadedModel loaded;
    FoilFile pool;
    try {
      loaded = load_model(entry.domain_file, entry.problem_file);
      pool = parse_foil_file(read_text_file(entry.foils_file));
    } catch (const Error& e) {
      fail(entry.domain + " " + entry.problem_file.filename().string() + ": " + e.what());
      continue;
    }
    for (std::uint64_t seed : options.seeds) {
      std::optional<LatticeSpec> lattice;
      try {
        lattice.emplace(make_lattice(loaded.model, entry.lattice, seed));
      } catch (const Error& e) {
        fail(entry.domain + " " + loaded.problem_name + " seed " + std::to_string(seed) + ": " +
             e.what());
        continue;
      }
      for (std::size_t size : options.foil_sizes) {
        const std::string tag = entry.domain + " " + loaded.problem_name + " seed " +
                                std::to_string(seed) + " |F|=" + std::to_string(size);
        try {
          FoilSet foils = foil_pool_sample(*lattice, pool.foils, size, seed);
          const ExplanationProblem setup(*lattice, foils);
          const std::size_t k = setup.cover_bound_k();
          std::map<Method, std::size_t> costs;
          for (Method method : options.methods) {
            Explanation e;
            double seconds = 0;
            for (std::size_t r = 0; r < std::max<std::size_t>(options.repeat, 1); ++r) {
              const ExplanationProblem problem(*lattice, foils, setup.mmin());
              auto start = Clock::now();
              e = explain(problem, method, options.search);
              seconds += std::chrono::duration<double>(Clock::now() - start).count();
            }
            seconds /= static_cast<double>(std::max<std::size_t>(options.repeat, 1));
            if (!e.verified) result.findings.push_back(tag + ": " + to_string(method) + " result failed re-check");
            for (const auto& f : e.findings) result.findings.push_back(tag + ": " + to_string(method) + ": " + f);
            costs[method] = e.cost;
            BenchmarkRow row;
            row.domain = entry.domain;
            row.problem = loaded.problem_name;
            row.seed = seed;
            row.units = static_cast<double>(lattice->size());
            row.total_cost = static_cast<double>(lattice->total_cost());
            row.foils = size;
            row.method = method == Method::kAStar ? "heuristic" : to_string(method);
            row.cost = static_cast<double>(e.cost);
            row.size = static_cast<double>(e.ids.size());
            row.k = static_cast<double>(k);
            row.seconds = seconds;
            note(to_csv_line(row));
            result.rows.push_back(std::move(row));
          }
          if (costs.contains(Method::kBlind) && costs.contains(Method::kGreedy)) {
            const double blind = static_cast<double>(costs[Method::kBlind]);
            const double greedy = static_cast<double>(costs[Method::kGreedy]);
            if (blind > greedy) {
              result.findings.push_back(tag + ": blind cost exceeds greedy cost");
            }
            if (greedy > bound_factor(k) * blind + 1e-9) {
              result.findings.push_back(tag + ": greedy cost " + number(greedy) +
                                        " exceeds max(1, ln k) * blind cost " +
                                        number(bound_factor(k) * blind) + " (k = " +
                                        std::to_string(k) + ")");
            }
          }
          if (costs.contains(Method::kBlind) && costs.contains(Method::kAStar) &&
              costs[Method::kAStar] < costs[Method::kBlind]) {
            result.findings.push_back(tag + ": heuristic search beat blind search on cost");
          }
        } catch (const Error& e) {
          fail(tag + ": " + e.what());
        }
      }
    }
  }
  auto averages = average_rows(result.rows);
  result.rows.insert(result.rows.end(), averages.begin(), averages.end());
  for (const auto& f : result.findings) note("finding: " + f);
  return result;
}

}  // namespace foilex
