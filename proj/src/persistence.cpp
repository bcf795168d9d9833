#include "mevsim/persistence.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mevsim/error.hpp"

namespace mevsim {
namespace {

using nlohmann::json;

std::string column_suffix(const GameSpec& spec, int role, int strategy) {
  std::string name(strategy_name(static_cast<MetaStrategy>(strategy)));
  if (spec.n_roles() == 2) name += role == 0 ? "_low" : "_high";
  return name;
}

double parse_double(const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != field.size() || field.empty()) throw Error("malformed number '" + field + "'");
  return v;
}

int parse_int(const std::string& field) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != field.size() || field.empty()) throw Error("malformed integer '" + field + "'");
  return v;
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
}

std::string_view denominator_name(EfficiencyDenominator d) {
  return d == EfficiencyDenominator::total_at_deadline ? "total_at_deadline" : "total_at_submission";
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string counts_label(std::span<const int> counts) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(counts[i]);
  }
  return out;
}

std::vector<int> parse_counts_label(const std::string& label) {
  std::vector<int> out;
  std::stringstream ss(label);
  std::string part;
  while (std::getline(ss, part, ';')) out.push_back(parse_int(part));
  if (out.empty()) throw Error("empty profile label");
  return out;
}

std::string game_spec_to_json(const GameSpec& spec) {
  json j;
  j["game_kind"] = std::string(game_kind_name(spec.kind));
  j["signal"] = {{"lambda_p", spec.signal.lambda_p},
                 {"lambda_e", spec.signal.lambda_e},
                 {"public_value_mean", spec.signal.public_value_mean},
                 {"private_value_mean", spec.signal.private_value_mean},
                 {"lognormal_shape_public", spec.signal.lognormal_shape_public},
                 {"lognormal_shape_private", spec.signal.lognormal_shape_private},
                 {"step_ms", spec.signal.step_ms},
                 {"horizon_s", spec.signal.horizon_s},
                 {"n_builders", spec.signal.n_builders}};
  j["auction"] = {{"t_mean_s", spec.auction.t_mean_s},
                  {"t_sigma_s", spec.auction.t_sigma_s},
                  {"step_ms", spec.auction.step_ms},
                  {"n_builders", spec.auction.n_builders},
                  {"efficiency_denominator", std::string(denominator_name(spec.auction.efficiency_denominator))}};
  j["base_latency_ms"] = spec.base_latency_ms;
  j["latency_gap_ms"] = spec.latency_gap_ms;
  j["theta_prior_lo"] = spec.theta_prior_lo;
  j["theta_prior_hi"] = spec.theta_prior_hi;
  j["theta_low"] = spec.theta_low;
  j["theta_high"] = spec.theta_high;
  j["players_per_role"] = spec.players_per_role;
  j["slot_order"] = spec.slot_order;
  return j.dump(2);
}

GameSpec game_spec_from_json(const std::string& text) {
  GameSpec spec;
  try {
    const json j = json::parse(text);
    spec.kind = parse_game_kind(j.at("game_kind").get<std::string>());
    const json& s = j.at("signal");
    spec.signal.lambda_p = s.at("lambda_p").get<double>();
    spec.signal.lambda_e = s.at("lambda_e").get<double>();
    spec.signal.public_value_mean = s.at("public_value_mean").get<double>();
    spec.signal.private_value_mean = s.at("private_value_mean").get<double>();
    spec.signal.lognormal_shape_public = s.at("lognormal_shape_public").get<double>();
    spec.signal.lognormal_shape_private = s.at("lognormal_shape_private").get<double>();
    spec.signal.step_ms = s.at("step_ms").get<double>();
    spec.signal.horizon_s = s.at("horizon_s").get<double>();
    spec.signal.n_builders = s.at("n_builders").get<int>();
    const json& a = j.at("auction");
    spec.auction.t_mean_s = a.at("t_mean_s").get<double>();
    spec.auction.t_sigma_s = a.at("t_sigma_s").get<double>();
    spec.auction.step_ms = a.at("step_ms").get<double>();
    spec.auction.n_builders = a.at("n_builders").get<int>();
    spec.auction.efficiency_denominator = a.at("efficiency_denominator").get<std::string>() == "total_at_submission"
                                              ? EfficiencyDenominator::total_at_submission
                                              : EfficiencyDenominator::total_at_deadline;
    spec.base_latency_ms = j.at("base_latency_ms").get<double>();
    spec.latency_gap_ms = j.at("latency_gap_ms").get<double>();
    spec.theta_prior_lo = j.at("theta_prior_lo").get<double>();
    spec.theta_prior_hi = j.at("theta_prior_hi").get<double>();
    spec.theta_low = j.at("theta_low").get<double>();
    spec.theta_high = j.at("theta_high").get<double>();
    spec.players_per_role = j.at("players_per_role").get<int>();
    spec.slot_order = j.at("slot_order").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw Error(std::string("malformed game spec: ") + e.what());
  }
  return spec;
}

std::string hpt_csv(const HeuristicPayoffTable& hpt) {
  const GameSpec& spec = hpt.spec();
  const int roles = hpt.n_roles();
  const int strategies = hpt.n_strategies();
  std::vector<std::string> header{"profile_id", "counts"};
  for (const char* prefix : {"n_", "u_", "win_"}) {
    for (int r = 0; r < roles; ++r) {
      for (int s = 0; s < strategies; ++s) header.push_back(prefix + column_suffix(spec, r, s));
    }
  }
  for (int i = 0; i < hpt.n_players(); ++i) header.push_back("slot_win_" + std::to_string(i));
  header.insert(header.end(), {"efficiency_mean", "no_winner_rounds", "n_sims"});

  std::string out;
  append_row(out, header);
  for (std::size_t k = 0; k < hpt.size(); ++k) {
    const HptRow& row = hpt.row(k);
    std::vector<std::string> f{std::to_string(k), counts_label(row.counts)};
    for (int c : row.counts) f.push_back(std::to_string(c));
    for (double u : row.payoffs) f.push_back(format_number(u));
    for (double w : row.win_rates) f.push_back(format_number(w));
    for (double w : row.slot_win_rates) f.push_back(format_number(w));
    f.push_back(format_number(row.efficiency_mean));
    f.push_back(std::to_string(row.no_winner_rounds));
    f.push_back(std::to_string(hpt.n_sims()));
    append_row(out, f);
  }
  return out;
}

std::string hpt_sidecar_json(const HeuristicPayoffTable& hpt) {
  json j;
  j["game_spec"] = json::parse(game_spec_to_json(hpt.spec()));
  j["master_seed"] = hpt.master_seed();
  j["n_sims"] = hpt.n_sims();
  j["profiles"] = hpt.size();
  return j.dump(2) + "\n";
}

void write_hpt(const HeuristicPayoffTable& hpt, const std::filesystem::path& csv_path,
               const std::filesystem::path& sidecar_path) {
  write_text_file(csv_path, hpt_csv(hpt));
  write_text_file(sidecar_path, hpt_sidecar_json(hpt));
}

HeuristicPayoffTable read_hpt(const std::filesystem::path& csv_path, const std::filesystem::path& sidecar_path) {
  json side;
  try {
    side = json::parse(read_text_file(sidecar_path));
  } catch (const json::exception& e) {
    throw Error("malformed HPT sidecar " + sidecar_path.string() + ": " + e.what());
  }
  const GameSpec spec = game_spec_from_json(side.at("game_spec").dump());
  const int n_sims = side.at("n_sims").get<int>();
  const auto seed = side.at("master_seed").get<std::uint64_t>();

  const CsvTable table = parse_csv(read_text_file(csv_path));
  const int roles = spec.n_roles();
  std::vector<HptRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& f : table.rows) {
    HptRow row;
    for (int r = 0; r < roles; ++r) {
      for (int s = 0; s < kNumStrategies; ++s) {
        const std::string suffix = column_suffix(spec, r, s);
        row.counts.push_back(parse_int(f[table.column("n_" + suffix)]));
        row.payoffs.push_back(parse_double(f[table.column("u_" + suffix)]));
        row.win_rates.push_back(parse_double(f[table.column("win_" + suffix)]));
      }
    }
    for (int i = 0; i < spec.n_players(); ++i) {
      row.slot_win_rates.push_back(parse_double(f[table.column("slot_win_" + std::to_string(i))]));
    }
    row.efficiency_mean = parse_double(f[table.column("efficiency_mean")]);
    row.no_winner_rounds = parse_int(f[table.column("no_winner_rounds")]);
    rows.push_back(std::move(row));
  }
  return HeuristicPayoffTable(spec, n_sims, seed, std::move(rows));
}

std::string stationary_csv(std::span<const std::vector<int>> counts, const StationaryDistribution& pi) {
  if (counts.size() != pi.masses.size()) throw Error("stationary masses and profiles are not aligned");
  std::string out = "profile_id,counts,mass,alpha\n";
  const std::string alpha = format_number(pi.alpha);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    append_row(out, {std::to_string(k), counts_label(counts[k]), format_number(pi.masses[k]), alpha});
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "alpha,profile_id,mass\n";
  for (const StationaryDistribution& d : sweep.distributions) {
    const std::string alpha = format_number(d.alpha);
    for (std::size_t k = 0; k < d.masses.size(); ++k) {
      append_row(out, {alpha, std::to_string(k), format_number(d.masses[k])});
    }
  }
  return out;
}

std::vector<std::string> summary_columns() {
  return {"game_kind",        "scenario_param",    "avg_conservative_low", "avg_moderate_low",
          "avg_aggressive_low", "avg_conservative_high", "avg_moderate_high", "avg_aggressive_high",
          "w_low",            "w_high",            "hhi_scaled",           "efficiency",
          "alpha",            "n_sims",            "master_seed"};
}

std::string summary_csv(std::span<const ScenarioReport> reports) {
  std::string out;
  append_row(out, summary_columns());
  for (const ScenarioReport& r : reports) {
    std::vector<std::string> f{std::string(game_kind_name(r.game_kind)), format_number(r.scenario_param)};
    for (double u : r.usage_low) f.push_back(format_number(u));
    for (double u : r.usage_high) f.push_back(format_number(u));
    f.push_back(format_number(r.win_rates.low));
    f.push_back(format_number(r.win_rates.high));
    f.push_back(format_number(r.concentration.scaled));
    f.push_back(format_number(r.efficiency));
    f.push_back(format_number(r.alpha));
    f.push_back(std::to_string(r.n_sims));
    f.push_back(std::to_string(r.master_seed));
    append_row(out, f);
  }
  return out;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error("CSV column '" + name + "' is missing");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::stringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) {
        throw Error("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                    std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw Error("CSV is empty");
  return table;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mevsim
