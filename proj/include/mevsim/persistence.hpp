#pragma once

// CSV and JSON artifacts. Every floating-point value is written with 17
// significant digits so files round-trip exactly and re-exports are
// byte-identical.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mevsim/alpharank.hpp"
#include "mevsim/hpt.hpp"
#include "mevsim/metrics.hpp"

namespace mevsim {

std::string format_number(double value);

// "0;0;10", or "0;0;5;0;1;4" for role profiles (low first).
std::string counts_label(std::span<const int> counts);
std::vector<int> parse_counts_label(const std::string& label);

std::string game_spec_to_json(const GameSpec& spec);
GameSpec game_spec_from_json(const std::string& text);

// Columns: profile_id, counts, n_<s>, u_<s>, win_<s> per (role, strategy),
// slot_win_<i> per slot, efficiency_mean, no_winner_rounds, n_sims.
std::string hpt_csv(const HeuristicPayoffTable& hpt);
std::string hpt_sidecar_json(const HeuristicPayoffTable& hpt);
void write_hpt(const HeuristicPayoffTable& hpt, const std::filesystem::path& csv_path,
               const std::filesystem::path& sidecar_path);
// Throws Error on a malformed file.
HeuristicPayoffTable read_hpt(const std::filesystem::path& csv_path, const std::filesystem::path& sidecar_path);

// profile_id, counts, mass, alpha
std::string stationary_csv(std::span<const std::vector<int>> counts, const StationaryDistribution& pi);
// alpha, profile_id, mass (long format, one row per alpha and profile)
std::string sweep_csv(const SweepResult& sweep);

std::vector<std::string> summary_columns();
std::string summary_csv(std::span<const ScenarioReport> reports);

// Parsed CSV: header plus rows of raw fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws Error if the column is absent.
  std::size_t column(const std::string& name) const;
};
CsvTable parse_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
// Creates parent directories; overwrites. Throws Error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

// 64-bit FNV-1a, hex encoded. Used for manifest content hashes.
std::string content_hash(const std::string& bytes);

}  // namespace mevsim
