#pragma once

#include "qsynth/experiments.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/rydberg.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace qsynth {

inline constexpr int kRecordFormatVersion = 1;

/// Everything a command run depends on; embedded verbatim in every output
/// record so results are self-describing and replayable.
struct RunConfig {
  std::string command;
  std::string target_key;
  std::vector<int> depths;
  std::string model = "ideal";
  std::string sweep_kind = "depth";
  int samples = 5;
  int trials = 100;
  std::vector<double> noise_r = {0.01};
  std::uint64_t seed = 0;
  long budget = 0;  // 0 = model default
  long budget_per_param = 0;  // overrides budget when > 0
  int restarts = 5;
  int jobs = 0;     // 0 = hardware concurrency
  std::string schedule_file;
  std::string out_path;
  // device overrides, in the device's natural units
  std::optional<double> vnn_mhz;
  std::optional<double> omega_b_mhz;
  std::optional<double> omega_r_mhz;
  std::optional<double> omega_r_weak_mhz;
  std::optional<double> spacing_um;

  DeviceConfig device(int num_atoms) const;
};

nlohmann::json run_config_to_json(const RunConfig& rc);
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json opt_result_to_json(const OptResult& res, const RunConfig& rc, int num_qubits);

/// Parse the "angles"/"depth" payload of an optimize record (or any JSON
/// object carrying those keys) back into a schedule.
QaoaSchedule schedule_from_json(const nlohmann::json& j);

nlohmann::json sweep_record_to_json(const SweepRecord& record, const RunConfig& rc);
SweepRecord sweep_record_from_json(const nlohmann::json& j);

/// One row per (depth, sample) and per noise trial:
/// target,depth,sample,seed,fidelity,model,R
std::string sweep_record_csv(const SweepRecord& record);

nlohmann::json pulse_sequence_to_json(const PulseSequence& seq);

/// Piecewise-constant (time, Omega, Delta) profile, two rows per pulse.
std::string pulse_staircase_csv(const PulseSequence& seq);

/// Write via temp file + rename so readers never observe partial records.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace qsynth
