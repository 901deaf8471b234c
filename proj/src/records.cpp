#include "qsynth/records.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsynth {

using nlohmann::json;

DeviceConfig RunConfig::device(int num_atoms) const {
  DeviceConfig dev;
  dev.num_atoms = num_atoms;
  const double to_rad = 2.0 * M_PI * 1e6;
  if (vnn_mhz) dev.v_nn = *vnn_mhz * to_rad;
  if (omega_b_mhz) dev.omega_b = *omega_b_mhz * to_rad;
  if (omega_r_mhz) dev.omega_r = *omega_r_mhz * to_rad;
  if (omega_r_weak_mhz) dev.omega_r_weak = *omega_r_weak_mhz * to_rad;
  if (spacing_um) dev.spacing_um = *spacing_um;
  dev.validate();
  return dev;
}

json run_config_to_json(const RunConfig& rc) {
  json j{{"command", rc.command},
         {"target", rc.target_key},
         {"depths", rc.depths},
         {"model", rc.model},
         {"sweep_kind", rc.sweep_kind},
         {"samples", rc.samples},
         {"trials", rc.trials},
         {"noise_r", rc.noise_r},
         {"seed", rc.seed},
         {"budget", rc.budget},
         {"budget_per_param", rc.budget_per_param},
         {"restarts", rc.restarts},
         {"jobs", rc.jobs},
         {"schedule_file", rc.schedule_file},
         {"out", rc.out_path}};
  if (rc.vnn_mhz) j["vnn_mhz"] = *rc.vnn_mhz;
  if (rc.omega_b_mhz) j["omega_b_mhz"] = *rc.omega_b_mhz;
  if (rc.omega_r_mhz) j["omega_r_mhz"] = *rc.omega_r_mhz;
  if (rc.omega_r_weak_mhz) j["omega_r_weak_mhz"] = *rc.omega_r_weak_mhz;
  if (rc.spacing_um) j["spacing_um"] = *rc.spacing_um;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig rc;
  rc.command = j.value("command", "");
  rc.target_key = j.value("target", "");
  rc.depths = j.value("depths", std::vector<int>{});
  rc.model = j.value("model", "ideal");
  rc.sweep_kind = j.value("sweep_kind", "depth");
  rc.samples = j.value("samples", 5);
  rc.trials = j.value("trials", 100);
  rc.noise_r = j.value("noise_r", std::vector<double>{0.01});
  rc.seed = j.value("seed", std::uint64_t{0});
  rc.budget = j.value("budget", 0L);
  rc.budget_per_param = j.value("budget_per_param", 0L);
  rc.restarts = j.value("restarts", 5);
  rc.jobs = j.value("jobs", 0);
  rc.schedule_file = j.value("schedule_file", "");
  rc.out_path = j.value("out", "");
  if (j.contains("vnn_mhz")) rc.vnn_mhz = j["vnn_mhz"].get<double>();
  if (j.contains("omega_b_mhz")) rc.omega_b_mhz = j["omega_b_mhz"].get<double>();
  if (j.contains("omega_r_mhz")) rc.omega_r_mhz = j["omega_r_mhz"].get<double>();
  if (j.contains("omega_r_weak_mhz")) rc.omega_r_weak_mhz = j["omega_r_weak_mhz"].get<double>();
  if (j.contains("spacing_um")) rc.spacing_um = j["spacing_um"].get<double>();
  return rc;
}

json opt_result_to_json(const OptResult& res, const RunConfig& rc, int num_qubits) {
  return json{{"format_version", kRecordFormatVersion},
              {"kind", "optimize"},
              {"target", rc.target_key},
              {"num_qubits", num_qubits},
              {"depth", res.best_schedule.depth()},
              {"model", rc.model},
              {"seed", res.seed},
              {"fidelity", res.best_fidelity},
              {"cost", res.best_cost},
              {"angles", res.best_schedule.to_flat()},
              {"restart_fidelities", res.restart_fidelities},
              {"evaluations", res.evaluations_used},
              {"budget_exhausted", res.budget_exhausted},
              {"config", run_config_to_json(rc)}};
}

QaoaSchedule schedule_from_json(const json& j) {
  if (!j.contains("angles")) throw std::invalid_argument("schedule JSON: missing 'angles'");
  const std::vector<double> flat = j["angles"].get<std::vector<double>>();
  if (j.contains("depth") && j["depth"].get<int>() * 5 != static_cast<int>(flat.size()))
    throw std::invalid_argument("schedule JSON: depth does not match angle count");
  return QaoaSchedule::from_flat(flat);
}

namespace {

json fit_to_json(const ExpFit& fit) {
  return json{{"amplitude", fit.amplitude},
              {"lambda", fit.lambda},
              {"correlation", fit.correlation},
              {"points_used", fit.points_used},
              {"points_excluded", fit.points_excluded}};
}

ExpFit fit_from_json(const json& j) {
  ExpFit fit;
  fit.amplitude = j["amplitude"].get<double>();
  fit.lambda = j["lambda"].get<double>();
  fit.correlation = j["correlation"].get<double>();
  fit.points_used = j["points_used"].get<int>();
  fit.points_excluded = j["points_excluded"].get<int>();
  return fit;
}

}  // namespace

json sweep_record_to_json(const SweepRecord& record, const RunConfig& rc) {
  json samples = json::array();
  for (const DepthSample& s : record.samples)
    samples.push_back(json{{"depth", s.depth},
                           {"sample", s.sample_index},
                           {"seed", s.seed},
                           {"fidelity", s.fidelity},
                           {"params", s.params}});
  json noise = json::array();
  for (const NoisePoint& p : record.noise_results)
    noise.push_back(json{{"R", p.magnitude_r},
                         {"mean", p.mean},
                         {"stddev", p.stddev},
                         {"fidelities", p.fidelities}});
  json j{{"format_version", kRecordFormatVersion},
         {"kind", "sweep"},
         {"target", record.target_key},
         {"model", record.model},
         {"master_seed", record.master_seed},
         {"depths", record.depths},
         {"samples_per_depth", record.samples_per_depth},
         {"samples", samples},
         {"noise", noise},
         {"config", run_config_to_json(rc)}};
  j["fit"] = record.fit ? fit_to_json(*record.fit) : json(nullptr);
  return j;
}

SweepRecord sweep_record_from_json(const json& j) {
  SweepRecord record;
  record.target_key = j["target"].get<std::string>();
  record.model = j["model"].get<std::string>();
  record.master_seed = j["master_seed"].get<std::uint64_t>();
  record.depths = j["depths"].get<std::vector<int>>();
  record.samples_per_depth = j["samples_per_depth"].get<int>();
  for (const json& s : j["samples"]) {
    DepthSample d;
    d.depth = s["depth"].get<int>();
    d.sample_index = s["sample"].get<int>();
    d.seed = s["seed"].get<std::uint64_t>();
    d.fidelity = s["fidelity"].get<double>();
    d.params = s["params"].get<std::vector<double>>();
    record.samples.push_back(std::move(d));
  }
  for (const json& p : j["noise"]) {
    NoisePoint np;
    np.magnitude_r = p["R"].get<double>();
    np.mean = p["mean"].get<double>();
    np.stddev = p["stddev"].get<double>();
    np.fidelities = p["fidelities"].get<std::vector<double>>();
    record.noise_results.push_back(std::move(np));
  }
  if (j.contains("fit") && !j["fit"].is_null()) record.fit = fit_from_json(j["fit"]);
  return record;
}

std::string sweep_record_csv(const SweepRecord& record) {
  std::ostringstream out;
  out.precision(17);
  out << "target,depth,sample,seed,fidelity,model,R\n";
  for (const DepthSample& s : record.samples)
    out << record.target_key << ',' << s.depth << ',' << s.sample_index << ',' << s.seed << ','
        << s.fidelity << ',' << record.model << ",0\n";
  const int depth = record.depths.empty() ? 0 : record.depths.front();
  for (const NoisePoint& p : record.noise_results)
    for (std::size_t i = 0; i < p.fidelities.size(); ++i)
      out << record.target_key << ',' << depth << ',' << i << ',' << record.master_seed << ','
          << p.fidelities[i] << ',' << record.model << ',' << p.magnitude_r << '\n';
  return out.str();
}

namespace {

const char* transition_name(Transition t) { return t == Transition::GE ? "GE" : "ER"; }

json device_to_json(const DeviceConfig& d) {
  const double to_hz = 1.0 / (2.0 * M_PI);
  return json{{"num_atoms", d.num_atoms},
              {"spacing_um", d.spacing_um},
              {"v_nn_hz", d.v_nn * to_hz},
              {"omega_b_hz", d.omega_b * to_hz},
              {"omega_r_hz", d.omega_r * to_hz},
              {"omega_r_weak_hz", d.omega_r_weak * to_hz}};
}

}  // namespace

json pulse_sequence_to_json(const PulseSequence& seq) {
  const double to_hz = 1.0 / (2.0 * M_PI);
  json pulses = json::array();
  for (const Pulse& p : seq.pulses)
    pulses.push_back(json{{"atoms", p.atoms},
                          {"transition", transition_name(p.transition)},
                          {"rabi_hz", p.rabi * to_hz},
                          {"detuning_hz", p.detuning * to_hz},
                          {"duration_s", p.duration}});
  return json{{"format_version", kRecordFormatVersion},
              {"kind", "pulse-sequence"},
              {"device", device_to_json(seq.device)},
              {"schedule_hash", seq.schedule_hash},
              {"pulses", pulses},
              {"total_duration_s", seq.total_duration()}};
}

std::string pulse_staircase_csv(const PulseSequence& seq) {
  std::ostringstream out;
  out.precision(17);
  out << "time_s,omega_hz,detuning_hz,transition,atoms\n";
  const double to_hz = 1.0 / (2.0 * M_PI);
  double t = 0.0;
  for (const Pulse& p : seq.pulses) {
    std::string atoms;
    for (std::size_t i = 0; i < p.atoms.size(); ++i)
      atoms += (i ? ";" : "") + std::to_string(p.atoms[i]);
    for (int edge = 0; edge < 2; ++edge) {
      out << t << ',' << p.rabi * to_hz << ',' << p.detuning * to_hz << ','
          << transition_name(p.transition) << ',' << atoms << '\n';
      if (edge == 0) t += p.duration;
    }
  }
  return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    f << content;
    if (!f.good()) throw std::runtime_error("atomic_write: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace qsynth
