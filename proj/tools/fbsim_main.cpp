// Copyright 2026 The fbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fbsim/circuit_document.hpp"
#include "fbsim/circuit_runner.hpp"
#include "fbsim/device_physics.hpp"
#include "fbsim/errors.hpp"
#include "fbsim/fock.hpp"
#include "fbsim/oracle.hpp"
#include "fbsim/scenarios.hpp"
#include "fbsim/version.hpp"

namespace {

using Json = nlohmann::ordered_json;
using fbsim::EvaluationError;
using fbsim::ValidationError;

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw EvaluationError("cannot write output file '" + out_path + "'");
  }
  out << text;
}

std::string format_double(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

/// Haar-ish random unitary: QR of a complex Gaussian matrix with the R
/// diagonal phases folded back in.
Eigen::MatrixXcd random_unitary(int dimension, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(dimension, dimension);
  for (int r = 0; r < dimension; ++r) {
    for (int c = 0; c < dimension; ++c) {
      g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dimension; ++i) {
    const std::complex<double> d = r(i, i);
    q.col(i) *= std::abs(d) == 0.0 ? 1.0 : d / std::abs(d);
  }
  return q;
}

void enumerate_occupations(int modes, int photons, fbsim::OccupationVector& current,
                           std::vector<fbsim::OccupationVector>& out) {
  if (static_cast<int>(current.size()) == modes - 1) {
    current.push_back(photons);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int n = 0; n <= photons; ++n) {
    current.push_back(n);
    enumerate_occupations(modes, photons - n, current, out);
    current.pop_back();
  }
}

std::vector<fbsim::OccupationVector> occupations_with(int modes, int photons) {
  std::vector<fbsim::OccupationVector> out;
  fbsim::OccupationVector current;
  enumerate_occupations(modes, photons, current, out);
  return out;
}

struct OracleReport {
  double max_abs_difference = 0.0;
  long comparisons = 0;
  Json entries = Json::array();
};

int run_oracle_on_document(const std::string& text, double tolerance, bool check,
                           const std::string& output, const std::string& out_path) {
  fbsim::CircuitDocument doc = fbsim::parse_circuit(text);
  fbsim::CompiledCircuit circuit = fbsim::compile_document(doc);

  fbsim::PureState state = circuit.initial_state;
  fbsim::ModeUnitary total = fbsim::ModeUnitary::identity(circuit.registry->size());
  for (const auto& u : circuit.unitaries) {
    state = fbsim::apply_mode_unitary(state, u);
    total = fbsim::compose(u, total);
  }

  std::vector<std::string> names(static_cast<std::size_t>(circuit.registry->size()));
  for (int i = 0; i < circuit.registry->size(); ++i) {
    names[static_cast<std::size_t>(i)] = circuit.registry->mode(i).label();
  }
  for (const auto& [name, index] : circuit.mode_index) {
    names[static_cast<std::size_t>(index)] = name;
  }

  // Candidate outputs: every occupation in any photon-number sector present
  // in the input.
  std::vector<int> sectors;
  for (const auto& [occ, amp] : circuit.initial_state.terms()) {
    const int n = fbsim::total_photons(occ);
    if (std::find(sectors.begin(), sectors.end(), n) == sectors.end()) sectors.push_back(n);
  }
  OracleReport report;
  for (int sector : sectors) {
    for (const auto& out_occ : occupations_with(circuit.registry->size(), sector)) {
      std::complex<double> predicted = 0.0;
      for (const auto& [in_occ, amp] : circuit.initial_state.terms()) {
        predicted += amp * fbsim::transition_amplitude_oracle(in_occ, out_occ, total);
      }
      const std::complex<double> simulated = state.amplitude(out_occ);
      const double diff = std::abs(predicted - simulated);
      ++report.comparisons;
      report.max_abs_difference = std::max(report.max_abs_difference, diff);
      if (std::abs(predicted) > 1e-13 || std::abs(simulated) > 1e-13) {
        Json occupation = Json::object();
        for (std::size_t i = 0; i < out_occ.size(); ++i) {
          if (out_occ[i] > 0) occupation[names[i]] = out_occ[i];
        }
        report.entries.push_back(
            Json{{"occupation", occupation},
                 {"simulator", Json::array({simulated.real(), simulated.imag()})},
                 {"oracle", Json::array({predicted.real(), predicted.imag()})},
                 {"abs_difference", diff}});
      }
    }
  }

  const bool pass = report.max_abs_difference <= tolerance;
  if (output == "json") {
    Json root;
    root["tool"] = Json{{"name", fbsim::kToolName}, {"version", fbsim::kToolVersion}};
    root["mode"] = "document";
    root["comparisons"] = report.comparisons;
    root["max_abs_difference"] = report.max_abs_difference;
    root["tolerance"] = tolerance;
    root["pass"] = pass;
    root["entries"] = std::move(report.entries);
    emit(root.dump(2) + "\n", out_path);
  } else {
    std::ostringstream csv;
    csv << "kind,key,value\n";
    csv << "summary,comparisons," << report.comparisons << "\n";
    csv << "summary,max_abs_difference," << format_double(report.max_abs_difference) << "\n";
    csv << "summary,tolerance," << format_double(tolerance) << "\n";
    csv << "summary,pass," << (pass ? 1 : 0) << "\n";
    emit(csv.str(), out_path);
  }
  if (check && !pass) {
    std::cerr << "oracle mismatch: max |simulator - oracle| = " << report.max_abs_difference
              << " exceeds tolerance " << tolerance << "\n";
    return 2;
  }
  return 0;
}

int run_oracle_random(int modes, int photons, int trials, std::uint64_t seed, double tolerance,
                      bool check, const std::string& output, const std::string& out_path) {
  if (modes < 2 || modes > 8) throw ValidationError("--random-modes must lie in [2, 8]");
  if (photons < 1 || photons > 4) throw ValidationError("--random-photons must lie in [1, 4]");
  if (trials < 1) throw ValidationError("--trials must be positive");

  std::mt19937_64 rng(seed);
  auto registry = std::make_shared<fbsim::ModeRegistry>(4);
  registry->add_bin({0, 1.0e14});
  for (int i = 0; i < modes; ++i) {
    registry->add_mode({"m" + std::to_string(i), 0, fbsim::Polarization::None});
  }

  std::vector<fbsim::OccupationVector> inputs;
  for (int n = 1; n <= photons; ++n) {
    for (const auto& occ : occupations_with(modes, n)) inputs.push_back(occ);
  }

  double worst = 0.0;
  long comparisons = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const fbsim::ModeUnitary u = fbsim::ModeUnitary::from_matrix(random_unitary(modes, rng));
    for (const auto& in_occ : inputs) {
      fbsim::PureState input = fbsim::PureState::single_term(registry, in_occ);
      fbsim::PureState evolved = fbsim::apply_mode_unitary(input, u);
      for (const auto& out_occ : occupations_with(modes, fbsim::total_photons(in_occ))) {
        const std::complex<double> predicted = fbsim::transition_amplitude_oracle(in_occ, out_occ, u);
        const double diff = std::abs(predicted - evolved.amplitude(out_occ));
        worst = std::max(worst, diff);
        ++comparisons;
      }
    }
  }

  const bool pass = worst <= tolerance;
  if (output == "json") {
    Json root;
    root["tool"] = Json{{"name", fbsim::kToolName}, {"version", fbsim::kToolVersion}};
    root["mode"] = "random";
    root["seed"] = seed;
    root["modes"] = modes;
    root["photons"] = photons;
    root["trials"] = trials;
    root["comparisons"] = comparisons;
    root["max_abs_difference"] = worst;
    root["tolerance"] = tolerance;
    root["pass"] = pass;
    emit(root.dump(2) + "\n", out_path);
  } else {
    std::ostringstream csv;
    csv << "kind,key,value\n";
    csv << "summary,comparisons," << comparisons << "\n";
    csv << "summary,max_abs_difference," << format_double(worst) << "\n";
    csv << "summary,pass," << (pass ? 1 : 0) << "\n";
    emit(csv.str(), out_path);
  }
  if (check && !pass) {
    std::cerr << "oracle mismatch: max |simulator - oracle| = " << worst << " exceeds tolerance "
              << tolerance << "\n";
    return 2;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"fbsim: few-photon frequency-bin circuit simulator with an acousto-optic "
               "frequency beam splitter"};
  app.require_subcommand(1);
  app.fallthrough(); // global --output/--out/--seed may follow the subcommand

  std::string output = "json";
  std::string out_path;
  std::uint64_t seed = 20260808;
  app.add_option("--output", output, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "Write output to this file instead of stdout");
  app.add_option("--seed", seed, "Seed for randomized utilities (oracle --trials)");

  // run
  auto* run_cmd = app.add_subcommand("run", "Evaluate a circuit document");
  std::string run_file;
  run_cmd->add_option("file", run_file, "Circuit document (JSON)")->required();

  // scenario
  auto* scenario_cmd = app.add_subcommand("scenario", "Run a built-in scenario");
  std::string scenario_name;
  scenario_cmd
      ->add_option("name", scenario_name,
                   "One of erasure, hom, biexciton_fbs, biexciton_fbs_prime")
      ->required()
      ->check(CLI::IsMember({"erasure", "hom", "biexciton_fbs", "biexciton_fbs_prime"}));
  double theta = -1.0; // scenario-dependent default filled below
  double omega1 = 3.75e14;
  double omega2 = 3.75e14 - 1.0e9;
  bool frequency_blind = true;
  std::string convention = "plus_i";
  double base = 3.75e14;
  double delta = 8.0e8;
  double xi = 1.0e11;
  double nu = 0.0;
  double alpha = 0.8;
  double absorption = 0.0005;
  double efficiency_u = 1.0, efficiency_v = 1.0, dark_u = 0.0, dark_v = 0.0;
  scenario_cmd->add_option("--theta", theta, "AOM interaction angle in radians");
  scenario_cmd->add_option("--omega1-hz", omega1, "First emitter frequency (erasure/hom)");
  scenario_cmd->add_option("--omega2-hz", omega2, "Second emitter frequency (erasure/hom)");
  scenario_cmd->add_flag("--frequency-blind,!--no-frequency-blind", frequency_blind,
                         "Detectors cannot resolve frequency bins (erasure/hom)");
  scenario_cmd->add_option("--convention", convention, "Coupler phase convention")
      ->check(CLI::IsMember({"plus_i", "real"}));
  scenario_cmd->add_option("--base-hz", base, "Cascade base frequency omega2 (biexciton)");
  scenario_cmd->add_option("--delta-hz", delta, "Doublet splitting (biexciton)");
  scenario_cmd->add_option("--xi-hz", xi, "Biexciton shift (biexciton)");
  scenario_cmd->add_option("--nu", nu, "Cascade phase in radians (biexciton)");
  scenario_cmd->add_option("--alpha", alpha, "Per-pass shift efficiency (biexciton_fbs_prime)");
  scenario_cmd->add_option("--absorption", absorption, "Per-pass absorption (biexciton_fbs_prime)");
  scenario_cmd->add_option("--efficiency-u", efficiency_u, "Herald U efficiency");
  scenario_cmd->add_option("--efficiency-v", efficiency_v, "Herald V efficiency");
  scenario_cmd->add_option("--dark-u", dark_u, "Herald U dark count probability");
  scenario_cmd->add_option("--dark-v", dark_v, "Herald V dark count probability");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Scan one document parameter over a range");
  std::string sweep_file, sweep_param;
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_steps = 0;
  std::vector<std::string> sweep_metrics;
  sweep_cmd->add_option("file", sweep_file, "Circuit document (JSON)")->required();
  sweep_cmd->add_option("--param", sweep_param, "Parameter path, e.g. components[1].theta")
      ->required();
  sweep_cmd->add_option("--from", sweep_from, "Range start")->required();
  sweep_cmd->add_option("--to", sweep_to, "Range end")->required();
  sweep_cmd->add_option("--steps", sweep_steps, "Number of points (>= 2)")->required();
  sweep_cmd->add_option("--metric", sweep_metrics,
                        "Metric name to record (repeatable; default: all document metrics)");

  // device
  auto* device_cmd = app.add_subcommand("device", "Acousto-optic device physics");
  std::string material_name;
  std::string materials_path;
  double length = 1.0e-3;
  double intensity = 1.0e7;
  double frequency_hz = 3.75e14;
  double target_theta = 0.0;
  device_cmd->add_option("material", material_name, "Material name from the table")->required();
  device_cmd->add_option("--materials", materials_path, "Material table JSON file (default: built-in)");
  device_cmd->add_option("--length", length, "Interaction length in meters");
  device_cmd->add_option("--intensity", intensity, "Acoustic intensity in W/m^2");
  device_cmd->add_option("--frequency-hz", frequency_hz, "Optical frequency in Hz");
  device_cmd->add_option("--target-theta", target_theta,
                         "Also report the intensity needed for this interaction angle");

  // oracle
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Compare the simulator against the permanent-based transition amplitude oracle");
  std::string oracle_file;
  bool oracle_check = false;
  double oracle_tolerance = 1e-10;
  int random_modes = 5, random_photons = 2, trials = 0;
  oracle_cmd->add_option("file", oracle_file, "Circuit document (omit when using --trials)");
  oracle_cmd->add_flag("--check", oracle_check, "Exit with status 2 when the diff exceeds tolerance");
  oracle_cmd->add_option("--tolerance", oracle_tolerance, "Comparison tolerance");
  oracle_cmd->add_option("--random-modes", random_modes, "Random mode count (random self-test)");
  oracle_cmd->add_option("--random-photons", random_photons, "Max photons (random self-test)");
  oracle_cmd->add_option("--trials", trials, "Random-unitary trials (enables the random self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) {
      fbsim::CircuitDocument doc = fbsim::parse_circuit(read_file(run_file));
      fbsim::ResultDocument result = fbsim::run_document(doc);
      emit(output == "json" ? fbsim::serialize_result_json(result)
                            : fbsim::serialize_result_csv(result),
           out_path);
      return 0;
    }

    if (scenario_cmd->parsed()) {
      fbsim::ScenarioResult result;
      if (scenario_name == "erasure" || scenario_name == "hom") {
        fbsim::ErasureConfig config;
        config.omega1_hz = omega1;
        config.omega2_hz = omega2;
        config.theta = theta < 0.0 ? kPi / 4.0 : theta;
        config.frequency_blind = frequency_blind;
        config.convention = convention == "real" ? fbsim::CouplingConvention::RealCross
                                                 : fbsim::CouplingConvention::ImaginaryCross;
        result = scenario_name == "erasure" ? fbsim::run_erasure(config) : fbsim::run_hom(config);
      } else {
        fbsim::BiexcitonConfig config = fbsim::BiexcitonConfig::from_splittings(base, delta, xi);
        config.nu = nu;
        config.theta = theta < 0.0 ? kPi / 2.0 : theta;
        config.shift_efficiency = alpha;
        config.absorption = absorption;
        config.detector_efficiency_u = efficiency_u;
        config.detector_efficiency_v = efficiency_v;
        config.detector_dark_u = dark_u;
        config.detector_dark_v = dark_v;
        result = scenario_name == "biexciton_fbs" ? fbsim::run_biexciton_fbs(config)
                                                  : fbsim::run_biexciton_fbs_prime(config);
      }
      emit(output == "json" ? fbsim::serialize_scenario_json(scenario_name, result)
                            : fbsim::serialize_scenario_csv(scenario_name, result),
           out_path);
      return 0;
    }

    if (sweep_cmd->parsed()) {
      fbsim::CircuitDocument doc = fbsim::parse_circuit(read_file(sweep_file));
      fbsim::SweepSpec spec{sweep_param, sweep_from, sweep_to, sweep_steps, sweep_metrics};
      fbsim::SweepResult result = fbsim::run_sweep(doc, spec);
      emit(output == "json" ? fbsim::serialize_sweep_json(result)
                            : fbsim::serialize_sweep_csv(result),
           out_path);
      return 0;
    }

    if (device_cmd->parsed()) {
      const fbsim::MaterialTable table = materials_path.empty()
                                             ? fbsim::MaterialTable::builtin()
                                             : fbsim::MaterialTable::from_json(read_file(materials_path));
      const fbsim::Material& material = table.find(material_name);
      const double omega = 2.0 * kPi * frequency_hz; // CLI takes Hz; formulas use rad/s
      const fbsim::AcousticDrive drive{intensity, 0.0};
      const fbsim::AOMGeometry geometry{length};
      const double eta = fbsim::coupling_eta(material.crystal, drive, omega);
      const double r = fbsim::interaction_constant(material.crystal, drive, geometry);
      const double theta_device = eta * length;
      const double efficiency = fbsim::conversion_efficiency(theta_device);
      double needed = 0.0;
      if (target_theta > 0.0) {
        needed = fbsim::required_intensity(target_theta, material.crystal, geometry, omega);
      }
      if (output == "json") {
        Json root;
        root["tool"] = Json{{"name", fbsim::kToolName}, {"version", fbsim::kToolVersion}};
        root["material"] = Json{{"name", material.name},
                                {"refractive_index", material.crystal.refractive_index},
                                {"photoelastic_constant", material.crystal.photoelastic_constant},
                                {"density_kg_m3", material.crystal.density_kg_m3},
                                {"sound_speed_m_s", material.crystal.sound_speed_m_s},
                                {"citation", material.citation}};
        root["inputs"] = Json{{"interaction_length_m", length},
                              {"acoustic_intensity_w_m2", intensity},
                              {"optical_frequency_hz", frequency_hz}};
        root["coupling_eta_per_m"] = eta;
        root["interaction_r_s"] = r;
        root["theta_rad"] = theta_device;
        root["conversion_efficiency"] = efficiency;
        if (target_theta > 0.0) {
          root["target_theta_rad"] = target_theta;
          root["required_intensity_w_m2"] = needed;
        }
        emit(root.dump(2) + "\n", out_path);
      } else {
        std::ostringstream csv;
        csv << "key,value\n";
        csv << "material," << material.name << "\n";
        csv << "interaction_length_m," << format_double(length) << "\n";
        csv << "acoustic_intensity_w_m2," << format_double(intensity) << "\n";
        csv << "optical_frequency_hz," << format_double(frequency_hz) << "\n";
        csv << "coupling_eta_per_m," << format_double(eta) << "\n";
        csv << "interaction_r_s," << format_double(r) << "\n";
        csv << "theta_rad," << format_double(theta_device) << "\n";
        csv << "conversion_efficiency," << format_double(efficiency) << "\n";
        if (target_theta > 0.0) {
          csv << "required_intensity_w_m2," << format_double(needed) << "\n";
        }
        emit(csv.str(), out_path);
      }
      return 0;
    }

    if (oracle_cmd->parsed()) {
      if (trials > 0) {
        return run_oracle_random(random_modes, random_photons, trials, seed, oracle_tolerance,
                                 oracle_check, output, out_path);
      }
      if (oracle_file.empty()) {
        throw ValidationError("oracle requires a circuit document or --trials for the random self-test");
      }
      return run_oracle_on_document(read_file(oracle_file), oracle_tolerance, oracle_check, output,
                                    out_path);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
