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

#include <benchmark/benchmark.h>

#include <complex>
#include <fstream>
#include <random>
#include <sstream>

#include "fbsim/circuit_document.hpp"
#include "fbsim/circuit_runner.hpp"
#include "fbsim/fock.hpp"
#include "fbsim/oracle.hpp"
#include "fbsim/scenarios.hpp"

namespace {

using namespace fbsim;

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

void fill_sector(PureState& state, int modes, int photons, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  OccupationVector occ(static_cast<std::size_t>(modes), 0);
  // A handful of random basis terms is representative of circuit states.
  std::uniform_int_distribution<int> pick(0, modes - 1);
  for (int term = 0; term < 8; ++term) {
    std::fill(occ.begin(), occ.end(), 0);
    for (int p = 0; p < photons; ++p) ++occ[static_cast<std::size_t>(pick(rng))];
    state.add_term(occ, std::complex<double>(gauss(rng), gauss(rng)));
  }
  state.normalize();
}

void BM_ApplyModeUnitary(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  const int photons = static_cast<int>(state.range(1));
  std::mt19937_64 rng(42);
  auto registry = std::make_shared<ModeRegistry>(4);
  registry->add_bin({0, 1.0e14});
  for (int i = 0; i < modes; ++i) {
    registry->add_mode({"m" + std::to_string(i), 0, Polarization::None});
  }
  PureState input(registry);
  fill_sector(input, modes, photons, rng);
  const ModeUnitary u = ModeUnitary::from_matrix(random_unitary(modes, rng));
  for (auto _ : state) {
    PureState out = apply_mode_unitary(input, u);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ApplyModeUnitary)
    ->Args({4, 1})
    ->Args({4, 2})
    ->Args({8, 2})
    ->Args({8, 3})
    ->Args({12, 2})
    ->Args({12, 4});

void BM_TransitionAmplitudeOracle(benchmark::State& state) {
  const int photons = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  const int modes = 6;
  const ModeUnitary u = ModeUnitary::from_matrix(random_unitary(modes, rng));
  OccupationVector in(modes, 0), out(modes, 0);
  for (int p = 0; p < photons; ++p) {
    ++in[static_cast<std::size_t>(p % modes)];
    ++out[static_cast<std::size_t>((p + 1) % modes)];
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(transition_amplitude_oracle(in, out, u));
  }
}
BENCHMARK(BM_TransitionAmplitudeOracle)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void BM_Concurrence(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = std::complex<double>(gauss(rng), gauss(rng));
    v.normalize();
    rho += v * v.adjoint() / 3.0;
  }
  rho = (rho + rho.adjoint().eval()) / 2.0;
  DensityMatrix dm(rho, {"00", "01", "10", "11"});
  for (auto _ : state) {
    benchmark::DoNotOptimize(concurrence(dm));
  }
}
BENCHMARK(BM_Concurrence);

void BM_ErasureScenario(benchmark::State& state) {
  ErasureConfig config;
  config.theta = 0.61;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_erasure(config));
  }
}
BENCHMARK(BM_ErasureScenario);

void BM_RectifierDocument(benchmark::State& state) {
  std::ifstream in(std::string(FBSIM_CIRCUITS_DIR) + "/fig4a_rectifier.json");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const CircuitDocument doc = parse_circuit(buffer.str());
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_document(doc));
  }
}
BENCHMARK(BM_RectifierDocument);

} // namespace

BENCHMARK_MAIN();
