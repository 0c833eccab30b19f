// Copyright 2026 The QuEPP Authors
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

#include "quepp/statevector.h"

#include <bit>
#include <cmath>

#include "quepp/errors.h"

namespace quepp {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

std::uint64_t low_mask(const PauliString& p, bool z) {
  auto words = z ? p.z_words() : p.x_words();
  return words.empty() ? 0 : words[0];
}

// i^k for k mod 4.
cd ipow(unsigned k) {
  switch (k & 3U) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits, InputKind input) : num_qubits_(num_qubits) {
  if (num_qubits == 0) throw DimensionError("state needs at least one qubit");
  if (num_qubits > 30) throw CapabilityError("dense state limited to 30 qubits");
  const std::size_t dim = std::size_t{1} << num_qubits;
  if (input == InputKind::kAllZero) {
    amp_.assign(dim, cd{0.0, 0.0});
    amp_[0] = 1.0;
  } else {
    amp_.assign(dim, cd{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
  }
}

void StateVector::apply_1q(std::size_t q, const cd (&m)[2][2]) {
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t base = 0; base < amp_.size(); base += 2 * bit)
    for (std::size_t i = base; i < base + bit; ++i) {
      const cd a = amp_[i], b = amp_[i | bit];
      amp_[i] = m[0][0] * a + m[0][1] * b;
      amp_[i | bit] = m[1][0] * a + m[1][1] * b;
    }
}

void StateVector::apply_letter(std::size_t q, char letter) {
  const std::size_t bit = std::size_t{1} << q;
  switch (letter) {
    case 'X':
      for (std::size_t base = 0; base < amp_.size(); base += 2 * bit)
        for (std::size_t i = base; i < base + bit; ++i) std::swap(amp_[i], amp_[i | bit]);
      break;
    case 'Y':
      for (std::size_t base = 0; base < amp_.size(); base += 2 * bit)
        for (std::size_t i = base; i < base + bit; ++i) {
          const cd a = amp_[i], b = amp_[i | bit];
          amp_[i] = -kI * b;
          amp_[i | bit] = kI * a;
        }
      break;
    case 'Z':
      for (std::size_t base = bit; base < amp_.size(); base += 2 * bit)
        for (std::size_t i = base; i < base + bit; ++i) amp_[i] = -amp_[i];
      break;
    default:
      break;
  }
}

void StateVector::apply_clifford(const CliffordGate& g) {
  const std::size_t a = g.qubits[0];
  const std::size_t b = g.qubits[1];
  if (a >= num_qubits_ || (g.arity() == 2 && (b >= num_qubits_ || a == b))) throw IndexError("gate qubit out of range");
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::kH: {
      const cd m[2][2] = {{r, r}, {r, -r}};
      apply_1q(a, m);
      break;
    }
    case GateKind::kS: {
      const std::size_t bit = std::size_t{1} << a;
      for (std::size_t i = 0; i < amp_.size(); ++i)
        if (i & bit) amp_[i] *= kI;
      break;
    }
    case GateKind::kSdg: {
      const std::size_t bit = std::size_t{1} << a;
      for (std::size_t i = 0; i < amp_.size(); ++i)
        if (i & bit) amp_[i] *= -kI;
      break;
    }
    case GateKind::kX: apply_letter(a, 'X'); break;
    case GateKind::kY: apply_letter(a, 'Y'); break;
    case GateKind::kZ: apply_letter(a, 'Z'); break;
    case GateKind::kSX: {
      const cd m[2][2] = {{cd(0.5, 0.5), cd(0.5, -0.5)}, {cd(0.5, -0.5), cd(0.5, 0.5)}};
      apply_1q(a, m);
      break;
    }
    case GateKind::kSXdg: {
      const cd m[2][2] = {{cd(0.5, -0.5), cd(0.5, 0.5)}, {cd(0.5, 0.5), cd(0.5, -0.5)}};
      apply_1q(a, m);
      break;
    }
    case GateKind::kCX: {
      const std::size_t cb = std::size_t{1} << a, tb = std::size_t{1} << b;
      for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
      break;
    }
    case GateKind::kCZ: {
      const std::size_t m = (std::size_t{1} << a) | (std::size_t{1} << b);
      for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & m) == m) amp_[i] = -amp_[i];
      break;
    }
  }
}

void StateVector::apply_pauli(const PauliString& p) {
  if (p.num_qubits() != num_qubits_) throw DimensionError("Pauli size does not match state");
  const std::uint64_t x = low_mask(p, false), z = low_mask(p, true);
  const cd base = ipow(static_cast<unsigned>(std::popcount(x & z))) * (p.negative() ? -1.0 : 1.0);
  std::vector<cd> out(amp_.size());
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const double s = (std::popcount(i & z) & 1) ? -1.0 : 1.0;
    out[i ^ x] = base * s * amp_[i];
  }
  amp_.swap(out);
}

void StateVector::apply_rotation(const Rotation& r) {
  if (r.generator.num_qubits() != num_qubits_) throw DimensionError("rotation size does not match state");
  const std::uint64_t x = low_mask(r.generator, false), z = low_mask(r.generator, true);
  const cd base = ipow(static_cast<unsigned>(std::popcount(x & z))) * (r.generator.negative() ? -1.0 : 1.0);
  const double c = std::cos(r.angle / 2), s = std::sin(r.angle / 2);
  // psi' = c psi - i s P psi, with P|i> = base (-1)^{|i & z|} |i ^ x>.
  auto phase = [&](std::size_t i) { return base * ((std::popcount(i & z) & 1) ? -1.0 : 1.0); };
  if (x == 0) {
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] *= c - kI * s * phase(i);
    return;
  }
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const std::size_t j = i ^ x;
    if (j < i) continue;
    const cd ai = amp_[i], aj = amp_[j];
    // component at j receives phase(i) * ai, component at i receives phase(j) * aj
    amp_[i] = c * ai - kI * s * phase(j) * aj;
    amp_[j] = c * aj - kI * s * phase(i) * ai;
  }
}

void StateVector::apply(const GateOp& op) {
  if (const auto* g = std::get_if<CliffordGate>(&op))
    apply_clifford(*g);
  else
    apply_rotation(std::get<Rotation>(op));
}

double StateVector::expectation(const PauliString& p) const {
  if (p.num_qubits() != num_qubits_) throw DimensionError("Pauli size does not match state");
  const std::uint64_t x = low_mask(p, false), z = low_mask(p, true);
  const cd base = ipow(static_cast<unsigned>(std::popcount(x & z))) * (p.negative() ? -1.0 : 1.0);
  cd total = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const double s = (std::popcount(i & z) & 1) ? -1.0 : 1.0;
    total += std::conj(amp_[i ^ x]) * base * s * amp_[i];
  }
  return total.real();
}

double StateVector::norm_squared() const {
  double t = 0.0;
  for (const auto& a : amp_) t += std::norm(a);
  return t;
}

double statevector_expectation(const Circuit& circuit, const PauliString& observable) {
  StateVector psi(circuit.num_qubits(), circuit.input());
  for (const auto& op : circuit.ops()) psi.apply(op);
  return psi.expectation(observable);
}

}  // namespace quepp
