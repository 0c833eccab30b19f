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

#include "quepp/pauli.h"

#include <bit>
#include <sstream>

#include "quepp/errors.h"

namespace quepp {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void check_same_size(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    std::ostringstream ss;
    ss << "Pauli size mismatch: " << a.num_qubits() << " vs " << b.num_qubits();
    throw DimensionError(ss.str());
  }
}

// Sum over qubits of the per-qubit phase exponent of a_q * b_q, mod 4.
int phase_exponent(const PauliString& a, const PauliString& b) {
  auto ax = a.x_words();
  auto az = a.z_words();
  auto bx = b.x_words();
  auto bz = b.z_words();
  int k = 0;
  for (std::size_t w = 0; w < ax.size(); ++w) {
    const std::uint64_t a_x = ax[w] & ~az[w], a_y = ax[w] & az[w], a_z = ~ax[w] & az[w];
    const std::uint64_t b_x = bx[w] & ~bz[w], b_y = bx[w] & bz[w], b_z = ~bx[w] & bz[w];
    const std::uint64_t plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x);
    const std::uint64_t minus = (a_x & b_z) | (a_y & b_x) | (a_z & b_y);
    k += std::popcount(plus) - std::popcount(minus);
  }
  return ((k % 4) + 4) % 4;
}

}  // namespace

PauliString::PauliString(std::size_t num_qubits)
    : num_qubits_(num_qubits), num_words_(words_for(num_qubits)), words_(2 * words_for(num_qubits), 0) {
  if (num_qubits == 0) throw DimensionError("PauliString needs at least one qubit");
}

PauliString PauliString::parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw std::invalid_argument("empty Pauli string");
  PauliString p(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) p.set_letter(q, text[q]);
  p.negative_ = negative;
  return p;
}

PauliString PauliString::single(std::size_t num_qubits, std::size_t q, char letter) {
  if (q >= num_qubits) throw IndexError("qubit " + std::to_string(q) + " out of range");
  PauliString p(num_qubits);
  p.set_letter(q, letter);
  return p;
}

void PauliString::set(std::size_t q, bool x, bool z) {
  if (q >= num_qubits_) throw IndexError("qubit " + std::to_string(q) + " out of range");
  const std::uint64_t bit = std::uint64_t{1} << (q & 63);
  auto& xw = words_[q >> 6];
  auto& zw = words_[num_words_ + (q >> 6)];
  xw = x ? (xw | bit) : (xw & ~bit);
  zw = z ? (zw | bit) : (zw & ~bit);
}

char PauliString::letter(std::size_t q) const {
  static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  return kLetters[static_cast<int>(x(q)) | (static_cast<int>(z(q)) << 1)];
}

void PauliString::set_letter(std::size_t q, char letter) {
  switch (letter) {
    case 'I':
    case '_':
      set(q, false, false);
      break;
    case 'X':
      set(q, true, false);
      break;
    case 'Y':
      set(q, true, true);
      break;
    case 'Z':
      set(q, false, true);
      break;
    default:
      throw std::invalid_argument(std::string("bad Pauli letter '") + letter + "'");
  }
}

bool PauliString::is_identity() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

bool PauliString::has_x() const {
  for (auto w : x_words())
    if (w) return true;
  return false;
}

bool PauliString::has_z() const {
  for (auto w : z_words())
    if (w) return true;
  return false;
}

std::size_t PauliString::weight() const {
  std::size_t total = 0;
  for (std::size_t w = 0; w < num_words_; ++w) total += std::popcount(words_[w] | words_[num_words_ + w]);
  return total;
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < num_words_; ++w) {
    std::uint64_t m = words_[w] | words_[num_words_ + w];
    while (m) {
      out.push_back(w * 64 + std::countr_zero(m));
      m &= m - 1;
    }
  }
  return out;
}

PauliString PauliString::unsigned_copy() const {
  PauliString p = *this;
  p.negative_ = false;
  return p;
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(num_qubits_ + 1);
  s.push_back(negative_ ? '-' : '+');
  for (std::size_t q = 0; q < num_qubits_; ++q) s.push_back(letter(q));
  return s;
}

std::strong_ordering PauliString::operator<=>(const PauliString& other) const {
  if (auto c = num_qubits_ <=> other.num_qubits_; c != 0) return c;
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (auto c = words_[i] <=> other.words_[i]; c != 0) return c;
  return negative_ <=> other.negative_;
}

std::size_t gate_arity(GateKind kind) { return (kind == GateKind::kCX || kind == GateKind::kCZ) ? 2 : 1; }

std::string_view gate_mnemonic(GateKind kind) {
  switch (kind) {
    case GateKind::kH: return "h";
    case GateKind::kS: return "s";
    case GateKind::kSdg: return "sdg";
    case GateKind::kX: return "x";
    case GateKind::kY: return "y";
    case GateKind::kZ: return "z";
    case GateKind::kCX: return "cx";
    case GateKind::kCZ: return "cz";
    case GateKind::kSX: return "sx";
    case GateKind::kSXdg: return "sxdg";
  }
  throw InternalError("unknown gate kind");
}

GateKind gate_inverse(GateKind kind) {
  switch (kind) {
    case GateKind::kS: return GateKind::kSdg;
    case GateKind::kSdg: return GateKind::kS;
    case GateKind::kSX: return GateKind::kSXdg;
    case GateKind::kSXdg: return GateKind::kSX;
    default: return kind;
  }
}

bool commutes(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  auto ax = a.x_words();
  auto az = a.z_words();
  auto bx = b.x_words();
  auto bz = b.z_words();
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < ax.size(); ++w) acc ^= (ax[w] & bz[w]) ^ (az[w] & bx[w]);
  return (std::popcount(acc) & 1) == 0;
}

void conjugate_in_place(PauliString& p, const CliffordGate& g) {
  const std::size_t n = p.num_qubits();
  const std::size_t a = g.qubits[0];
  if (a >= n) throw IndexError("gate qubit " + std::to_string(a) + " out of range");
  const bool xa = p.x(a), za = p.z(a);
  switch (g.kind) {
    case GateKind::kH:  // X <-> Z, Y -> -Y
      if (xa && za) p.flip_sign();
      p.set(a, za, xa);
      return;
    case GateKind::kS:  // X -> -Y, Y -> X
      if (xa && !za) p.flip_sign();
      p.set(a, xa, za != xa);
      return;
    case GateKind::kSdg:  // X -> Y, Y -> -X
      if (xa && za) p.flip_sign();
      p.set(a, xa, za != xa);
      return;
    case GateKind::kX:
      if (za) p.flip_sign();
      return;
    case GateKind::kY:
      if (xa != za) p.flip_sign();
      return;
    case GateKind::kZ:
      if (xa) p.flip_sign();
      return;
    case GateKind::kSX:  // Z -> Y, Y -> -Z
      if (xa && za) p.flip_sign();
      p.set(a, xa != za, za);
      return;
    case GateKind::kSXdg:  // Z -> -Y, Y -> Z
      if (za && !xa) p.flip_sign();
      p.set(a, xa != za, za);
      return;
    case GateKind::kCX:
    case GateKind::kCZ:
      break;
  }
  const std::size_t b = g.qubits[1];
  if (b >= n) throw IndexError("gate qubit " + std::to_string(b) + " out of range");
  if (a == b) throw PreconditionError("two-qubit gate on a repeated qubit");
  const bool xb = p.x(b), zb = p.z(b);
  if (g.kind == GateKind::kCX) {
    // X_c -> X_c X_t, Z_t -> Z_c Z_t.
    if (xa && zb && (xb == za)) p.flip_sign();
    p.set(a, xa, za != zb);
    p.set(b, xb != xa, zb);
  } else {
    // X_a -> X_a Z_b, X_b -> Z_a X_b.
    if (xa && xb && (za != zb)) p.flip_sign();
    p.set(a, xa, za != xb);
    p.set(b, xb, zb != xa);
  }
}

PauliString conjugate_by_clifford(const PauliString& p, const CliffordGate& g) {
  PauliString out = p;
  conjugate_in_place(out, g);
  return out;
}

int product_phase(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  return phase_exponent(a, b);
}

PauliString multiply_hermitian(const PauliString& a, const PauliString& b) {
  const int k = product_phase(a, b);
  if (k & 1) throw InternalError("product of anticommuting Paulis is anti-Hermitian");
  PauliString out = a;
  auto ox = out.x_words();
  auto oz = out.z_words();
  auto bx = b.x_words();
  auto bz = b.z_words();
  for (std::size_t w = 0; w < ox.size(); ++w) {
    ox[w] ^= bx[w];
    oz[w] ^= bz[w];
  }
  out.set_negative((a.negative() != b.negative()) != (k == 2));
  return out;
}

void multiply_by_generator_in_place(PauliString& p, const PauliString& gen) {
  check_same_size(p, gen);
  const int k = (1 + phase_exponent(gen, p)) % 4;
  if (k & 1) throw PreconditionError("multiply_by_generator requires anticommuting operands");
  auto px = p.x_words();
  auto pz = p.z_words();
  auto gx = gen.x_words();
  auto gz = gen.z_words();
  for (std::size_t w = 0; w < px.size(); ++w) {
    px[w] ^= gx[w];
    pz[w] ^= gz[w];
  }
  p.set_negative((p.negative() != gen.negative()) != (k == 2));
}

PauliString multiply_by_generator(const PauliString& p, const PauliString& gen) {
  PauliString out = p;
  multiply_by_generator_in_place(out, gen);
  return out;
}

bool is_z_diagonal(const PauliString& p) { return !p.has_x(); }

int expectation_on_stabilizer_input(const PauliString& p, InputKind input) {
  const bool off_diagonal = input == InputKind::kAllZero ? p.has_x() : p.has_z();
  return off_diagonal ? 0 : p.sign();
}

}  // namespace quepp
