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

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace quepp {

/// Product-state inputs whose Pauli expectations are exactly 0 or +-1.
enum class InputKind : std::uint8_t { kAllZero, kAllPlus };

/// A Hermitian n-qubit Pauli operator with sign +-1.
///
/// Stored in symplectic form: qubit q carries bits (x_q, z_q) with
/// (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z. Bits are packed into 64-bit words;
/// x words come first, then z words, in one buffer.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t num_qubits);

  /// Parses "+XIZY", "-ZZ" or "XY" (leading sign optional, '_' means I).
  /// Qubit 0 is the leftmost letter.
  static PauliString parse(std::string_view text);
  /// A single non-identity letter on qubit `q`, identity elsewhere.
  static PauliString single(std::size_t num_qubits, std::size_t q, char letter);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t num_words() const { return num_words_; }

  bool x(std::size_t q) const { return (words_[q >> 6] >> (q & 63)) & 1U; }
  bool z(std::size_t q) const { return (words_[num_words_ + (q >> 6)] >> (q & 63)) & 1U; }
  void set(std::size_t q, bool x, bool z);
  /// One of 'I', 'X', 'Y', 'Z'.
  char letter(std::size_t q) const;
  void set_letter(std::size_t q, char letter);

  bool negative() const { return negative_; }
  int sign() const { return negative_ ? -1 : 1; }
  void set_negative(bool negative) { negative_ = negative; }
  void flip_sign() { negative_ = !negative_; }

  /// True when the operator part is I (the sign is ignored).
  bool is_identity() const;
  bool has_x() const;
  bool has_z() const;
  std::size_t weight() const;
  /// Qubits on which the operator acts non-trivially, ascending.
  std::vector<std::size_t> support() const;

  std::span<std::uint64_t> x_words() { return {words_.data(), num_words_}; }
  std::span<std::uint64_t> z_words() { return {words_.data() + num_words_, num_words_}; }
  std::span<const std::uint64_t> x_words() const { return {words_.data(), num_words_}; }
  std::span<const std::uint64_t> z_words() const { return {words_.data() + num_words_, num_words_}; }

  /// Same operator with sign +1.
  PauliString unsigned_copy() const;

  /// Sign prefix plus one letter per qubit, e.g. "-XIZY".
  std::string str() const;

  bool operator==(const PauliString& other) const = default;
  /// Canonical order: operator bits first (x words then z words), sign last.
  std::strong_ordering operator<=>(const PauliString& other) const;

 private:
  std::size_t num_qubits_ = 0;
  std::size_t num_words_ = 0;
  std::vector<std::uint64_t> words_;
  bool negative_ = false;
};

/// The ten supported Clifford gate kinds.
enum class GateKind : std::uint8_t { kH, kS, kSdg, kX, kY, kZ, kCX, kCZ, kSX, kSXdg };

inline constexpr std::array<GateKind, 10> kAllGateKinds = {
    GateKind::kH, GateKind::kS, GateKind::kSdg, GateKind::kX,  GateKind::kY,
    GateKind::kZ, GateKind::kCX, GateKind::kCZ, GateKind::kSX, GateKind::kSXdg};

std::size_t gate_arity(GateKind kind);
std::string_view gate_mnemonic(GateKind kind);
/// The kind G' with G' = G^-1.
GateKind gate_inverse(GateKind kind);

struct CliffordGate {
  GateKind kind = GateKind::kH;
  /// qubits[1] is unused for single-qubit gates. For CX, qubits[0] is the control.
  std::array<std::uint32_t, 2> qubits{0, 0};

  std::size_t arity() const { return gate_arity(kind); }
  bool operator==(const CliffordGate&) const = default;
};

/// True iff the symplectic inner product of `a` and `b` is even.
bool commutes(const PauliString& a, const PauliString& b);

/// Replaces `p` by g^dagger p g (Heisenberg picture).
void conjugate_in_place(PauliString& p, const CliffordGate& g);
PauliString conjugate_by_clifford(const PauliString& p, const CliffordGate& g);

/// Phase exponent of a*b: a*b = i^k * P where P is the bitwise product with
/// sign sign(a)*sign(b) and letters defined as above. Returns k mod 4.
int product_phase(const PauliString& a, const PauliString& b);

/// Full product a*b when it is Hermitian (k even); throws InternalError otherwise.
PauliString multiply_hermitian(const PauliString& a, const PauliString& b);

/// i * gen * p, the sine-branch image of `p` under a rotation about `gen`.
/// `gen` and `p` must anticommute.
PauliString multiply_by_generator(const PauliString& p, const PauliString& gen);
void multiply_by_generator_in_place(PauliString& p, const PauliString& gen);

bool is_z_diagonal(const PauliString& p);
/// <psi|p|psi> for the all-zero or all-plus product state.
int expectation_on_stabilizer_input(const PauliString& p, InputKind input);

}  // namespace quepp
