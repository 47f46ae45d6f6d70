#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace qmg1 {

// Memory guard for the dense engine: 2^24 complex doubles.
inline constexpr int kQubitCap = 24;

/// Rotation angle realizing a Bernoulli probability on one qubit:
/// theta = 2 asin(sqrt(p)), so sin^2(theta/2) = p. Throws std::domain_error
/// outside [0,1].
double theta_for_prob(double p);

/// R_y(theta) as a row-major real 2x2: [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
std::array<double, 4> ry_matrix(double theta);

using complexd = std::complex<double>;
using Gate2 = std::array<complexd, 4>;  // row-major 2x2

Gate2 ry_gate(double theta);
Gate2 hadamard_gate();
Gate2 pauli_x_gate();

/// Contiguous little-endian qubit range [start, start + width).
struct QubitRange {
    int start = 0;
    int width = 0;
    std::uint64_t size() const { return std::uint64_t{1} << width; }
    std::uint64_t mask() const { return (size() - 1) << start; }
};

inline std::uint64_t extract_bits(std::uint64_t index, QubitRange reg) {
    return (index >> reg.start) & (reg.size() - 1);
}

inline std::uint64_t replace_bits(std::uint64_t index, QubitRange reg, std::uint64_t value) {
    return (index & ~reg.mask()) | (value << reg.start);
}

/// Classical control: the operation acts only where `qubit` reads `value`.
struct Control {
    int qubit;
    bool value;
};

/// True iff `perm` (over basis indices) is a bijection.
bool is_permutation(std::span<const std::uint64_t> perm);

class StateVector {
public:
    /// |0...0> on n_qubits.
    explicit StateVector(int n_qubits);

    static StateVector basis(int n_qubits, std::uint64_t index);

    /// Embeds sqrt(p) as nonnegative real amplitudes on indices 0..len-1.
    static StateVector embed_sqrt(std::span<const double> probs, int n_qubits);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }
    std::span<const complexd> amplitudes() const { return amps_; }
    complexd amp(std::uint64_t i) const { return amps_[i]; }

    void apply_1q(const Gate2& gate, int target, std::span<const Control> controls = {});
    void apply_hadamard(int target) { apply_1q(hadamard_gate(), target); }

    /// Cyclic shift of the register value by delta (mod 2^width) on control
    /// match; a permutation of basis states.
    void modular_shift(QubitRange reg, int delta, std::span<const Control> controls = {});

    /// Applies a precomputed basis permutation: amp'[perm[i]] = amp[i].
    void apply_basis_permutation(std::span<const std::uint64_t> perm);

    /// Flips the sign of every amplitude whose register value satisfies the
    /// predicate.
    void phase_flip(QubitRange reg, const std::function<bool(std::uint64_t)>& marked);

    /// |psi> -> 2<axis|psi> |axis> - |psi>. Throws on dimension mismatch.
    void reflect_about(const StateVector& axis);

    /// Block-diagonal multiplexed rotation: for selector value r, rotates the
    /// target qubit by angles[r]. Table length must equal 2^selector.width.
    void multiplexed_ry(QubitRange selector, int target, std::span<const double> angles);

    /// Probabilities of the register values with all other qubits summed out.
    std::vector<double> marginal(QubitRange reg) const;

    /// Samples `shots` register values from the marginal; totals equal shots
    /// and are reproducible for a fixed rng state.
    std::vector<std::uint64_t> measure_counts(QubitRange reg, std::uint64_t shots,
                                              std::mt19937_64& rng) const;

    double norm_sq() const;

    /// Debug dump: one "index,re,im" row per amplitude.
    void write_amplitudes_csv(std::ostream& os) const;

private:
    void check_qubit(int q) const;
    bool controls_match(std::uint64_t index, std::span<const Control> controls) const;

    int n_qubits_;
    std::vector<complexd> amps_;
};

}  // namespace qmg1
