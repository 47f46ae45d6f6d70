#include "qmg1/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qmg1 {

double theta_for_prob(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability outside [0,1]");
    return 2.0 * std::asin(std::sqrt(p));
}

std::array<double, 4> ry_matrix(double theta) {
    double c = std::cos(0.5 * theta);
    double s = std::sin(0.5 * theta);
    return {c, -s, s, c};
}

Gate2 ry_gate(double theta) {
    auto m = ry_matrix(theta);
    return {complexd{m[0]}, complexd{m[1]}, complexd{m[2]}, complexd{m[3]}};
}

Gate2 hadamard_gate() {
    const double h = 1.0 / std::sqrt(2.0);
    return {complexd{h}, complexd{h}, complexd{h}, complexd{-h}};
}

Gate2 pauli_x_gate() { return {complexd{0}, complexd{1}, complexd{1}, complexd{0}}; }

bool is_permutation(std::span<const std::uint64_t> perm) {
    std::vector<bool> seen(perm.size(), false);
    for (std::uint64_t v : perm) {
        if (v >= perm.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kQubitCap)
        throw std::invalid_argument("qubit count outside [1, cap]");
    amps_.assign(std::uint64_t{1} << n_qubits, complexd{0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
    StateVector sv(n_qubits);
    if (index >= sv.dim()) throw std::out_of_range("basis index out of range");
    sv.amps_[0] = 0.0;
    sv.amps_[index] = 1.0;
    return sv;
}

StateVector StateVector::embed_sqrt(std::span<const double> probs, int n_qubits) {
    StateVector sv(n_qubits);
    if (probs.size() > sv.dim()) throw std::invalid_argument("probability vector too long");
    sv.amps_[0] = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) sv.amps_[i] = std::sqrt(std::max(probs[i], 0.0));
    return sv;
}

void StateVector::check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_) throw std::out_of_range("qubit index out of range");
}

bool StateVector::controls_match(std::uint64_t index, std::span<const Control> controls) const {
    for (const Control& c : controls) {
        bool bit = (index >> c.qubit) & 1;
        if (bit != c.value) return false;
    }
    return true;
}

void StateVector::apply_1q(const Gate2& gate, int target, std::span<const Control> controls) {
    check_qubit(target);
    for (const Control& c : controls) {
        check_qubit(c.qubit);
        if (c.qubit == target) throw std::invalid_argument("control overlaps target");
    }
    const std::uint64_t bit = std::uint64_t{1} << target;
    for (std::uint64_t i = 0; i < dim(); ++i) {
        if (i & bit) continue;
        if (!controls_match(i, controls)) continue;
        const std::uint64_t j = i | bit;
        const complexd a0 = amps_[i];
        const complexd a1 = amps_[j];
        amps_[i] = gate[0] * a0 + gate[1] * a1;
        amps_[j] = gate[2] * a0 + gate[3] * a1;
    }
}

void StateVector::modular_shift(QubitRange reg, int delta, std::span<const Control> controls) {
    if (reg.width < 1 || reg.start < 0 || reg.start + reg.width > n_qubits_)
        throw std::out_of_range("register out of range");
    for (const Control& c : controls) {
        check_qubit(c.qubit);
        if (c.qubit >= reg.start && c.qubit < reg.start + reg.width)
            throw std::invalid_argument("control overlaps shifted register");
    }
    const std::uint64_t period = reg.size();
    const std::uint64_t step = static_cast<std::uint64_t>(((delta % static_cast<long long>(period)) +
                                                           static_cast<long long>(period)) %
                                                          static_cast<long long>(period));
    std::vector<complexd> next(amps_.size());
    for (std::uint64_t i = 0; i < dim(); ++i) {
        if (!controls_match(i, controls)) {
            next[i] += amps_[i];
            continue;
        }
        const std::uint64_t v = extract_bits(i, reg);
        next[replace_bits(i, reg, (v + step) % period)] += amps_[i];
    }
    amps_ = std::move(next);
}

void StateVector::apply_basis_permutation(std::span<const std::uint64_t> perm) {
    if (perm.size() != amps_.size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<complexd> next(amps_.size());
    for (std::uint64_t i = 0; i < dim(); ++i) next[perm[i]] = amps_[i];
    amps_ = std::move(next);
}

void StateVector::phase_flip(QubitRange reg, const std::function<bool(std::uint64_t)>& marked) {
    if (reg.width < 1 || reg.start < 0 || reg.start + reg.width > n_qubits_)
        throw std::out_of_range("register out of range");
    for (std::uint64_t i = 0; i < dim(); ++i)
        if (marked(extract_bits(i, reg))) amps_[i] = -amps_[i];
}

void StateVector::reflect_about(const StateVector& axis) {
    if (axis.dim() != dim()) throw std::invalid_argument("axis dimension mismatch");
    complexd overlap{0.0};
    for (std::uint64_t i = 0; i < dim(); ++i) overlap += std::conj(axis.amps_[i]) * amps_[i];
    const complexd two_overlap = 2.0 * overlap;
    for (std::uint64_t i = 0; i < dim(); ++i)
        amps_[i] = two_overlap * axis.amps_[i] - amps_[i];
}

void StateVector::multiplexed_ry(QubitRange selector, int target, std::span<const double> angles) {
    if (selector.width < 1 || selector.start < 0 || selector.start + selector.width > n_qubits_)
        throw std::out_of_range("selector out of range");
    check_qubit(target);
    if (target >= selector.start && target < selector.start + selector.width)
        throw std::invalid_argument("target inside selector");
    if (angles.size() != selector.size()) throw std::invalid_argument("angle table length mismatch");
    const std::uint64_t bit = std::uint64_t{1} << target;
    for (std::uint64_t i = 0; i < dim(); ++i) {
        if (i & bit) continue;
        const double theta = angles[extract_bits(i, selector)];
        const double c = std::cos(0.5 * theta);
        const double s = std::sin(0.5 * theta);
        const std::uint64_t j = i | bit;
        const complexd a0 = amps_[i];
        const complexd a1 = amps_[j];
        amps_[i] = c * a0 - s * a1;
        amps_[j] = s * a0 + c * a1;
    }
}

std::vector<double> StateVector::marginal(QubitRange reg) const {
    if (reg.width < 1 || reg.start < 0 || reg.start + reg.width > n_qubits_)
        throw std::out_of_range("register out of range");
    std::vector<double> probs(reg.size(), 0.0);
    for (std::uint64_t i = 0; i < dim(); ++i) probs[extract_bits(i, reg)] += std::norm(amps_[i]);
    return probs;
}

std::vector<std::uint64_t> StateVector::measure_counts(QubitRange reg, std::uint64_t shots,
                                                       std::mt19937_64& rng) const {
    const std::vector<double> probs = marginal(reg);
    std::vector<double> cumulative(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cumulative[i] = acc;
    }
    cumulative.back() = std::max(cumulative.back(), 1.0);
    std::vector<std::uint64_t> counts(probs.size(), 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = unit(rng);
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        counts[static_cast<std::size_t>(it - cumulative.begin())]++;
    }
    return counts;
}

double StateVector::norm_sq() const {
    double n = 0.0;
    for (const complexd& a : amps_) n += std::norm(a);
    return n;
}

void StateVector::write_amplitudes_csv(std::ostream& os) const {
    for (std::uint64_t i = 0; i < dim(); ++i)
        os << i << "," << amps_[i].real() << "," << amps_[i].imag() << "\n";
}

}  // namespace qmg1
