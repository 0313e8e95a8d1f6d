#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotorlab/circulation.hpp"
#include "rotorlab/rational.hpp"

namespace rotorlab {

using BigInt = boost::multiprecision::cpp_int;

// Subset of Z_eta stored as a bitset. Tail bits past eta stay zero, so
// whole-word comparison is set equality.
class ResidueSet {
public:
    ResidueSet() : ResidueSet(1) {}
    explicit ResidueSet(std::int64_t eta);
    static ResidueSet of(std::int64_t eta, const std::vector<std::int64_t>& values);
    static ResidueSet full_set(std::int64_t eta);

    std::int64_t eta() const { return eta_; }
    bool contains(std::int64_t r) const;  // r reduced mod eta, negatives allowed
    void insert(std::int64_t r);
    std::int64_t size() const;
    bool empty() const { return size() == 0; }
    bool full() const { return size() == eta_; }
    std::vector<std::int64_t> values() const;  // ascending
    ResidueSet negated() const;                // {-x mod eta}

    friend bool operator==(const ResidueSet& a, const ResidueSet& b) {
        return a.eta_ == b.eta_ && a.words_ == b.words_;
    }
    friend bool operator!=(const ResidueSet& a, const ResidueSet& b) { return !(a == b); }
    friend ResidueSet sumset(const ResidueSet& a, const ResidueSet& b);

private:
    std::int64_t eta_;
    std::vector<std::uint64_t> words_;
};

// {(x + y) mod eta : x in a, y in b}
ResidueSet sumset(const ResidueSet& a, const ResidueSet& b);
// {(x - y) mod eta : x in a, y in b}
ResidueSet difference_set(const ResidueSet& a, const ResidueSet& b);
// kappa-fold sumset, kappa >= 1, by exponentiation over the sumset monoid.
ResidueSet iterated_sumset(const ResidueSet& a, std::int64_t kappa);

ResidueSet residue_set(const IntersectionSet& a);

// Smallest kappa <= kappa_max with the kappa-fold sumset equal to all of
// Z_eta, or nullopt if the bound is hit or the iteration stalls first.
// Requires 0 in a so the iterates grow monotonically. kappa_max <= 0 means
// unbounded; stalling still terminates the loop.
std::optional<std::int64_t> cover_kappa(const ResidueSet& a, std::int64_t kappa_max = -1);

// Distance from x/eta to the nearest integer, exact.
Rational frac_norm(std::int64_t x, std::int64_t eta);

// {xi : every s in the set has |s*xi/eta| <= alpha}, closed condition,
// exact integer comparison. Requires 0 <= alpha <= 1/2.
ResidueSet bohr_set(const ResidueSet& s, const Rational& alpha);

struct SpectrumReport {
    std::int64_t eta = 0;
    Rational threshold;
    std::vector<double> coefficients;        // normalized Fourier magnitudes, j in [0, eta)
    ResidueSet members;                      // strictly above the threshold
    std::vector<std::int64_t> borderline;    // within 1e-9 of the threshold

    bool trivial() const { return members.size() == 1 && members.contains(0); }
};

// Normalized Fourier magnitudes of the indicator of a nonempty set, with the
// frequencies strictly above alpha. Magnitudes are doubles; entries within
// 1e-9 of the threshold are listed so a knife-edge classification is visible.
SpectrumReport spectrum(const ResidueSet& a, const Rational& alpha);

// Exact number of 2*kappa-tuples (a_1..a_kappa, b_1..b_kappa) from a with
// sum(a) - sum(b) = l mod eta, by big-integer convolution. The normalized
// Fourier identity is recomputed independently and must agree.
BigInt representation_count(const ResidueSet& a, std::int64_t kappa, std::int64_t l);
std::vector<BigInt> representation_count_all(const ResidueSet& a, std::int64_t kappa);

struct IntModReport {
    std::int64_t eta = 0;
    std::int64_t checked = 0;  // multipliers examined
    bool pass = false;
    std::optional<std::int64_t> violating_xi;
    // per multiplier, the smallest witness x with xi*x in the middle third
    std::vector<std::pair<std::int64_t, std::int64_t>> witnesses;
    // multipliers whose only witnesses sit exactly on an interval endpoint
    std::vector<std::int64_t> borderline_xi;
};

// For every multiplier xi with 1 <= 6*xi <= eta, some x in the set must land
// in the closed middle third [eta/3, 2*eta/3] after multiplication.
IntModReport verify_int_mod(const IntersectionSet& a);

struct PropTaoReport {
    bool hypothesis_met = false;
    std::string hypothesis_note;
    bool pass = false;
    std::optional<std::int64_t> counterexample;
    Rational k_param;
    Rational eps;
    Rational radius_sq;  // 8 * eps * K, compared against squared norms
    std::int64_t spec_size = 0;
    std::int64_t borderline_count = 0;
};

// Checks that A - A lies inside the Bohr set of the spectrum of B - A at
// threshold 1 - eps with radius sqrt(8*eps*K). Hypotheses (A subset of B,
// 0 in A, K >= 1, 0 < eps < 1, |B-A| <= K|B|) are verified and reported
// rather than assumed. The radius comparison squares both sides and stays
// in integers.
PropTaoReport verify_prop_tao(const ResidueSet& a, const ResidueSet& b, const Rational& k_param,
                              const Rational& eps);

struct SpectrumCoverReport {
    bool spectrum_trivial = false;
    std::int64_t s = 0;
    std::int64_t kappa = 0;
    bool covered = false;
    bool pass = false;  // trivial spectrum must force coverage; vacuous otherwise
};

// If the spectrum of a at threshold 1 - 1/s is {0}, then the difference of
// the ceil(s ln eta)-fold sumset with itself must be all of Z_eta.
SpectrumCoverReport verify_spectrum_cover(const ResidueSet& a, std::int64_t s);

struct ShrinkChainReport {
    bool hypothesis_met = false;
    std::string hypothesis_note;
    std::int64_t iterations = 0;
    std::int64_t cap = 0;
    bool reached_trivial_spectrum = false;
    bool pass = false;
};

// Starting from a symmetric set containing 0 whose 1/6-Bohr set is trivial,
// subtracting the set from itself repeatedly must collapse the spectrum at
// threshold 1 - 1/s to {0} within ceil(log2 eta) + 2 rounds.
ShrinkChainReport verify_shrink_chain(const ResidueSet& a1, std::int64_t s = 576);

}  // namespace rotorlab
