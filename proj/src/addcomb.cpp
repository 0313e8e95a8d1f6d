#include "rotorlab/addcomb.hpp"

#include <algorithm>
#include <bit>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <numbers>

namespace rotorlab {

namespace {

size_t word_count(std::int64_t eta) { return static_cast<size_t>((eta + 63) / 64); }

std::int64_t reduce(std::int64_t r, std::int64_t eta) {
    r %= eta;
    if (r < 0) r += eta;
    return r;
}

}  // namespace

ResidueSet::ResidueSet(std::int64_t eta) : eta_(eta) {
    if (eta < 1) throw Error("modulus must be at least 1");
    words_.assign(word_count(eta), 0);
}

ResidueSet ResidueSet::of(std::int64_t eta, const std::vector<std::int64_t>& values) {
    ResidueSet s(eta);
    for (std::int64_t v : values) s.insert(v);
    return s;
}

ResidueSet ResidueSet::full_set(std::int64_t eta) {
    ResidueSet s(eta);
    for (auto& w : s.words_) w = ~0ull;
    const int tail = static_cast<int>(eta % 64);
    if (tail) s.words_.back() &= (1ull << tail) - 1;
    return s;
}

bool ResidueSet::contains(std::int64_t r) const {
    r = reduce(r, eta_);
    return (words_[static_cast<size_t>(r >> 6)] >> (r & 63)) & 1;
}

void ResidueSet::insert(std::int64_t r) {
    r = reduce(r, eta_);
    words_[static_cast<size_t>(r >> 6)] |= 1ull << (r & 63);
}

std::int64_t ResidueSet::size() const {
    std::int64_t n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
}

std::vector<std::int64_t> ResidueSet::values() const {
    std::vector<std::int64_t> out;
    for (size_t wi = 0; wi < words_.size(); ++wi) {
        std::uint64_t w = words_[wi];
        while (w) {
            out.push_back(static_cast<std::int64_t>(wi) * 64 + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

ResidueSet ResidueSet::negated() const {
    ResidueSet out(eta_);
    for (std::int64_t v : values()) out.insert(v == 0 ? 0 : eta_ - v);
    return out;
}

namespace {

// 64 bits of src starting at bit offset o; src must end with a guard word.
std::uint64_t extract64(const std::vector<std::uint64_t>& src, std::int64_t o) {
    const size_t w = static_cast<size_t>(o >> 6);
    const int r = static_cast<int>(o & 63);
    if (r == 0) return src[w];
    return (src[w] >> r) | (src[w + 1] << (64 - r));
}

}  // namespace

ResidueSet sumset(const ResidueSet& a, const ResidueSet& b) {
    if (a.eta_ != b.eta_) throw Error("sumset over mismatched moduli");
    const std::int64_t eta = a.eta_;
    ResidueSet out(eta);
    if (a.empty() || b.empty()) return out;
    // b laid out twice end to end, so a cyclic shift becomes a flat read
    std::vector<std::uint64_t> dbl(word_count(2 * eta) + 1, 0);
    for (std::int64_t i = 0; i < eta; ++i) {
        if (b.contains(i)) {
            dbl[static_cast<size_t>(i >> 6)] |= 1ull << (i & 63);
            const std::int64_t j = i + eta;
            dbl[static_cast<size_t>(j >> 6)] |= 1ull << (j & 63);
        }
    }
    const size_t nw = out.words_.size();
    for (std::int64_t x : a.values()) {
        const std::int64_t off = eta - x;
        for (size_t w = 0; w < nw; ++w) {
            out.words_[w] |= extract64(dbl, static_cast<std::int64_t>(w) * 64 + off);
        }
    }
    const int tail = static_cast<int>(eta % 64);
    if (tail) out.words_.back() &= (1ull << tail) - 1;
    return out;
}

ResidueSet difference_set(const ResidueSet& a, const ResidueSet& b) {
    return sumset(a, b.negated());
}

ResidueSet iterated_sumset(const ResidueSet& a, std::int64_t kappa) {
    if (kappa < 1) throw Error("iterated sumset needs kappa >= 1");
    ResidueSet result = ResidueSet::of(a.eta(), {0});
    ResidueSet power = a;
    while (kappa > 0) {
        if (kappa & 1) result = sumset(result, power);
        kappa >>= 1;
        if (kappa) power = sumset(power, power);
    }
    return result;
}

ResidueSet residue_set(const IntersectionSet& a) {
    ResidueSet out(a.eta);
    for (std::int64_t v : a.values()) out.insert(v);
    return out;
}

std::optional<std::int64_t> cover_kappa(const ResidueSet& a, std::int64_t kappa_max) {
    if (!a.contains(0)) throw Error("cover_kappa needs 0 in the set");
    ResidueSet s = a;
    for (std::int64_t kappa = 1;; ++kappa) {
        if (s.full()) return kappa;
        if (kappa_max > 0 && kappa >= kappa_max) return std::nullopt;
        ResidueSet next = sumset(s, a);
        if (next == s) return std::nullopt;  // stalled below Z_eta, will never cover
        s = std::move(next);
    }
}

Rational frac_norm(std::int64_t x, std::int64_t eta) {
    if (eta < 1) throw Error("modulus must be at least 1");
    const std::int64_t r = reduce(x, eta);
    return Rational::make(std::min(r, eta - r), eta);
}

ResidueSet bohr_set(const ResidueSet& s, const Rational& alpha) {
    if (alpha < Rational::make(0, 1) || Rational::make(1, 2) < alpha) {
        throw Error("bohr radius must lie in [0, 1/2]");
    }
    const std::int64_t eta = s.eta();
    // largest t with t/eta <= alpha; membership reduces to an integer compare
    const std::int64_t t_max =
        static_cast<std::int64_t>(static_cast<__int128>(alpha.num) * eta / alpha.den);
    ResidueSet out(eta);
    const auto xs = s.values();
    for (std::int64_t xi = 0; xi < eta; ++xi) {
        bool ok = true;
        for (std::int64_t x : xs) {
            const std::int64_t r = (x * xi) % eta;
            if (std::min(r, eta - r) > t_max) {
                ok = false;
                break;
            }
        }
        if (ok) out.insert(xi);
    }
    return out;
}

SpectrumReport spectrum(const ResidueSet& a, const Rational& alpha) {
    if (a.empty()) throw Error("spectrum of an empty set");
    if (alpha <= Rational::make(0, 1) || Rational::make(1, 1) < alpha) {
        throw Error("spectrum threshold must lie in (0, 1]");
    }
    const std::int64_t eta = a.eta();
    SpectrumReport rep;
    rep.eta = eta;
    rep.threshold = alpha;
    rep.members = ResidueSet(eta);
    rep.coefficients.assign(static_cast<size_t>(eta), 0.0);

    std::vector<std::complex<double>> root(static_cast<size_t>(eta));
    for (std::int64_t i = 0; i < eta; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(eta);
        root[static_cast<size_t>(i)] = {std::cos(t), std::sin(t)};
    }
    const auto xs = a.values();
    const double inv = 1.0 / static_cast<double>(xs.size());
    const double alpha_d = alpha.value();
    for (std::int64_t j = 0; j < eta; ++j) {
        std::complex<double> sum{0.0, 0.0};
        for (std::int64_t x : xs) sum += root[static_cast<size_t>((x * j) % eta)];
        const double mag = std::abs(sum) * inv;
        rep.coefficients[static_cast<size_t>(j)] = mag;
        if (mag > 1.0 + 1e-9) throw Error("normalized fourier magnitude above 1");
        if (mag > alpha_d) rep.members.insert(j);
        if (std::abs(mag - alpha_d) <= 1e-9) rep.borderline.push_back(j);
    }
    if (std::abs(rep.coefficients[0] - 1.0) > 1e-9) {
        throw Error("normalized fourier coefficient at 0 must be 1");
    }
    return rep;
}

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

std::vector<BigInt> cyclic_convolve(const std::vector<BigInt>& u, const std::vector<BigInt>& v,
                                    std::int64_t eta) {
    std::vector<BigInt> out(static_cast<size_t>(eta), 0);
    for (std::int64_t i = 0; i < eta; ++i) {
        if (u[static_cast<size_t>(i)] == 0) continue;
        for (std::int64_t j = 0; j < eta; ++j) {
            if (v[static_cast<size_t>(j)] == 0) continue;
            out[static_cast<size_t>((i + j) % eta)] +=
                u[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
        }
    }
    return out;
}

BigFloat powu(BigFloat base, std::int64_t e) {
    BigFloat r = 1;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

}  // namespace

std::vector<BigInt> representation_count_all(const ResidueSet& a, std::int64_t kappa) {
    if (kappa < 1) throw Error("representation count needs kappa >= 1");
    if (a.empty()) throw Error("representation count of an empty set");
    const std::int64_t eta = a.eta();
    std::vector<BigInt> ind(static_cast<size_t>(eta), 0);
    for (std::int64_t x : a.values()) ind[static_cast<size_t>(x)] = 1;

    // kappa-fold convolution power of the indicator, by squaring
    std::vector<BigInt> pw(static_cast<size_t>(eta), 0);
    pw[0] = 1;
    std::vector<BigInt> sq = ind;
    std::int64_t k = kappa;
    while (k > 0) {
        if (k & 1) pw = cyclic_convolve(pw, sq, eta);
        k >>= 1;
        if (k) sq = cyclic_convolve(sq, sq, eta);
    }

    std::vector<BigInt> r(static_cast<size_t>(eta), 0);
    for (std::int64_t l = 0; l < eta; ++l) {
        BigInt acc = 0;
        for (std::int64_t s = 0; s < eta; ++s) {
            acc += pw[static_cast<size_t>(s)] * pw[static_cast<size_t>((s - l + eta) % eta)];
        }
        r[static_cast<size_t>(l)] = acc;
    }

    // Independent path: r(l) = (|A|^{2 kappa} / eta) * sum_j |A-hat(j)|^{2 kappa} e(-jl/eta).
    // The tolerance scales with the positive-term mass (= the value at l = 0),
    // which bounds how much cancellation error the sum can accumulate.
    const auto xs = a.values();
    std::vector<double> magpow(static_cast<size_t>(eta), 0.0);
    std::vector<double> cost(static_cast<size_t>(eta), 0.0);
    double mass = 0.0;
    for (std::int64_t j = 0; j < eta; ++j) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(eta);
        cost[static_cast<size_t>(j)] = std::cos(t);
        std::complex<double> sum{0.0, 0.0};
        for (std::int64_t x : xs) {
            const double u =
                2.0 * std::numbers::pi * static_cast<double>((x * j) % eta) / static_cast<double>(eta);
            sum += std::complex<double>{std::cos(u), std::sin(u)};
        }
        const double mag = std::abs(sum) / static_cast<double>(xs.size());
        magpow[static_cast<size_t>(j)] = std::pow(mag, 2.0 * static_cast<double>(kappa));
        mass += magpow[static_cast<size_t>(j)];
    }
    const BigFloat scale =
        powu(BigFloat(static_cast<std::int64_t>(xs.size())), 2 * kappa) / BigFloat(eta);
    const BigFloat tol = BigFloat(1e-6) * std::max(BigFloat(1), BigFloat(mass) * scale);
    for (std::int64_t l = 0; l < eta; ++l) {
        double sum = 0.0;
        for (std::int64_t j = 0; j < eta; ++j) {
            sum += magpow[static_cast<size_t>(j)] * cost[static_cast<size_t>((j * l) % eta)];
        }
        const BigFloat fourier = BigFloat(sum) * scale;
        const BigFloat exact = BigFloat(r[static_cast<size_t>(l)]);
        if (abs(exact - fourier) > tol) {
            throw Error("representation count disagrees with its fourier evaluation");
        }
    }
    return r;
}

BigInt representation_count(const ResidueSet& a, std::int64_t kappa, std::int64_t l) {
    const auto r = representation_count_all(a, kappa);
    return r[static_cast<size_t>(reduce(l, a.eta()))];
}

IntModReport verify_int_mod(const IntersectionSet& a) {
    IntModReport rep;
    rep.eta = a.eta;
    const std::int64_t eta = a.eta;
    const auto xs = a.values();
    rep.pass = true;
    for (std::int64_t xi = 1; 6 * xi <= eta; ++xi) {
        ++rep.checked;
        std::int64_t interior = -1;
        std::int64_t boundary = -1;
        for (std::int64_t x : xs) {
            const std::int64_t v = (xi * x) % eta;
            const std::int64_t tv = 3 * v;
            if (tv < eta || tv > 2 * eta) continue;
            if (tv == eta || tv == 2 * eta) {
                if (boundary < 0) boundary = x;
            } else {
                interior = x;
                break;
            }
        }
        if (interior >= 0) {
            rep.witnesses.push_back({xi, interior});
        } else if (boundary >= 0) {
            rep.witnesses.push_back({xi, boundary});
            rep.borderline_xi.push_back(xi);
        } else {
            rep.pass = false;
            rep.violating_xi = xi;
            break;
        }
    }
    return rep;
}

PropTaoReport verify_prop_tao(const ResidueSet& a, const ResidueSet& b, const Rational& k_param,
                              const Rational& eps) {
    if (a.eta() != b.eta()) throw Error("mismatched moduli");
    PropTaoReport rep;
    rep.k_param = k_param;
    rep.eps = eps;
    const std::int64_t eta = a.eta();

    const auto fail_hyp = [&](const char* why) {
        rep.hypothesis_note = why;
        return rep;
    };
    if (!a.contains(0)) return fail_hyp("0 not in a");
    for (std::int64_t x : a.values()) {
        if (!b.contains(x)) return fail_hyp("a not contained in b");
    }
    if (k_param < Rational::make(1, 1)) return fail_hyp("K below 1");
    if (eps <= Rational::make(0, 1) || Rational::make(1, 1) <= eps) {
        return fail_hyp("eps outside (0, 1)");
    }
    const ResidueSet bma = difference_set(b, a);
    if (static_cast<__int128>(bma.size()) * k_param.den >
        static_cast<__int128>(k_param.num) * b.size()) {
        return fail_hyp("difference set larger than K times b");
    }
    rep.hypothesis_met = true;

    const SpectrumReport sp = spectrum(bma, Rational::make(eps.den - eps.num, eps.den));
    rep.spec_size = sp.members.size();
    rep.borderline_count = static_cast<std::int64_t>(sp.borderline.size());
    rep.radius_sq = Rational::make(8 * eps.num * k_param.num, eps.den * k_param.den);

    const auto freqs = sp.members.values();
    rep.pass = true;
    for (std::int64_t d : difference_set(a, a).values()) {
        for (std::int64_t xi : freqs) {
            const std::int64_t r = (d * xi) % eta;
            const std::int64_t t = std::min(r, eta - r);
            // (t/eta)^2 <= radius_sq, cross-multiplied in 128 bits
            if (static_cast<__int128>(t) * t * rep.radius_sq.den >
                static_cast<__int128>(rep.radius_sq.num) * eta * eta) {
                rep.pass = false;
                rep.counterexample = d;
                break;
            }
        }
        if (!rep.pass) break;
    }
    return rep;
}

SpectrumCoverReport verify_spectrum_cover(const ResidueSet& a, std::int64_t s) {
    if (s < 2) throw Error("threshold parameter must be at least 2");
    SpectrumCoverReport rep;
    rep.s = s;
    const std::int64_t eta = a.eta();
    rep.spectrum_trivial = spectrum(a, Rational::make(s - 1, s)).trivial();
    rep.kappa = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(
               std::ceil(static_cast<double>(s) * std::log(static_cast<double>(eta)))));
    const ResidueSet ka = iterated_sumset(a, rep.kappa);
    rep.covered = difference_set(ka, ka).full();
    rep.pass = !rep.spectrum_trivial || rep.covered;
    return rep;
}

ShrinkChainReport verify_shrink_chain(const ResidueSet& a1, std::int64_t s) {
    if (s < 2) throw Error("threshold parameter must be at least 2");
    ShrinkChainReport rep;
    const std::int64_t eta = a1.eta();
    rep.cap = static_cast<std::int64_t>(std::ceil(std::log2(static_cast<double>(eta)))) + 2;
    if (!a1.contains(0)) {
        rep.hypothesis_note = "0 not in the set";
        return rep;
    }
    if (a1.negated() != a1) {
        rep.hypothesis_note = "set is not symmetric";
        return rep;
    }
    if (bohr_set(a1, Rational::make(1, 6)) != ResidueSet::of(eta, {0})) {
        rep.hypothesis_note = "1/6-bohr set is larger than {0}";
        return rep;
    }
    rep.hypothesis_met = true;
    const Rational thr = Rational::make(s - 1, s);
    ResidueSet cur = a1;
    for (std::int64_t i = 1; i <= rep.cap; ++i) {
        rep.iterations = i;
        if (spectrum(cur, thr).trivial()) {
            rep.reached_trivial_spectrum = true;
            break;
        }
        cur = difference_set(cur, a1);
    }
    rep.pass = rep.reached_trivial_spectrum;
    return rep;
}

}  // namespace rotorlab
