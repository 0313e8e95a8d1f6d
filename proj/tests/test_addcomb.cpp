#include "doctest.h"

#include <cstdint>
#include <vector>

#include "rotorlab/addcomb.hpp"
#include "rotorlab/circulation.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/rational.hpp"

using namespace rotorlab;

TEST_CASE("residue sets wrap, sort, dedupe and negate") {
    ResidueSet a(6);
    CHECK(a.eta() == 6);
    CHECK(a.empty());
    a.insert(2);
    a.insert(-1);
    a.insert(8);
    a.insert(2);
    CHECK(a.size() == 2); // 8 and 2 collide, -1 lands on 5
    CHECK(a.values() == std::vector<std::int64_t>{2, 5});
    CHECK(a.contains(2));
    CHECK(a.contains(-4));
    CHECK(a.contains(5));
    CHECK_FALSE(a.contains(0));

    const ResidueSet b = ResidueSet::of(6, {2, 5, 2});
    CHECK(a == b);
    const ResidueSet neg = a.negated();
    CHECK(neg.values() == std::vector<std::int64_t>{1, 4});

    CHECK(ResidueSet::full_set(6).full());
    CHECK(ResidueSet::full_set(6).size() == 6);
    CHECK(sumset(a, ResidueSet(6)).empty());
}

TEST_CASE("sumsets and difference sets over Z7") {
    const ResidueSet a = ResidueSet::of(7, {0, 2, 3});
    CHECK(sumset(a, a).values() == std::vector<std::int64_t>{0, 2, 3, 4, 5, 6});
    CHECK(difference_set(a, a).full());
    CHECK(iterated_sumset(a, 1) == a);
    CHECK(iterated_sumset(a, 2) == sumset(a, a));
    CHECK(iterated_sumset(a, 3) == sumset(sumset(a, a), a));
}

TEST_CASE("cover fold count is minimal") {
    const ResidueSet a = ResidueSet::of(7, {0, 2, 3});
    const auto kappa = cover_kappa(a);
    REQUIRE(kappa.has_value());
    CHECK(*kappa == 3);
    CHECK_FALSE(iterated_sumset(a, 2).full());
    CHECK(iterated_sumset(a, 3).full());
}

TEST_CASE("cover detection reports stalls and rejects sets without zero") {
    // {0, 2} in Z8 stalls on the even residues
    CHECK_FALSE(cover_kappa(ResidueSet::of(8, {0, 2})).has_value());
    CHECK_FALSE(cover_kappa(ResidueSet::of(12, {0, 4, 8}), 100).has_value());
    CHECK_THROWS_AS(cover_kappa(ResidueSet::of(7, {1, 2})), Error);
}

TEST_CASE("fractional norms are exact") {
    CHECK(frac_norm(0, 12) == Rational::make(0, 1));
    CHECK(frac_norm(2, 12) == Rational::make(1, 6));
    CHECK(frac_norm(6, 12) == Rational::make(1, 2));
    CHECK(frac_norm(10, 12) == Rational::make(1, 6));
    CHECK(frac_norm(11, 12) == Rational::make(1, 12));
}

TEST_CASE("Bohr sets follow the closed threshold condition") {
    const ResidueSet s = ResidueSet::of(12, {1});
    const ResidueSet b = bohr_set(s, Rational::make(1, 6));
    CHECK(b.values() == std::vector<std::int64_t>{0, 1, 2, 10, 11});

    // no constraints: every residue qualifies
    CHECK(bohr_set(ResidueSet(12), Rational::make(1, 6)).full());
    // radius one half admits everything
    CHECK(bohr_set(ResidueSet::of(12, {1, 5}), Rational::make(1, 2)).full());
    // radius zero keeps only the annihilator
    const ResidueSet z = bohr_set(ResidueSet::of(12, {4}), Rational::make(0, 1));
    CHECK(z.values() == std::vector<std::int64_t>{0, 3, 6, 9});
}

TEST_CASE("spectra of extreme sets") {
    const SpectrumReport full = spectrum(ResidueSet::full_set(12), Rational::make(1, 2));
    CHECK(full.trivial());
    CHECK(full.coefficients[0] == doctest::Approx(1.0));

    const SpectrumReport point = spectrum(ResidueSet::of(12, {0}), Rational::make(1, 2));
    CHECK(point.members.full());
    for (double c : point.coefficients) CHECK(c == doctest::Approx(1.0));
}

TEST_CASE("representation counts match the convolution identity") {
    const ResidueSet point = ResidueSet::of(9, {0});
    CHECK(representation_count(point, 2, 0) == 1);
    CHECK(representation_count(point, 2, 4) == 0);

    const ResidueSet a = ResidueSet::of(7, {0, 1, 5});
    const std::vector<BigInt> all = representation_count_all(a, 2);
    REQUIRE(all.size() == 7);
    BigInt total = 0;
    for (std::int64_t l = 0; l < 7; ++l) {
        CHECK(all[static_cast<size_t>(l)] == representation_count(a, 2, l));
        total += all[static_cast<size_t>(l)];
    }
    // 3^(2*2) tuples in total
    CHECK(total == 81);
}

TEST_CASE("middle third witnesses exist for the full set and fail for a thin one") {
    IntersectionSet full;
    full.eta = 18;
    full.member.assign(18, true);
    const IntModReport ok = verify_int_mod(full);
    CHECK(ok.pass);
    CHECK(ok.eta == 18);
    CHECK(ok.checked == 3);
    CHECK_FALSE(ok.violating_xi.has_value());
    CHECK(ok.witnesses.size() == 3);

    IntersectionSet thin;
    thin.eta = 18;
    thin.member.assign(18, false);
    thin.member[0] = true;
    thin.member[1] = true;
    thin.member[17] = true;
    const IntModReport bad = verify_int_mod(thin);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.violating_xi.has_value());
    CHECK(*bad.violating_xi == 1);
}

TEST_CASE("residue sets convert from intersection sets") {
    IntersectionSet s;
    s.eta = 6;
    s.member.assign(6, false);
    s.member[0] = true;
    s.member[2] = true;
    s.member[4] = true;
    const ResidueSet r = residue_set(s);
    CHECK(r.eta() == 6);
    CHECK(r.values() == std::vector<std::int64_t>{0, 2, 4});
}

TEST_CASE("difference containment holds with met hypotheses") {
    const ResidueSet b = ResidueSet::full_set(17);
    const ResidueSet a = ResidueSet::of(17, {0, 1, 16});
    const PropTaoReport r = verify_prop_tao(a, b, Rational::make(1, 1), Rational::make(1, 8));
    CHECK(r.hypothesis_met);
    CHECK(r.pass);
    CHECK_FALSE(r.counterexample.has_value());
    CHECK(r.radius_sq == Rational::make(1, 1));

    // single point: difference set is {0}, conclusion immediate
    const ResidueSet point = ResidueSet::of(12, {0});
    const PropTaoReport p = verify_prop_tao(point, point, Rational::make(1, 1), Rational::make(1, 8));
    CHECK(p.hypothesis_met);
    CHECK(p.pass);
}

TEST_CASE("difference containment reports broken hypotheses") {
    const ResidueSet b = ResidueSet::of(12, {0, 1});
    CHECK_FALSE(verify_prop_tao(ResidueSet::of(12, {0, 5}), b, Rational::make(1, 1),
                                Rational::make(1, 8))
                    .hypothesis_met);
    CHECK_FALSE(verify_prop_tao(ResidueSet::of(12, {1}), ResidueSet::full_set(12),
                                Rational::make(1, 1), Rational::make(1, 8))
                    .hypothesis_met);
    CHECK_FALSE(verify_prop_tao(ResidueSet::of(12, {0}), b, Rational::make(1, 2),
                                Rational::make(1, 8))
                    .hypothesis_met);
    CHECK_FALSE(verify_prop_tao(ResidueSet::of(12, {0}), b, Rational::make(1, 1),
                                Rational::make(9, 8))
                    .hypothesis_met);
    // |B - A| = 5 exceeds K |B| = 3
    CHECK_FALSE(verify_prop_tao(ResidueSet::of(12, {0, 1, 2}), ResidueSet::of(12, {0, 1, 2}),
                                Rational::make(1, 1), Rational::make(1, 8))
                    .hypothesis_met);
}

TEST_CASE("a trivial spectrum forces the iterated sumset to cover") {
    const SpectrumCoverReport r = verify_spectrum_cover(ResidueSet::of(12, {0, 1, 11}), 576);
    CHECK(r.spectrum_trivial);
    CHECK(r.s == 576);
    CHECK(r.covered);
    CHECK(r.pass);

    // all-ones spectrum: hypothesis empty, vacuous pass
    const SpectrumCoverReport v = verify_spectrum_cover(ResidueSet::of(12, {0}), 576);
    CHECK_FALSE(v.spectrum_trivial);
    CHECK(v.pass);
}

TEST_CASE("difference chains collapse the spectrum quickly") {
    const ShrinkChainReport r = verify_shrink_chain(ResidueSet::full_set(64));
    CHECK(r.hypothesis_met);
    CHECK(r.reached_trivial_spectrum);
    CHECK(r.pass);
    CHECK(r.iterations <= r.cap);

    // not symmetric: hypotheses fail
    const ShrinkChainReport bad = verify_shrink_chain(ResidueSet::of(12, {0, 1}));
    CHECK_FALSE(bad.hypothesis_met);
}
