#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "cgap/ring.hpp"
#include "cgap/snf.hpp"

using namespace cgap;

namespace {

RingSpecPtr ring_m5() { // Z[b,g]/(5b, 25g), D = 10
    return make_ring({{"b", 1, 5}, {"g", 1, 25}}, 10);
}

RingSpecPtr ring_b5(int d = 10) { // Z[b']/(5b')
    return make_ring({{"b'", 1, 5}}, d);
}

RingElement el(const RingSpecPtr& r, std::map<Monomial, std::int64_t> ts) {
    return RingElement(r, std::move(ts));
}

RingElement random_element(const RingSpecPtr& r, std::mt19937& rng, int max_terms = 5) {
    std::uniform_int_distribution<int> deg(0, r->max_half_degree());
    std::uniform_int_distribution<std::int64_t> coeff(-30, 30);
    std::map<Monomial, std::int64_t> ts;
    const int n = static_cast<int>(rng() % max_terms) + 1;
    for (int t = 0; t < n; ++t) {
        const auto monos = monomials_of_half_degree(*r, deg(rng));
        if (monos.empty())
            continue;
        ts[monos[rng() % monos.size()]] += coeff(rng);
    }
    return el(r, std::move(ts));
}

} // namespace

TEST_CASE("normalize reduces per-monomial moduli") {
    auto r = ring_m5();
    CHECK(el(r, {{{1, 0}, 7}}) == el(r, {{{1, 0}, 2}}));       // 7b = 2b
    CHECK(el(r, {{{1, 0}, 5}}).is_zero());                      // 5b = 0
    CHECK(el(r, {{{0, 1}, 26}}) == el(r, {{{0, 1}, 1}}));       // 26g = g
    CHECK(el(r, {{{1, 1}, 5}}).is_zero());                      // gcd(5,25) = 5 on b*g
    CHECK(el(r, {{{0, 0}, -3}}) == el(r, {{{0, 0}, -3}}));      // H^0 = Z, unreduced
}

TEST_CASE("normalize discards terms beyond the truncation bound") {
    auto r = make_ring({{"b", 1, 5}}, 3);
    CHECK(el(r, {{{4}, 1}}).is_zero());
    CHECK(el(r, {{{3}, 1}, {{4}, 2}}) == el(r, {{{3}, 1}}));
}

TEST_CASE("unknown generator index is a contract error") {
    auto r = ring_b5();
    CHECK_THROWS_AS(RingElement::generator(r, 3), ContractError);
    CHECK_THROWS_AS(el(r, {{{1, 1}, 1}}), ContractError); // wrong arity
}

TEST_CASE("product distributes and respects relations") {
    auto r = ring_m5();
    const auto b = RingElement::generator(r, 0);
    const auto g = RingElement::generator(r, 1);
    CHECK((b + g) * b == el(r, {{{2, 0}, 1}, {{1, 1}, 1}}));
}

TEST_CASE("freshman's dream: (1 + b')^5 = 1 + b'^5 mod 5") {
    auto r = ring_b5();
    const auto one = RingElement::one(r);
    const auto bp = RingElement::generator(r, 0);
    CHECK(pow(one + bp, 5) == one + pow(bp, 5));
}

TEST_CASE("product over all residues: prod (1 + i b') = 1 - b'^4") {
    auto r = ring_b5();
    const auto one = RingElement::one(r);
    const auto bp = RingElement::generator(r, 0);
    RingElement prod = one;
    for (int i = 0; i < 5; ++i)
        prod = prod * (one + i * bp);
    CHECK(prod == one + 4 * pow(bp, 4)); // -b'^4 in canonical form
    CHECK(to_string(prod) == "1 + 4*b'^4");
    CHECK(to_string(prod, true) == "1 - b'^4");
}

TEST_CASE("ring mismatch is a contract error") {
    auto a = RingElement::one(ring_m5());
    auto b = RingElement::one(ring_b5());
    CHECK_THROWS_AS(a * b, ContractError);
    CHECK_THROWS_AS(a + b, ContractError);
}

TEST_CASE("apply_map expands the conjugation images") {
    auto r = ring_m5();
    const auto b = RingElement::generator(r, 0);
    const auto g = RingElement::generator(r, 1);
    // Conjugation for (p,n,eps) = (5,4,1): b -> b + 5g, g -> g + b.
    const RingMap conj(r, r, {b + 5 * g, g + b});
    CHECK(apply_map(conj, g * g) == g * g + 2 * (b * g) + b * b);
}

TEST_CASE("apply_map through the restriction b -> b', g -> 0") {
    auto rm = ring_m5();
    auto rb = ring_b5();
    const auto b = RingElement::generator(rm, 0);
    const auto g = RingElement::generator(rm, 1);
    const RingMap res(rm, rb, {RingElement::generator(rb, 0), RingElement::zero(rb)});
    CHECK(apply_map(res, pow(g, 4) * pow(b, 2)).is_zero());
    CHECK(apply_map(res, pow(b, 3)) == pow(RingElement::generator(rb, 0), 3));
}

TEST_CASE("RingMap constructor rejects relation violations") {
    auto r = ring_m5();
    const auto b = RingElement::generator(r, 0);
    const auto g = RingElement::generator(r, 1);
    // 5 * g != 0, so b -> g does not respect 5b = 0.
    CHECK_THROWS_AS(RingMap(r, r, {g, g}), ContractError);
    // inhomogeneous image
    CHECK_THROWS_AS(RingMap(r, r, {b + b * b, g}), ContractError);
}

TEST_CASE("homogeneous_component splits by half-degree") {
    auto r = ring_b5();
    const auto one = RingElement::one(r);
    const auto bp = RingElement::generator(r, 0);
    const auto x = one - pow(bp, 4); // 1 + 4 b'^4
    CHECK(homogeneous_component(x, 4) == -1 * pow(bp, 4));
    CHECK(homogeneous_component(x, 2).is_zero());
    CHECK(homogeneous_component(one + pow(bp, 5), 5) == pow(bp, 5));
    // components sum back to x
    RingElement acc = RingElement::zero(r);
    for (int d = 0; d <= r->max_half_degree(); ++d)
        acc = acc + homogeneous_component(x, d);
    CHECK(acc == x);
}

TEST_CASE("subring_component matches the degree-sum oracle") {
    auto r = ring_b5();
    const auto bp = RingElement::generator(r, 0);
    const std::vector<RingElement> gens = {pow(bp, 4), pow(bp, 5)};

    // Oracle: degree d reachable iff 4a + 5b = d has a solution.
    const auto reachable = [](int d) {
        for (int a = 0; 4 * a <= d; ++a)
            if ((d - 4 * a) % 5 == 0)
                return true;
        return false;
    };
    CHECK_FALSE(reachable(6));
    CHECK(reachable(9));

    const GradedSubgroup s6 = subring_component(r, gens, 6);
    CHECK(s6.generators.empty());
    const GradedSubgroup s9 = subring_component(r, gens, 9);
    REQUIRE_FALSE(s9.generators.empty());
    CHECK(subgroup_contains(s9, pow(bp, 9)));
    const GradedSubgroup s0 = subring_component(r, gens, 0);
    REQUIRE(s0.generators.size() == 1);
    CHECK(s0.generators[0] == RingElement::one(r));
}

TEST_CASE("subgroup membership: scalar multiples and the zero subgroup") {
    auto r = ring_b5();
    const auto bp = RingElement::generator(r, 0);
    const GradedSubgroup span4{r, 4, {pow(bp, 4)}};
    CHECK(subgroup_contains(span4, 3 * pow(bp, 4)));
    const GradedSubgroup zero6{r, 6, {}};
    CHECK_FALSE(subgroup_contains(zero6, pow(bp, 6)));
    CHECK(subgroup_contains(zero6, RingElement::zero(r)));
    CHECK_THROWS_AS(subgroup_contains(span4, pow(bp, 5)), ContractError);
}

TEST_CASE("subgroup membership agrees with exhaustive enumeration") {
    auto r = ring_m5();
    const auto b = RingElement::generator(r, 0);
    const auto g = RingElement::generator(r, 1);

    // Degree-2 component of Z[b,g]/(5b,25g): moduli (5, 5, 25), order 5^4.
    const auto monos = monomials_of_half_degree(*r, 2);
    REQUIRE(monos.size() == 3);

    const auto enumerate_subgroup = [&](const std::vector<RingElement>& gens) {
        std::set<std::map<Monomial, std::int64_t>> members;
        members.insert(RingElement::zero(r).terms());
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<std::map<Monomial, std::int64_t>> snapshot(members.begin(),
                                                                   members.end());
            for (const auto& m : snapshot)
                for (const auto& gen : gens) {
                    const RingElement next = RingElement(r, m) + gen;
                    if (members.insert(next.terms()).second)
                        grew = true;
                }
        }
        return members;
    };

    const auto enumerate_component = [&]() {
        std::vector<RingElement> all;
        std::vector<std::int64_t> coeff(monos.size(), 0);
        std::vector<std::int64_t> mod;
        for (const auto& m : monos)
            mod.push_back(monomial_modulus(*r, m));
        for (;;) {
            std::map<Monomial, std::int64_t> ts;
            for (std::size_t i = 0; i < monos.size(); ++i)
                ts[monos[i]] = coeff[i];
            all.push_back(el(r, std::move(ts)));
            std::size_t j = 0;
            while (j < coeff.size() && ++coeff[j] == mod[j]) {
                coeff[j] = 0;
                ++j;
            }
            if (j == coeff.size())
                break;
        }
        return all;
    };

    const std::vector<RingElement> component = enumerate_component();
    REQUIRE(component.size() == 625);

    std::mt19937 rng(20240917);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<RingElement> gens;
        const int count = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < count; ++i) {
            std::map<Monomial, std::int64_t> ts;
            for (const auto& m : monos)
                ts[m] = static_cast<std::int64_t>(rng() % 25);
            const RingElement cand = el(r, std::move(ts));
            if (!cand.is_zero())
                gens.push_back(cand);
        }
        const auto members = enumerate_subgroup(gens);
        const GradedSubgroup s{r, 2, gens};
        for (const auto& x : component) {
            const bool expected = members.count(x.terms()) > 0;
            CHECK(subgroup_contains(s, x) == expected);
        }
    }

    // The spec's hand case: b^2 is not a multiple of b^2 + b*g.
    const GradedSubgroup s{r, 2, {b * b + b * g}};
    const auto members = enumerate_subgroup({b * b + b * g});
    CHECK(members.count((b * b).terms()) == 0);
    CHECK_FALSE(subgroup_contains(s, b * b));
}

TEST_CASE("ring axioms on randomized elements") {
    auto r = ring_m5();
    std::mt19937 rng(987654);
    const auto one = RingElement::one(r);
    const auto zero = RingElement::zero(r);
    for (int trial = 0; trial < 60; ++trial) {
        const auto a = random_element(r, rng);
        const auto b = random_element(r, rng);
        const auto c = random_element(r, rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(one * a == a);
        CHECK(zero + a == a);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("normalization is idempotent and torsion kills monomials") {
    auto r = ring_m5();
    std::mt19937 rng(13579);
    for (int trial = 0; trial < 40; ++trial) {
        const auto a = random_element(r, rng);
        CHECK(RingElement(r, a.terms()) == a); // already in normal form
        const auto five_a = 5 * a;
        for (const auto& [mono, coeff] : five_a.terms()) {
            (void)coeff;
            // 5 kills every class whose modulus divides 5; only pure-g
            // monomials (modulus 25) and the free constant survive.
            const std::int64_t mod = monomial_modulus(*r, mono);
            CHECK((mod == 25 || mod == 0));
        }
        const auto twentyfive_a = 25 * a;
        for (const auto& [mono, coeff] : twentyfive_a.terms()) {
            (void)coeff;
            CHECK(monomial_modulus(*r, mono) == 0); // H^0 = Z only
        }
    }
}

TEST_CASE("random ring maps are multiplicative and additive") {
    auto r = ring_m5();
    std::mt19937 rng(24680);
    const auto b = RingElement::generator(r, 0);
    const auto g = RingElement::generator(r, 1);
    for (int trial = 0; trial < 25; ++trial) {
        // Image of b must be killed by 5: a*b + 5c*g. Image of g is free.
        const std::int64_t a1 = rng() % 5;
        const std::int64_t c1 = rng() % 5;
        const std::int64_t d1 = rng() % 5;
        const std::int64_t e1 = rng() % 25;
        const RingMap f(r, r, {a1 * b + (5 * c1) * g, d1 * b + e1 * g});
        const auto x = random_element(r, rng);
        const auto y = random_element(r, rng);
        CHECK(apply_map(f, x * y) == apply_map(f, x) * apply_map(f, y));
        CHECK(apply_map(f, x + y) == apply_map(f, x) + apply_map(f, y));
        int d = -1;
        if (x.is_homogeneous(d))
            CHECK((apply_map(f, x).is_zero() ||
                   (apply_map(f, x).is_homogeneous(d) == true)));
    }
}

TEST_CASE("smith normal form certifies L*A*R = D with unimodular transforms") {
    std::mt19937 rng(112233);
    std::uniform_int_distribution<std::int64_t> entry(-6, 6);
    for (int trial = 0; trial < 50; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 4);
        const int cols = 1 + static_cast<int>(rng() % 4);
        IntMat a(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                a.at(i, j) = entry(rng);
        const SmithResult s = smith_normal_form(a);
        CHECK(s.l * a * s.r == s.d);
        const std::int64_t dl = determinant(s.l);
        const std::int64_t dr = determinant(s.r);
        CHECK((dl == 1 || dl == -1));
        CHECK((dr == 1 || dr == -1));
        // diagonal, non-negative, divisibility chain
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (i != j)
                    CHECK(s.d.at(i, j) == 0);
        for (int i = 0; i + 1 < std::min(rows, cols); ++i) {
            CHECK(s.d.at(i, i) >= 0);
            if (s.d.at(i, i) != 0 && s.d.at(i + 1, i + 1) != 0)
                CHECK(s.d.at(i + 1, i + 1) % s.d.at(i, i) == 0);
            if (s.d.at(i, i) == 0)
                CHECK(s.d.at(i + 1, i + 1) == 0);
        }
    }
}

TEST_CASE("integer solvability: constructed solutions and known failures") {
    std::mt19937 rng(445566);
    std::uniform_int_distribution<std::int64_t> entry(-5, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 3);
        const int cols = 1 + static_cast<int>(rng() % 3);
        IntMat a(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                a.at(i, j) = entry(rng);
        std::vector<std::int64_t> t(cols);
        for (int j = 0; j < cols; ++j)
            t[j] = entry(rng);
        std::vector<std::int64_t> x(rows, 0);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                x[i] += a.at(i, j) * t[j];
        CHECK(integer_solvable(a, x));
    }
    IntMat two(1, 1);
    two.at(0, 0) = 2;
    CHECK_FALSE(integer_solvable(two, {1}));
    CHECK(integer_solvable(two, {-4}));
    IntMat diag(2, 2);
    diag.at(0, 0) = 2;
    diag.at(1, 1) = 3;
    CHECK_FALSE(integer_solvable(diag, {1, 1}));
    CHECK(integer_solvable(diag, {2, -3}));
    // inconsistent system: x + y = 1 duplicated row with different rhs
    IntMat dup(2, 1);
    dup.at(0, 0) = 1;
    dup.at(1, 0) = 1;
    CHECK_FALSE(integer_solvable(dup, {1, 2}));
}

TEST_CASE("pretty printer sorts by degree then lexicographic monomial") {
    auto r = ring_m5();
    const auto b = RingElement::generator(r, 0);
    const auto g = RingElement::generator(r, 1);
    const auto x = g * g + b + 2 * (b * g) + RingElement::one(r);
    CHECK(to_string(x) == "1 + b + 2*b*g + g^2");
}
