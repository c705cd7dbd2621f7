#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "cgap/fgl.hpp"

using namespace cgap;

namespace {

const FGLContext& ctx5() {
    static FGLContext ctx = FGLContext::build(5, 8, 2);
    return ctx;
}

const FGLContext& ctx7() {
    static FGLContext ctx = FGLContext::build(7, 10, 2);
    return ctx;
}

TruncSeries random_series(int nvars, int bound, int vcount, std::mt19937& rng) {
    TruncSeries s(nvars, bound, vcount);
    for (int t = 0; t < 6; ++t) {
        std::vector<int> exps(nvars, 0);
        int budget = static_cast<int>(rng() % (bound + 1));
        for (int i = 0; i < nvars && budget > 0; ++i) {
            exps[i] = static_cast<int>(rng() % (budget + 1));
            budget -= exps[i];
        }
        std::vector<int> alpha(vcount, 0);
        if (rng() % 3 == 0)
            alpha[rng() % vcount] = 1 + static_cast<int>(rng() % 2);
        const long c = static_cast<long>(rng() % 19) - 9;
        s.set_coefficient(exps, s.coefficient(exps) +
                                    VPoly::monomial(vcount, alpha, mpq_class(c)));
    }
    return s;
}

} // namespace

TEST_CASE("logarithm starts with l1 = v1/p") {
    const auto& ctx = ctx5();
    const VPoly l1 = ctx.log_series().coefficient({5});
    CHECK(l1 == mpq_class(1, 5) * VPoly::vgen(2, 1));
    CHECK(ctx.log_series().coefficient({1}) == VPoly::constant(2, 1));
    // no other term below the bound: p^2 = 25 > 8
    int nonzero = 0;
    for (const auto& [e, c] : ctx.log_series().terms()) {
        (void)e;
        if (!c.is_zero())
            ++nonzero;
    }
    CHECK(nonzero == 2);
}

TEST_CASE("exp inverts log on both sides") {
    const auto& ctx = ctx5();
    const TruncSeries x = TruncSeries::variable(1, 8, 2, 0);
    CHECK(ctx.exp_series().substitute({ctx.log_series()}) == x);
    CHECK(ctx.log_series().substitute({ctx.exp_series()}) == x);
}

TEST_CASE("formal sum is integral, homogeneous, unital, commutative") {
    const auto& ctx = ctx5();
    CHECK(ctx.sum_series().is_integral());
    CHECK(ctx.sum_series().is_homogeneous_of(1, 5));
    const TruncSeries x = TruncSeries::variable(2, 8, 2, 0);
    const TruncSeries y = TruncSeries::variable(2, 8, 2, 1);
    const TruncSeries zero = TruncSeries::zero(2, 8, 2);
    CHECK(ctx.formal_sum(x, zero) == x);
    CHECK(ctx.formal_sum(x, y) == ctx.formal_sum(y, x));
}

TEST_CASE("formal sum linearizes mod I") {
    const auto& ctx = ctx5();
    const ModIClass reduced = reduce_mod_I(ctx.sum_series(), 5);
    ModIClass want(2, 8, 5);
    want.add_term({1, 0}, 1);
    want.add_term({0, 1}, 1);
    CHECK(reduced == want);
}

TEST_CASE("explicit shape of F at the truncation p + 3") {
    // Only x + y and the v1-linear degree-p layer survive below p + 3.
    const auto& ctx = ctx5();
    const VPoly v1 = VPoly::vgen(2, 1);
    for (const auto& [exps, c] : ctx.sum_series().terms()) {
        const int d = exps[0] + exps[1];
        if (d == 1) {
            CHECK(c == VPoly::constant(2, 1));
        } else {
            CHECK(d == 5);
            // coefficient is -binom(5,k)/5 * v1
            const std::vector<std::int64_t> binom = {1, 5, 10, 10, 5, 1};
            CHECK(c == mpq_class(-binom[exps[0]], 5) * v1);
        }
    }
}

TEST_CASE("associativity of the formal sum on three variables") {
    const auto& ctx = ctx5();
    const TruncSeries x3 = TruncSeries::variable(3, 8, 2, 0);
    const TruncSeries y3 = TruncSeries::variable(3, 8, 2, 1);
    const TruncSeries z3 = TruncSeries::variable(3, 8, 2, 2);
    const TruncSeries left = ctx.formal_sum(ctx.formal_sum(x3, y3), z3);
    const TruncSeries right = ctx.formal_sum(x3, ctx.formal_sum(y3, z3));
    CHECK(left == right);
}

TEST_CASE("multiples: unit cases and strategy agreement") {
    const auto& ctx = ctx5();
    const TruncSeries x = TruncSeries::variable(1, 8, 2, 0);
    CHECK(ctx.multiple(0, x).is_zero());
    CHECK(ctx.multiple(1, x) == x);
    // naive repeated addition as an extra oracle for small m
    TruncSeries acc = TruncSeries::zero(1, 8, 2);
    for (int m = 1; m <= 8; ++m) {
        acc = ctx.formal_sum(acc, x);
        CHECK(ctx.multiple(m, x) == acc);
    }
    for (const std::int64_t m : {9, 10, 14, 20, 25, 125}) {
        const TruncSeries via_log = ctx.multiple_via_log(m, x);
        const TruncSeries iterated = ctx.multiple_iterated(m, x);
        CHECK(via_log == iterated);
        CHECK(via_log.is_integral());
        CHECK(via_log.is_homogeneous_of(1, 5));
    }
}

TEST_CASE("[p]x lands in the coefficient ideal (p, v1, ..., vK)") {
    for (const FGLContext* ctx : {&ctx5(), &ctx7()}) {
        const TruncSeries x = TruncSeries::variable(1, ctx->degree_bound(), 2, 0);
        const TruncSeries px = ctx->multiple(ctx->p(), x);
        for (const auto& [exps, c] : px.terms()) {
            (void)exps;
            CHECK(c.in_p_v_ideal(ctx->p()));
        }
    }
}

TEST_CASE("[i]b' reduces to i b' mod I") {
    const auto& ctx = ctx5();
    const TruncSeries bp = TruncSeries::variable(1, 8, 2, 0);
    for (std::int64_t i = 0; i < 5; ++i) {
        const ModIClass got = reduce_mod_I(ctx.multiple(i, bp), 5);
        ModIClass want(1, 8, 5);
        want.add_term({1}, i);
        CHECK(got == want);
    }
}

TEST_CASE("restriction congruences mod I") {
    const auto& ctx = ctx5();
    const TruncSeries bp = TruncSeries::variable(1, 8, 2, 0);
    const TruncSeries one = TruncSeries::one(1, 8, 2);

    TruncSeries prod = one;
    for (std::int64_t i = 0; i < 5; ++i)
        prod = prod * (one + ctx.multiple(i, bp));
    ModIClass want_distinct(1, 8, 5);
    want_distinct.add_term({0}, 1);
    want_distinct.add_term({4}, 4); // 1 - b'^4
    CHECK(reduce_mod_I(prod, 5) == want_distinct);

    for (std::int64_t i = 1; i < 5; ++i) {
        const TruncSeries t = (one + ctx.multiple(i, bp)).pow(5);
        ModIClass want(1, 8, 5);
        want.add_term({0}, 1);
        want.add_term({5}, i); // 1 + i b'^5
        CHECK(reduce_mod_I(t, 5) == want);
    }
}

TEST_CASE("reduce_mod_I kills p and is a ring homomorphism") {
    const auto& ctx = ctx5();
    (void)ctx;
    std::mt19937 rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        TruncSeries a = random_series(2, 8, 2, rng);
        TruncSeries b = random_series(2, 8, 2, rng);
        CHECK(reduce_mod_I(mpq_class(5) * a, 5).is_zero());
        CHECK(reduce_mod_I(a + b, 5) == reduce_mod_I(a, 5) + reduce_mod_I(b, 5));
        CHECK(reduce_mod_I(a * b, 5) == reduce_mod_I(a, 5) * reduce_mod_I(b, 5));
    }
}

TEST_CASE("reduce_mod_I rejects non-integral input") {
    TruncSeries s(1, 8, 2);
    s.set_coefficient({1}, VPoly::constant(2, mpq_class(1, 3)));
    CHECK_THROWS_AS(reduce_mod_I(s, 5), InternalError);
}

TEST_CASE("conjugation substitution: identity and single-step reductions") {
    const auto& ctx = ctx5();
    const auto cfg = GnEpsilonConfig::make(5, 4, 1, 14);
    const TruncSeries beta = TruncSeries::variable(2, 8, 2, 0);
    const TruncSeries gamma = TruncSeries::variable(2, 8, 2, 1);

    const BpSubstitution id = bp_conj_map(ctx, cfg, 0);
    CHECK(id.beta_image == beta);
    CHECK(id.gamma_image == gamma);

    const BpSubstitution one = bp_conj_map(ctx, cfg, 1);
    // beta-image: [p^(n-3)] gamma = [5] gamma dies mod I.
    ModIClass want_beta(2, 8, 5);
    want_beta.add_term({1, 0}, 1);
    CHECK(reduce_mod_I(one.beta_image, 5) == want_beta);
    // gamma-image: gamma + eps*beta mod I.
    ModIClass want_gamma(2, 8, 5);
    want_gamma.add_term({0, 1}, 1);
    want_gamma.add_term({1, 0}, 1);
    CHECK(reduce_mod_I(one.gamma_image, 5) == want_gamma);
    // exactly, the beta-image keeps the [5]gamma correction
    CHECK_FALSE(one.beta_image == beta);
}

TEST_CASE("conjugation substitution has order p mod I but not exactly") {
    const auto& ctx = ctx5();
    const auto cfg = GnEpsilonConfig::make(5, 4, 1, 14);
    const TruncSeries beta = TruncSeries::variable(2, 8, 2, 0);
    const TruncSeries gamma = TruncSeries::variable(2, 8, 2, 1);
    const BpSubstitution full = bp_conj_map(ctx, cfg, 5);
    ModIClass beta_id(2, 8, 5), gamma_id(2, 8, 5);
    beta_id.add_term({1, 0}, 1);
    gamma_id.add_term({0, 1}, 1);
    CHECK(reduce_mod_I(full.beta_image, 5) == beta_id);
    CHECK(reduce_mod_I(full.gamma_image, 5) == gamma_id);
    // The [p]-relations are not imposed on representatives, so the p-th
    // iterate retains a nonzero residual in the free ring.
    CHECK_FALSE(full.beta_image == beta);
    (void)gamma;
}

TEST_CASE("lemma 4 verification across parameters") {
    CHECK(verify_lemma4(GnEpsilonConfig::make(5, 4, 1, 14), ctx5()).pass());
    CHECK(verify_lemma4(GnEpsilonConfig::make(5, 5, 1, 14), ctx5()).pass());
    CHECK(verify_lemma4(GnEpsilonConfig::make(7, 4, 1, 18), ctx7()).pass());
}

TEST_CASE("lemma 4 witness string names the mod-I class") {
    const auto r = verify_lemma4(GnEpsilonConfig::make(5, 4, 1, 14), ctx5());
    bool found = false;
    for (const auto& [k, v] : r.witnesses)
        if (k == "witness_element") {
            CHECK(v.find("4*b'^6") != std::string::npos);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("context build rejects unusable parameters") {
    CHECK_THROWS_AS(FGLContext::build(4, 8, 2), ConfigError);
    CHECK_THROWS_AS(FGLContext::build(5, 5, 2), ConfigError);  // D < p + 2
    CHECK_THROWS_AS(FGLContext::build(5, 30, 1), ConfigError); // v2 reachable
    CHECK_NOTHROW(FGLContext::build(5, 8, 1)); // v2 unreachable below 24
}

TEST_CASE("cache round trip is byte-identical and verifiable without rebuild") {
    const auto& ctx = ctx5();
    const std::string blob = ctx.to_cache_string();
    const FGLContext loaded = FGLContext::from_cache_string(blob);
    CHECK(loaded.log_series() == ctx.log_series());
    CHECK(loaded.exp_series() == ctx.exp_series());
    CHECK(loaded.sum_series() == ctx.sum_series());
    CHECK(loaded.to_cache_string() == blob);
    CHECK_NOTHROW(loaded.verify_invariants());
}

TEST_CASE("cache files: save, load, hit, and recovery from corruption") {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("cgap-fgl-test-" + std::to_string(::getpid()));
    fs::remove_all(dir);

    const FGLContext built = build_fgl_cached(5, 8, 2, dir);
    const fs::path file = fgl_cache_file(dir, 5, 8, 2);
    REQUIRE(fs::exists(file));
    const auto first_write = fs::last_write_time(file);

    // Hit: loads without rewriting.
    const FGLContext hit = build_fgl_cached(5, 8, 2, dir);
    CHECK(fs::last_write_time(file) == first_write);
    CHECK(hit.sum_series() == built.sum_series());

    // Rewriting the same context is byte-identical.
    std::ifstream in1(file, std::ios::binary);
    std::string bytes1((std::istreambuf_iterator<char>(in1)),
                       std::istreambuf_iterator<char>());
    save_fgl(hit, file);
    std::ifstream in2(file, std::ios::binary);
    std::string bytes2((std::istreambuf_iterator<char>(in2)),
                       std::istreambuf_iterator<char>());
    CHECK(bytes1 == bytes2);

    // Corruption falls back to a rebuild.
    {
        std::ofstream out(file, std::ios::trunc);
        out << "{ not json";
    }
    const FGLContext recovered = build_fgl_cached(5, 8, 2, dir);
    CHECK(recovered.sum_series() == built.sum_series());
    CHECK_NOTHROW(load_fgl(file));

    fs::remove_all(dir);
}
