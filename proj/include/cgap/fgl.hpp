#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cgap/group.hpp"
#include "cgap/report.hpp"
#include "cgap/ring.hpp"

namespace cgap {

// Polynomial in v_1, ..., v_K with exact rational coefficients. Graded by
// half_degree(v_i) = -(p^i - 1); the grading is a property of monomials, not
// of the stored data, so p enters only through the degree helpers.
class VPoly {
public:
    explicit VPoly(int v_count = 0);
    static VPoly constant(int v_count, const mpq_class& c);
    static VPoly vgen(int v_count, int index); // v_index, 1-based
    static VPoly monomial(int v_count, const std::vector<int>& alpha, const mpq_class& c);

    int v_count() const { return v_count_; }
    const std::map<std::vector<int>, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_integral() const; // every coefficient has denominator 1
    mpq_class constant_part() const;

    // Membership in (p, v_1, ..., v_K): every v-free part divisible by p.
    bool in_p_v_ideal(std::int64_t p) const;

    // Exponent-weighted degree drop: sum alpha_i * (p^i - 1).
    static std::int64_t monomial_degree_drop(const std::vector<int>& alpha, std::int64_t p);

    friend VPoly operator+(const VPoly& a, const VPoly& b);
    friend VPoly operator-(const VPoly& a, const VPoly& b);
    friend VPoly operator*(const VPoly& a, const VPoly& b);
    friend VPoly operator*(const mpq_class& c, const VPoly& a);
    friend bool operator==(const VPoly& a, const VPoly& b);

    VPoly pow(int e) const;
    std::string str() const; // canonical, for diagnostics

private:
    void insert_term(std::vector<int> alpha, mpq_class c);

    int v_count_ = 0;
    std::map<std::vector<int>, mpq_class> terms_;
};

// Truncated series in 1..3 variables of half-degree 1 each, coefficients in
// VPoly, truncated at a total variable-degree bound.
class TruncSeries {
public:
    TruncSeries(int nvars, int degree_bound, int v_count);
    static TruncSeries zero(int nvars, int degree_bound, int v_count);
    static TruncSeries one(int nvars, int degree_bound, int v_count);
    static TruncSeries variable(int nvars, int degree_bound, int v_count, int index);

    int nvars() const { return nvars_; }
    int degree_bound() const { return bound_; }
    int v_count() const { return v_count_; }
    const std::map<std::vector<int>, VPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    VPoly coefficient(const std::vector<int>& exps) const;
    void set_coefficient(std::vector<int> exps, VPoly c);
    bool has_constant_term() const;
    bool is_integral() const;

    // Terms whose graded half-degree (variable degree minus coefficient
    // degree drop) equals d.
    TruncSeries graded_component(int d, std::int64_t p) const;
    // Every monomial satisfies the graded-degree-d condition.
    bool is_homogeneous_of(int d, std::int64_t p) const;

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator*(const VPoly& c, const TruncSeries& a);
    friend TruncSeries operator*(const mpq_class& c, const TruncSeries& a);
    friend bool operator==(const TruncSeries& a, const TruncSeries& b);

    TruncSeries pow(int e) const;

    // Evaluate this series at the given images (one per variable). All
    // images share a variable space and must have no constant term, which
    // keeps the truncation sound.
    TruncSeries substitute(const std::vector<TruncSeries>& images) const;

private:
    int nvars_ = 1;
    int bound_ = 0;
    int v_count_ = 0;
    std::map<std::vector<int>, VPoly> terms_;
};

// Truncated p-typical formal group law with exact coefficients: logarithm
// from the recursion p*l_n = sum l_i v_(n-i)^(p^i), exponential as its
// compositional inverse, F(x,y) = exp(log x + log y).
class FGLContext {
public:
    static FGLContext build(std::int64_t p, int degree_bound, int v_count);

    std::int64_t p() const { return p_; }
    int degree_bound() const { return bound_; }
    int v_count() const { return v_count_; }

    const TruncSeries& log_series() const { return log_; }
    const TruncSeries& exp_series() const { return exp_; }
    const TruncSeries& sum_series() const { return f_; } // F(x, y)

    TruncSeries formal_sum(const TruncSeries& a, const TruncSeries& b) const;

    // [m]x computed as exp(m log x) and by iterated formal sums; the two
    // routes are asserted equal on every call.
    TruncSeries multiple(std::int64_t m, const TruncSeries& x) const;
    TruncSeries multiple_via_log(std::int64_t m, const TruncSeries& x) const;
    TruncSeries multiple_iterated(std::int64_t m, const TruncSeries& x) const;

    // exp/log inversion, unit, commutativity, associativity, homogeneity,
    // integrality of F, and the ideal certificate for [p]x. Throws
    // InternalError on any failure. Safe to call on a loaded context: it
    // never rebuilds, only checks.
    void verify_invariants() const;

    // Canonical serialization; byte-identical across runs and round-trips.
    std::string to_cache_string() const;
    static FGLContext from_cache_string(const std::string& text);

    static FGLContext from_parts(std::int64_t p, int degree_bound, int v_count,
                                 TruncSeries log, TruncSeries exp, TruncSeries f);

private:
    FGLContext(std::int64_t p, int degree_bound, int v_count, TruncSeries log,
               TruncSeries exp, TruncSeries f);

    std::int64_t p_;
    int bound_;
    int v_count_;
    TruncSeries log_; // 1-var
    TruncSeries exp_; // 1-var
    TruncSeries f_;   // 2-var
};

// Cache: one file per (p, D, K) under dir; written atomically (temp +
// rename), loaded and checked when present, rebuilt and rewritten when
// absent or unusable.
std::filesystem::path fgl_cache_file(const std::filesystem::path& dir, std::int64_t p,
                                     int degree_bound, int v_count);
void save_fgl(const FGLContext& ctx, const std::filesystem::path& file);
FGLContext load_fgl(const std::filesystem::path& file);
FGLContext build_fgl_cached(std::int64_t p, int degree_bound, int v_count,
                            const std::filesystem::path& dir);

// Image of a series after killing p and every v_i; coefficients in Z/p.
class ModIClass {
public:
    ModIClass(int nvars, int degree_bound, std::int64_t p);

    int nvars() const { return nvars_; }
    std::int64_t p() const { return p_; }
    const std::map<std::vector<int>, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(std::vector<int> exps, std::int64_t c);

    friend ModIClass operator+(const ModIClass& a, const ModIClass& b);
    friend ModIClass operator*(const ModIClass& a, const ModIClass& b);
    friend bool operator==(const ModIClass& a, const ModIClass& b) = default;

    std::string str(const std::vector<std::string>& var_names) const;

private:
    int nvars_ = 1;
    int bound_ = 0;
    std::int64_t p_ = 0;
    std::map<std::vector<int>, std::int64_t> terms_;
};

// Requires integral coefficients; a denominator is an InternalError (the
// integrality certificate was violated).
ModIClass reduce_mod_I(const TruncSeries& s, std::int64_t p);

// Mod-I class as an element of the matching truncated quotient ring
// presentation (all generators torsion p, half-degree 1).
RingElement mod_i_to_ring(const ModIClass& c, const RingSpecPtr& ring);

// One conjugation step on BP cohomology of M as a substitution pair: the
// images of beta and gamma as 2-variable series.
struct BpSubstitution {
    TruncSeries beta_image;
    TruncSeries gamma_image;
};

enum class BpOrientation { Forward, Reverse };

// The i-th exact iterate of the single conjugation substitution
//   beta -> beta +_F [p^(n-3)] gamma,  gamma -> gamma +_F [epsilon] beta
// (Forward), or of the substitution built from the inverse dual action
// (Reverse). Iteration is literal, never a closed form.
BpSubstitution bp_conj_map(const FGLContext& ctx, const GnEpsilonConfig& cfg, int i,
                           BpOrientation o = BpOrientation::Forward);

TruncSeries apply_substitution(const BpSubstitution& s, const TruncSeries& x);

// Drop every gamma-carrying term and rename to the 1-variable series in
// beta' (restriction to <B> on representatives).
TruncSeries restrict_to_beta(const TruncSeries& two_var);

// Lemma 4 verification: the two restriction congruences, the transfer sum
// (both orientations), and the mod-I Chern span missing beta'^(p+1).
VerificationReport verify_lemma4(const GnEpsilonConfig& cfg, const FGLContext& ctx);

} // namespace cgap
