#pragma once

#include <cstdint>
#include <vector>

#include "cgap/fraction.hpp"

namespace cgap {

// Finite abelian group given by invariant factors (m_1, ..., m_k); elements
// are exponent tuples with the j-th entry mod m_j.
class AbelianGroup {
public:
    explicit AbelianGroup(std::vector<std::int64_t> factors);

    int rank() const { return static_cast<int>(factors_.size()); }
    std::int64_t factor(int j) const { return factors_.at(j); }
    const std::vector<std::int64_t>& factors() const { return factors_; }
    std::int64_t order() const;

    std::vector<std::int64_t> reduce(std::vector<std::int64_t> elem) const;

    friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

private:
    std::vector<std::int64_t> factors_;
};

using GroupElement = std::vector<std::int64_t>;

// Character as an exponent tuple (e_1, ..., e_k), e_j in Z/m_j; the value on
// (a_1, ..., a_k) is the class of sum e_j a_j / m_j in Q/Z, kept exact.
class Character {
public:
    Character(AbelianGroup group, std::vector<std::int64_t> exponents);

    const AbelianGroup& group() const { return group_; }
    const std::vector<std::int64_t>& exponents() const { return exps_; }

    Fraction value_on(const GroupElement& a) const; // representative in [0,1)
    bool is_trivial() const;

    friend Character operator*(const Character& a, const Character& b);
    Character power(std::int64_t k) const;

    friend bool operator==(const Character&, const Character&) = default;
    friend bool operator<(const Character& a, const Character& b) {
        return a.exps_ < b.exps_;
    }

private:
    AbelianGroup group_;
    std::vector<std::int64_t> exps_;
};

// Endomorphism of an AbelianGroup as an integer matrix: column j is the image
// of the j-th generator, row i read mod m_i. Construction checks the matrix
// is well defined on the group (m_j * column_j vanishes).
class Automorphism {
public:
    Automorphism(AbelianGroup group, std::vector<std::vector<std::int64_t>> matrix);

    static Automorphism identity(AbelianGroup group);

    const AbelianGroup& group() const { return group_; }
    std::int64_t entry(int i, int j) const { return mat_.at(i).at(j); }

    GroupElement apply(const GroupElement& a) const;
    Character dual(const Character& chi) const; // chi composed with this map
    Automorphism power(std::int64_t k) const;   // k >= 0
    bool is_identity() const;

    friend Automorphism compose(const Automorphism& f, const Automorphism& g); // f after g
    friend bool operator==(const Automorphism&, const Automorphism&) = default;

private:
    AbelianGroup group_;
    std::vector<std::vector<std::int64_t>> mat_;
};

bool is_prime(std::int64_t v);
// Euler's criterion; a must be coprime to the odd prime p.
bool is_quadratic_residue(std::int64_t a, std::int64_t p);

// Run parameters for one group. epsilon is normalized mod p;
// epsilon_canonical records whether it is 1 or a quadratic non-residue
// (any other nonzero residue names a group isomorphic to the epsilon = 1
// class, accepted only through make_any_residue).
struct GnEpsilonConfig {
    std::int64_t p = 5;
    int n = 4;
    std::int64_t epsilon = 1;
    int max_half_degree = 14;
    bool epsilon_canonical = true;

    static GnEpsilonConfig make(std::int64_t p, int n, std::int64_t epsilon,
                                int max_half_degree);
    static GnEpsilonConfig make_any_residue(std::int64_t p, int n, std::int64_t epsilon,
                                            int max_half_degree);

    std::int64_t p_pow(int e) const; // p^e, e >= 0
};

// G = M : C_p with M = C_p x C_{p^(n-2)} generated by B and C, and the
// C_p-factor generated by A acting by conjugation. The conjugation
// automorphism is pinned by its dual action on characters:
//   A . theta = theta * phi^(p^(n-3)),  A . phi = phi * theta^epsilon,
// where dual_action(1, -) realizes "A . -"; this is asserted at build time
// together with alpha^p = id.
class SemidirectPGroup {
public:
    static SemidirectPGroup build(const GnEpsilonConfig& cfg);

    const GnEpsilonConfig& config() const { return cfg_; }
    std::int64_t p() const { return cfg_.p; }
    int n() const { return cfg_.n; }
    std::int64_t epsilon() const { return cfg_.epsilon; }
    std::int64_t order() const { return cfg_.p_pow(cfg_.n); }

    const AbelianGroup& base() const { return base_; } // M
    const Automorphism& conjugation() const { return alpha_; }

    Character theta() const; // B^j C^k -> j/p
    Character phi() const;   // B^j C^k -> k/p^(n-2)

    // chi composed with alpha^(-i); defined for any integer i via i mod p.
    Character dual_action(std::int64_t i, const Character& chi) const;

private:
    SemidirectPGroup(GnEpsilonConfig cfg, AbelianGroup base, Automorphism alpha,
                     Automorphism alpha_inv);

    GnEpsilonConfig cfg_;
    AbelianGroup base_;
    Automorphism alpha_;     // conjugation by A
    Automorphism alpha_inv_; // its inverse; dual_action iterates this
};

// Irreducible representations: one-dimensional characters pulled back from
// G^ab = C_p x C_(p^(n-3)), or inductions of size-p orbit representatives.
struct Irrep {
    enum class Kind { OneDim, Induced };
    Kind kind;
    Character chi; // character of G^ab (OneDim) or of M (Induced orbit rep)

    std::int64_t dimension(const SemidirectPGroup& g) const {
        return kind == Kind::OneDim ? 1 : g.p();
    }
};

// Partition of the p^(n-1) characters of M into orbits under dual_action,
// each listed starting from its lexicographically least member. Orbit sizes
// are 1 or p; the census identity (#size-1) + p*(#size-p) = p^(n-1) is
// asserted.
std::vector<std::vector<Character>> character_orbits(const SemidirectPGroup& g);

// All irreducibles; the sum-of-squares audit against |G| is asserted.
std::vector<Irrep> irreps(const SemidirectPGroup& g);

enum class SubgroupOfM {
    BSubgroup, // <B>, the first invariant factor of M
    WholeM,
};

// Mackey restriction: an Induced irrep restricts to K <= M as the multiset
// of restricted conjugate characters; a OneDim irrep restricts through G^ab.
std::vector<Character> restrict_irrep(const SemidirectPGroup& g, const Irrep& rho,
                                      SubgroupOfM k);

// All characters of a finite abelian group, lexicographic in exponents.
std::vector<Character> all_characters(const AbelianGroup& g);

} // namespace cgap
