#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cgap/errors.hpp"

namespace cgap {

// Exact arithmetic in truncated graded-commutative quotient rings
// Z[x_1,...,x_k]/(t_1 x_1, ..., t_k x_k), truncated at a total half-degree
// bound. Degrees are stored as half-degrees throughout (a generator of
// cohomological degree 2 has half-degree 1); user-facing layers double them.

struct GeneratorSpec {
    std::string name;
    int half_degree = 1;
    std::int64_t torsion = 0; // additive order t_i of the generator, a prime power

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

class RingSpec {
public:
    RingSpec(std::vector<GeneratorSpec> generators, int max_half_degree);

    int generator_count() const { return static_cast<int>(generators_.size()); }
    const GeneratorSpec& generator(int i) const { return generators_.at(i); }
    const std::vector<GeneratorSpec>& generators() const { return generators_; }
    int max_half_degree() const { return max_half_degree_; }
    std::int64_t prime() const { return prime_; }

    friend bool operator==(const RingSpec& a, const RingSpec& b) {
        return a.generators_ == b.generators_ && a.max_half_degree_ == b.max_half_degree_;
    }

private:
    std::vector<GeneratorSpec> generators_;
    int max_half_degree_ = 0;
    std::int64_t prime_ = 0; // common prime of the torsion orders
};

using RingSpecPtr = std::shared_ptr<const RingSpec>;

RingSpecPtr make_ring(std::vector<GeneratorSpec> generators, int max_half_degree);

// Exponent tuple, one entry per generator.
using Monomial = std::vector<int>;

int monomial_half_degree(const RingSpec& ring, const Monomial& m);

// Additive order of the coefficient class at this monomial: gcd of the
// torsion orders of the generators present, or 0 (unrestricted Z) for the
// constant monomial.
std::int64_t monomial_modulus(const RingSpec& ring, const Monomial& m);

// All monomials of a given half-degree, in lexicographic exponent order.
std::vector<Monomial> monomials_of_half_degree(const RingSpec& ring, int d);

class RingElement {
public:
    explicit RingElement(RingSpecPtr ring);
    // Normalizing constructor: reduces coefficients into [0, modulus),
    // discards monomials beyond the truncation bound, drops zero terms.
    RingElement(RingSpecPtr ring, std::map<Monomial, std::int64_t> raw_terms);

    static RingElement zero(RingSpecPtr ring);
    static RingElement one(RingSpecPtr ring);
    static RingElement generator(RingSpecPtr ring, int index);
    static RingElement term(RingSpecPtr ring, Monomial m, std::int64_t coeff);

    const RingSpecPtr& ring() const { return ring_; }
    const std::map<Monomial, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // -1 for the zero element and other inhomogeneous inputs are reported
    // through the bool.
    bool is_homogeneous(int& half_degree) const;

    friend RingElement operator+(const RingElement& a, const RingElement& b);
    friend RingElement operator-(const RingElement& a, const RingElement& b);
    friend RingElement operator*(const RingElement& a, const RingElement& b);
    friend RingElement operator*(std::int64_t c, const RingElement& a);
    friend bool operator==(const RingElement& a, const RingElement& b);

private:
    RingSpecPtr ring_;
    std::map<Monomial, std::int64_t> terms_;
};

RingElement pow(const RingElement& x, int e);
RingElement homogeneous_component(const RingElement& x, int half_degree);

// Term order for printing: half-degree, then lexicographic exponents.
// signed_coeffs picks the representative of smallest absolute value
// (ties to the positive one), so 4*b'^4 mod 5 prints as -b'^4.
std::string to_string(const RingElement& x, bool signed_coeffs = false);

class RingMap {
public:
    // images[i] is the image of source generator i; must be homogeneous of
    // that generator's half-degree and be annihilated by its torsion.
    RingMap(RingSpecPtr source, RingSpecPtr target, std::vector<RingElement> images);

    static RingMap identity(RingSpecPtr ring);

    const RingSpecPtr& source() const { return source_; }
    const RingSpecPtr& target() const { return target_; }
    const RingElement& image(int i) const { return images_.at(i); }

    friend bool operator==(const RingMap& a, const RingMap& b);

private:
    RingSpecPtr source_;
    RingSpecPtr target_;
    std::vector<RingElement> images_;
};

RingElement apply_map(const RingMap& f, const RingElement& x);
// (f then g): x -> g(f(x)).
RingMap compose(const RingMap& g, const RingMap& f);
RingMap iterate_map(const RingMap& f, int times);

struct GradedSubgroup {
    RingSpecPtr ring;
    int half_degree = 0;
    std::vector<RingElement> generators; // homogeneous of half_degree
};

// Additive generating set for the half-degree-d piece of the subring
// generated by the given homogeneous elements (empty product included at
// d = 0). Enumerates exponent patterns of the generators whose degrees sum
// to d; duplicate and zero products are dropped.
GradedSubgroup subring_component(RingSpecPtr ring, const std::vector<RingElement>& gens, int d);

// Solvability of the integer linear system expressing x over the subgroup's
// generators, with each monomial coordinate read modulo its modulus.
bool subgroup_contains(const GradedSubgroup& s, const RingElement& x);

} // namespace cgap
