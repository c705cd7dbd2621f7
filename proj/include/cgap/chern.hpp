#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgap/group.hpp"
#include "cgap/report.hpp"
#include "cgap/ring.hpp"

namespace cgap {

// Even integral cohomology of a finite abelian group as a truncated quotient
// ring: one half-degree-1 generator per invariant factor, torsion the factor.
RingSpecPtr cohomology_ring(const AbelianGroup& g, std::vector<std::string> names, int max_half_degree);

// H(M) = Z[b, g]/(p b, p^(n-2) g) and H(<B>) = Z[b']/(p b'), truncated at the
// config's degree bound.
RingSpecPtr base_cohomology(const SemidirectPGroup& g);
RingSpecPtr b_cohomology(const SemidirectPGroup& g);

// First Chern class of an abelian character: sum e_j x_j, half-degree 1.
// Additive in the character.
RingElement first_chern(const Character& chi, const RingSpecPtr& ring);

// Total Chern class of a sum of line characters: prod (1 + c1(chi)).
RingElement total_chern(const std::vector<Character>& chars, const RingSpecPtr& ring);

// Homogeneous Chern classes c_j(Res rho) over all irreps of G, restricted to
// <B>; zero classes dropped, duplicates removed. Generates Res Ch(G) as a
// ring.
std::vector<RingElement> restricted_chern_generators(const SemidirectPGroup& g);

// The two possible readings of the conjugation exponent in the double coset
// sum. Every verified identity must hold under both (the sum runs over a
// full set of coset representatives either way).
enum class Orientation { Forward, Reverse };

// Conjugation on H(M), defined as the c1-image of the dual action on
// characters and iterated exactly i times.
RingMap conjugation_ring_map(const SemidirectPGroup& g, const RingSpecPtr& hm,
                             int i, Orientation o = Orientation::Forward);

// Restriction H(M) -> H(<B>): b -> b', g -> 0.
RingMap restriction_to_b(const RingSpecPtr& hm, const RingSpecPtr& hb);

// Res o Cor through the double coset formula: sum over i = 0..p-1 of the
// restriction of the i-th conjugate of x. Input in H(M), output in H(<B>).
RingElement res_cor(const SemidirectPGroup& g, const RingElement& x,
                    Orientation o = Orientation::Forward);

// Brute-force numerical semigroup <a, b> intersected with [0, bound];
// independent cross-check for the degree-hit set.
std::vector<int> semigroup_hits(int a, int b, int bound);

// Degrees d <= bound where the graded piece of the subring generated by
// `gens` is nonzero.
std::vector<int> chern_image_hit_degrees(RingSpecPtr ring,
                                         const std::vector<RingElement>& gens);

// Transfer identity res_cor(g^(p-1) b^m) = -b'^(m+p-1) for m = 0..m_max,
// under both orientations, plus the degree-by-degree identification of the
// restricted Chern image with the subring generated by b'^(p-1) and b'^p.
VerificationReport verify_lemma1(const GnEpsilonConfig& cfg, int m_max);

// Strict-containment evidence: the transfer witness -b'^(p+1) is nonzero yet
// outside the restricted Chern image; membership holds at degrees p-1, p,
// 2p-2; the hit set matches the numerical semigroup <p-1, p>.
VerificationReport chern_gap_report(const GnEpsilonConfig& cfg);

// Representation census: irrep counts, sum-of-squares audit, and the two
// restriction behaviours on <B>.
VerificationReport census_report(const GnEpsilonConfig& cfg);

std::string character_str(const Character& chi);

} // namespace cgap
