#include "cgap/chern.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cgap {

RingSpecPtr cohomology_ring(const AbelianGroup& g, std::vector<std::string> names,
                            int max_half_degree) {
    if (static_cast<int>(names.size()) != g.rank())
        throw ContractError("cohomology_ring: one name per invariant factor");
    std::vector<GeneratorSpec> gens;
    for (int j = 0; j < g.rank(); ++j)
        gens.push_back({names[j], 1, g.factor(j)});
    return make_ring(std::move(gens), max_half_degree);
}

RingSpecPtr base_cohomology(const SemidirectPGroup& g) {
    return cohomology_ring(g.base(), {"b", "g"}, g.config().max_half_degree);
}

RingSpecPtr b_cohomology(const SemidirectPGroup& g) {
    return cohomology_ring(AbelianGroup({g.p()}), {"b'"}, g.config().max_half_degree);
}

RingElement first_chern(const Character& chi, const RingSpecPtr& ring) {
    if (chi.group().rank() != ring->generator_count())
        throw ContractError("first_chern: presentation does not match the group");
    for (int j = 0; j < ring->generator_count(); ++j)
        if (ring->generator(j).torsion != chi.group().factor(j))
            throw ContractError("first_chern: torsion does not match invariant factor");
    RingElement acc = RingElement::zero(ring);
    for (int j = 0; j < ring->generator_count(); ++j)
        acc = acc + chi.exponents()[j] * RingElement::generator(ring, j);
    return acc;
}

RingElement total_chern(const std::vector<Character>& chars, const RingSpecPtr& ring) {
    RingElement acc = RingElement::one(ring);
    for (const Character& chi : chars)
        acc = acc * (RingElement::one(ring) + first_chern(chi, ring));
    return acc;
}

std::vector<RingElement> restricted_chern_generators(const SemidirectPGroup& g) {
    const RingSpecPtr hb = b_cohomology(g);
    std::vector<RingElement> out;
    std::set<std::map<Monomial, std::int64_t>> seen;
    for (const Irrep& rho : irreps(g)) {
        const auto chars = restrict_irrep(g, rho, SubgroupOfM::BSubgroup);
        const RingElement total = total_chern(chars, hb);
        for (int j = 1; j <= rho.dimension(g) && j <= hb->max_half_degree(); ++j) {
            const RingElement cj = homogeneous_component(total, j);
            if (cj.is_zero())
                continue;
            if (seen.insert(cj.terms()).second)
                out.push_back(cj);
        }
    }
    return out;
}

RingMap conjugation_ring_map(const SemidirectPGroup& g, const RingSpecPtr& hm, int i,
                             Orientation o) {
    if (hm->generator_count() != g.base().rank())
        throw ContractError("conjugation_ring_map: presentation mismatch");
    const int step = (o == Orientation::Forward) ? 1 : -1;
    std::vector<RingElement> images;
    images.push_back(first_chern(g.dual_action(step, g.theta()), hm));
    images.push_back(first_chern(g.dual_action(step, g.phi()), hm));
    const RingMap single(hm, hm, std::move(images));
    return iterate_map(single, ((i % static_cast<int>(g.p())) + g.p()) % g.p());
}

RingMap restriction_to_b(const RingSpecPtr& hm, const RingSpecPtr& hb) {
    std::vector<RingElement> images;
    images.push_back(RingElement::generator(hb, 0));
    images.push_back(RingElement::zero(hb));
    return RingMap(hm, hb, std::move(images));
}

RingElement res_cor(const SemidirectPGroup& g, const RingElement& x, Orientation o) {
    const RingSpecPtr hm = x.ring();
    const RingSpecPtr hb =
        cohomology_ring(AbelianGroup({g.p()}), {"b'"}, hm->max_half_degree());
    const RingMap res = restriction_to_b(hm, hb);
    const RingMap step = conjugation_ring_map(g, hm, 1, o);
    RingElement acc = RingElement::zero(hb);
    RingElement conjugate = x;
    for (std::int64_t i = 0; i < g.p(); ++i) {
        acc = acc + apply_map(res, conjugate);
        conjugate = apply_map(step, conjugate);
    }
    return acc;
}

std::vector<int> semigroup_hits(int a, int b, int bound) {
    std::vector<char> hit(static_cast<std::size_t>(bound) + 1, 0);
    for (int i = 0; i * a <= bound; ++i)
        for (int j = 0; i * a + j * b <= bound; ++j)
            hit[i * a + j * b] = 1;
    std::vector<int> out;
    for (int d = 0; d <= bound; ++d)
        if (hit[d])
            out.push_back(d);
    return out;
}

std::vector<int> chern_image_hit_degrees(RingSpecPtr ring,
                                         const std::vector<RingElement>& gens) {
    std::vector<int> out;
    for (int d = 0; d <= ring->max_half_degree(); ++d) {
        const GradedSubgroup s = subring_component(ring, gens, d);
        const bool nonzero = std::any_of(s.generators.begin(), s.generators.end(),
                                         [](const RingElement& e) { return !e.is_zero(); });
        if (nonzero)
            out.push_back(d);
    }
    return out;
}

std::string character_str(const Character& chi) {
    std::ostringstream os;
    os << "(";
    for (std::size_t j = 0; j < chi.exponents().size(); ++j) {
        if (j)
            os << ",";
        os << chi.exponents()[j];
    }
    os << ")";
    return os.str();
}

namespace {

std::string int_list_str(const std::vector<int>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ",";
        os << v[i];
    }
    os << "]";
    return os.str();
}

std::vector<int> doubled(std::vector<int> v) {
    for (int& d : v)
        d *= 2;
    return v;
}

void add_common_params(VerificationReport& r, const GnEpsilonConfig& cfg) {
    r.add_param("p", std::to_string(cfg.p));
    r.add_param("n", std::to_string(cfg.n));
    r.add_param("epsilon", std::to_string(cfg.epsilon));
    r.add_param("max_degree", std::to_string(2 * cfg.max_half_degree));
}

// True iff the two generating sets span the same subgroup in degree d.
bool components_agree(RingSpecPtr ring, const std::vector<RingElement>& a,
                      const std::vector<RingElement>& b, int d) {
    const GradedSubgroup sa = subring_component(ring, a, d);
    const GradedSubgroup sb = subring_component(ring, b, d);
    for (const RingElement& x : sa.generators)
        if (!subgroup_contains(sb, x))
            return false;
    for (const RingElement& x : sb.generators)
        if (!subgroup_contains(sa, x))
            return false;
    return true;
}

} // namespace

VerificationReport verify_lemma1(const GnEpsilonConfig& cfg, int m_max) {
    if (m_max < 0)
        throw ConfigError("verify_lemma1: m_max must be >= 0");
    if (cfg.max_half_degree < cfg.p - 1 + m_max)
        throw ConfigError("verify_lemma1: degree bound below p - 1 + m_max");

    const SemidirectPGroup g = SemidirectPGroup::build(cfg);
    const RingSpecPtr hm = base_cohomology(g);
    const RingSpecPtr hb = b_cohomology(g);
    const RingElement beta = RingElement::generator(hm, 0);
    const RingElement gamma = RingElement::generator(hm, 1);
    const RingElement bprime = RingElement::generator(hb, 0);
    const int p = static_cast<int>(cfg.p);

    VerificationReport r;
    r.claim = "lemma1";
    add_common_params(r, cfg);
    r.add_param("m_max", std::to_string(m_max));

    for (int m = 0; m <= m_max; ++m) {
        const RingElement x = pow(gamma, p - 1) * pow(beta, m);
        const RingElement expected = -1 * pow(bprime, m + p - 1);
        const RingElement fwd = res_cor(g, x, Orientation::Forward);
        const RingElement rev = res_cor(g, x, Orientation::Reverse);
        std::ostringstream name;
        name << "res_cor(g^" << (p - 1) << "*b^" << m << ") = -b'^" << (m + p - 1);
        r.add_case(name.str(), "m=" + std::to_string(m), to_string(fwd),
                   to_string(expected));
        r.add_case("orientation_independent_m" + std::to_string(m),
                   "m=" + std::to_string(m), fwd == rev);
    }

    const std::vector<RingElement> computed = restricted_chern_generators(g);
    const std::vector<RingElement> expected_gens = {pow(bprime, p - 1), pow(bprime, p)};
    std::vector<int> bad;
    for (int d = 0; d <= cfg.max_half_degree; ++d)
        if (!components_agree(hb, computed, expected_gens, d))
            bad.push_back(2 * d);
    r.add_case("chern_image_equals_subring(b'^" + std::to_string(p - 1) + ", b'^" +
                   std::to_string(p) + ")",
               "degrees 0.." + std::to_string(2 * cfg.max_half_degree),
               bad.empty() ? "all degrees match" : "mismatch at " + int_list_str(bad),
               "all degrees match");
    return r;
}

VerificationReport chern_gap_report(const GnEpsilonConfig& cfg) {
    if (cfg.max_half_degree < cfg.p + 1)
        throw ConfigError("chern_gap_report: degree bound below p + 1");

    const SemidirectPGroup g = SemidirectPGroup::build(cfg);
    const RingSpecPtr hm = base_cohomology(g);
    const RingSpecPtr hb = b_cohomology(g);
    const RingElement beta = RingElement::generator(hm, 0);
    const RingElement gamma = RingElement::generator(hm, 1);
    const RingElement bprime = RingElement::generator(hb, 0);
    const int p = static_cast<int>(cfg.p);

    VerificationReport r;
    r.claim = "chern-gap";
    add_common_params(r, cfg);

    const RingElement witness = res_cor(g, pow(gamma, p - 1) * pow(beta, 2));
    const RingElement expected = -1 * pow(bprime, p + 1);
    r.add_case("transfer_witness = -b'^" + std::to_string(p + 1), "m=2",
               to_string(witness), to_string(expected));
    r.add_case("transfer_witness_nonzero", "", !witness.is_zero());

    const std::vector<RingElement> gens = restricted_chern_generators(g);
    const GradedSubgroup at_gap = subring_component(hb, gens, p + 1);
    r.add_case("witness_outside_chern_image",
               "degree " + std::to_string(2 * (p + 1)),
               !subgroup_contains(at_gap, pow(bprime, p + 1)));

    for (const int d : {p - 1, p, 2 * p - 2}) {
        const GradedSubgroup s = subring_component(hb, gens, d);
        r.add_case("chern_image_contains_b'^" + std::to_string(d),
                   "degree " + std::to_string(2 * d),
                   subgroup_contains(s, pow(bprime, d)));
    }

    const std::vector<int> hits = chern_image_hit_degrees(hb, gens);
    const std::vector<int> semi = semigroup_hits(p - 1, p, cfg.max_half_degree);
    r.add_case("hit_degrees_match_semigroup",
               "<" + std::to_string(p - 1) + "," + std::to_string(p) + ">",
               int_list_str(doubled(hits)), int_list_str(doubled(semi)));

    r.add_witness("gap_degree", std::to_string(2 * (p + 1)));
    r.add_witness("witness_element", to_string(witness, true) + " (canonical " +
                                         to_string(witness) + ")");
    r.add_witness("hit_degrees", int_list_str(doubled(hits)));
    return r;
}

VerificationReport census_report(const GnEpsilonConfig& cfg) {
    const SemidirectPGroup g = SemidirectPGroup::build(cfg);
    const std::int64_t p = cfg.p;

    VerificationReport r;
    r.claim = "census";
    add_common_params(r, cfg);

    const std::vector<Irrep> reps = irreps(g);
    std::int64_t one_dim = 0, p_dim = 0, sum_sq = 0;
    for (const Irrep& rho : reps) {
        (rho.kind == Irrep::Kind::OneDim ? one_dim : p_dim) += 1;
        sum_sq += rho.dimension(g) * rho.dimension(g);
    }
    r.add_param("order", std::to_string(g.order()));
    r.add_case("one_dim_count", "", std::to_string(one_dim),
               std::to_string(cfg.p_pow(cfg.n - 2)));
    r.add_case("p_dim_count", "", std::to_string(p_dim),
               std::to_string(cfg.p_pow(cfg.n - 2) - cfg.p_pow(cfg.n - 4)));
    r.add_case("sum_of_squares", "", std::to_string(sum_sq), std::to_string(g.order()));

    bool all_trivial = true;
    for (const Irrep& rho : reps) {
        if (rho.kind != Irrep::Kind::OneDim)
            continue;
        const auto rs = restrict_irrep(g, rho, SubgroupOfM::BSubgroup);
        all_trivial = all_trivial && rs.size() == 1 && rs.front().is_trivial();
    }
    r.add_case("one_dim_restrict_trivially_to_B", "", all_trivial);

    const Character theta = g.theta();
    const Character phi = g.phi();
    bool theta_found = false, phi_found = false;
    bool theta_equal = false, phi_distinct = false;
    for (const Irrep& rho : reps) {
        if (rho.kind != Irrep::Kind::Induced)
            continue;
        if (rho.chi == theta) {
            theta_found = true;
            const auto rs = restrict_irrep(g, rho, SubgroupOfM::BSubgroup);
            theta_equal = std::all_of(rs.begin(), rs.end(),
                                      [&](const Character& c) { return c == rs.front(); });
        }
        if (rho.chi == phi) {
            phi_found = true;
            const auto rs = restrict_irrep(g, rho, SubgroupOfM::BSubgroup);
            std::set<Character> distinct(rs.begin(), rs.end());
            phi_distinct = distinct.size() == static_cast<std::size_t>(p);
        }
    }
    r.add_case("ind_theta_restricts_as_p_equal_characters", "", theta_found && theta_equal);
    r.add_case("ind_phi_restricts_as_p_distinct_characters", "", phi_found && phi_distinct);
    return r;
}

} // namespace cgap
