#include "cgap/group.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cgap/errors.hpp"

namespace cgap {

namespace {

std::int64_t mod_reduce(std::int64_t v, std::int64_t m) {
    v %= m;
    if (v < 0)
        v += m;
    return v;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
    std::int64_t r = 1 % mod;
    base = mod_reduce(base, mod);
    while (exp > 0) {
        if (exp & 1)
            r = (r * base) % mod;
        base = (base * base) % mod;
        exp >>= 1;
    }
    return r;
}

} // namespace

AbelianGroup::AbelianGroup(std::vector<std::int64_t> factors)
    : factors_(std::move(factors)) {
    for (const auto m : factors_)
        if (m < 1)
            throw ConfigError("AbelianGroup: invariant factors must be >= 1");
}

std::int64_t AbelianGroup::order() const {
    std::int64_t o = 1;
    for (const auto m : factors_) {
        if (__builtin_mul_overflow(o, m, &o))
            throw InternalError("AbelianGroup: order overflow");
    }
    return o;
}

std::vector<std::int64_t> AbelianGroup::reduce(std::vector<std::int64_t> elem) const {
    if (elem.size() != factors_.size())
        throw ContractError("AbelianGroup: element rank mismatch");
    for (std::size_t j = 0; j < elem.size(); ++j)
        elem[j] = mod_reduce(elem[j], factors_[j]);
    return elem;
}

Character::Character(AbelianGroup group, std::vector<std::int64_t> exponents)
    : group_(std::move(group)), exps_(group_.reduce(std::move(exponents))) {}

Fraction Character::value_on(const GroupElement& a) const {
    const GroupElement r = group_.reduce(a);
    Fraction acc(0);
    for (int j = 0; j < group_.rank(); ++j)
        acc = acc + Fraction(exps_[j] * r[j], group_.factor(j));
    return acc.mod_one();
}

bool Character::is_trivial() const {
    return std::all_of(exps_.begin(), exps_.end(), [](std::int64_t e) { return e == 0; });
}

Character operator*(const Character& a, const Character& b) {
    if (!(a.group_ == b.group_))
        throw ContractError("Character: group mismatch in product");
    std::vector<std::int64_t> e(a.exps_.size());
    for (std::size_t j = 0; j < e.size(); ++j)
        e[j] = a.exps_[j] + b.exps_[j];
    return Character(a.group_, std::move(e));
}

Character Character::power(std::int64_t k) const {
    std::vector<std::int64_t> e(exps_.size());
    for (std::size_t j = 0; j < e.size(); ++j)
        e[j] = mod_reduce(exps_[j] * mod_reduce(k, group_.factor(j)), group_.factor(j));
    return Character(group_, std::move(e));
}

Automorphism::Automorphism(AbelianGroup group, std::vector<std::vector<std::int64_t>> matrix)
    : group_(std::move(group)), mat_(std::move(matrix)) {
    const int k = group_.rank();
    if (static_cast<int>(mat_.size()) != k)
        throw ContractError("Automorphism: matrix row count mismatch");
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(mat_[i].size()) != k)
            throw ContractError("Automorphism: matrix column count mismatch");
        for (int j = 0; j < k; ++j) {
            mat_[i][j] = mod_reduce(mat_[i][j], group_.factor(i));
            // Image of generator j must have order dividing m_j.
            if (mod_reduce(mat_[i][j] * group_.factor(j), group_.factor(i)) != 0)
                throw ContractError("Automorphism: matrix not well defined on the group");
        }
    }
}

Automorphism Automorphism::identity(AbelianGroup group) {
    const int k = group.rank();
    std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k, 0));
    for (int i = 0; i < k; ++i)
        m[i][i] = 1;
    return Automorphism(std::move(group), std::move(m));
}

GroupElement Automorphism::apply(const GroupElement& a) const {
    const GroupElement r = group_.reduce(a);
    const int k = group_.rank();
    GroupElement out(k, 0);
    for (int i = 0; i < k; ++i) {
        std::int64_t acc = 0;
        for (int j = 0; j < k; ++j)
            acc = mod_reduce(acc + mat_[i][j] * r[j], group_.factor(i));
        out[i] = acc;
    }
    return out;
}

Character Automorphism::dual(const Character& chi) const {
    if (!(chi.group() == group_))
        throw ContractError("Automorphism: character group mismatch");
    const int k = group_.rank();
    std::vector<std::int64_t> exps(k, 0);
    for (int j = 0; j < k; ++j) {
        // chi evaluated on the image of generator j, scaled to Z/m_j.
        Fraction acc(0);
        for (int i = 0; i < k; ++i)
            acc = acc + Fraction(chi.exponents()[i] * mat_[i][j], group_.factor(i));
        const Fraction scaled = acc * Fraction(group_.factor(j));
        if (!scaled.is_integer())
            throw InternalError("Automorphism: dual exponent not integral");
        exps[j] = mod_reduce(scaled.num, group_.factor(j));
    }
    return Character(group_, std::move(exps));
}

Automorphism Automorphism::power(std::int64_t k) const {
    if (k < 0)
        throw ContractError("Automorphism: negative power");
    Automorphism acc = identity(group_);
    for (std::int64_t t = 0; t < k; ++t)
        acc = compose(*this, acc);
    return acc;
}

bool Automorphism::is_identity() const {
    return *this == identity(group_);
}

Automorphism compose(const Automorphism& f, const Automorphism& g) {
    if (!(f.group_ == g.group_))
        throw ContractError("Automorphism: group mismatch in composition");
    const int k = f.group_.rank();
    std::vector<std::vector<std::int64_t>> m(k, std::vector<std::int64_t>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            std::int64_t acc = 0;
            for (int t = 0; t < k; ++t)
                acc = mod_reduce(acc + f.mat_[i][t] * g.mat_[t][j], f.group_.factor(i));
            m[i][j] = acc;
        }
    return Automorphism(f.group_, std::move(m));
}

bool is_prime(std::int64_t v) {
    if (v < 2)
        return false;
    for (std::int64_t d = 2; d * d <= v; ++d)
        if (v % d == 0)
            return false;
    return true;
}

bool is_quadratic_residue(std::int64_t a, std::int64_t p) {
    a = mod_reduce(a, p);
    if (a == 0)
        throw ContractError("is_quadratic_residue: argument divisible by p");
    return pow_mod(a, (p - 1) / 2, p) == 1;
}

namespace {

GnEpsilonConfig make_config(std::int64_t p, int n, std::int64_t epsilon,
                            int max_half_degree, bool strict) {
    if (p == 2 || p == 3)
        throw ConfigError("p must be >= 5");
    if (!is_prime(p))
        throw ConfigError("p must be prime");
    if (n < 4)
        throw ConfigError("n must be >= 4");
    const std::int64_t eps = mod_reduce(epsilon, p);
    if (eps == 0)
        throw ConfigError("epsilon must be nonzero mod p");
    const bool canonical = (eps == 1) || !is_quadratic_residue(eps, p);
    if (strict && !canonical)
        throw ConfigError("epsilon must be 1 or a quadratic non-residue mod p");
    if (max_half_degree < p + 2)
        throw ConfigError("degree bound must be at least p + 2");
    GnEpsilonConfig cfg;
    cfg.p = p;
    cfg.n = n;
    cfg.epsilon = eps;
    cfg.max_half_degree = max_half_degree;
    cfg.epsilon_canonical = canonical;
    return cfg;
}

} // namespace

GnEpsilonConfig GnEpsilonConfig::make(std::int64_t p, int n, std::int64_t epsilon,
                                      int max_half_degree) {
    return make_config(p, n, epsilon, max_half_degree, true);
}

GnEpsilonConfig GnEpsilonConfig::make_any_residue(std::int64_t p, int n,
                                                  std::int64_t epsilon,
                                                  int max_half_degree) {
    return make_config(p, n, epsilon, max_half_degree, false);
}

std::int64_t GnEpsilonConfig::p_pow(int e) const {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(r, p, &r))
            throw InternalError("GnEpsilonConfig: power overflow");
    }
    return r;
}

SemidirectPGroup::SemidirectPGroup(GnEpsilonConfig cfg, AbelianGroup base,
                                   Automorphism alpha, Automorphism alpha_inv)
    : cfg_(cfg), base_(std::move(base)), alpha_(std::move(alpha)),
      alpha_inv_(std::move(alpha_inv)) {}

SemidirectPGroup SemidirectPGroup::build(const GnEpsilonConfig& cfg) {
    const std::int64_t p = cfg.p;
    const std::int64_t q = cfg.p_pow(cfg.n - 2); // order of C
    const std::int64_t pn3 = cfg.p_pow(cfg.n - 3);
    AbelianGroup m({p, q});

    // alpha^(-1), fixed by the required dual action on theta and phi:
    // column 1 = image of B, column 2 = image of C.
    Automorphism t(m, {{1, 1}, {cfg.epsilon * pn3, 1}});
    if (!t.power(p).is_identity())
        throw InternalError("build_gne: conjugation matrix does not have order p");
    Automorphism alpha = t.power(p - 1);
    if (!compose(alpha, t).is_identity() || !alpha.power(p).is_identity())
        throw InternalError("build_gne: alpha is not inverse to the dual block");

    SemidirectPGroup g(cfg, m, std::move(alpha), std::move(t));

    // Postcondition: the dual action matches the defining statement.
    const Character theta = g.theta();
    const Character phi = g.phi();
    if (!(g.dual_action(1, theta) == theta * phi.power(pn3)))
        throw InternalError("build_gne: dual action wrong on theta");
    if (!(g.dual_action(1, phi) == phi * theta.power(cfg.epsilon)))
        throw InternalError("build_gne: dual action wrong on phi");
    return g;
}

Character SemidirectPGroup::theta() const { return Character(base_, {1, 0}); }

Character SemidirectPGroup::phi() const { return Character(base_, {0, 1}); }

Character SemidirectPGroup::dual_action(std::int64_t i, const Character& chi) const {
    std::int64_t k = mod_reduce(i, cfg_.p);
    Character out = chi;
    for (std::int64_t t = 0; t < k; ++t)
        out = alpha_inv_.dual(out);
    return out;
}

std::vector<Character> all_characters(const AbelianGroup& g) {
    std::vector<Character> out;
    std::vector<std::int64_t> e(g.rank(), 0);
    for (;;) {
        out.emplace_back(g, e);
        int j = g.rank() - 1;
        while (j >= 0) {
            if (++e[j] < g.factor(j))
                break;
            e[j] = 0;
            --j;
        }
        if (j < 0)
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<Character>> character_orbits(const SemidirectPGroup& g) {
    const std::int64_t p = g.p();
    std::vector<std::vector<Character>> orbits;
    std::set<Character> visited;
    for (const Character& chi : all_characters(g.base())) {
        if (visited.count(chi))
            continue;
        std::vector<Character> orbit;
        Character cur = chi;
        do {
            orbit.push_back(cur);
            visited.insert(cur);
            cur = g.dual_action(1, cur);
            if (orbit.size() > static_cast<std::size_t>(p))
                throw InternalError("character_orbits: orbit longer than p");
        } while (!(cur == chi));
        if (orbit.size() != 1 && orbit.size() != static_cast<std::size_t>(p))
            throw InternalError("character_orbits: orbit size must be 1 or p");
        orbits.push_back(std::move(orbit));
    }
    std::int64_t fixed = 0, moved = 0;
    for (const auto& o : orbits)
        (o.size() == 1 ? fixed : moved) += 1;
    if (fixed + p * moved != g.base().order())
        throw InternalError("character_orbits: census identity failed");
    return orbits;
}

std::vector<Irrep> irreps(const SemidirectPGroup& g) {
    const std::int64_t p = g.p();
    // G^ab = C_p (image of A) x C_(p^(n-3)) (image of C); B and C^(p^(n-3))
    // die in the abelianization.
    AbelianGroup gab({p, g.config().p_pow(g.n() - 3)});
    std::vector<Irrep> out;
    for (const Character& chi : all_characters(gab))
        out.push_back(Irrep{Irrep::Kind::OneDim, chi});
    for (const auto& orbit : character_orbits(g))
        if (orbit.size() == static_cast<std::size_t>(p))
            out.push_back(Irrep{Irrep::Kind::Induced, orbit.front()});

    std::int64_t sum_sq = 0;
    for (const auto& rho : out) {
        const std::int64_t d = rho.dimension(g);
        sum_sq += d * d;
    }
    if (sum_sq != g.order())
        throw InternalError("irreps: sum of squared dimensions != |G|");
    return out;
}

namespace {

Character restrict_character(const Character& chi_m, const SemidirectPGroup& g,
                             SubgroupOfM k) {
    switch (k) {
    case SubgroupOfM::WholeM:
        return chi_m;
    case SubgroupOfM::BSubgroup:
        return Character(AbelianGroup({g.p()}), {chi_m.exponents()[0]});
    }
    throw ContractError("restrict_character: unsupported subgroup");
}

} // namespace

std::vector<Character> restrict_irrep(const SemidirectPGroup& g, const Irrep& rho,
                                      SubgroupOfM k) {
    std::vector<Character> out;
    if (rho.kind == Irrep::Kind::OneDim) {
        // Through G^ab: B maps to 0, C maps to the C_(p^(n-3)) coordinate, so
        // the M-restriction has exponents (0, p * c).
        const std::int64_t c = rho.chi.exponents()[1];
        Character on_m(g.base(), {0, c * g.p()});
        out.push_back(restrict_character(on_m, g, k));
        return out;
    }
    for (std::int64_t i = 0; i < g.p(); ++i)
        out.push_back(restrict_character(g.dual_action(i, rho.chi), g, k));
    if (out.size() != static_cast<std::size_t>(rho.dimension(g)))
        throw InternalError("restrict_irrep: Mackey multiset size mismatch");
    return out;
}

} // namespace cgap
