#include "cgap/ring.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "cgap/snf.hpp"

namespace cgap {

namespace {

bool is_prime_power(std::int64_t v, std::int64_t& base) {
    if (v < 2)
        return false;
    std::int64_t p = 2;
    while (p * p <= v && v % p != 0)
        ++p;
    if (v % p != 0)
        p = v;
    while (v % p == 0)
        v /= p;
    base = p;
    return v == 1;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw InternalError("RingElement: coefficient overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw InternalError("RingElement: coefficient overflow");
    return r;
}

void require_same_ring(const RingElement& a, const RingElement& b, const char* op) {
    if (!(*a.ring() == *b.ring()))
        throw ContractError(std::string(op) + ": ring mismatch");
}

} // namespace

RingSpec::RingSpec(std::vector<GeneratorSpec> generators, int max_half_degree)
    : generators_(std::move(generators)), max_half_degree_(max_half_degree) {
    for (const auto& g : generators_) {
        if (g.half_degree < 1)
            throw ConfigError("RingSpec: generator half-degree must be >= 1");
        if (g.half_degree > max_half_degree_)
            throw ConfigError("RingSpec: truncation bound below generator degree");
        std::int64_t base = 0;
        if (!is_prime_power(g.torsion, base))
            throw ConfigError("RingSpec: torsion order must be a prime power");
        if (prime_ == 0)
            prime_ = base;
        else if (prime_ != base)
            throw ConfigError("RingSpec: torsion orders must share one prime");
    }
}

RingSpecPtr make_ring(std::vector<GeneratorSpec> generators, int max_half_degree) {
    return std::make_shared<const RingSpec>(std::move(generators), max_half_degree);
}

int monomial_half_degree(const RingSpec& ring, const Monomial& m) {
    if (static_cast<int>(m.size()) != ring.generator_count())
        throw ContractError("monomial: exponent count mismatch");
    int d = 0;
    for (int i = 0; i < ring.generator_count(); ++i) {
        if (m[i] < 0)
            throw ContractError("monomial: negative exponent");
        d += m[i] * ring.generator(i).half_degree;
    }
    return d;
}

std::int64_t monomial_modulus(const RingSpec& ring, const Monomial& m) {
    std::int64_t g = 0;
    for (int i = 0; i < ring.generator_count(); ++i)
        if (m[i] > 0)
            g = std::gcd(g, ring.generator(i).torsion);
    return g;
}

namespace {

void enumerate_rec(const RingSpec& ring, int idx, int remaining, Monomial& cur,
                   std::vector<Monomial>& out) {
    if (idx == ring.generator_count()) {
        if (remaining == 0)
            out.push_back(cur);
        return;
    }
    const int step = ring.generator(idx).half_degree;
    for (int e = 0; e * step <= remaining; ++e) {
        cur[idx] = e;
        enumerate_rec(ring, idx + 1, remaining - e * step, cur, out);
    }
    cur[idx] = 0;
}

} // namespace

std::vector<Monomial> monomials_of_half_degree(const RingSpec& ring, int d) {
    std::vector<Monomial> out;
    Monomial cur(ring.generator_count(), 0);
    enumerate_rec(ring, 0, d, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

RingElement::RingElement(RingSpecPtr ring) : ring_(std::move(ring)) {
    if (!ring_)
        throw ContractError("RingElement: null ring");
}

RingElement::RingElement(RingSpecPtr ring, std::map<Monomial, std::int64_t> raw_terms)
    : ring_(std::move(ring)) {
    if (!ring_)
        throw ContractError("RingElement: null ring");
    for (auto& [mono, coeff] : raw_terms) {
        const int d = monomial_half_degree(*ring_, mono);
        if (d > ring_->max_half_degree())
            continue; // truncated away
        const std::int64_t mod = monomial_modulus(*ring_, mono);
        std::int64_t c = coeff;
        if (mod > 0) {
            c %= mod;
            if (c < 0)
                c += mod;
        }
        if (c != 0)
            terms_.emplace(mono, c);
    }
}

RingElement RingElement::zero(RingSpecPtr ring) { return RingElement(std::move(ring)); }

RingElement RingElement::one(RingSpecPtr ring) {
    Monomial unit(ring->generator_count(), 0);
    return term(std::move(ring), std::move(unit), 1);
}

RingElement RingElement::generator(RingSpecPtr ring, int index) {
    if (index < 0 || index >= ring->generator_count())
        throw ContractError("RingElement: unknown generator index");
    Monomial m(ring->generator_count(), 0);
    m[index] = 1;
    return term(std::move(ring), std::move(m), 1);
}

RingElement RingElement::term(RingSpecPtr ring, Monomial m, std::int64_t coeff) {
    std::map<Monomial, std::int64_t> t;
    t.emplace(std::move(m), coeff);
    return RingElement(std::move(ring), std::move(t));
}

bool RingElement::is_homogeneous(int& half_degree) const {
    if (terms_.empty()) {
        half_degree = -1;
        return false;
    }
    int d = -1;
    for (const auto& [mono, coeff] : terms_) {
        (void)coeff;
        const int md = monomial_half_degree(*ring_, mono);
        if (d < 0)
            d = md;
        else if (d != md)
            return false;
    }
    half_degree = d;
    return true;
}

RingElement operator+(const RingElement& a, const RingElement& b) {
    require_same_ring(a, b, "add");
    std::map<Monomial, std::int64_t> raw = a.terms_;
    for (const auto& [mono, coeff] : b.terms_)
        raw[mono] = checked_add(raw[mono], coeff);
    return RingElement(a.ring_, std::move(raw));
}

RingElement operator-(const RingElement& a, const RingElement& b) {
    return a + (-1 * b);
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    require_same_ring(a, b, "mul");
    const int bound = a.ring_->max_half_degree();
    std::map<Monomial, std::int64_t> raw;
    for (const auto& [ma, ca] : a.terms_) {
        const int da = monomial_half_degree(*a.ring_, ma);
        for (const auto& [mb, cb] : b.terms_) {
            if (da + monomial_half_degree(*b.ring_, mb) > bound)
                continue;
            Monomial m(ma.size());
            for (std::size_t i = 0; i < ma.size(); ++i)
                m[i] = ma[i] + mb[i];
            auto [it, inserted] = raw.emplace(std::move(m), 0);
            it->second = checked_add(it->second, checked_mul(ca, cb));
        }
    }
    return RingElement(a.ring_, std::move(raw));
}

RingElement operator*(std::int64_t c, const RingElement& a) {
    std::map<Monomial, std::int64_t> raw;
    for (const auto& [mono, coeff] : a.terms_)
        raw.emplace(mono, checked_mul(c, coeff));
    return RingElement(a.ring_, std::move(raw));
}

bool operator==(const RingElement& a, const RingElement& b) {
    return *a.ring_ == *b.ring_ && a.terms_ == b.terms_;
}

RingElement pow(const RingElement& x, int e) {
    if (e < 0)
        throw ContractError("pow: negative exponent");
    RingElement result = RingElement::one(x.ring());
    RingElement base = x;
    while (e > 0) {
        if (e & 1)
            result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

RingElement homogeneous_component(const RingElement& x, int half_degree) {
    std::map<Monomial, std::int64_t> raw;
    for (const auto& [mono, coeff] : x.terms())
        if (monomial_half_degree(*x.ring(), mono) == half_degree)
            raw.emplace(mono, coeff);
    return RingElement(x.ring(), std::move(raw));
}

std::string to_string(const RingElement& x, bool signed_coeffs) {
    if (x.is_zero())
        return "0";
    // Sort by half-degree, then lexicographic exponents.
    std::vector<std::pair<Monomial, std::int64_t>> terms(x.terms().begin(), x.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
        const int da = monomial_half_degree(*x.ring(), a.first);
        const int db = monomial_half_degree(*x.ring(), b.first);
        if (da != db)
            return da < db;
        return a.first > b.first; // lex: higher first-variable power first
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, stored] : terms) {
        std::int64_t c = stored;
        if (signed_coeffs) {
            const std::int64_t mod = monomial_modulus(*x.ring(), mono);
            if (mod > 0 && 2 * c > mod)
                c -= mod;
        }
        const bool neg = c < 0;
        std::int64_t mag = neg ? -c : c;
        if (first) {
            if (neg)
                os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        std::string vars;
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] == 0)
                continue;
            if (!vars.empty())
                vars += "*";
            vars += x.ring()->generator(static_cast<int>(i)).name;
            if (mono[i] > 1)
                vars += "^" + std::to_string(mono[i]);
        }
        if (vars.empty()) {
            os << mag;
        } else {
            if (mag != 1)
                os << mag << "*";
            os << vars;
        }
    }
    return os.str();
}

RingMap::RingMap(RingSpecPtr source, RingSpecPtr target, std::vector<RingElement> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != source_->generator_count())
        throw ContractError("RingMap: one image per source generator required");
    for (int i = 0; i < source_->generator_count(); ++i) {
        const auto& img = images_[i];
        if (!(*img.ring() == *target_))
            throw ContractError("RingMap: image lives in the wrong ring");
        int d = -1;
        if (!img.is_zero()) {
            if (!img.is_homogeneous(d) || d != source_->generator(i).half_degree)
                throw ContractError("RingMap: image not homogeneous of generator degree");
        }
        if (!(source_->generator(i).torsion * img).is_zero())
            throw ContractError("RingMap: image does not respect torsion relation");
    }
}

RingMap RingMap::identity(RingSpecPtr ring) {
    std::vector<RingElement> images;
    for (int i = 0; i < ring->generator_count(); ++i)
        images.push_back(RingElement::generator(ring, i));
    return RingMap(ring, ring, std::move(images));
}

bool operator==(const RingMap& a, const RingMap& b) {
    if (!(*a.source_ == *b.source_) || !(*a.target_ == *b.target_))
        return false;
    return a.images_ == b.images_;
}

RingElement apply_map(const RingMap& f, const RingElement& x) {
    if (!(*x.ring() == *f.source()))
        throw ContractError("apply_map: element not in the source ring");
    RingElement acc = RingElement::zero(f.target());
    for (const auto& [mono, coeff] : x.terms()) {
        RingElement prod = RingElement::one(f.target());
        for (std::size_t i = 0; i < mono.size(); ++i)
            if (mono[i] > 0)
                prod = prod * pow(f.image(static_cast<int>(i)), mono[i]);
        acc = acc + coeff * prod;
    }
    return acc;
}

RingMap compose(const RingMap& g, const RingMap& f) {
    if (!(*f.target() == *g.source()))
        throw ContractError("compose: middle rings disagree");
    std::vector<RingElement> images;
    for (int i = 0; i < f.source()->generator_count(); ++i)
        images.push_back(apply_map(g, f.image(i)));
    return RingMap(f.source(), g.target(), std::move(images));
}

RingMap iterate_map(const RingMap& f, int times) {
    if (times < 0)
        throw ContractError("iterate_map: negative iteration count");
    if (!(*f.source() == *f.target()))
        throw ContractError("iterate_map: endomorphism required");
    RingMap acc = RingMap::identity(f.source());
    for (int k = 0; k < times; ++k)
        acc = compose(f, acc);
    return acc;
}

GradedSubgroup subring_component(RingSpecPtr ring, const std::vector<RingElement>& gens,
                                 int d) {
    if (d < 0 || d > ring->max_half_degree())
        throw ContractError("subring_component: degree out of range");
    std::vector<int> deg(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (!(*gens[i].ring() == *ring))
            throw ContractError("subring_component: generator in the wrong ring");
        int gd = -1;
        if (!gens[i].is_homogeneous(gd) || gd < 1)
            throw ContractError("subring_component: generators must be homogeneous of positive degree");
        deg[i] = gd;
    }

    GradedSubgroup out{ring, d, {}};
    std::set<std::map<Monomial, std::int64_t>> seen;
    // Recursive enumeration of exponent patterns with sum(e_i * deg_i) = d.
    std::vector<int> expo(gens.size(), 0);
    auto emit = [&]() {
        RingElement prod = RingElement::one(ring);
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (expo[i] > 0)
                prod = prod * pow(gens[i], expo[i]);
        if (d > 0 && prod.is_zero())
            return;
        if (seen.insert(prod.terms()).second)
            out.generators.push_back(prod);
    };
    auto rec = [&](auto&& self, std::size_t idx, int remaining) -> void {
        if (idx == gens.size()) {
            if (remaining == 0)
                emit();
            return;
        }
        for (int e = 0; e * deg[idx] <= remaining; ++e) {
            expo[idx] = e;
            self(self, idx + 1, remaining - e * deg[idx]);
        }
        expo[idx] = 0;
    };
    rec(rec, 0, d);
    return out;
}

bool subgroup_contains(const GradedSubgroup& s, const RingElement& x) {
    if (!(*x.ring() == *s.ring))
        throw ContractError("subgroup_contains: ring mismatch");
    int xd = -1;
    if (!x.is_zero() && (!x.is_homogeneous(xd) || xd != s.half_degree))
        throw ContractError("subgroup_contains: element degree mismatch");
    if (x.is_zero())
        return true;

    const std::vector<Monomial> coords = monomials_of_half_degree(*s.ring, s.half_degree);
    const int r = static_cast<int>(coords.size());
    std::map<Monomial, int> index;
    for (int i = 0; i < r; ++i)
        index.emplace(coords[i], i);

    // Columns: one per subgroup generator, then one per finite-modulus
    // coordinate carrying its relation q_j * e_j.
    std::vector<int> mod_rows;
    for (int i = 0; i < r; ++i)
        if (monomial_modulus(*s.ring, coords[i]) > 0)
            mod_rows.push_back(i);
    const int cols = static_cast<int>(s.generators.size() + mod_rows.size());
    IntMat a(r, cols);
    for (std::size_t g = 0; g < s.generators.size(); ++g)
        for (const auto& [mono, coeff] : s.generators[g].terms())
            a.at(index.at(mono), static_cast<int>(g)) = coeff;
    for (std::size_t k = 0; k < mod_rows.size(); ++k)
        a.at(mod_rows[k], static_cast<int>(s.generators.size() + k)) =
            monomial_modulus(*s.ring, coords[mod_rows[k]]);

    std::vector<std::int64_t> rhs(r, 0);
    for (const auto& [mono, coeff] : x.terms())
        rhs[index.at(mono)] = coeff;
    return integer_solvable(a, rhs);
}

} // namespace cgap
