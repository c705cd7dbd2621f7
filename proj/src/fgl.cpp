#include "cgap/fgl.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cgap/errors.hpp"

namespace cgap {

// ---------------------------------------------------------------- VPoly

VPoly::VPoly(int v_count) : v_count_(v_count) {}

VPoly VPoly::constant(int v_count, const mpq_class& c) {
    VPoly out(v_count);
    out.insert_term(std::vector<int>(v_count, 0), c);
    return out;
}

VPoly VPoly::vgen(int v_count, int index) {
    if (index < 1 || index > v_count)
        throw ContractError("VPoly: v index out of range");
    VPoly out(v_count);
    std::vector<int> alpha(v_count, 0);
    alpha[index - 1] = 1;
    out.insert_term(std::move(alpha), 1);
    return out;
}

VPoly VPoly::monomial(int v_count, const std::vector<int>& alpha, const mpq_class& c) {
    VPoly out(v_count);
    out.insert_term(alpha, c);
    return out;
}

void VPoly::insert_term(std::vector<int> alpha, mpq_class c) {
    if (static_cast<int>(alpha.size()) != v_count_)
        throw ContractError("VPoly: exponent arity mismatch");
    c.canonicalize(); // raw (num, den) constructions are not canonical
    if (c == 0)
        return;
    const auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        terms_.emplace(std::move(alpha), std::move(c));
        return;
    }
    it->second += c;
    if (it->second == 0)
        terms_.erase(it);
}

bool VPoly::is_integral() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
        return t.second.get_den() == 1;
    });
}

mpq_class VPoly::constant_part() const {
    const auto it = terms_.find(std::vector<int>(v_count_, 0));
    return it == terms_.end() ? mpq_class(0) : it->second;
}

bool VPoly::in_p_v_ideal(std::int64_t p) const {
    const mpq_class c = constant_part();
    if (c.get_den() != 1)
        return false;
    return mpz_divisible_ui_p(c.get_num().get_mpz_t(), static_cast<unsigned long>(p)) != 0;
}

std::int64_t VPoly::monomial_degree_drop(const std::vector<int>& alpha, std::int64_t p) {
    std::int64_t drop = 0;
    std::int64_t ppow = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        ppow *= p;
        drop += alpha[i] * (ppow - 1);
    }
    return drop;
}

VPoly operator+(const VPoly& a, const VPoly& b) {
    if (a.v_count_ != b.v_count_)
        throw ContractError("VPoly: v-count mismatch");
    VPoly out = a;
    for (const auto& [alpha, c] : b.terms_)
        out.insert_term(alpha, c);
    return out;
}

VPoly operator-(const VPoly& a, const VPoly& b) {
    return a + mpq_class(-1) * b;
}

VPoly operator*(const VPoly& a, const VPoly& b) {
    if (a.v_count_ != b.v_count_)
        throw ContractError("VPoly: v-count mismatch");
    VPoly out(a.v_count_);
    for (const auto& [aa, ca] : a.terms_)
        for (const auto& [ab, cb] : b.terms_) {
            std::vector<int> alpha(aa.size());
            for (std::size_t i = 0; i < aa.size(); ++i)
                alpha[i] = aa[i] + ab[i];
            out.insert_term(std::move(alpha), ca * cb);
        }
    return out;
}

VPoly operator*(const mpq_class& c, const VPoly& a) {
    VPoly out(a.v_count_);
    if (c == 0)
        return out;
    for (const auto& [alpha, ca] : a.terms_)
        out.insert_term(alpha, c * ca);
    return out;
}

bool operator==(const VPoly& a, const VPoly& b) {
    return a.v_count_ == b.v_count_ && a.terms_ == b.terms_;
}

VPoly VPoly::pow(int e) const {
    if (e < 0)
        throw ContractError("VPoly: negative power");
    VPoly result = VPoly::constant(v_count_, 1);
    VPoly base = *this;
    while (e > 0) {
        if (e & 1)
            result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

std::string VPoly::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [alpha, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << c.get_str();
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (alpha[i] > 0) {
                os << "*v" << (i + 1);
                if (alpha[i] > 1)
                    os << "^" << alpha[i];
            }
    }
    return os.str();
}

// ---------------------------------------------------------------- TruncSeries

namespace {

int total_degree(const std::vector<int>& exps) {
    int d = 0;
    for (const int e : exps)
        d += e;
    return d;
}

} // namespace

TruncSeries::TruncSeries(int nvars, int degree_bound, int v_count)
    : nvars_(nvars), bound_(degree_bound), v_count_(v_count) {
    if (nvars < 1 || nvars > 3)
        throw ContractError("TruncSeries: 1 to 3 variables supported");
    if (degree_bound < 1)
        throw ContractError("TruncSeries: positive degree bound required");
}

TruncSeries TruncSeries::zero(int nvars, int degree_bound, int v_count) {
    return TruncSeries(nvars, degree_bound, v_count);
}

TruncSeries TruncSeries::one(int nvars, int degree_bound, int v_count) {
    TruncSeries s(nvars, degree_bound, v_count);
    s.set_coefficient(std::vector<int>(nvars, 0), VPoly::constant(v_count, 1));
    return s;
}

TruncSeries TruncSeries::variable(int nvars, int degree_bound, int v_count, int index) {
    if (index < 0 || index >= nvars)
        throw ContractError("TruncSeries: variable index out of range");
    TruncSeries s(nvars, degree_bound, v_count);
    std::vector<int> e(nvars, 0);
    e[index] = 1;
    s.set_coefficient(std::move(e), VPoly::constant(v_count, 1));
    return s;
}

VPoly TruncSeries::coefficient(const std::vector<int>& exps) const {
    const auto it = terms_.find(exps);
    return it == terms_.end() ? VPoly(v_count_) : it->second;
}

void TruncSeries::set_coefficient(std::vector<int> exps, VPoly c) {
    if (static_cast<int>(exps.size()) != nvars_)
        throw ContractError("TruncSeries: exponent arity mismatch");
    if (total_degree(exps) > bound_ || c.is_zero()) {
        terms_.erase(exps);
        return;
    }
    terms_.insert_or_assign(std::move(exps), std::move(c));
}

bool TruncSeries::has_constant_term() const {
    return terms_.count(std::vector<int>(nvars_, 0)) > 0;
}

bool TruncSeries::is_integral() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.second.is_integral(); });
}

TruncSeries TruncSeries::graded_component(int d, std::int64_t p) const {
    TruncSeries out(nvars_, bound_, v_count_);
    for (const auto& [exps, c] : terms_) {
        VPoly part(v_count_);
        for (const auto& [alpha, q] : c.terms())
            if (total_degree(exps) - VPoly::monomial_degree_drop(alpha, p) == d)
                part = part + VPoly::monomial(v_count_, alpha, q);
        if (!part.is_zero())
            out.set_coefficient(exps, std::move(part));
    }
    return out;
}

bool TruncSeries::is_homogeneous_of(int d, std::int64_t p) const {
    for (const auto& [exps, c] : terms_)
        for (const auto& [alpha, q] : c.terms()) {
            (void)q;
            if (total_degree(exps) - VPoly::monomial_degree_drop(alpha, p) != d)
                return false;
        }
    return true;
}

namespace {

void require_same_shape(const TruncSeries& a, const TruncSeries& b, const char* op) {
    if (a.nvars() != b.nvars() || a.degree_bound() != b.degree_bound() ||
        a.v_count() != b.v_count())
        throw ContractError(std::string(op) + ": series shape mismatch");
}

} // namespace

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    require_same_shape(a, b, "series add");
    TruncSeries out = a;
    for (const auto& [exps, c] : b.terms_)
        out.set_coefficient(exps, out.coefficient(exps) + c);
    return out;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    return a + mpq_class(-1) * b;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    require_same_shape(a, b, "series mul");
    TruncSeries out(a.nvars_, a.bound_, a.v_count_);
    for (const auto& [ea, ca] : a.terms_) {
        const int da = total_degree(ea);
        for (const auto& [eb, cb] : b.terms_) {
            if (da + total_degree(eb) > a.bound_)
                continue;
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < ea.size(); ++i)
                e[i] = ea[i] + eb[i];
            out.set_coefficient(e, out.coefficient(e) + ca * cb);
        }
    }
    return out;
}

TruncSeries operator*(const VPoly& c, const TruncSeries& a) {
    TruncSeries out(a.nvars_, a.bound_, a.v_count_);
    for (const auto& [exps, ca] : a.terms_)
        out.set_coefficient(exps, c * ca);
    return out;
}

TruncSeries operator*(const mpq_class& c, const TruncSeries& a) {
    return VPoly::constant(a.v_count_, c) * a;
}

bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.nvars_ == b.nvars_ && a.bound_ == b.bound_ && a.v_count_ == b.v_count_ &&
           a.terms_ == b.terms_;
}

TruncSeries TruncSeries::pow(int e) const {
    if (e < 0)
        throw ContractError("TruncSeries: negative power");
    TruncSeries result = TruncSeries::one(nvars_, bound_, v_count_);
    TruncSeries base = *this;
    while (e > 0) {
        if (e & 1)
            result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

TruncSeries TruncSeries::substitute(const std::vector<TruncSeries>& images) const {
    if (static_cast<int>(images.size()) != nvars_)
        throw ContractError("substitute: one image per variable required");
    for (const TruncSeries& img : images) {
        require_same_shape(images.front(), img, "substitute");
        if (img.has_constant_term())
            throw ContractError("substitute: image with constant term breaks truncation");
        if (img.v_count() != v_count_)
            throw ContractError("substitute: v-count mismatch");
    }
    const TruncSeries& model = images.front();
    // Power tables: images[i]^e for e up to the bound.
    std::vector<std::vector<TruncSeries>> powers(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        powers[i].push_back(TruncSeries::one(model.nvars_, model.bound_, v_count_));
        for (int e = 1; e <= bound_; ++e)
            powers[i].push_back(powers[i].back() * images[i]);
    }
    TruncSeries out(model.nvars_, model.bound_, v_count_);
    for (const auto& [exps, c] : terms_) {
        TruncSeries prod = TruncSeries::one(model.nvars_, model.bound_, v_count_);
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] > 0)
                prod = prod * powers[i][exps[i]];
        out = out + c * prod;
    }
    return out;
}

// ---------------------------------------------------------------- FGLContext

FGLContext::FGLContext(std::int64_t p, int degree_bound, int v_count, TruncSeries log,
                       TruncSeries exp, TruncSeries f)
    : p_(p), bound_(degree_bound), v_count_(v_count), log_(std::move(log)),
      exp_(std::move(exp)), f_(std::move(f)) {}

FGLContext FGLContext::build(std::int64_t p, int degree_bound, int v_count) {
    if (!is_prime(p) || p < 5)
        throw ConfigError("build_fgl: p must be a prime >= 5");
    if (degree_bound < p + 2)
        throw ConfigError("build_fgl: degree bound must be at least p + 2");
    // v's beyond v_count must be invisible below the truncation.
    std::int64_t reach = 1;
    for (int i = 0; i <= v_count; ++i)
        reach *= p;
    if (reach - 1 <= degree_bound)
        throw ConfigError("build_fgl: v-count too small for the degree bound");

    // Logarithm coefficients l_k for p^k <= bound via the recursion
    // p * l_k = sum_{i<k} l_i * v_{k-i}^(p^i).
    std::vector<VPoly> ell = {VPoly::constant(v_count, 1)};
    std::vector<std::int64_t> ppow = {1};
    while (ppow.back() * p <= degree_bound) {
        ppow.push_back(ppow.back() * p);
        const int k = static_cast<int>(ell.size());
        VPoly acc(v_count);
        for (int i = 0; i < k; ++i)
            acc = acc + ell[i] * VPoly::vgen(v_count, k - i).pow(static_cast<int>(ppow[i]));
        ell.push_back(mpq_class(1, p) * acc);
    }

    TruncSeries log(1, degree_bound, v_count);
    for (std::size_t k = 0; k < ell.size(); ++k)
        log.set_coefficient({static_cast<int>(ppow[k])}, ell[k]);

    // exp = compositional inverse of log, solved degree by degree.
    TruncSeries exp = TruncSeries::variable(1, degree_bound, v_count, 0);
    const TruncSeries x = TruncSeries::variable(1, degree_bound, v_count, 0);
    for (int d = 2; d <= degree_bound; ++d) {
        const TruncSeries err = log.substitute({exp}) - x;
        const VPoly cd = err.coefficient({d});
        if (cd.is_zero())
            continue;
        TruncSeries corr(1, degree_bound, v_count);
        corr.set_coefficient({d}, cd);
        exp = exp - corr;
    }

    // F(x, y) = exp(log x + log y) as a 2-variable series.
    TruncSeries log_x(2, degree_bound, v_count);
    TruncSeries log_y(2, degree_bound, v_count);
    for (const auto& [exps, c] : log.terms()) {
        log_x.set_coefficient({exps[0], 0}, c);
        log_y.set_coefficient({0, exps[0]}, c);
    }
    const TruncSeries f = exp.substitute({log_x + log_y});

    FGLContext ctx(p, degree_bound, v_count, std::move(log), std::move(exp),
                   std::move(f));
    ctx.verify_invariants();
    return ctx;
}

FGLContext FGLContext::from_parts(std::int64_t p, int degree_bound, int v_count,
                                  TruncSeries log, TruncSeries exp, TruncSeries f) {
    return FGLContext(p, degree_bound, v_count, std::move(log), std::move(exp),
                      std::move(f));
}

TruncSeries FGLContext::formal_sum(const TruncSeries& a, const TruncSeries& b) const {
    require_same_shape(a, b, "formal_sum");
    return f_.substitute({a, b});
}

TruncSeries FGLContext::multiple_via_log(std::int64_t m, const TruncSeries& x) const {
    if (m < 0)
        throw ContractError("multiple: m must be >= 0");
    if (m == 0)
        return TruncSeries::zero(x.nvars(), x.degree_bound(), x.v_count());
    const TruncSeries lx = log_.substitute({x});
    return exp_.substitute({mpq_class(m) * lx});
}

TruncSeries FGLContext::multiple_iterated(std::int64_t m, const TruncSeries& x) const {
    if (m < 0)
        throw ContractError("multiple: m must be >= 0");
    TruncSeries acc = TruncSeries::zero(x.nvars(), x.degree_bound(), x.v_count());
    if (m == 0)
        return acc;
    // Square-and-add chain of formal sums.
    TruncSeries base = x;
    std::int64_t k = m;
    bool acc_set = false;
    while (k > 0) {
        if (k & 1) {
            acc = acc_set ? formal_sum(acc, base) : base;
            acc_set = true;
        }
        k >>= 1;
        if (k > 0)
            base = formal_sum(base, base);
    }
    return acc;
}

TruncSeries FGLContext::multiple(std::int64_t m, const TruncSeries& x) const {
    const TruncSeries via_log = multiple_via_log(m, x);
    const TruncSeries iterated = multiple_iterated(m, x);
    if (!(via_log == iterated))
        throw InternalError("multiple: evaluation strategies disagree");
    return via_log;
}

void FGLContext::verify_invariants() const {
    const TruncSeries x = TruncSeries::variable(1, bound_, v_count_, 0);
    if (!(exp_.substitute({log_}) == x))
        throw InternalError("fgl: exp(log x) != x");
    if (!(log_.substitute({exp_}) == x))
        throw InternalError("fgl: log(exp x) != x");
    if (!log_.is_homogeneous_of(1, p_) || !exp_.is_homogeneous_of(1, p_) ||
        !f_.is_homogeneous_of(1, p_))
        throw InternalError("fgl: series not graded-homogeneous");
    if (!f_.is_integral())
        throw InternalError("fgl: formal sum has non-integral coefficients");

    // Unit law F(x, 0) = x.
    const TruncSeries zero1 = TruncSeries::zero(1, bound_, v_count_);
    if (!(formal_sum(x, zero1) == x))
        throw InternalError("fgl: F(x, 0) != x");

    // Commutativity: coefficients symmetric under exponent swap.
    for (const auto& [exps, c] : f_.terms())
        if (!(f_.coefficient({exps[1], exps[0]}) == c))
            throw InternalError("fgl: F not commutative");

    // Associativity on three variables.
    const TruncSeries x3 = TruncSeries::variable(3, bound_, v_count_, 0);
    const TruncSeries y3 = TruncSeries::variable(3, bound_, v_count_, 1);
    const TruncSeries z3 = TruncSeries::variable(3, bound_, v_count_, 2);
    const TruncSeries f_xy = f_.substitute({x3, y3});
    const TruncSeries f_yz = f_.substitute({y3, z3});
    if (!(f_.substitute({f_xy, z3}) == f_.substitute({x3, f_yz})))
        throw InternalError("fgl: F not associative");

    // [p] x lands in (p, v_1, ..., v_K) coefficientwise; this is what lets
    // mod-I reduction factor through the [p]-relations.
    const TruncSeries px = multiple(p_, x);
    if (!px.is_integral())
        throw InternalError("fgl: [p]x has non-integral coefficients");
    for (const auto& [exps, c] : px.terms()) {
        (void)exps;
        if (!c.in_p_v_ideal(p_))
            throw InternalError("fgl: [p]x coefficient outside (p, v_1, ...)");
    }
}

// ---------------------------------------------------------------- cache

namespace {

std::string exps_key(const std::vector<int>& exps) {
    std::string s;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(exps[i]);
    }
    return s;
}

std::vector<int> parse_key(const std::string& key, int arity) {
    std::vector<int> out;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ','))
        out.push_back(std::stoi(part));
    if (static_cast<int>(out.size()) != arity)
        throw ConfigError("fgl cache: bad exponent key arity");
    return out;
}

nlohmann::json series_to_json(const TruncSeries& s) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [exps, c] : s.terms()) {
        nlohmann::json cj = nlohmann::json::object();
        for (const auto& [alpha, q] : c.terms())
            cj[exps_key(alpha)] = q.get_str();
        j[exps_key(exps)] = std::move(cj);
    }
    return j;
}

TruncSeries series_from_json(const nlohmann::json& j, int nvars, int bound, int vcount) {
    TruncSeries s(nvars, bound, vcount);
    for (const auto& [key, cj] : j.items()) {
        VPoly c(vcount);
        for (const auto& [akey, qstr] : cj.items()) {
            const std::vector<int> alpha = parse_key(akey, vcount);
            mpq_class q(qstr.get<std::string>());
            q.canonicalize();
            VPoly unit = VPoly::constant(vcount, q);
            for (std::size_t i = 0; i < alpha.size(); ++i)
                for (int k = 0; k < alpha[i]; ++k)
                    unit = unit * VPoly::vgen(vcount, static_cast<int>(i) + 1);
            c = c + unit;
        }
        s.set_coefficient(parse_key(key, nvars), std::move(c));
    }
    return s;
}

constexpr int kCacheFormatVersion = 1;

} // namespace

std::string FGLContext::to_cache_string() const {
    nlohmann::json j;
    j["format_version"] = kCacheFormatVersion;
    j["p"] = p_;
    j["degree_bound"] = bound_;
    j["v_count"] = v_count_;
    j["log"] = series_to_json(log_);
    j["exp"] = series_to_json(exp_);
    j["formal_sum"] = series_to_json(f_);
    return j.dump(2) + "\n";
}

FGLContext FGLContext::from_cache_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format_version").get<int>() != kCacheFormatVersion)
        throw ConfigError("fgl cache: unsupported format version");
    const std::int64_t p = j.at("p").get<std::int64_t>();
    const int bound = j.at("degree_bound").get<int>();
    const int vcount = j.at("v_count").get<int>();
    return from_parts(p, bound, vcount,
                      series_from_json(j.at("log"), 1, bound, vcount),
                      series_from_json(j.at("exp"), 1, bound, vcount),
                      series_from_json(j.at("formal_sum"), 2, bound, vcount));
}

std::filesystem::path fgl_cache_file(const std::filesystem::path& dir, std::int64_t p,
                                     int degree_bound, int v_count) {
    return dir / ("fgl-p" + std::to_string(p) + "-d" + std::to_string(degree_bound) +
                  "-k" + std::to_string(v_count) + ".json");
}

void save_fgl(const FGLContext& ctx, const std::filesystem::path& file) {
    std::filesystem::create_directories(file.parent_path());
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw ConfigError("fgl cache: cannot write " + tmp.string());
        os << ctx.to_cache_string();
    }
    std::filesystem::rename(tmp, file);
}

FGLContext load_fgl(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is)
        throw ConfigError("fgl cache: cannot read " + file.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return FGLContext::from_cache_string(buf.str());
}

FGLContext build_fgl_cached(std::int64_t p, int degree_bound, int v_count,
                            const std::filesystem::path& dir) {
    const std::filesystem::path file = fgl_cache_file(dir, p, degree_bound, v_count);
    if (std::filesystem::exists(file)) {
        try {
            FGLContext ctx = load_fgl(file);
            if (ctx.p() == p && ctx.degree_bound() == degree_bound &&
                ctx.v_count() == v_count) {
                ctx.verify_invariants();
                return ctx;
            }
        } catch (const std::exception&) {
            // fall through to rebuild
        }
    }
    FGLContext ctx = FGLContext::build(p, degree_bound, v_count);
    save_fgl(ctx, file);
    return ctx;
}

// ---------------------------------------------------------------- mod I

ModIClass::ModIClass(int nvars, int degree_bound, std::int64_t p)
    : nvars_(nvars), bound_(degree_bound), p_(p) {}

void ModIClass::add_term(std::vector<int> exps, std::int64_t c) {
    if (static_cast<int>(exps.size()) != nvars_)
        throw ContractError("ModIClass: exponent arity mismatch");
    if (total_degree(exps) > bound_)
        return;
    c %= p_;
    if (c < 0)
        c += p_;
    if (c == 0)
        return;
    const auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(std::move(exps), c);
        return;
    }
    it->second = (it->second + c) % p_;
    if (it->second == 0)
        terms_.erase(it);
}

ModIClass operator+(const ModIClass& a, const ModIClass& b) {
    if (a.nvars_ != b.nvars_ || a.p_ != b.p_ || a.bound_ != b.bound_)
        throw ContractError("ModIClass: shape mismatch");
    ModIClass out = a;
    for (const auto& [exps, c] : b.terms_)
        out.add_term(exps, c);
    return out;
}

ModIClass operator*(const ModIClass& a, const ModIClass& b) {
    if (a.nvars_ != b.nvars_ || a.p_ != b.p_ || a.bound_ != b.bound_)
        throw ContractError("ModIClass: shape mismatch");
    ModIClass out(a.nvars_, a.bound_, a.p_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < ea.size(); ++i)
                e[i] = ea[i] + eb[i];
            out.add_term(std::move(e), ca * cb);
        }
    return out;
}

std::string ModIClass::str(const std::vector<std::string>& var_names) const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [exps, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        std::string vars;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] == 0)
                continue;
            if (!vars.empty())
                vars += "*";
            vars += var_names.at(i);
            if (exps[i] > 1)
                vars += "^" + std::to_string(exps[i]);
        }
        if (vars.empty())
            os << c;
        else if (c == 1)
            os << vars;
        else
            os << c << "*" << vars;
    }
    return os.str();
}

ModIClass reduce_mod_I(const TruncSeries& s, std::int64_t p) {
    ModIClass out(s.nvars(), s.degree_bound(), p);
    for (const auto& [exps, c] : s.terms()) {
        const mpq_class q = c.constant_part();
        if (q == 0)
            continue;
        if (q.get_den() != 1)
            throw InternalError("reduce_mod_I: non-integral coefficient");
        const mpz_class rem = q.get_num() % p;
        out.add_term(exps, rem.get_si());
    }
    return out;
}

RingElement mod_i_to_ring(const ModIClass& c, const RingSpecPtr& ring) {
    if (ring->generator_count() != c.nvars())
        throw ContractError("mod_i_to_ring: arity mismatch");
    for (int i = 0; i < ring->generator_count(); ++i)
        if (ring->generator(i).torsion != c.p())
            throw ContractError("mod_i_to_ring: presentation torsion must be p");
    std::map<Monomial, std::int64_t> raw;
    for (const auto& [exps, coeff] : c.terms())
        raw.emplace(Monomial(exps.begin(), exps.end()), coeff);
    return RingElement(ring, std::move(raw));
}

// ---------------------------------------------------------------- conjugation

namespace {

BpSubstitution bp_conj_single(const FGLContext& ctx, const GnEpsilonConfig& cfg,
                              BpOrientation o) {
    const int bound = ctx.degree_bound();
    const TruncSeries beta = TruncSeries::variable(2, bound, ctx.v_count(), 0);
    const TruncSeries gamma = TruncSeries::variable(2, bound, ctx.v_count(), 1);
    if (o == BpOrientation::Forward) {
        return BpSubstitution{
            ctx.formal_sum(beta, ctx.multiple(cfg.p_pow(cfg.n - 3), gamma)),
            ctx.formal_sum(gamma, ctx.multiple(cfg.epsilon, beta)),
        };
    }
    // Reverse: lift the inverse dual action on characters through c1, taking
    // canonical residue representatives as formal multiples.
    const SemidirectPGroup g = SemidirectPGroup::build(cfg);
    const Character th = g.dual_action(-1, g.theta());
    const Character ph = g.dual_action(-1, g.phi());
    const auto lift = [&](const Character& chi) {
        return ctx.formal_sum(ctx.multiple(chi.exponents()[0], beta),
                              ctx.multiple(chi.exponents()[1], gamma));
    };
    return BpSubstitution{lift(th), lift(ph)};
}

} // namespace

BpSubstitution bp_conj_map(const FGLContext& ctx, const GnEpsilonConfig& cfg, int i,
                           BpOrientation o) {
    if (i < 0)
        throw ContractError("bp_conj_map: i must be >= 0");
    const int bound = ctx.degree_bound();
    BpSubstitution acc{TruncSeries::variable(2, bound, ctx.v_count(), 0),
                       TruncSeries::variable(2, bound, ctx.v_count(), 1)};
    if (i == 0)
        return acc;
    const BpSubstitution single = bp_conj_single(ctx, cfg, o);
    for (int k = 0; k < i; ++k)
        acc = BpSubstitution{apply_substitution(single, acc.beta_image),
                             apply_substitution(single, acc.gamma_image)};
    return acc;
}

TruncSeries apply_substitution(const BpSubstitution& s, const TruncSeries& x) {
    if (x.nvars() != 2)
        throw ContractError("apply_substitution: 2-variable series required");
    return x.substitute({s.beta_image, s.gamma_image});
}

TruncSeries restrict_to_beta(const TruncSeries& two_var) {
    if (two_var.nvars() != 2)
        throw ContractError("restrict_to_beta: 2-variable series required");
    TruncSeries out(1, two_var.degree_bound(), two_var.v_count());
    for (const auto& [exps, c] : two_var.terms())
        if (exps[1] == 0)
            out.set_coefficient({exps[0]}, c);
    return out;
}

// ---------------------------------------------------------------- lemma 4

namespace {

ModIClass expected_one_var(const FGLContext& ctx, std::int64_t constant,
                           int degree, std::int64_t coeff) {
    ModIClass e(1, ctx.degree_bound(), ctx.p());
    if (constant != 0)
        e.add_term({0}, constant);
    e.add_term({degree}, coeff);
    return e;
}

} // namespace

VerificationReport verify_lemma4(const GnEpsilonConfig& cfg, const FGLContext& ctx) {
    const std::int64_t p = cfg.p;
    if (ctx.p() != p)
        throw ContractError("verify_lemma4: context prime mismatch");
    if (ctx.degree_bound() < p + 2)
        throw ConfigError("verify_lemma4: degree bound below p + 2");

    const int bound = ctx.degree_bound();
    const int vc = ctx.v_count();
    const SemidirectPGroup g = SemidirectPGroup::build(cfg);

    VerificationReport r;
    r.claim = "lemma4";
    r.add_param("p", std::to_string(p));
    r.add_param("n", std::to_string(cfg.n));
    r.add_param("epsilon", std::to_string(cfg.epsilon));
    r.add_param("bp_degree_bound", std::to_string(2 * bound));
    r.add_param("v_count", std::to_string(vc));
    r.add_param("v_generator_choice", "log-recursion p*l_n = sum l_i v_(n-i)^(p^i)");

    const TruncSeries bprime = TruncSeries::variable(1, bound, vc, 0);
    const TruncSeries one1 = TruncSeries::one(1, bound, vc);
    const std::vector<std::string> bname = {"b'"};

    // (b) power congruence (1 + [i]b')^p = 1 + i b'^p mod I, i = 1..p-1.
    for (std::int64_t i = 1; i < p; ++i) {
        const TruncSeries t = (one1 + ctx.multiple(i, bprime)).pow(static_cast<int>(p));
        const ModIClass got = reduce_mod_I(t, p);
        const ModIClass want = expected_one_var(ctx, 1, static_cast<int>(p), i);
        r.add_case("power_congruence_i=" + std::to_string(i),
                   "(1+[i]b')^p = 1+i*b'^p mod I", got.str(bname), want.str(bname));
    }

    // (a) distinct product: prod over all residues = 1 - b'^(p-1) mod I.
    {
        TruncSeries t = one1;
        for (std::int64_t i = 0; i < p; ++i)
            t = t * (one1 + ctx.multiple(i, bprime));
        const ModIClass got = reduce_mod_I(t, p);
        const ModIClass want = expected_one_var(ctx, 1, static_cast<int>(p - 1), p - 1);
        r.add_case("distinct_product", "prod_i (1+[i]b') = 1-b'^(p-1) mod I",
                   got.str(bname), want.str(bname));
    }

    // Per-irrep restriction cases: every induced irrep reduces to one of the
    // two shapes above; mod-I Chern generators are collected on the way.
    std::vector<RingElement> mod_i_gens;
    {
        const RingSpecPtr span_ring = make_ring({{"b'", 1, p}}, bound);
        std::set<std::map<Monomial, std::int64_t>> seen;
        bool all_match = true;
        std::int64_t induced = 0;
        for (const Irrep& rho : irreps(g)) {
            const auto chars = restrict_irrep(g, rho, SubgroupOfM::BSubgroup);
            TruncSeries total = one1;
            for (const Character& chi : chars)
                total = total * (one1 + ctx.multiple(chi.exponents()[0], bprime));
            if (rho.kind == Irrep::Kind::Induced) {
                ++induced;
                const ModIClass got = reduce_mod_I(total, p);
                std::set<std::int64_t> values;
                for (const Character& chi : chars)
                    values.insert(chi.exponents()[0]);
                const ModIClass want =
                    values.size() == 1
                        ? expected_one_var(ctx, 1, static_cast<int>(p), *values.begin())
                        : expected_one_var(ctx, 1, static_cast<int>(p - 1), p - 1);
                all_match = all_match && got == want;
            }
            // Graded Chern classes of the restriction, reduced mod I.
            for (int d = 1; d <= bound; ++d) {
                const ModIClass comp = reduce_mod_I(total.graded_component(d, p), p);
                if (comp.is_zero())
                    continue;
                const RingElement e = mod_i_to_ring(comp, span_ring);
                if (seen.insert(e.terms()).second)
                    mod_i_gens.push_back(e);
            }
        }
        r.add_case("induced_restrictions_match_two_shapes",
                   std::to_string(induced) + " induced irreps", all_match);

        // (d) the mod-I Chern span misses b'^(p+1).
        const RingElement target =
            pow(RingElement::generator(span_ring, 0), static_cast<int>(p + 1));
        const GradedSubgroup at_gap =
            subring_component(span_ring, mod_i_gens, static_cast<int>(p + 1));
        r.add_case("bp_chern_span_misses_witness",
                   "degree " + std::to_string(2 * (p + 1)),
                   !subgroup_contains(at_gap, target));
    }

    // (c) transfer sum: sum_i Res(conj^i(g^(p-1) b^2)) = -b'^(p+1) mod I,
    // under both orientations.
    const TruncSeries beta = TruncSeries::variable(2, bound, vc, 0);
    const TruncSeries gamma = TruncSeries::variable(2, bound, vc, 1);
    const TruncSeries payload = gamma.pow(static_cast<int>(p - 1)) * beta.pow(2);
    const ModIClass want =
        expected_one_var(ctx, 0, static_cast<int>(p + 1), p - 1);
    ModIClass got_fwd(1, bound, p), got_rev(1, bound, p);
    for (const BpOrientation o : {BpOrientation::Forward, BpOrientation::Reverse}) {
        const BpSubstitution single = bp_conj_single(ctx, cfg, o);
        TruncSeries acc(1, bound, vc);
        TruncSeries conjugate = payload;
        for (std::int64_t i = 0; i < p; ++i) {
            acc = acc + restrict_to_beta(conjugate);
            conjugate = apply_substitution(single, conjugate);
        }
        const ModIClass got = reduce_mod_I(acc, p);
        if (o == BpOrientation::Forward)
            got_fwd = got;
        else
            got_rev = got;
    }
    r.add_case("transfer_sum_forward", "sum_i Res(conj^i(g^(p-1)*b^2)) mod I",
               got_fwd.str(bname), want.str(bname));
    r.add_case("transfer_sum_reverse", "opposite conjugation exponent",
               got_rev.str(bname), want.str(bname));
    r.add_case("transfer_orientation_independent", "", got_fwd == got_rev);

    // Mod-I identity of the p-th conjugation iterate; the exact-level
    // residual in the free truncated ring is recorded for inspection, not
    // asserted (the [p]-relations are not imposed on representatives).
    {
        const BpSubstitution full = bp_conj_map(ctx, cfg, static_cast<int>(p));
        const ModIClass beta_red = reduce_mod_I(full.beta_image, p);
        const ModIClass gamma_red = reduce_mod_I(full.gamma_image, p);
        ModIClass beta_id(2, bound, p), gamma_id(2, bound, p);
        beta_id.add_term({1, 0}, 1);
        gamma_id.add_term({0, 1}, 1);
        r.add_case("conjugation_order_p_mod_I", "",
                   beta_red == beta_id && gamma_red == gamma_id);
        const TruncSeries beta_resid = full.beta_image - beta;
        const TruncSeries gamma_resid = full.gamma_image - gamma;
        r.add_witness("conjugation_p_exact_residual",
                      (beta_resid.is_zero() && gamma_resid.is_zero())
                          ? "0"
                          : "nonzero in the free ring (killed mod I)");
    }

    r.add_witness("witness_element",
                  got_fwd.str(bname) + " (= -b'^" + std::to_string(p + 1) + " mod I)");
    r.add_witness("gap_degree", std::to_string(2 * (p + 1)));
    return r;
}

} // namespace cgap
