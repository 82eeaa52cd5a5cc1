#pragma once

#include "numberfield.hpp"

#include <climits>
#include <functional>
#include <optional>

namespace gwcert {

constexpr int kInfinity = INT_MAX;

struct PrimeSpec {
    int e = 1;
    int f = 1;
    std::string alpha;        // second generator of (p, alpha)
    std::string uniformizer;  // optional
};

struct OrderSpec {
    std::vector<std::string> integral_basis;  // empty: automatic (degree <= 2)
    std::map<long long, std::vector<PrimeSpec>> prime_splittings;
    std::vector<std::string> fundamental_units;
    bool units_given = false;
    int torsion_order = 0;  // 0: automatic
    int class_bound = 12;
};

namespace detail {

struct OrderCore {
    NumberField K;
    int n = 1;
    std::vector<FieldElement> basis;
    RatMatrix to_basis;                                 // coords = to_basis * power coefficients
    std::vector<std::vector<std::vector<Integer>>> mul;  // mul[i][j] = coords of basis_i * basis_j
    OrderSpec spec;
    Integer d = 0;  // squarefree d for quadratic fields
    FieldElement sqrt_d;
    std::vector<Rational> coords(const FieldElement& x) const
    {
        std::vector<Rational> c(n, Rational(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (to_basis[i][j] != 0 && x.coeffs()[j] != 0) c[i] += to_basis[i][j] * x.coeffs()[j];
        return c;
    }
    FieldElement from_coords(const std::vector<Integer>& a) const
    {
        FieldElement r = K.zero();
        for (int i = 0; i < n; ++i)
            if (a[i] != 0) r += Rational(a[i]) * basis[i];
        return r;
    }
    std::vector<Integer> mul_coords(const std::vector<Integer>& a, const std::vector<Integer>& b) const
    {
        std::vector<Integer> r(n, Integer(0));
        for (int i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < n; ++j) {
                if (b[j] == 0) continue;
                Integer ab = a[i] * b[j];
                for (int k = 0; k < n; ++k) r[k] += ab * mul[i][j][k];
            }
        }
        return r;
    }
};

}  // namespace detail

// A prime ideal of the maximal order together with its valuation and residue field.
class PrimeIdeal {
public:
    long long p = 0;
    int e = 1;
    int f = 1;
    int index = 0;  // position among the primes above p
    FieldElement alpha;
    FieldElement uniformizer;

    long long norm() const
    {
        long long r = 1;
        for (int i = 0; i < f; ++i) r *= p;
        return r;
    }

    std::string label() const
    {
        if (core_->n == 1) return "(" + std::to_string(p) + ")";
        return "(" + std::to_string(p) + ", " + alpha.str() + ")";
    }

    friend bool operator==(const PrimeIdeal& a, const PrimeIdeal& b) { return a.p == b.p && a.index == b.index; }
    friend bool operator!=(const PrimeIdeal& a, const PrimeIdeal& b) { return !(a == b); }
    friend bool operator<(const PrimeIdeal& a, const PrimeIdeal& b)
    {
        return a.p != b.p ? a.p < b.p : a.index < b.index;
    }

    // v_P(x), kInfinity for x = 0
    int valuation(const FieldElement& x) const
    {
        if (x.is_zero()) return kInfinity;
        if (core_->n == 1) return vp_rat(x.coeffs()[0], p);
        auto c = core_->coords(x);
        Integer d = 1;
        for (auto& r : c) d = ilcm(d, den(r));
        std::vector<Integer> a(core_->n);
        for (int i = 0; i < core_->n; ++i) a[i] = num(c[i] * Rational(d));
        int m = INT_MAX;
        for (auto& ai : a)
            if (ai != 0) m = std::min(m, vp_int(ai, p));
        Integer pm = mp::pow(Integer(p), m);
        for (auto& ai : a) ai /= pm;
        return e * (m - vp_int(d, p)) + integral_valuation(a);
    }

    // residue field elements are canonical coordinate vectors mod p
    using Residue = std::vector<long long>;

    Residue residue(const FieldElement& x) const
    {
        if (valuation(x) < 0) throw Error(ErrorKind::InternalAnomaly, "residue of a non-integral element");
        FieldElement y = x;
        int k = 0;
        while (true) {
            auto c = core_->coords(y);
            bool ok = true;
            for (auto& r : c)
                if (den(r) % p == 0) {
                    ok = false;
                    break;
                }
            if (ok) {
                Residue v(core_->n);
                for (int i = 0; i < core_->n; ++i) {
                    long long nn = to_ll(mod_floor(num(c[i]), Integer(p)));
                    long long dd = to_ll(mod_floor(den(c[i]), Integer(p)));
                    v[i] = mulmod(nn, invmod(dd, p), p);
                }
                v = reduce(v);
                if (k > 0) v = rf_mul(v, rf_pow(sigma_res_inv_, k));
                return v;
            }
            if (++k > 4096) throw Error(ErrorKind::InternalAnomaly, "residue normalization did not terminate");
            y = y * sigma_;
        }
    }

    Residue reduce(Residue v) const
    {
        for (size_t r = 0; r < w_rows_.size(); ++r) {
            long long c = v[w_piv_[r]] % p;
            if (c == 0) continue;
            for (int j = 0; j < core_->n; ++j) v[j] = ((v[j] - c * w_rows_[r][j]) % p + p) % p;
        }
        for (auto& x : v) x = ((x % p) + p) % p;
        return v;
    }

    Residue rf_mul(const Residue& a, const Residue& b) const
    {
        std::vector<Integer> ai(a.begin(), a.end()), bi(b.begin(), b.end());
        auto c = core_->mul_coords(ai, bi);
        Residue r(core_->n);
        for (int i = 0; i < core_->n; ++i) r[i] = to_ll(mod_floor(c[i], Integer(p)));
        return reduce(r);
    }

    Residue rf_pow(Residue a, long long k) const
    {
        Residue r = rf_one_;
        while (k > 0) {
            if (k & 1) r = rf_mul(r, a);
            a = rf_mul(a, a);
            k >>= 1;
        }
        return r;
    }

    Residue rf_inv(const Residue& a) const { return rf_pow(a, norm() - 2); }

    long long rf_index(const Residue& v) const
    {
        long long idx = 0;
        for (int j : free_cols_) idx = idx * p + v[j];
        return idx;
    }

    Residue rf_from_index(long long idx) const
    {
        Residue v(core_->n, 0);
        for (size_t k = free_cols_.size(); k-- > 0;) {
            v[free_cols_[k]] = idx % p;
            idx /= p;
        }
        return v;
    }

    FieldElement rf_lift(const Residue& v) const
    {
        std::vector<Integer> a(v.begin(), v.end());
        return core_->from_coords(a);
    }

    // lifts of all residue classes, ordered by index (index 0 is zero)
    std::vector<FieldElement> residue_representatives() const
    {
        std::vector<FieldElement> out;
        for (long long i = 0; i < norm(); ++i) out.push_back(rf_lift(rf_from_index(i)));
        return out;
    }

    const FieldElement& gamma() const { return gamma_; }
    const FieldElement& sigma() const { return sigma_; }
    const detail::OrderCore& core() const { return *core_; }

private:
    friend class MaximalOrder;

    int integral_valuation(std::vector<Integer> a) const
    {
        int v = 0;
        while (true) {
            auto b = core_->mul_coords(a, gamma_coords_);
            for (auto& x : b)
                if (x % p != 0) return v;
            for (auto& x : b) x /= p;
            a = std::move(b);
            ++v;
            if (v > 100000) throw Error(ErrorKind::InternalAnomaly, "valuation loop");
        }
    }

    std::shared_ptr<const detail::OrderCore> core_;
    FieldElement gamma_;
    std::vector<Integer> gamma_coords_;
    FieldElement sigma_;
    Residue sigma_res_inv_;
    Residue rf_one_;
    ModMatrix w_rows_;
    std::vector<size_t> w_piv_;
    std::vector<int> free_cols_;
};

struct UnitGroupData {
    int torsion_order = 2;
    FieldElement torsion_generator;
    std::vector<FieldElement> fundamental_units;
    int rank_nw = 0;
    std::vector<std::pair<int, FieldElement>> mw_generators;  // (k_P, y_P) per prime of M_w
};

enum class Membership { O, O_w, O_w_units };

class MaximalOrder {
public:
    MaximalOrder() = default;
    explicit MaximalOrder(NumberField K, OrderSpec spec = {});

    const NumberField& field() const { return core_->K; }
    int degree() const { return core_->n; }
    const std::vector<FieldElement>& basis() const { return core_->basis; }
    const OrderSpec& spec() const { return core_->spec; }
    std::vector<Rational> coords(const FieldElement& x) const { return core_->coords(x); }
    FieldElement from_coords(const std::vector<Integer>& a) const { return core_->from_coords(a); }
    std::vector<Integer> mul_coords(const std::vector<Integer>& a, const std::vector<Integer>& b) const
    {
        return core_->mul_coords(a, b);
    }
    const Integer& quadratic_d() const { return core_->d; }
    const FieldElement& sqrt_d() const { return core_->sqrt_d; }

    bool is_integral(const FieldElement& x) const
    {
        for (auto& c : coords(x))
            if (den(c) != 1) return false;
        return true;
    }

    std::vector<Integer> integral_coords(const FieldElement& x) const
    {
        std::vector<Integer> a;
        for (auto& c : coords(x)) {
            if (den(c) != 1) throw Error(ErrorKind::InternalAnomaly, "element not integral: " + x.str());
            a.push_back(num(c));
        }
        return a;
    }

    bool has_splitting(long long p) const
    {
        return core_->n <= 2 || core_->spec.prime_splittings.count(p);
    }

    std::vector<PrimeIdeal> primes_above(long long p) const;

    // rational primes at which x can have a nonzero valuation
    std::vector<long long> support_primes(const FieldElement& x) const
    {
        std::vector<Integer> cand;
        if (x.is_zero()) return {};
        Rational nm = x.norm();
        cand.push_back(num(nm));
        cand.push_back(den(nm));
        Integer d = 1;
        for (auto& c : coords(x)) d = ilcm(d, den(c));
        cand.push_back(d);
        std::vector<long long> out;
        for (auto& c : cand) {
            if (abs(c) <= 1) continue;
            for (auto& [q, k] : factor_integer(c)) out.push_back(to_ll(q));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // the primes with v_P(w) != 0
    std::vector<PrimeIdeal> mw_set(const FieldElement& w) const
    {
        if (w.is_zero()) throw Error(ErrorKind::DivisionByZero, "M_w of zero");
        std::vector<PrimeIdeal> out;
        for (long long q : support_primes(w))
            for (auto& P : primes_above(q))
                if (P.valuation(w) != 0) out.push_back(P);
        return out;
    }

    bool membership(const FieldElement& x, const FieldElement& w, Membership which) const
    {
        if (x.is_zero()) return which != Membership::O_w_units;
        auto mw = mw_set(w);
        for (long long q : support_primes(x))
            for (auto& P : primes_above(q)) {
                int v = P.valuation(x);
                bool in_mw = std::find(mw.begin(), mw.end(), P) != mw.end();
                if (which == Membership::O && v < 0) return false;
                if (which == Membership::O_w && !in_mw && v < 0) return false;
                if (which == Membership::O_w_units && !in_mw && v != 0) return false;
            }
        return true;
    }

    // torsion order, generator and fundamental units of the unit group of O
    UnitGroupData units() const;

    // smallest k <= class bound with P^k principal, with a generator
    std::pair<int, FieldElement> principal_power(const PrimeIdeal& P) const;

    std::shared_ptr<const detail::OrderCore> core() const { return core_; }

private:
    PrimeIdeal make_prime(long long p, const FieldElement& alpha, int e, int f, int index,
                          std::optional<FieldElement> unif) const;
    std::vector<FieldElement> search_norm(const Integer& target, int height) const;

    std::shared_ptr<const detail::OrderCore> core_;
};

inline MaximalOrder::MaximalOrder(NumberField K, OrderSpec spec)
{
    auto c = std::make_shared<detail::OrderCore>();
    c->K = K;
    c->n = K.degree();
    c->spec = spec;
    int n = c->n;
    if (!spec.integral_basis.empty()) {
        if (static_cast<int>(spec.integral_basis.size()) != n)
            throw Error(ErrorKind::ParseError, "integral_basis must have degree-many entries");
        for (auto& s : spec.integral_basis) c->basis.push_back(K.parse(s));
    } else if (n == 1) {
        c->basis = {K.one()};
    } else if (n == 2) {
        const auto& mpoly = K.min_poly();
        Rational c1 = mpoly[1], c0 = mpoly[0];
        Rational disc = c1 * c1 - 4 * c0;
        Integer ab = num(disc) * den(disc);
        Integer d = squarefree_part(ab);
        // disc = s^2 d
        Rational s2 = disc / Rational(d);
        Integer sn = isqrt(num(s2)), sd = isqrt(den(s2));
        if (sn * sn != num(s2) || sd * sd != den(s2)) throw Error(ErrorKind::InternalAnomaly, "discriminant split");
        Rational s(sn, sd);
        // sqrt(d) = (2w + c1)/s
        FieldElement sq = K.element({c1 / s, Rational(2) / s});
        if (sq * sq != K.from_rational(Rational(d))) throw Error(ErrorKind::InternalAnomaly, "sqrt(d) check");
        c->d = d;
        c->sqrt_d = sq;
        Integer dm = mod_floor(d, Integer(4));
        FieldElement omega = dm == 1 ? Rational(1, 2) * (K.one() + sq) : sq;
        c->basis = {K.one(), omega};
    } else {
        throw Error(ErrorKind::UnsupportedDegree, "degree > 2 requires an integral_basis block");
    }
    RatMatrix b(n, std::vector<Rational>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) b[i][j] = c->basis[j].coeffs()[i];
    if (det(b) == 0) throw Error(ErrorKind::SingularBasis, "integral basis is not a basis");
    c->to_basis = inverse(b);
    c->mul.assign(n, std::vector<std::vector<Integer>>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto co = c->coords(c->basis[i] * c->basis[j]);
            for (auto& x : co) {
                if (den(x) != 1) throw Error(ErrorKind::ParseError, "integral basis is not closed under products");
                c->mul[i][j].push_back(num(x));
            }
        }
    if (!spec.integral_basis.empty()) {
        for (auto& x : c->basis) {
            // integrality: the characteristic polynomial has integer coefficients; check via norm and trace of powers
            if (den(x.norm()) != 1 || den(x.trace()) != 1)
                throw Error(ErrorKind::ParseError, "integral basis element is not integral: " + x.str());
        }
    }
    core_ = c;
}

inline PrimeIdeal MaximalOrder::make_prime(long long p, const FieldElement& alpha, int e, int f, int index,
                                           std::optional<FieldElement> unif) const
{
    int n = core_->n;
    PrimeIdeal P;
    P.core_ = core_;
    P.p = p;
    P.e = e;
    P.f = f;
    P.index = index;
    P.alpha = alpha;
    auto alpha_c = integral_coords(alpha);
    // P / pO inside O / pO, echelon form with pivots taken from the last columns
    ModMatrix rows;
    ModMatrix kmat;
    for (int i = 0; i < n; ++i) {
        std::vector<Integer> ei(n, Integer(0));
        ei[i] = 1;
        auto prod = core_->mul_coords(ei, alpha_c);
        std::vector<long long> r(n);
        for (int j = 0; j < n; ++j) r[j] = to_ll(mod_floor(prod[j], Integer(p)));
        kmat.push_back(r);
        std::vector<long long> rev(r.rbegin(), r.rend());
        rows.push_back(rev);
    }
    auto piv = rref_mod(rows, p);
    for (auto& r : rows) std::reverse(r.begin(), r.end());
    for (auto& c : piv) c = n - 1 - c;
    if (static_cast<int>(rows.size()) != n - f)
        throw Error(ErrorKind::InternalAnomaly, "residue degree mismatch for prime above " + std::to_string(p));
    P.w_rows_ = rows;
    P.w_piv_ = piv;
    for (int j = 0; j < n; ++j)
        if (std::find(piv.begin(), piv.end(), size_t(j)) == piv.end()) P.free_cols_.push_back(j);
    // gamma spans p P^{-1} modulo pO: kernel of multiplication by alpha mod p
    auto ker = left_kernel_mod(kmat, p);
    if (ker.empty()) throw Error(ErrorKind::InternalAnomaly, "prime ideal is the unit ideal");
    std::vector<Integer> g(ker[0].begin(), ker[0].end());
    P.gamma_coords_ = g;
    P.gamma_ = core_->from_coords(g);
    {
        auto one = integral_coords(core_->K.one());
        PrimeIdeal::Residue r(n);
        for (int i = 0; i < n; ++i) r[i] = to_ll(mod_floor(one[i], Integer(p)));
        P.rf_one_ = P.reduce(r);
    }
    // sigma = gamma^e / p^(e-1): a P-unit lying in every other prime above p
    P.sigma_ = P.gamma_.pow(e) * core_->K.from_rational(Rational(1) / Rational(mp::pow(Integer(p), e - 1)));
    {
        auto sc = integral_coords(P.sigma_);
        PrimeIdeal::Residue r(n);
        for (int i = 0; i < n; ++i) r[i] = to_ll(mod_floor(sc[i], Integer(p)));
        r = P.reduce(r);
        P.sigma_res_inv_ = P.rf_inv(r);
    }
    if (unif) {
        if (P.valuation(*unif) != 1) throw Error(ErrorKind::ParseError, "uniformizer has valuation != 1");
        P.uniformizer = *unif;
    } else {
        FieldElement pe = core_->K.from_rational(Rational(p));
        std::vector<FieldElement> cands{pe, alpha, alpha + pe};
        for (auto& b : core_->basis) cands.push_back(alpha + pe * b);
        bool found = false;
        for (auto& c : cands)
            if (P.valuation(c) == 1) {
                P.uniformizer = c;
                found = true;
                break;
            }
        if (!found) throw Error(ErrorKind::InternalAnomaly, "no uniformizer found");
    }
    return P;
}

inline std::vector<PrimeIdeal> MaximalOrder::primes_above(long long p) const
{
    if (!is_prime(Integer(p))) throw Error(ErrorKind::ParseError, std::to_string(p) + " is not prime");
    const auto& K = core_->K;
    std::vector<PrimeIdeal> out;
    auto it = core_->spec.prime_splittings.find(p);
    if (it != core_->spec.prime_splittings.end()) {
        int idx = 0, sum = 0;
        for (auto& ps : it->second) {
            std::optional<FieldElement> u;
            if (!ps.uniformizer.empty()) u = K.parse(ps.uniformizer);
            out.push_back(make_prime(p, K.parse(ps.alpha), ps.e, ps.f, idx++, u));
            sum += ps.e * ps.f;
        }
        if (sum != core_->n) throw Error(ErrorKind::ParseError, "sum of e*f above " + std::to_string(p) + " != degree");
        return out;
    }
    if (core_->n == 1) {
        out.push_back(make_prime(p, K.from_rational(Rational(p)), 1, 1, 0, K.from_rational(Rational(p))));
        return out;
    }
    if (core_->n != 2)
        throw Error(ErrorKind::UnsupportedDegree, "no splitting data for p = " + std::to_string(p));
    // Dedekind: O = Z[omega], factor the minimal polynomial of omega mod p
    const FieldElement& om = core_->basis[1];
    Integer tr = num(om.trace()), nm = num(om.norm());
    std::vector<long long> roots;
    for (long long r = 0; r < p; ++r) {
        Integer v = Integer(r) * r - tr * r + nm;
        if (mod_floor(v, Integer(p)) == 0) roots.push_back(r);
    }
    FieldElement pe = K.from_rational(Rational(p));
    if (roots.empty()) {
        out.push_back(make_prime(p, pe, 1, 2, 0, pe));
    } else if (roots.size() == 1) {
        out.push_back(make_prime(p, om - K.from_rational(Rational(roots[0])), 2, 1, 0, std::nullopt));
    } else {
        int idx = 0;
        for (long long r : roots) out.push_back(make_prime(p, om - K.from_rational(Rational(r)), 1, 1, idx++, pe));
    }
    return out;
}

// elements of O with |norm| = target, coordinates bounded by height
inline std::vector<FieldElement> MaximalOrder::search_norm(const Integer& target, int height) const
{
    std::vector<FieldElement> out;
    int n = core_->n;
    const auto& K = core_->K;
    if (n == 1) {
        out.push_back(K.from_rational(Rational(target)));
        out.push_back(K.from_rational(Rational(-target)));
        return out;
    }
    if (n == 2) {
        // N(a + b omega) = a^2 + a b tr + b^2 nm
        const FieldElement& om = core_->basis[1];
        Integer tr = num(om.trace()), nm = num(om.norm());
        for (int b = 0; b <= height; ++b) {
            std::vector<std::pair<Integer, Integer>> found;
            for (int sb : {1, -1}) {
                if (b == 0 && sb < 0) continue;
                Integer B = sb * b;
                for (int s : {1, -1}) {
                    // a^2 + (B tr) a + (B^2 nm - s target) = 0
                    Integer disc = B * B * tr * tr - 4 * (B * B * nm - s * target);
                    if (disc < 0) continue;
                    Integer r = isqrt(disc);
                    if (r * r != disc) continue;
                    for (int sr : {1, -1}) {
                        Integer twice = -B * tr + sr * r;
                        if (twice % 2 != 0) continue;
                        Integer a = twice / 2;
                        found.emplace_back(a, B);
                        if (r == 0) break;
                    }
                }
            }
            std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
                if (abs(x.first) != abs(y.first)) return abs(x.first) < abs(y.first);
                if (x.first != y.first) return x.first > y.first;
                return x.second > y.second;
            });
            for (auto& [a, B] : found) out.push_back(from_coords({a, B}));
        }
        return out;
    }
    // generic small box enumeration
    std::vector<Integer> a(n, Integer(-height));
    while (true) {
        FieldElement x = from_coords(a);
        if (!x.is_zero() && abs(num(x.norm())) == target) out.push_back(x);
        int i = 0;
        while (i < n && a[i] == height) a[i++] = -height;
        if (i == n) break;
        ++a[i];
    }
    return out;
}

inline std::pair<int, FieldElement> MaximalOrder::principal_power(const PrimeIdeal& P) const
{
    auto above = primes_above(P.p);
    int height = core_->n == 2 ? 20000 : 4;
    for (int k = 1; k <= core_->spec.class_bound; ++k) {
        Integer target = mp::pow(Integer(P.norm()), k);
        for (auto& y : search_norm(target, height)) {
            bool ok = true;
            for (auto& Q : above) {
                int v = Q.valuation(y);
                if ((Q == P && v != k) || (Q != P && v != 0)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return {k, y};
        }
    }
    throw Error(ErrorKind::UnsupportedField, "no principal power of " + P.label() + " found within the class bound");
}

inline UnitGroupData MaximalOrder::units() const
{
    UnitGroupData u;
    const auto& K = core_->K;
    int n = core_->n;
    u.rank_nw = K.unit_rank();
    if (core_->spec.units_given || n > 2) {
        if (!core_->spec.units_given) throw Error(ErrorKind::UnsupportedField, "degree > 2 requires fundamental_units");
        for (auto& s : core_->spec.fundamental_units) u.fundamental_units.push_back(K.parse(s));
        u.torsion_order = core_->spec.torsion_order > 0 ? core_->spec.torsion_order : 2;
        u.torsion_generator = u.torsion_order == 2 ? K.from_rational(-1) : FieldElement();
    } else if (n == 1) {
        u.torsion_order = 2;
        u.torsion_generator = K.from_rational(-1);
    } else {
        const Integer& d = core_->d;
        const FieldElement& sq = core_->sqrt_d;
        if (d < 0) {
            if (d == -1) {
                u.torsion_order = 4;
                u.torsion_generator = sq;
            } else if (d == -3) {
                u.torsion_order = 6;
                u.torsion_generator = Rational(1, 2) * (K.one() + sq);
            } else {
                u.torsion_order = 2;
                u.torsion_generator = K.from_rational(-1);
            }
        } else {
            u.torsion_order = 2;
            u.torsion_generator = K.from_rational(-1);
            bool quarter = mod_floor(d, Integer(4)) == 1;
            bool found = false;
            for (long long b = 1; b <= 10000000 && !found; ++b) {
                for (int s : {-1, 1}) {
                    Integer a2 = d * b * b + s * (quarter ? 4 : 1);
                    if (a2 <= 0) continue;
                    Integer a = isqrt(a2);
                    if (a * a != a2) continue;
                    FieldElement eps = Rational(a) * K.one() + Rational(b) * sq;
                    if (quarter) eps = Rational(1, 2) * eps;
                    u.fundamental_units.push_back(eps);
                    found = true;
                    break;
                }
            }
            if (!found) throw Error(ErrorKind::CapExceeded, "fundamental unit search bound exceeded");
        }
    }
    if (static_cast<int>(u.fundamental_units.size()) != u.rank_nw)
        throw Error(ErrorKind::UnsupportedField, "number of fundamental units differs from the Dirichlet rank");
    for (auto& e : u.fundamental_units) {
        Rational nm = e.norm();
        if (nm != 1 && nm != -1) throw Error(ErrorKind::NotAUnit, "fundamental unit of norm " + to_string(nm));
        if (!is_integral(e)) throw Error(ErrorKind::NotAUnit, "fundamental unit not integral: " + e.str());
    }
    return u;
}

struct AlphaDecomposition {
    FieldElement torsion;          // torsion part of y^l
    std::vector<Integer> free_l;   // exponents of e_i in y^l
    std::vector<Integer> mw_l;     // exponents of y_P in y^l
    long long l = 1;
    std::vector<Rational> free;    // alpha_w(y) = free_l / l
    std::vector<Rational> mw;      // v_P(y) / k_P
    bool verified = false;
};

// The ring O_w together with M_w, the unit data and the projection alpha_w.
class OwRing {
public:
    OwRing() = default;
    OwRing(MaximalOrder O, FieldElement w) : O_(std::move(O)), w_(std::move(w))
    {
        if (w_.is_zero()) throw Error(ErrorKind::DivisionByZero, "w = 0");
        mw_ = O_.mw_set(w_);
        units_ = O_.units();
        for (auto& P : mw_) units_.mw_generators.push_back(O_.principal_power(P));
        log_unit_class_ = 0;
        if (!units_.fundamental_units.empty()) {
            double best = -1;
            for (int i : field().embedding_classes()) {
                double v = std::abs(units_.fundamental_units[0].log_abs_embed(i));
                if (v > best) {
                    best = v;
                    log_unit_class_ = i;
                }
            }
        }
    }

    const MaximalOrder& order() const { return O_; }
    const NumberField& field() const { return O_.field(); }
    const FieldElement& w() const { return w_; }
    const std::vector<PrimeIdeal>& mw() const { return mw_; }
    const UnitGroupData& units() const { return units_; }
    int nw() const { return units_.rank_nw; }
    const FieldElement& y_p(size_t i) const { return units_.mw_generators[i].second; }
    int k_p(size_t i) const { return units_.mw_generators[i].first; }

    bool in_mw(const PrimeIdeal& P) const { return std::find(mw_.begin(), mw_.end(), P) != mw_.end(); }

    bool contains(const FieldElement& x) const { return membership(x, Membership::O_w); }
    bool is_unit(const FieldElement& x) const { return membership(x, Membership::O_w_units); }

    bool membership(const FieldElement& x, Membership which) const
    {
        if (x.is_zero()) return which != Membership::O_w_units;
        for (long long q : O_.support_primes(x))
            for (auto& P : O_.primes_above(q)) {
                int v = P.valuation(x);
                bool m = in_mw(P);
                if (which == Membership::O && v < 0) return false;
                if (which == Membership::O_w && !m && v < 0) return false;
                if (which == Membership::O_w_units && !m && v != 0) return false;
            }
        return true;
    }

    AlphaDecomposition alpha_w(const FieldElement& y) const
    {
        if (!is_unit(y)) throw Error(ErrorKind::NotAUnit, y.str() + " is not a unit of O_w");
        AlphaDecomposition a;
        std::vector<int> vp;
        for (size_t i = 0; i < mw_.size(); ++i) {
            vp.push_back(mw_[i].valuation(y));
            a.mw.push_back(Rational(vp.back(), k_p(i)));
            a.l = lcm_ll(a.l, to_ll(den(a.mw.back())));
        }
        FieldElement yl = y.pow(a.l);
        FieldElement u = yl;
        for (size_t i = 0; i < mw_.size(); ++i) {
            Integer ex = num(a.mw[i] * Rational(a.l));
            a.mw_l.push_back(ex);
            u = u * y_p(i).pow(-to_ll(ex));
        }
        const auto& fu = units_.fundamental_units;
        size_t r = fu.size();
        a.free_l.assign(r, Integer(0));
        if (r > 0) {
            auto cls = field().embedding_classes();
            if (r == 1) {
                double num_ = u.log_abs_embed(log_unit_class_);
                double den_ = fu[0].log_abs_embed(log_unit_class_);
                a.free_l[0] = Integer(static_cast<long long>(std::llround(num_ / den_)));
            } else {
                // solve the log system on the first r classes
                std::vector<std::vector<double>> m(r, std::vector<double>(r + 1));
                for (size_t i = 0; i < r; ++i) {
                    for (size_t j = 0; j < r; ++j) m[i][j] = fu[j].log_abs_embed(cls[i]);
                    m[i][r] = u.log_abs_embed(cls[i]);
                }
                for (size_t c = 0; c < r; ++c) {
                    size_t piv = c;
                    for (size_t i = c; i < r; ++i)
                        if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
                    std::swap(m[c], m[piv]);
                    for (size_t i = 0; i < r; ++i) {
                        if (i == c) continue;
                        double f = m[i][c] / m[c][c];
                        for (size_t j = c; j <= r; ++j) m[i][j] -= f * m[c][j];
                    }
                }
                for (size_t i = 0; i < r; ++i)
                    a.free_l[i] = Integer(static_cast<long long>(std::llround(m[i][r] / m[i][i])));
            }
            for (size_t i = 0; i < r; ++i) u = u * fu[i].pow(-to_ll(a.free_l[i]));
        }
        a.torsion = u;
        for (auto& x : a.free_l) a.free.push_back(Rational(x, a.l));
        // exact checks: the torsion part has finite order and the product reconstructs y^l
        a.verified = u.pow(units_.torsion_order).is_one();
        FieldElement rec = u;
        for (size_t i = 0; i < r; ++i) rec = rec * fu[i].pow(to_ll(a.free_l[i]));
        for (size_t i = 0; i < mw_.size(); ++i) rec = rec * y_p(i).pow(to_ll(a.mw_l[i]));
        a.verified = a.verified && rec == yl;
        if (!a.verified) throw Error(ErrorKind::InternalAnomaly, "alpha_w reconstruction failed for " + y.str());
        return a;
    }

private:
    MaximalOrder O_;
    FieldElement w_;
    std::vector<PrimeIdeal> mw_;
    UnitGroupData units_;
    int log_unit_class_ = 0;
};

}  // namespace gwcert
