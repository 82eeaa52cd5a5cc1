#pragma once

#include "arith.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <complex>
#include <memory>
#include <numeric>
#include <sstream>

namespace gwcert {

using BigFloat = mp::cpp_bin_float_50;
using BigComplex = mp::cpp_complex_50;

constexpr int kMaxPrecision = 45;

struct Embedding {
    BigComplex root;
    bool is_real = true;
    int conjugate_index = 0;

    std::complex<double> approx() const
    {
        return {root.real().convert_to<double>(), root.imag().convert_to<double>()};
    }
};

namespace detail {

inline std::complex<double> horner_d(const std::vector<std::complex<double>>& c, std::complex<double> z,
                                     std::complex<double>& deriv)
{
    std::complex<double> p = 0;
    deriv = 0;
    for (size_t i = c.size(); i-- > 0;) {
        deriv = deriv * z + p;
        p = p * z + c[i];
    }
    return p;
}

inline BigComplex horner_b(const std::vector<BigComplex>& c, const BigComplex& z, BigComplex& deriv)
{
    BigComplex p = 0;
    deriv = 0;
    for (size_t i = c.size(); i-- > 0;) {
        deriv = deriv * z + p;
        p = p * z + c[i];
    }
    return p;
}

inline BigFloat to_big(const Rational& r)
{
    return BigFloat(num(r)) / BigFloat(den(r));
}

}  // namespace detail

// all complex roots of a monic polynomial (coefficients low to high), simultaneous iteration
inline std::vector<BigComplex> poly_roots(const std::vector<Rational>& poly, int digits)
{
    size_t n = poly.size() - 1;
    std::vector<BigComplex> roots(n);
    if (n == 1) {
        roots[0] = BigComplex(detail::to_big(-poly[0]));
        return roots;
    }
    std::vector<std::complex<double>> cd(n + 1);
    std::vector<BigComplex> cb(n + 1);
    double bound = 0;
    for (size_t i = 0; i <= n; ++i) {
        BigFloat b = detail::to_big(poly[i]);
        cb[i] = BigComplex(b);
        cd[i] = b.convert_to<double>();
        if (i < n) bound = std::max(bound, std::pow(std::abs(cd[i]), 1.0 / double(n - i)));
    }
    double radius = 2 * bound + 0.5;
    std::vector<std::complex<double>> z(n);
    for (size_t k = 0; k < n; ++k)
        z[k] = std::polar(radius, 2 * M_PI * double(k) / double(n) + 0.4);
    for (int it = 0; it < 2000; ++it) {
        double step = 0;
        for (size_t k = 0; k < n; ++k) {
            std::complex<double> d;
            auto p = detail::horner_d(cd, z[k], d);
            if (p == 0.0) continue;
            auto ratio = p / d;
            std::complex<double> s = 0;
            for (size_t j = 0; j < n; ++j)
                if (j != k) s += 1.0 / (z[k] - z[j]);
            auto corr = ratio / (1.0 - ratio * s);
            if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) continue;
            z[k] -= corr;
            step = std::max(step, std::abs(corr) / std::max(1.0, std::abs(z[k])));
        }
        if (step < 1e-14) break;
    }
    for (size_t k = 0; k < n; ++k) roots[k] = BigComplex(BigFloat(z[k].real()), BigFloat(z[k].imag()));
    BigFloat tol = pow(BigFloat(10), -(digits + 3));
    for (int it = 0; it < 200; ++it) {
        BigFloat step = 0;
        for (size_t k = 0; k < n; ++k) {
            BigComplex d;
            BigComplex p = detail::horner_b(cb, roots[k], d);
            if (abs(p) == 0) continue;
            BigComplex ratio = p / d;
            BigComplex s = 0;
            for (size_t j = 0; j < n; ++j)
                if (j != k) s += BigComplex(1) / (roots[k] - roots[j]);
            BigComplex corr = ratio / (BigComplex(1) - ratio * s);
            roots[k] -= corr;
            BigFloat rel = abs(corr) / std::max(BigFloat(1), BigFloat(abs(roots[k])));
            if (rel > step) step = rel;
        }
        if (step < tol) break;
    }
    return roots;
}

class FieldElement;

class NumberField {
public:
    struct Data {
        int degree = 1;
        std::vector<Rational> min_poly;                 // low to high, monic
        std::vector<std::vector<Rational>> high_powers;  // w^(n+k) reduced, k = 0..n-2
        std::vector<Embedding> embeddings;
        int precision = 30;
    };

    NumberField() = default;

    // coefficients low to high
    static NumberField from_poly(std::vector<Rational> poly, int precision = 30);

    int degree() const { return d_->degree; }
    const std::vector<Rational>& min_poly() const { return d_->min_poly; }
    const std::vector<Embedding>& embeddings() const { return d_->embeddings; }
    int precision() const { return d_->precision; }
    const Data& data() const { return *d_; }
    bool valid() const { return static_cast<bool>(d_); }

    int real_embeddings() const
    {
        int r = 0;
        for (auto& e : d_->embeddings) r += e.is_real;
        return r;
    }
    int complex_pairs() const { return (degree() - real_embeddings()) / 2; }
    int unit_rank() const { return real_embeddings() + complex_pairs() - 1; }

    // indices of one embedding per conjugate class
    std::vector<int> embedding_classes() const
    {
        std::vector<int> out;
        for (int i = 0; i < degree(); ++i)
            if (d_->embeddings[i].conjugate_index >= i) out.push_back(i);
        return out;
    }

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement gen() const;
    FieldElement from_rational(const Rational& r) const;
    FieldElement element(std::vector<Rational> coeffs) const;
    FieldElement parse(std::string_view s) const;

    std::string poly_string() const;

    friend bool operator==(const NumberField& a, const NumberField& b)
    {
        return a.d_ == b.d_ || (a.d_ && b.d_ && a.d_->min_poly == b.d_->min_poly);
    }

private:
    std::shared_ptr<const Data> d_;
};

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(NumberField k, std::vector<Rational> c) : k_(std::move(k)), c_(std::move(c))
    {
        c_.resize(k_.degree(), Rational(0));
    }

    const NumberField& field() const { return k_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    int degree() const { return k_.degree(); }

    bool is_zero() const
    {
        return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return x == 0; });
    }
    bool is_one() const { return c_[0] == 1 && is_rational(); }
    bool is_rational() const
    {
        return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& x) { return x == 0; });
    }
    Rational rational() const
    {
        if (!is_rational()) throw Error(ErrorKind::ParseError, "element is not rational: " + str());
        return c_[0];
    }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b)
    {
        check(a, b);
        std::vector<Rational> r(a.c_);
        for (size_t i = 0; i < r.size(); ++i) r[i] += b.c_[i];
        return FieldElement(a.k_, std::move(r));
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b)
    {
        check(a, b);
        std::vector<Rational> r(a.c_);
        for (size_t i = 0; i < r.size(); ++i) r[i] -= b.c_[i];
        return FieldElement(a.k_, std::move(r));
    }
    FieldElement operator-() const
    {
        std::vector<Rational> r(c_);
        for (auto& x : r) x = -x;
        return FieldElement(k_, std::move(r));
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b)
    {
        check(a, b);
        int n = a.degree();
        if (n == 1) return FieldElement(a.k_, {a.c_[0] * b.c_[0]});
        std::vector<Rational> prod(2 * n - 1, Rational(0));
        for (int i = 0; i < n; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < n; ++j)
                if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
        }
        std::vector<Rational> r(prod.begin(), prod.begin() + n);
        const auto& hp = a.k_.data().high_powers;
        for (int k = 0; k < n - 1; ++k) {
            if (prod[n + k] == 0) continue;
            for (int i = 0; i < n; ++i) r[i] += prod[n + k] * hp[k][i];
        }
        return FieldElement(a.k_, std::move(r));
    }
    friend FieldElement operator*(const Rational& s, const FieldElement& a)
    {
        std::vector<Rational> r(a.c_);
        for (auto& x : r) x *= s;
        return FieldElement(a.k_, std::move(r));
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

    FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
    FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
    FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

    // column j holds the coordinates of this * w^j
    RatMatrix mult_matrix() const
    {
        int n = degree();
        RatMatrix m(n, std::vector<Rational>(n));
        FieldElement cur = *this;
        FieldElement w = k_.gen();
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) m[i][j] = cur.c_[i];
            if (j + 1 < n) cur = cur * w;
        }
        return m;
    }

    FieldElement inverse() const
    {
        if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
        if (degree() == 1) return FieldElement(k_, {Rational(1) / c_[0]});
        std::vector<Rational> e(degree(), Rational(0));
        e[0] = 1;
        return FieldElement(k_, solve(mult_matrix(), e));
    }

    FieldElement pow(long long e) const
    {
        if (e < 0) return inverse().pow(-e);
        FieldElement r = k_.one(), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    Rational norm() const
    {
        if (degree() == 1) return c_[0];
        return det(mult_matrix());
    }
    Rational trace() const
    {
        if (degree() == 1) return c_[0];
        auto m = mult_matrix();
        Rational t = 0;
        for (int i = 0; i < degree(); ++i) t += m[i][i];
        return t;
    }

    BigComplex embed(int i) const
    {
        const BigComplex& r = k_.embeddings().at(i).root;
        BigComplex acc = 0;
        for (size_t j = c_.size(); j-- > 0;) acc = acc * r + BigComplex(detail::to_big(c_[j]));
        return acc;
    }
    std::complex<double> embed_d(int i) const
    {
        BigComplex z = embed(i);
        return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
    }
    double abs_embed(int i) const { return abs(embed(i)).convert_to<double>(); }
    double log_abs_embed(int i) const { return log(abs(embed(i))).convert_to<double>(); }

    // least common denominator of the power-basis coordinates
    Integer denominator() const
    {
        Integer d = 1;
        for (auto& x : c_) d = ilcm(d, den(x));
        return d;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        for (int i = 0; i < static_cast<int>(c_.size()); ++i) {
            const Rational& x = c_[i];
            if (x == 0) continue;
            Rational a = x;
            if (!first) {
                os << (a < 0 ? "-" : "+");
                if (a < 0) a = -a;
            } else if (a < 0 && i > 0) {
                os << "-";
                a = -a;
            }
            if (i == 0) {
                os << to_string(a);
            } else {
                if (a != 1) os << to_string(a) << "*";
                os << "w";
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c_ == b.c_; }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }
    friend bool operator<(const FieldElement& a, const FieldElement& b) { return a.c_ < b.c_; }

private:
    static void check(const FieldElement& a, const FieldElement& b)
    {
        if (!a.k_.valid() || !b.k_.valid() || !(a.k_ == b.k_))
            throw Error(ErrorKind::FieldMismatch, "elements of different fields");
    }

    NumberField k_;
    std::vector<Rational> c_;
};

inline FieldElement NumberField::zero() const { return FieldElement(*this, {}); }
inline FieldElement NumberField::one() const { return FieldElement(*this, {Rational(1)}); }
inline FieldElement NumberField::from_rational(const Rational& r) const { return FieldElement(*this, {r}); }
inline FieldElement NumberField::element(std::vector<Rational> c) const
{
    if (static_cast<int>(c.size()) > degree())
        throw Error(ErrorKind::ParseError, "coefficient vector longer than the degree");
    return FieldElement(*this, std::move(c));
}

inline FieldElement NumberField::gen() const
{
    if (degree() == 1) return from_rational(-d_->min_poly[0]);
    std::vector<Rational> c(degree(), Rational(0));
    c[1] = 1;
    return FieldElement(*this, std::move(c));
}

inline std::string NumberField::poly_string() const
{
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        Rational a = d_->min_poly[i];
        if (a == 0) continue;
        if (!first || a < 0) os << (a < 0 ? "-" : "+");
        if (a < 0) a = -a;
        if (i == 0 || a != 1) os << to_string(a) << (i > 0 ? "*" : "");
        if (i > 0) os << "x" << (i > 1 ? "^" + std::to_string(i) : "");
        first = false;
    }
    return os.str();
}

// parses sums of terms "c", "c*w^k", "w^k", "c*w" (x is accepted for w)
inline FieldElement NumberField::parse(std::string_view text) const
{
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw Error(ErrorKind::ParseError, "empty element");
    // gather power-basis coefficients of arbitrary degree, then reduce
    std::map<int, Rational> terms;
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        std::string term = s.substr(i, j - i);
        if (term.empty()) throw Error(ErrorKind::ParseError, "bad element '" + s + "'");
        Rational coef = 1;
        int power = 0;
        auto wpos = term.find_first_of("wx");
        if (wpos == std::string::npos) {
            coef = parse_rational(term);
        } else {
            std::string c = term.substr(0, wpos);
            if (!c.empty()) {
                if (c.back() != '*') throw Error(ErrorKind::ParseError, "bad term '" + term + "'");
                c.pop_back();
                coef = parse_rational(c);
            }
            std::string rest = term.substr(wpos + 1);
            power = 1;
            if (!rest.empty()) {
                if (rest[0] != '^') throw Error(ErrorKind::ParseError, "bad term '" + term + "'");
                power = static_cast<int>(to_ll(parse_integer(rest.substr(1))));
                if (power < 0) throw Error(ErrorKind::ParseError, "negative exponent in '" + term + "'");
            }
        }
        terms[power] += sign * coef;
        i = j;
    }
    FieldElement r = zero();
    FieldElement w = gen();
    for (auto& [k, c] : terms) r = r + c * w.pow(k);
    return r;
}

namespace detail {

// integer monic transform: returns g with f(x) = 0 <=> g(D x) = 0
inline std::vector<Integer> integral_monic(const std::vector<Rational>& f)
{
    size_t n = f.size() - 1;
    Integer d = 1;
    for (auto& c : f) d = ilcm(d, den(c));
    std::vector<Integer> g(n + 1);
    Integer dp = 1;
    for (size_t k = 0; k <= n; ++k) {
        // coefficient of y^(n-k) is f_(n-k) * D^k
        Rational c = f[n - k] * Rational(dp);
        g[n - k] = num(c);
        dp *= d;
    }
    return g;
}

inline bool divides_monic(const std::vector<Integer>& g, const std::vector<Integer>& h)
{
    std::vector<Integer> r(g);
    int dg = static_cast<int>(g.size()) - 1, dh = static_cast<int>(h.size()) - 1;
    for (int i = dg; i >= dh; --i) {
        Integer c = r[i];
        if (c == 0) continue;
        for (int j = 0; j <= dh; ++j) r[i - dh + j] -= c * h[j];
    }
    for (int i = 0; i < dh; ++i)
        if (r[i] != 0) return false;
    return true;
}

inline bool is_reducible(const std::vector<Rational>& f)
{
    size_t n = f.size() - 1;
    if (n <= 1) return false;
    auto g = integral_monic(f);
    if (g[0] == 0) return true;
    if (n <= 3) {
        // rational root test: integer roots dividing g[0]
        std::vector<Integer> divs{1};
        for (auto& [p, e] : factor_integer(g[0])) {
            size_t m = divs.size();
            Integer pk = 1;
            for (int k = 1; k <= e; ++k) {
                pk *= p;
                for (size_t i = 0; i < m; ++i) divs.push_back(divs[i] * pk);
            }
        }
        for (auto& d0 : divs)
            for (int sgn : {1, -1}) {
                Integer r = sgn * d0, v = 0;
                for (size_t i = n + 1; i-- > 0;) v = v * r + g[i];
                if (v == 0) return true;
            }
        return false;
    }
    std::vector<Rational> gr(g.begin(), g.end());
    auto roots = poly_roots(gr, 40);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        int k = __builtin_popcount(mask);
        if (2 * k > static_cast<int>(n)) continue;
        std::vector<BigComplex> prod{BigComplex(1)};
        for (size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            std::vector<BigComplex> nx(prod.size() + 1, BigComplex(0));
            for (size_t j = 0; j < prod.size(); ++j) {
                nx[j + 1] += prod[j];
                nx[j] -= prod[j] * roots[i];
            }
            prod = nx;
        }
        std::vector<Integer> h;
        bool ok = true;
        for (auto& c : prod) {
            BigFloat re = c.real(), im = c.imag();
            BigFloat rr = round(re);
            if (abs(im) > 1e-10 || abs(re - rr) > BigFloat(1e-10) * (1 + abs(rr))) {
                ok = false;
                break;
            }
            h.push_back(rr.convert_to<Integer>());
        }
        if (ok && divides_monic(g, h)) return true;
    }
    return false;
}

}  // namespace detail

// poly: coefficients low to high
inline NumberField NumberField::from_poly(std::vector<Rational> poly, int precision)
{
    while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
    if (poly.size() < 2) throw Error(ErrorKind::ParseError, "polynomial of degree < 1");
    if (poly.back() != 1) throw Error(ErrorKind::NonMonic, "leading coefficient must be 1");
    if (precision < 5 || precision > kMaxPrecision)
        throw Error(ErrorKind::ParseError, "precision must lie in [5, " + std::to_string(kMaxPrecision) + "]");
    if (detail::is_reducible(poly)) throw Error(ErrorKind::ReduciblePolynomial, "minimal polynomial is reducible");
    auto d = std::make_shared<Data>();
    int n = static_cast<int>(poly.size()) - 1;
    d->degree = n;
    d->min_poly = poly;
    d->precision = precision;
    // w^n = -sum_{i<n} a_i w^i
    std::vector<Rational> cur(n);
    for (int i = 0; i < n; ++i) cur[i] = -poly[i];
    for (int k = 0; k + 1 < n; ++k) {
        d->high_powers.push_back(cur);
        std::vector<Rational> nx(n, Rational(0));
        for (int i = 0; i + 1 < n; ++i) nx[i + 1] = cur[i];
        for (int i = 0; i < n; ++i) nx[i] += cur[n - 1] * (-poly[i]);
        cur = nx;
    }
    auto roots = poly_roots(poly, precision);
    BigFloat real_tol = pow(BigFloat(10), -(precision - 5));
    struct R {
        BigComplex z;
        bool real;
    };
    std::vector<R> rs;
    for (auto& z : roots) {
        bool re = abs(z.imag()) < real_tol * std::max(BigFloat(1), BigFloat(abs(z)));
        rs.push_back({re ? BigComplex(z.real()) : z, re});
    }
    std::vector<Embedding> emb;
    std::vector<R> reals, upper;
    for (auto& r : rs) {
        if (r.real) reals.push_back(r);
        else if (r.z.imag() > 0) upper.push_back(r);
    }
    std::sort(reals.begin(), reals.end(), [](const R& a, const R& b) { return a.z.real() < b.z.real(); });
    std::sort(upper.begin(), upper.end(), [](const R& a, const R& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    if (reals.size() + 2 * upper.size() != static_cast<size_t>(n))
        throw Error(ErrorKind::InternalAnomaly, "root pairing failed");
    for (auto& r : reals) emb.push_back({r.z, true, static_cast<int>(emb.size())});
    for (auto& r : upper) {
        int i = static_cast<int>(emb.size());
        // the conjugate is taken from the computed root list (nearest match)
        BigComplex target(r.z.real(), -r.z.imag());
        BigComplex best = rs[0].z;
        for (auto& c : rs)
            if (abs(c.z - target) < abs(best - target)) best = c.z;
        emb.push_back({r.z, false, i + 1});
        emb.push_back({best, false, i});
    }
    d->embeddings = emb;
    NumberField k;
    k.d_ = d;
    BigFloat tol = pow(BigFloat(10), -(precision - 4));
    for (auto& e : k.d_->embeddings) {
        BigComplex v = 0;
        for (size_t j = poly.size(); j-- > 0;) v = v * e.root + BigComplex(detail::to_big(poly[j]));
        if (abs(v) >= tol) throw Error(ErrorKind::InternalAnomaly, "embedding residual too large");
    }
    return k;
}

inline NumberField rational_field(int precision = 30)
{
    return NumberField::from_poly({Rational(0), Rational(1)}, precision);
}

}  // namespace gwcert
