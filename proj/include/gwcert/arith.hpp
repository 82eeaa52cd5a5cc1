#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gwcert {

namespace mp = boost::multiprecision;
using Integer = mp::cpp_int;
using Rational = mp::cpp_rational;

enum class ErrorKind {
    ParseError,
    ReduciblePolynomial,
    NonMonic,
    DivisionByZero,
    FieldMismatch,
    UnsupportedDegree,
    NotAUnit,
    UnsupportedField,
    SingularBasis,
    PrimeMismatch,
    WNotUnitModQ,
    GroupTooLarge,
    NotHyperElementary,
    HypothesisViolated,
    NoConjugatorFound,
    ShapeMismatch,
    NotInActingGroup,
    BallTooLarge,
    CapExceeded,
    RootOfUnity,
    CounterexampleFound,
    InternalAnomaly,
};

inline const char* error_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ReduciblePolynomial: return "ReduciblePolynomial";
    case ErrorKind::NonMonic: return "NonMonic";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::PrimeMismatch: return "PrimeMismatch";
    case ErrorKind::WNotUnitModQ: return "WNotUnitModQ";
    case ErrorKind::GroupTooLarge: return "GroupTooLarge";
    case ErrorKind::NotHyperElementary: return "NotHyperElementary";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NoConjugatorFound: return "NoConjugatorFound";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotInActingGroup: return "NotInActingGroup";
    case ErrorKind::BallTooLarge: return "BallTooLarge";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::RootOfUnity: return "RootOfUnity";
    case ErrorKind::CounterexampleFound: return "CounterexampleFound";
    case ErrorKind::InternalAnomaly: return "InternalAnomaly";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Integer num(const Rational& r) { return mp::numerator(r); }
inline Integer den(const Rational& r) { return mp::denominator(r); }

inline std::string to_string(const Integer& n) { return n.str(); }

inline std::string to_string(const Rational& r)
{
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline Integer parse_integer(std::string_view s)
{
    std::string t(s);
    if (t.empty()) throw Error(ErrorKind::ParseError, "empty integer");
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw Error(ErrorKind::ParseError, "bad integer '" + t + "'");
    for (size_t j = i; j < t.size(); ++j)
        if (t[j] < '0' || t[j] > '9') throw Error(ErrorKind::ParseError, "bad integer '" + t + "'");
    if (t[0] == '+') t = t.substr(1);
    return Integer(t);
}

inline Rational parse_rational(std::string_view s)
{
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(s));
    Integer p = parse_integer(s.substr(0, slash));
    Integer q = parse_integer(s.substr(slash + 1));
    if (q == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(s) + "'");
    return Rational(p, q);
}

inline Integer igcd(Integer a, Integer b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Integer r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline Integer ilcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0) return 0;
    Integer g = igcd(a, b);
    Integer r = a / g * b;
    return r < 0 ? Integer(-r) : r;
}

inline long long to_ll(const Integer& n)
{
    if (n > Integer(INT64_MAX) || n < Integer(INT64_MIN))
        throw Error(ErrorKind::InternalAnomaly, "integer overflow converting " + n.str());
    return n.convert_to<long long>();
}

// floor division for arbitrary sign
inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

inline Integer floor_of(const Rational& r) { return floor_div(num(r), den(r)); }

inline Integer mod_floor(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

inline int vp_int(Integer n, long long p)
{
    if (n == 0) throw Error(ErrorKind::InternalAnomaly, "v_p of 0");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline int vp_rat(const Rational& r, long long p) { return vp_int(num(r), p) - vp_int(den(r), p); }

inline long long mulmod(long long a, long long b, long long m)
{
    return static_cast<long long>((static_cast<__int128>(a) * b) % m);
}

inline long long powmod(long long a, long long e, long long m)
{
    long long r = 1 % m;
    a %= m;
    if (a < 0) a += m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline long long invmod(long long a, long long m)
{
    long long g = m, x = 0, x1 = 1, r = ((a % m) + m) % m;
    while (r != 0) {
        long long q = g / r;
        long long t = g - q * r;
        g = r;
        r = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw Error(ErrorKind::DivisionByZero, "not invertible mod " + std::to_string(m));
    x %= m;
    return x < 0 ? x + m : x;
}

inline long long gcd_ll(long long a, long long b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline long long lcm_ll(long long a, long long b)
{
    if (a == 0 || b == 0) return 0;
    return a / gcd_ll(a, b) * b;
}

inline bool is_prime(const Integer& n)
{
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    return mp::miller_rabin_test(n, 30);
}

inline long long next_prime(long long n)
{
    long long c = std::max<long long>(2, n + 1);
    while (!is_prime(Integer(c))) ++c;
    return c;
}

// Trial division up to 10^6; a leftover composite cofactor is an error (desk scale only).
inline std::vector<std::pair<Integer, int>> factor_integer(Integer n)
{
    std::vector<std::pair<Integer, int>> out;
    if (n < 0) n = -n;
    if (n == 0) throw Error(ErrorKind::InternalAnomaly, "factor of 0");
    for (long long p = 2; p <= 1000000 && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(Integer(p), e);
        }
    }
    if (n > 1) {
        if (!is_prime(n)) throw Error(ErrorKind::CapExceeded, "cannot factor cofactor " + n.str());
        out.emplace_back(n, 1);
    }
    return out;
}

inline std::vector<long long> prime_divisors(long long n)
{
    std::vector<long long> out;
    for (auto& [p, e] : factor_integer(Integer(n))) out.push_back(to_ll(p));
    return out;
}

// order of an element given the group exponent N and a power test
template <class PowIsOne>
long long order_by_descent(long long N, PowIsOne&& is_one)
{
    long long t = N;
    for (long long p : prime_divisors(N)) {
        while (t % p == 0 && is_one(t / p)) t /= p;
    }
    return t;
}

inline Integer squarefree_part(const Integer& n)
{
    Integer s = n < 0 ? Integer(-1) : Integer(1);
    for (auto& [p, e] : factor_integer(n))
        if (e % 2) s *= p;
    return s;
}

inline Integer isqrt(const Integer& n) { return mp::sqrt(n); }

// ---- rational linear algebra ----

using RatMatrix = std::vector<std::vector<Rational>>;
using IntMatrix = std::vector<std::vector<Integer>>;

inline Rational det(RatMatrix a)
{
    size_t n = a.size();
    Rational d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return d;
}

// solves a x = b, a square invertible
inline std::vector<Rational> solve(RatMatrix a, std::vector<Rational> b)
{
    size_t n = a.size();
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) throw Error(ErrorKind::DivisionByZero, "singular system");
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<Rational> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

inline RatMatrix inverse(const RatMatrix& a)
{
    size_t n = a.size();
    RatMatrix inv(n, std::vector<Rational>(n));
    for (size_t j = 0; j < n; ++j) {
        std::vector<Rational> e(n, 0);
        e[j] = 1;
        auto col = solve(a, e);
        for (size_t i = 0; i < n; ++i) inv[i][j] = col[i];
    }
    return inv;
}

// Hermite normal form of the row lattice spanned by gens (assumed full rank n).
// Result: n rows, upper triangular, positive diagonal, entries above the diagonal reduced.
inline IntMatrix hnf(IntMatrix rows, size_t n)
{
    size_t r = 0;
    for (size_t c = 0; c < n && r < rows.size(); ++c) {
        while (true) {
            size_t best = rows.size();
            for (size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
            if (best == rows.size()) break;
            std::swap(rows[r], rows[best]);
            bool clean = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                Integer q = rows[i][c] / rows[r][c];
                for (size_t k = c; k < n; ++k) rows[i][k] -= q * rows[r][k];
                if (rows[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (r < rows.size() && rows[r][c] != 0) {
            if (rows[r][c] < 0)
                for (auto& x : rows[r]) x = -x;
            ++r;
        } else {
            throw Error(ErrorKind::SingularBasis, "lattice is not of full rank");
        }
    }
    if (r < n) throw Error(ErrorKind::SingularBasis, "lattice is not of full rank");
    rows.resize(n);
    for (size_t c = 0; c < n; ++c)
        for (size_t i = 0; i < c; ++i) {
            Integer q = floor_div(rows[i][c], rows[c][c]);
            if (q != 0)
                for (size_t k = c; k < n; ++k) rows[i][k] -= q * rows[c][k];
        }
    return rows;
}

// canonical representative of v modulo the row lattice of an upper triangular HNF
inline std::vector<Integer> hnf_reduce(std::vector<Integer> v, const IntMatrix& h)
{
    for (size_t j = 0; j < h.size(); ++j) {
        Integer q = floor_div(v[j], h[j][j]);
        if (q != 0)
            for (size_t k = j; k < h.size(); ++k) v[k] -= q * h[j][k];
    }
    return v;
}

// diagonal of the Smith normal form (nonzero invariants, each dividing the next)
inline std::vector<Integer> smith_diagonal(IntMatrix a)
{
    size_t n = a.size(), m = n ? a[0].size() : 0;
    std::vector<Integer> d;
    for (size_t t = 0; t < std::min(n, m); ++t) {
        while (true) {
            size_t bi = n, bj = m;
            for (size_t i = t; i < n; ++i)
                for (size_t j = t; j < m; ++j)
                    if (a[i][j] != 0 && (bi == n || abs(a[i][j]) < abs(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == n) return d;
            std::swap(a[t], a[bi]);
            for (size_t i = 0; i < n; ++i) std::swap(a[i][t], a[i][bj]);
            bool done = true;
            for (size_t i = t + 1; i < n; ++i) {
                Integer q = a[i][t] / a[t][t];
                for (size_t j = t; j < m; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) done = false;
            }
            for (size_t j = t + 1; j < m; ++j) {
                Integer q = a[t][j] / a[t][t];
                for (size_t i = t; i < n; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) done = false;
            }
            if (!done) continue;
            bool divides = true;
            for (size_t i = t + 1; i < n && divides; ++i)
                for (size_t j = t + 1; j < m; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        for (size_t k = t; k < m; ++k) a[t][k] += a[i][k];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        d.push_back(abs(a[t][t]));
    }
    return d;
}

// ---- linear algebra over F_p (small p) ----

using ModMatrix = std::vector<std::vector<long long>>;

// reduced row echelon form; returns pivot columns
inline std::vector<size_t> rref_mod(ModMatrix& a, long long p)
{
    std::vector<size_t> piv;
    size_t r = 0;
    size_t cols = a.empty() ? 0 : a[0].size();
    for (size_t c = 0; c < cols && r < a.size(); ++c) {
        size_t i = r;
        while (i < a.size() && a[i][c] % p == 0) ++i;
        if (i == a.size()) continue;
        std::swap(a[i], a[r]);
        long long inv = invmod(a[r][c], p);
        for (auto& x : a[r]) x = ((x % p + p) % p) * inv % p;
        for (size_t k = 0; k < a.size(); ++k) {
            if (k == r || a[k][c] % p == 0) continue;
            long long f = ((a[k][c] % p) + p) % p;
            for (size_t j = 0; j < cols; ++j) a[k][j] = (((a[k][j] - f * a[r][j]) % p) + p) % p;
        }
        piv.push_back(c);
        ++r;
    }
    a.resize(r);
    return piv;
}

// basis of the left kernel {x : x·a ≡ 0}, a given as rows (x has a.size() entries)
inline ModMatrix left_kernel_mod(const ModMatrix& a, long long p)
{
    size_t n = a.size();
    size_t m = n ? a[0].size() : 0;
    // transpose then right kernel
    ModMatrix t(m, std::vector<long long>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) t[j][i] = ((a[i][j] % p) + p) % p;
    auto piv = rref_mod(t, p);
    ModMatrix ker;
    std::vector<bool> is_piv(n, false);
    for (auto c : piv) is_piv[c] = true;
    for (size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        std::vector<long long> x(n, 0);
        x[f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = ((p - t[r][f]) % p + p) % p;
        ker.push_back(x);
    }
    return ker;
}

}  // namespace gwcert
