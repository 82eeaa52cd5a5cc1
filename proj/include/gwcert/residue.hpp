#pragma once

#include "valuation.hpp"

namespace gwcert {

// O / I for I = P^s or I = q^s O; elements are encoded as integers in [0, size)
class ResidueRing {
public:
    ResidueRing() = default;

    static ResidueRing of_prime_power(const MaximalOrder& O, const PrimeIdeal& P, int s)
    {
        if (s < 1) throw Error(ErrorKind::ParseError, "exponent must be positive");
        int n = O.degree();
        auto ac = O.integral_coords(P.alpha);
        IntMatrix gens;
        // generators q^(s-i) alpha^i times the basis
        std::vector<Integer> alpha_pow = O.integral_coords(O.field().one());
        for (int i = 0; i <= s; ++i) {
            Integer qp = mp::pow(Integer(P.p), s - i);
            for (int j = 0; j < n; ++j) {
                std::vector<Integer> ej(n, Integer(0));
                ej[j] = 1;
                auto v = O.mul_coords(alpha_pow, ej);
                for (auto& x : v) x *= qp;
                gens.push_back(v);
            }
            alpha_pow = O.mul_coords(alpha_pow, ac);
        }
        ResidueRing R;
        R.init(O, hnf(gens, n), P.p, s);
        R.prime_ideal_ = true;
        R.P_ = P;
        R.label_ = P.label() + "^" + std::to_string(s);
        long long N = P.norm();
        R.unit_order_ = (N - 1);
        for (int i = 1; i < s; ++i) R.unit_order_ *= N;
        return R;
    }

    static ResidueRing of_rational_power(const MaximalOrder& O, long long q, int s)
    {
        if (s < 1) throw Error(ErrorKind::ParseError, "exponent must be positive");
        int n = O.degree();
        IntMatrix h(n, std::vector<Integer>(n, Integer(0)));
        Integer qs = mp::pow(Integer(q), s);
        for (int i = 0; i < n; ++i) h[i][i] = qs;
        ResidueRing R;
        R.init(O, h, q, s);
        R.label_ = std::to_string(q) + "^" + std::to_string(s);
        R.unit_order_ = 1;
        for (auto& P : O.primes_above(q)) {
            long long N = P.norm();
            long long u = N - 1;
            for (int i = 1; i < s * P.e; ++i) u *= N;
            R.unit_order_ *= u;
        }
        return R;
    }

    long long size() const { return size_; }
    int degree() const { return n_; }
    long long q() const { return q_; }
    int s() const { return s_; }
    bool is_prime_ideal_modulus() const { return prime_ideal_; }
    const PrimeIdeal& prime() const { return P_; }
    const std::string& label() const { return label_; }
    const std::vector<std::vector<long long>>& hnf_matrix() const { return h_; }
    long long unit_group_order() const { return unit_order_; }
    const MaximalOrder& order() const { return O_; }

    std::vector<long long> decode(long long code) const
    {
        std::vector<long long> v(n_);
        for (int j = n_ - 1; j >= 0; --j) {
            v[j] = code % diag_[j];
            code /= diag_[j];
        }
        return v;
    }

    long long encode(const std::vector<long long>& v) const
    {
        long long c = 0;
        for (int j = 0; j < n_; ++j) c = c * diag_[j] + v[j];
        return c;
    }

    // reduce an arbitrary integer coordinate vector
    std::vector<long long> reduce(std::vector<long long> v) const
    {
        for (int j = 0; j < n_; ++j) {
            long long d = diag_[j];
            long long qf = v[j] >= 0 ? v[j] / d : -((-v[j] + d - 1) / d);
            if (qf != 0)
                for (int k = j; k < n_; ++k) v[k] -= qf * h_[j][k];
        }
        return v;
    }

    long long reduce_code(const std::vector<Integer>& v) const
    {
        std::vector<long long> w(n_);
        for (int j = 0; j < n_; ++j) w[j] = to_ll(mod_floor(v[j], Integer(modulus_)));
        return encode(reduce(w));
    }

    long long add(long long a, long long b) const
    {
        auto x = decode(a), y = decode(b);
        for (int j = 0; j < n_; ++j) x[j] += y[j];
        return encode(reduce(x));
    }
    long long neg(long long a) const
    {
        auto x = decode(a);
        for (auto& v : x) v = -v;
        return encode(reduce(x));
    }
    long long sub(long long a, long long b) const { return add(a, neg(b)); }

    long long mul(long long a, long long b) const
    {
        auto x = decode(a), y = decode(b);
        std::vector<__int128> r(n_, 0);
        for (int i = 0; i < n_; ++i) {
            if (!x[i]) continue;
            for (int j = 0; j < n_; ++j) {
                if (!y[j]) continue;
                __int128 xy = static_cast<__int128>(x[i]) * y[j];
                for (int k = 0; k < n_; ++k) r[k] += xy * mul_[i][j][k];
            }
        }
        std::vector<long long> v(n_);
        for (int k = 0; k < n_; ++k) {
            __int128 m = r[k] % modulus_;
            if (m < 0) m += modulus_;
            v[k] = static_cast<long long>(m);
        }
        return encode(reduce(v));
    }

    long long pow(long long a, long long e) const
    {
        long long r = one_;
        while (e > 0) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }

    long long one() const { return one_; }
    long long zero() const { return 0; }

    bool is_unit(long long a) const { return pow(a, unit_order_) == one_; }

    long long inv(long long a) const
    {
        if (!is_unit(a)) throw Error(ErrorKind::DivisionByZero, "element is not a unit of O/" + label_);
        return pow(a, unit_order_ - 1);
    }

    // reduction of x in the localization at the modulus
    long long from_field(const FieldElement& x) const
    {
        if (x.is_zero()) return 0;
        if (prime_ideal_) {
            if (P_.valuation(x) < 0) throw Error(ErrorKind::WNotUnitModQ, x.str() + " has negative valuation at " + P_.label());
        } else {
            for (auto& P : O_.primes_above(q_))
                if (P.valuation(x) < 0) throw Error(ErrorKind::WNotUnitModQ, x.str() + " has negative valuation at " + P.label());
        }
        FieldElement y = x;
        int k = 0;
        while (true) {
            auto c = O_.coords(y);
            bool ok = true;
            for (auto& r : c)
                if (den(r) % q_ == 0) ok = false;
            if (ok) {
                std::vector<long long> v(n_);
                for (int i = 0; i < n_; ++i) {
                    long long nn = to_ll(mod_floor(num(c[i]), Integer(modulus_)));
                    long long dd = to_ll(mod_floor(den(c[i]), Integer(modulus_)));
                    v[i] = mulmod(nn, invmod(dd, modulus_), modulus_);
                }
                long long code = encode(reduce(v));
                if (k > 0) code = mul(code, pow(inv(from_field(P_.sigma())), k));
                return code;
            }
            if (!prime_ideal_ || ++k > 4096)
                throw Error(ErrorKind::InternalAnomaly, "cannot reduce " + x.str() + " modulo " + label_);
            y = y * P_.sigma();
        }
    }

    FieldElement lift(long long code) const
    {
        auto v = decode(code);
        return O_.from_coords(std::vector<Integer>(v.begin(), v.end()));
    }

    std::vector<Integer> lift_coords(long long code) const
    {
        auto v = decode(code);
        return std::vector<Integer>(v.begin(), v.end());
    }

    // elementary divisors of the additive group
    std::vector<long long> additive_invariants() const
    {
        IntMatrix m(n_, std::vector<Integer>(n_));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m[i][j] = h_[i][j];
        std::vector<long long> out;
        for (auto& d : smith_diagonal(m))
            if (d != 1) out.push_back(to_ll(d));
        return out;
    }

    // column j: coordinates of a * basis_j
    std::vector<std::vector<long long>> mult_matrix(long long a) const
    {
        std::vector<std::vector<long long>> m(n_, std::vector<long long>(n_));
        for (int j = 0; j < n_; ++j) {
            std::vector<long long> ej(n_, 0);
            ej[j] = 1;
            auto col = decode(mul(a, encode(reduce(ej))));
            for (int i = 0; i < n_; ++i) m[i][j] = col[i];
        }
        return m;
    }

private:
    void init(const MaximalOrder& O, const IntMatrix& h, long long q, int s)
    {
        O_ = O;
        n_ = O.degree();
        q_ = q;
        s_ = s;
        Integer M = mp::pow(Integer(q), s);
        Integer sz = 1;
        for (int i = 0; i < n_; ++i) sz *= h[i][i];
        if (M > Integer(1) << 31 || sz > Integer(1) << 62)
            throw Error(ErrorKind::CapExceeded, "residue ring modulo " + std::to_string(q) + "^" + std::to_string(s) + " too large");
        modulus_ = to_ll(M);
        h_.assign(n_, std::vector<long long>(n_));
        diag_.resize(n_);
        size_ = 1;
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) h_[i][j] = to_ll(h[i][j]);
            diag_[i] = h_[i][i];
            size_ *= diag_[i];
        }
        const auto& core = *O.core();
        mul_.assign(n_, std::vector<std::vector<long long>>(n_, std::vector<long long>(n_)));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k) mul_[i][j][k] = to_ll(core.mul[i][j][k]);
        auto oc = O.integral_coords(O.field().one());
        std::vector<long long> ov(n_);
        for (int i = 0; i < n_; ++i) ov[i] = to_ll(oc[i]);
        one_ = encode(reduce(ov));
    }

    MaximalOrder O_;
    int n_ = 1;
    long long q_ = 0;
    int s_ = 1;
    long long modulus_ = 1;  // q^s, annihilates the ring
    std::vector<std::vector<long long>> h_;
    std::vector<long long> diag_;
    std::vector<std::vector<std::vector<long long>>> mul_;
    long long size_ = 1;
    long long one_ = 0;
    long long unit_order_ = 1;
    bool prime_ideal_ = false;
    PrimeIdeal P_;
    std::string label_;
};

namespace detail {

inline long long ring_order_of(const ResidueRing& R, long long a)
{
    if (!R.is_unit(a)) throw Error(ErrorKind::WNotUnitModQ, "w is not a unit modulo " + R.label());
    return order_by_descent(R.unit_group_order(), [&](long long e) { return R.pow(a, e) == R.one(); });
}

}  // namespace detail

// multiplicative order of w modulo P^s
inline long long t_order(const OwRing& W, const PrimeIdeal& P, int s)
{
    if (P.valuation(W.w()) != 0) throw Error(ErrorKind::WNotUnitModQ, P.label() + " lies in M_w");
    auto R = ResidueRing::of_prime_power(W.order(), P, s);
    return detail::ring_order_of(R, R.from_field(W.w()));
}

// multiplicative order of w modulo q^s O_w
inline long long t_order(const OwRing& W, long long q, int s)
{
    for (auto& P : W.order().primes_above(q))
        if (P.valuation(W.w()) != 0) throw Error(ErrorKind::WNotUnitModQ, P.label() + " lies in M_w");
    auto R = ResidueRing::of_rational_power(W.order(), q, s);
    return detail::ring_order_of(R, R.from_field(W.w()));
}

// lcm of t(P_i, 1) over the primes above q
inline long long u_order(const OwRing& W, long long q)
{
    long long u = 1;
    for (auto& P : W.order().primes_above(q)) u = lcm_ll(u, t_order(W, P, 1));
    return u;
}

inline long long q_free_part(long long t, long long q)
{
    while (t % q == 0) t /= q;
    return t;
}

// O/q^s  =  (+)_i O/P_i^(s e_i)
class CrtSplit {
public:
    CrtSplit() = default;
    CrtSplit(const MaximalOrder& O, long long q, int s, long long enumeration_cap = 10000000)
    {
        if (!O.has_splitting(q)) throw Error(ErrorKind::UnsupportedDegree, "no splitting data for " + std::to_string(q));
        whole_ = ResidueRing::of_rational_power(O, q, s);
        for (auto& P : O.primes_above(q)) {
            primes_.push_back(P);
            exps_.push_back(s * P.e);
            comps_.push_back(ResidueRing::of_prime_power(O, P, s * P.e));
        }
        size_t r = comps_.size();
        idem_.assign(r, -1);
        if (r == 1) {
            idem_[0] = whole_.one();
        } else {
            if (whole_.size() > enumeration_cap) throw Error(ErrorKind::CapExceeded, "CRT idempotent search too large");
            for (long long x = 0; x < whole_.size(); ++x) {
                auto f = forward(x);
                for (size_t i = 0; i < r; ++i) {
                    if (idem_[i] >= 0) continue;
                    bool ok = true;
                    for (size_t j = 0; j < r && ok; ++j) ok = f[j] == (i == j ? comps_[j].one() : 0);
                    if (ok) idem_[i] = x;
                }
            }
            for (auto e : idem_)
                if (e < 0) throw Error(ErrorKind::InternalAnomaly, "CRT idempotent not found");
        }
    }

    const ResidueRing& whole() const { return whole_; }
    const std::vector<ResidueRing>& components() const { return comps_; }
    const std::vector<PrimeIdeal>& primes() const { return primes_; }
    const std::vector<int>& exponents() const { return exps_; }

    std::vector<long long> forward(long long code) const
    {
        auto v = whole_.lift_coords(code);
        std::vector<long long> out;
        for (auto& R : comps_) out.push_back(R.reduce_code(v));
        return out;
    }

    long long backward(const std::vector<long long>& parts) const
    {
        long long acc = 0;
        for (size_t i = 0; i < comps_.size(); ++i) {
            long long lifted = whole_.reduce_code(comps_[i].lift_coords(parts[i]));
            acc = whole_.add(acc, whole_.mul(lifted, idem_[i]));
        }
        return acc;
    }

private:
    ResidueRing whole_;
    std::vector<ResidueRing> comps_;
    std::vector<PrimeIdeal> primes_;
    std::vector<int> exps_;
    std::vector<long long> idem_;
};

}  // namespace gwcert
