#pragma once

#include "residue.hpp"

#include <optional>
#include <unordered_set>

namespace gwcert {

// A ⋊ Z/t with (a1, b1)(a2, b2) = (a1 + w^b1 a2, b1 + b2); element code a * t + b
class SemidirectGroup {
public:
    using Elem = long long;

    SemidirectGroup() = default;
    SemidirectGroup(std::shared_ptr<const ResidueRing> R, long long w_code, long long t, long long cap = 50000)
        : R_(std::move(R)), w_(w_code), t_(t)
    {
        if (t_ < 1) throw Error(ErrorKind::InternalAnomaly, "cyclic factor of order < 1");
        n_ = R_->size();
        if (n_ > cap / t_ || n_ * t_ > cap)
            throw Error(ErrorKind::GroupTooLarge, "group order " + std::to_string(n_) + "*" + std::to_string(t_) +
                                                      " exceeds cap " + std::to_string(cap));
        if (R_->pow(w_, t_) != R_->one()) throw Error(ErrorKind::InternalAnomaly, "w^t != 1 in the residue ring");
        wpow_.resize(t_);
        long long cur = R_->one();
        for (long long b = 0; b < t_; ++b) {
            wpow_[b] = cur;
            cur = R_->mul(cur, w_);
        }
        act_.resize(static_cast<size_t>(n_ * t_));
        for (long long b = 0; b < t_; ++b)
            for (long long a = 0; a < n_; ++a) act_[b * n_ + a] = static_cast<int32_t>(R_->mul(wpow_[b], a));
        if (n_ * n_ <= (1LL << 22)) {
            add_.resize(static_cast<size_t>(n_ * n_));
            for (long long a = 0; a < n_; ++a)
                for (long long c = 0; c < n_; ++c) add_[a * n_ + c] = static_cast<int32_t>(R_->add(a, c));
        }
        neg_.resize(n_);
        for (long long a = 0; a < n_; ++a) neg_[a] = static_cast<int32_t>(R_->neg(a));
        long long N = order();
        if (N <= kTableLimit) {
            table_.resize(static_cast<size_t>(N * N));
            for (Elem g = 0; g < N; ++g)
                for (Elem h = 0; h < N; ++h) table_[g * N + h] = static_cast<int32_t>(mul_direct(g, h));
        }
    }

    const ResidueRing& ring() const { return *R_; }
    std::shared_ptr<const ResidueRing> ring_ptr() const { return R_; }
    long long t() const { return t_; }
    long long ring_size() const { return n_; }
    long long order() const { return n_ * t_; }
    long long w_code() const { return w_; }

    Elem make(long long a, long long b) const { return a * t_ + mod_floor_ll(b, t_); }
    long long a_of(Elem g) const { return g / t_; }
    long long b_of(Elem g) const { return g % t_; }
    Elem identity() const { return 0; }

    long long ring_add(long long a, long long c) const
    {
        if (!add_.empty()) return add_[a * n_ + c];
        return R_->add(a, c);
    }
    long long ring_neg(long long a) const { return neg_[a]; }
    // w^b * a
    long long act(long long b, long long a) const { return act_[mod_floor_ll(b, t_) * n_ + a]; }
    long long w_pow(long long b) const { return wpow_[mod_floor_ll(b, t_)]; }

    Elem mul(Elem g, Elem h) const
    {
        if (!table_.empty()) return table_[g * order() + h];
        return mul_direct(g, h);
    }

    Elem inv(Elem g) const
    {
        long long a = a_of(g), b = b_of(g);
        long long nb = (t_ - b) % t_;
        return make(neg_[act(nb, a)], nb);
    }

    Elem pow(Elem g, long long e) const
    {
        if (e < 0) {
            g = inv(g);
            e = -e;
        }
        Elem r = identity();
        while (e > 0) {
            if (e & 1) r = mul(r, g);
            e >>= 1;
            if (e) g = mul(g, g);
        }
        return r;
    }

    Elem conj(Elem x, Elem g) const { return mul(mul(x, g), inv(x)); }

    long long elem_order(Elem g) const
    {
        long long k = 1;
        Elem c = g;
        while (c != identity()) {
            c = mul(c, g);
            ++k;
        }
        return k;
    }

    std::string str(Elem g) const { return "(" + std::to_string(a_of(g)) + "," + std::to_string(b_of(g)) + ")"; }

private:
    static constexpr long long kTableLimit = 2048;

    static long long mod_floor_ll(long long x, long long m) { return ((x % m) + m) % m; }

    Elem mul_direct(Elem g, Elem h) const
    {
        long long a1 = a_of(g), b1 = b_of(g), a2 = a_of(h), b2 = b_of(h);
        return make(ring_add(a1, act_[b1 * n_ + a2]), b1 + b2);
    }

    std::shared_ptr<const ResidueRing> R_;
    long long w_ = 0;
    long long t_ = 1;
    long long n_ = 1;
    std::vector<long long> wpow_;
    std::vector<int32_t> act_, add_, neg_, table_;
};

struct Subgroup {
    std::vector<long long> elements;  // sorted
    std::vector<long long> generators;

    size_t order() const { return elements.size(); }
    bool contains(long long g) const { return std::binary_search(elements.begin(), elements.end(), g); }
    friend bool operator==(const Subgroup& x, const Subgroup& y) { return x.elements == y.elements; }
};

inline Subgroup closure(const SemidirectGroup& F, const std::vector<long long>& gens)
{
    std::vector<char> seen(static_cast<size_t>(F.order()), 0);
    std::vector<long long> out{F.identity()};
    seen[F.identity()] = 1;
    std::vector<long long> g;
    for (auto x : gens)
        if (x != F.identity()) g.push_back(x);
    for (size_t i = 0; i < out.size(); ++i)
        for (auto x : g) {
            long long y = F.mul(out[i], x);
            if (!seen[y]) {
                seen[y] = 1;
                out.push_back(y);
            }
        }
    std::sort(out.begin(), out.end());
    return {out, g};
}

namespace detail {

inline Subgroup extend(const SemidirectGroup& F, const Subgroup& K, long long c, std::vector<char>& seen)
{
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<long long> gens = K.generators;
    gens.push_back(c);
    std::vector<long long> out;
    for (auto x : K.elements) {
        seen[x] = 1;
        out.push_back(x);
    }
    for (size_t i = 0; i < out.size(); ++i)
        for (auto x : gens) {
            long long y = F.mul(out[i], x);
            if (!seen[y]) {
                seen[y] = 1;
                out.push_back(y);
            }
        }
    std::sort(out.begin(), out.end());
    return {out, gens};
}

struct VecHash {
    size_t operator()(const std::vector<long long>& v) const
    {
        size_t h = v.size();
        for (auto x : v) h = h * 1000003u ^ static_cast<size_t>(x);
        return h;
    }
};

}  // namespace detail

// generators of the distinct cyclic subgroups
inline std::vector<long long> cyclic_generators(const SemidirectGroup& F)
{
    std::vector<char> covered(static_cast<size_t>(F.order()), 0);
    std::vector<long long> out;
    for (long long g = 0; g < F.order(); ++g) {
        if (covered[g]) continue;
        out.push_back(g);
        long long n = F.elem_order(g);
        long long c = g;
        for (long long k = 1; k <= n; ++k, c = F.mul(c, g))
            if (std::gcd(k, n) == 1) covered[c] = 1;
    }
    return out;
}

// every subgroup exactly once, sorted by order
inline std::vector<Subgroup> enumerate_subgroups(const SemidirectGroup& F, size_t max_subgroups = 2000000)
{
    auto cyc = cyclic_generators(F);
    std::vector<Subgroup> subs;
    std::unordered_set<std::vector<long long>, detail::VecHash> known;
    for (auto g : cyc) {
        auto S = closure(F, {g});
        if (known.insert(S.elements).second) subs.push_back(S);
    }
    std::vector<char> seen(static_cast<size_t>(F.order()));
    std::vector<char> done(static_cast<size_t>(F.order()));
    for (size_t i = 0; i < subs.size(); ++i) {
        std::fill(done.begin(), done.end(), 0);
        for (auto c : cyc) {
            if (done[c] || subs[i].contains(c)) continue;
            // <K, k c^j> = <K, c> for k in K and j prime to the order of c
            long long n = F.elem_order(c);
            long long cj = c;
            for (long long j = 1; j <= n; ++j, cj = F.mul(cj, c))
                if (std::gcd(j, n) == 1)
                    for (auto k : subs[i].elements) done[F.mul(k, cj)] = 1;
            auto J = detail::extend(F, subs[i], c, seen);
            if (known.insert(J.elements).second) {
                subs.push_back(std::move(J));
                if (subs.size() > max_subgroups) throw Error(ErrorKind::CapExceeded, "too many subgroups");
            }
        }
    }
    for (auto& S : subs) {
        // drop redundant generators
        std::vector<long long> g = S.generators;
        for (size_t k = 0; k < g.size();) {
            auto h = g;
            h.erase(h.begin() + static_cast<long>(k));
            if (closure(F, h).order() == S.order())
                g = std::move(h);
            else
                ++k;
        }
        S.generators = std::move(g);
    }
    std::stable_sort(subs.begin(), subs.end(), [](const Subgroup& a, const Subgroup& b) {
        return a.order() != b.order() ? a.order() < b.order() : a.elements < b.elements;
    });
    return subs;
}

struct HyperWitness {
    Subgroup C;               // normal cyclic
    long long c_generator = 0;
    long long p = 0;          // H/C is a p-group; 0 when H = C
    long long quotient_order = 1;
};

inline std::optional<HyperWitness> is_hyperelementary(const SemidirectGroup& F, const Subgroup& H)
{
    long long m = static_cast<long long>(H.order());
    for (auto g : H.elements)
        if (F.elem_order(g) == m) return HyperWitness{H, g, 0, 1};
    for (long long p : prime_divisors(m)) {
        long long mp = m;
        while (mp % p == 0) mp /= p;
        // the normal Hall p'-subgroup is the set of elements of order dividing mp
        std::vector<long long> S;
        long long gen = -1;
        for (auto g : H.elements)
            if (F.pow(g, mp) == F.identity()) {
                S.push_back(g);
                if (F.elem_order(g) == mp) gen = g;
            }
        if (static_cast<long long>(S.size()) != mp || gen < 0) continue;
        Subgroup C{S, {gen}};
        if (mp == 1) C.generators.clear();
        return HyperWitness{C, mp == 1 ? F.identity() : gen, p, m / mp};
    }
    return std::nullopt;
}

// conjugation by (x, 0) sends every generator into {0} ⋊ Z/t
inline bool conjugates_to_axis(const SemidirectGroup& F, long long x, const std::vector<long long>& gens)
{
    for (auto g : gens) {
        long long a = F.a_of(g), b = F.b_of(g);
        long long r = F.ring_add(F.ring_add(x, a), F.ring_neg(F.act(b, x)));
        if (r != 0) return false;
    }
    return true;
}

inline std::optional<long long> axis_conjugator(const SemidirectGroup& F, const std::vector<long long>& gens)
{
    const auto& R = F.ring();
    for (auto g : gens) {
        long long b = F.b_of(g);
        long long d = R.sub(F.w_pow(b), R.one());
        if (!R.is_unit(d)) continue;
        long long x = R.mul(F.a_of(g), R.inv(d));
        if (conjugates_to_axis(F, x, gens)) return x;
    }
    for (long long x = 0; x < F.ring_size(); ++x)
        if (conjugates_to_axis(F, x, gens)) return x;
    return std::nullopt;
}

struct Component {
    PrimeIdeal P;
    int exponent = 1;  // s * e
    long long t = 1;   // t(P, s e)
    long long t1 = 1;  // t(P, 1)
};

// O_w / I ⋊ Z/t for I = P^s or q^s O_w, with the reduction map
struct QuotientGroup {
    SemidirectGroup F;
    long long q = 0;
    int s = 1;
    bool prime_modulus = false;
    FieldElement w;
    std::vector<Component> components;
    std::shared_ptr<const CrtSplit> crt;

    long long t() const { return F.t(); }

    SemidirectGroup::Elem alpha(const FieldElement& x, const Integer& z) const
    {
        long long a = F.ring().from_field(x);
        return F.make(a, to_ll(mod_floor(z, Integer(F.t()))));
    }
    SemidirectGroup::Elem alpha(const FieldElement& x, long long z) const { return alpha(x, Integer(z)); }

    long long project(SemidirectGroup::Elem g) const { return F.b_of(g); }
};

inline QuotientGroup build_prime_group(const OwRing& W, const PrimeIdeal& P, int s, long long cap = 50000)
{
    QuotientGroup G;
    long long t = t_order(W, P, s);
    auto R = std::make_shared<const ResidueRing>(ResidueRing::of_prime_power(W.order(), P, s));
    G.F = SemidirectGroup(R, R->from_field(W.w()), t, cap);
    G.q = P.p;
    G.s = s;
    G.prime_modulus = true;
    G.w = W.w();
    G.components.push_back({P, s, t, t_order(W, P, 1)});
    return G;
}

inline QuotientGroup build_group(const OwRing& W, long long q, int m, long long cap = 50000)
{
    QuotientGroup G;
    long long t = t_order(W, q, m);
    auto crt = std::make_shared<const CrtSplit>(W.order(), q, m);
    auto R = std::make_shared<const ResidueRing>(crt->whole());
    G.F = SemidirectGroup(R, R->from_field(W.w()), t, cap);
    G.q = q;
    G.s = m;
    G.w = W.w();
    G.crt = crt;
    for (size_t i = 0; i < crt->primes().size(); ++i) {
        const auto& P = crt->primes()[i];
        G.components.push_back({P, crt->exponents()[i], t_order(W, P, crt->exponents()[i]), t_order(W, P, 1)});
    }
    return G;
}

enum class HypCase { ConjugateToCyclic, InKernel, InPrimeToQ, NotClassifiable };

inline const char* hyp_case_name(HypCase c)
{
    switch (c) {
    case HypCase::ConjugateToCyclic: return "ConjugateToCyclic";
    case HypCase::InKernel: return "InKernelCase";
    case HypCase::InPrimeToQ: return "InPrimeToQCase";
    default: return "NotClassifiable";
    }
}

struct HypVerdict {
    HypCase primary = HypCase::NotClassifiable;
    bool in_kernel = false;     // H ≤ A ⋊ t1 Z/t
    bool in_prime_to_q = false; // H ≤ A ⋊ (t/t1) Z/t
    bool conjugate = false;     // (x,0) H (x,0)^-1 ≤ {0} ⋊ Z/t
    long long conjugator = 0;   // ring code of x
    bool verified = false;
    HyperWitness witness;
};

inline HypVerdict classify_hyperelementary(const QuotientGroup& G, const Subgroup& H)
{
    if (G.components.size() != 1)
        throw Error(ErrorKind::ShapeMismatch, "classification needs a single prime above the modulus");
    auto w = is_hyperelementary(G.F, H);
    if (!w) throw Error(ErrorKind::NotHyperElementary, "subgroup of order " + std::to_string(H.order()));
    const auto& F = G.F;
    long long t = F.t(), t1 = G.components[0].t1;
    HypVerdict v;
    v.witness = *w;
    v.in_kernel = v.in_prime_to_q = true;
    for (auto g : H.elements) {
        long long b = F.b_of(g);
        if (b % t1 != 0) v.in_kernel = false;
        if (b % (t / t1) != 0) v.in_prime_to_q = false;
    }
    if (auto x = axis_conjugator(F, H.generators)) {
        v.conjugate = true;
        v.conjugator = *x;
        // check every element, not only generators
        v.verified = conjugates_to_axis(F, *x, H.elements);
    }
    if (v.conjugate)
        v.primary = HypCase::ConjugateToCyclic;
    else if (v.in_kernel)
        v.primary = HypCase::InKernel;
    else if (v.in_prime_to_q)
        v.primary = HypCase::InPrimeToQ;
    if (!v.conjugate) v.verified = v.primary != HypCase::NotClassifiable;
    return v;
}

// index of pi(H) in Z/t
inline long long projection_index(const QuotientGroup& G, const Subgroup& H)
{
    long long g = G.t();
    for (auto x : H.generators) g = std::gcd(g, G.F.b_of(x));
    return g;
}

// min over components of min(t(P_i,1), t(P_i, s v_i) / t(P_i,1))
inline long long index_bound(const QuotientGroup& G)
{
    long long b = std::numeric_limits<long long>::max();
    for (auto& c : G.components) b = std::min(b, std::min(c.t1, c.t / c.t1));
    return b;
}

struct ExtendedConjugator {
    long long x = 0;  // ring code
    long long y = 0;  // ring code of a unit
    long long index = 1;
    std::vector<long long> component_x;
    bool verified = false;
};

// (x, y) in A ⋊ A^x with (x, y) H (x, y)^-1 ≤ {0} ⋊ Z/t, assembled componentwise
inline ExtendedConjugator find_conjugator_into_cyclic(const QuotientGroup& G, const Subgroup& H,
                                                      bool check_hypothesis = true)
{
    const auto& F = G.F;
    ExtendedConjugator out;
    out.index = projection_index(G, H);
    if (check_hypothesis && !(out.index < index_bound(G)))
        throw Error(ErrorKind::HypothesisViolated, "index " + std::to_string(out.index) + " is not below " +
                                                       std::to_string(index_bound(G)));
    out.y = F.ring().one();
    if (G.prime_modulus || !G.crt) {
        auto x = axis_conjugator(F, H.generators);
        if (!x) throw Error(ErrorKind::NoConjugatorFound, "no conjugator for a subgroup of order " + std::to_string(H.order()));
        out.x = *x;
        out.component_x = {*x};
    } else {
        const auto& crt = *G.crt;
        for (size_t i = 0; i < crt.components().size(); ++i) {
            const auto& Ri = crt.components()[i];
            long long wi = Ri.from_field(G.w);
            long long ti = G.components[i].t;
            // component conjugation: x + a - w^b x = 0 in O/P_i^(s v_i)
            std::vector<std::pair<long long, long long>> gi;
            for (auto g : H.generators) gi.push_back({crt.forward(F.a_of(g))[i], F.b_of(g) % ti});
            auto ok = [&](long long x) {
                for (auto& [a, b] : gi)
                    if (Ri.sub(Ri.add(x, a), Ri.mul(Ri.pow(wi, b), x)) != 0) return false;
                return true;
            };
            std::optional<long long> found;
            for (auto& [a, b] : gi) {
                long long d = Ri.sub(Ri.pow(wi, b), Ri.one());
                if (!Ri.is_unit(d)) continue;
                long long x = Ri.mul(a, Ri.inv(d));
                if (ok(x)) {
                    found = x;
                    break;
                }
            }
            for (long long x = 0; !found && x < Ri.size(); ++x)
                if (ok(x)) found = x;
            if (!found)
                throw Error(ErrorKind::NoConjugatorFound, "component " + G.components[i].P.label() + " has no conjugator");
            out.component_x.push_back(*found);
        }
        out.x = crt.backward(out.component_x);
    }
    out.verified = conjugates_to_axis(F, out.x, H.elements);
    return out;
}

}  // namespace gwcert
