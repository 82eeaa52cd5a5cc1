#pragma once

#include "certificate.hpp"
#include "model_geometry.hpp"

#include <chrono>
#include <random>

namespace gwcert {

struct SuiteResult {
    std::string name;
    long long checks = 0;
    long long failures = 0;
    double max_error = 0;
    double seconds = 0;
    bool skipped = false;
    std::string note;

    bool passed() const { return !skipped && failures == 0; }
    void record(bool ok, double err = 0)
    {
        ++checks;
        if (!ok) ++failures;
        max_error = std::max(max_error, err);
    }
};

namespace detail {

class Timer {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

}  // namespace detail

// random elements of O, O_w, O_w^x and Q(w) ⋊ O_w^x
class Sampler {
public:
    Sampler(const OwRing& W, std::uint64_t seed) : W_(W), rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    FieldElement integral(int h)
    {
        const auto& O = W_.order();
        std::vector<Integer> c(O.degree());
        for (auto& x : c) x = uniform(-h, h);
        return O.from_coords(c);
    }

    // element of O_w: integral times a power of w
    FieldElement in_ow(int h, int k) { return integral(h) * W_.w().pow(uniform(-k, k)); }

    FieldElement unit(int k)
    {
        const auto& u = W_.units();
        FieldElement y = u.torsion_generator.pow(uniform(0, std::max(1, u.torsion_order) - 1));
        for (auto& e : u.fundamental_units) y = y * e.pow(uniform(-k, k));
        for (size_t i = 0; i < W_.mw().size(); ++i) y = y * W_.y_p(i).pow(uniform(-k, k));
        return y;
    }

    AffineElement affine(const ModelSpace& X, int h, int k) { return X.element(in_ow(h, k), unit(k)); }

private:
    const OwRing& W_;
    std::mt19937_64 rng_;
};

// t(s+1) in {t(s), q t(s)}, gcd(t(Q,1), q) = 1, u(q) = q-free part of t(q,s)
inline SuiteResult order_suite(const OwRing& W, int primes = 3, int smax = 3)
{
    detail::Timer tm;
    SuiteResult r{"orders"};
    int found = 0;
    for (long long q = 2; found < primes && q < 10000; q = next_prime(q)) {
        if (!admissible_prime(W, q, 0)) continue;
        ++found;
        std::vector<long long> ts;
        for (int s = 1; s <= smax + 1; ++s) ts.push_back(t_order(W, q, s));
        for (int s = 0; s < smax; ++s) r.record(ts[s + 1] == ts[s] || ts[s + 1] == q * ts[s]);
        long long u = u_order(W, q);
        for (auto t : ts) r.record(q_free_part(t, q) == u);
        for (auto& P : W.order().primes_above(q)) r.record(std::gcd(t_order(W, P, 1), q) == 1);
    }
    r.seconds = tm.seconds();
    return r;
}

// Busemann equivariance, stabilizer sufficiency and f(L(n)) = n
inline SuiteResult tree_suite(const std::vector<PrimeIdeal>& primes, int checks_per_prime, std::uint64_t seed)
{
    detail::Timer tm;
    SuiteResult r{"tree"};
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (auto& P : primes) {
        BTTree T(P);
        const auto& K = P.uniformizer.field();
        auto rnd_elem = [&](bool nonzero) {
            while (true) {
                std::vector<Rational> c(K.degree());
                for (auto& x : c) x = Rational(uni(-6, 6), uni(1, 4));
                auto e = K.element(c) * P.uniformizer.pow(uni(-3, 3));
                if (!nonzero || !e.is_zero()) return e;
            }
        };
        auto rnd_vertex = [&] { return T.act(rnd_elem(false), rnd_elem(true), T.identity()); };
        for (int n = -8; n <= 8; ++n) r.record(T.busemann(T.standard(n)) == n);
        for (int i = 0; i < checks_per_prime; ++i) {
            auto L = rnd_vertex();
            auto x = rnd_elem(false);
            auto y = rnd_elem(true);
            r.record(T.busemann(T.act(x, y, L)) == T.busemann(L) - P.valuation(y));
            auto [z1, z2, z2p] = T.z_invariants(L);
            FieldElement a = P.uniformizer.pow(z1 - z2p + uni(0, 2)) * K.from_rational(Rational(uni(-9, 9)));
            r.record(T.act(a, K.one(), L) == L);
        }
    }
    r.seconds = tm.seconds();
    return r;
}

// prod |tau(e_i)|^alpha_i prod |tau(y_P)|^(v_P(y)/v_P(y_P)) = |tau(y)| and the exact reconstruction
inline SuiteResult warp_suite(const ModelSpace& X, int samples, std::uint64_t seed, double tol = 1e-9)
{
    detail::Timer tm;
    SuiteResult r{"warp"};
    Sampler smp(X.ring(), seed);
    const auto& W = X.ring();
    for (int i = 0; i < samples; ++i) {
        FieldElement y = smp.unit(4) * W.w().pow(smp.uniform(-3, 3));
        auto a = W.alpha_w(y);
        r.record(a.verified);
        for (int tau = 0; tau < W.field().degree(); ++tau) {
            double e = X.warp_identity_residual(y, tau);
            r.record(e < tol, e);
        }
    }
    r.seconds = tm.seconds();
    return r;
}

namespace detail {

inline ModelPoint point_in_ball(const ModelSpace& X, Sampler& s, double R)
{
    auto base = X.base_point();
    auto far = X.act(s.affine(X, 3, 2), base);
    double d = X.distance(base, far);
    if (d == 0) return base;
    return X.geodesic_eval(base, far, std::min(d, R) * s.real(0, 1));
}

struct Word {
    std::vector<AffineElement> gs;
    std::vector<double> ts;
};

}  // namespace detail

// the six strong homotopy action axioms and the semigroup law of H^R
inline SuiteResult sha_suite(const ModelSpace& X, int words, const std::vector<double>& radii, std::uint64_t seed,
                             double tol = 1e-9)
{
    detail::Timer tm;
    SuiteResult r{"sha"};
    Sampler s(X.ring(), seed);
    auto base = X.base_point();
    auto e = X.identity_element();
    for (int it = 0; it < words; ++it) {
        double R = radii[static_cast<size_t>(it) % radii.size()];
        std::vector<AffineElement> gens;
        for (int k = 0; k < 3; ++k) gens.push_back(s.affine(X, 2, 1));
        auto rnd_word = [&](int len) {
            detail::Word w;
            for (int k = 0; k < len; ++k) w.gs.push_back(gens[static_cast<size_t>(s.uniform(0, 2))]);
            for (int k = 0; k + 1 < len; ++k) w.ts.push_back(s.real(0, 1));
            return w;
        };
        auto psi = [&](const detail::Word& w, const ModelPoint& x) { return X.sha_eval(w.gs, w.ts, x, R, base); };
        auto check = [&](const ModelPoint& a, const ModelPoint& b) {
            double d = X.distance(a, b);
            r.record(d < tol, d);
        };
        auto x = detail::point_in_ball(X, s, R);
        int len = s.uniform(2, 4);
        int axiom = it % 6;
        auto w = rnd_word(len);
        size_t k = static_cast<size_t>(s.uniform(0, len - 2));
        if (axiom == 0) {
            w.ts[k] = 0;
            detail::Word outer{{w.gs.begin(), w.gs.begin() + k + 1}, {w.ts.begin(), w.ts.begin() + k}};
            detail::Word inner{{w.gs.begin() + k + 1, w.gs.end()}, {w.ts.begin() + k + 1, w.ts.end()}};
            check(psi(w, x), psi(outer, psi(inner, x)));
        } else if (axiom == 1) {
            w.ts[k] = 1;
            detail::Word v = w;
            v.gs[k] = ModelSpace::compose(w.gs[k], w.gs[k + 1]);
            v.gs.erase(v.gs.begin() + k + 1);
            v.ts.erase(v.ts.begin() + k);
            check(psi(w, x), psi(v, x));
        } else if (axiom == 2) {
            w.gs[0] = e;
            detail::Word v{{w.gs.begin() + 1, w.gs.end()}, {w.ts.begin() + 1, w.ts.end()}};
            check(psi(w, x), psi(v, x));
        } else if (axiom == 3) {
            if (len < 3) w = rnd_word(len = 3);
            size_t m = static_cast<size_t>(s.uniform(1, len - 2));
            w.gs[m] = e;
            detail::Word v = w;
            v.gs.erase(v.gs.begin() + m);
            v.ts[m - 1] = w.ts[m - 1] * w.ts[m];
            v.ts.erase(v.ts.begin() + m);
            check(psi(w, x), psi(v, x));
        } else if (axiom == 4) {
            w.gs.back() = e;
            detail::Word v = w;
            v.gs.pop_back();
            v.ts.pop_back();
            check(psi(w, x), psi(v, x));
        } else {
            check(X.sha_eval({e}, {}, x, R, base), x);
        }
        // semigroup law of the retraction on an arbitrary point
        auto y = X.act(s.affine(X, 4, 3), x);
        double t1 = s.real(0, 1), t2 = s.real(0, 1);
        check(X.retraction(X.retraction(y, t2, R, base), t1, R, base), X.retraction(y, t1 * t2, R, base));
        auto h0 = X.retraction(y, 0, R, base);
        double db = X.distance(h0, base);
        r.record(db <= R + tol, std::max(0.0, db - R));
    }
    r.seconds = tm.seconds();
    return r;
}

// symmetry and triangle inequality of BFS word length
inline SuiteResult word_suite(const GwGroup& G, const GeneratingSet& S, int radius, int triples, std::uint64_t seed)
{
    detail::Timer tm;
    SuiteResult r{"word"};
    auto ball = G.ball(S, radius);
    std::vector<GwElement> elems;
    for (auto& [g, l] : ball) elems.push_back(g);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, elems.size() - 1);
    auto small = G.ball(S, 2 * radius);
    auto dist = [&](const GwElement& a, const GwElement& b) {
        auto it = small.find(G.mul(G.inv(a), b));
        return it == small.end() ? -1 : it->second;
    };
    for (int i = 0; i < triples; ++i) {
        auto a = elems[pick(rng)], b = elems[pick(rng)], c = elems[pick(rng)];
        int ab = dist(a, b), ba = dist(b, a), bc = dist(b, c), ac = dist(a, c);
        r.record(ab >= 0 && ab == ba);
        r.record((ab == 0) == (a == b));
        if (ab >= 0 && bc >= 0 && ac >= 0) r.record(ac <= ab + bc);
    }
    r.seconds = tm.seconds();
    return r;
}

// constant geodesics and the flow group law
inline SuiteResult flow_suite(const ModelSpace& X, int pairs, std::uint64_t seed, double tol = 1e-6)
{
    detail::Timer tm;
    SuiteResult r{"flow"};
    Sampler s(X.ring(), seed);
    auto base = X.base_point();
    for (int i = 0; i < pairs; ++i) {
        auto p = X.act(s.affine(X, 3, 2), base);
        auto q = X.act(s.affine(X, 3, 2), base);
        double d = X.distance(p, q);
        double fs = fs_distance(X, constant_geodesic(p), constant_geodesic(q));
        r.record(std::abs(fs - d) < tol, std::abs(fs - d));
        auto c = make_generalized_geodesic(X, p, q, Rational(s.uniform(-5, 5), 4));
        Rational a(s.uniform(-20, 20), s.uniform(1, 7)), b(s.uniform(-20, 20), s.uniform(1, 7));
        auto lhs = fs_flow(fs_flow(c, b), a);
        auto rhs = fs_flow(c, a + b);
        r.record(lhs.shift == rhs.shift && fs_flow(c, Rational(0)).shift == c.shift);
    }
    r.seconds = tm.seconds();
    return r;
}

}  // namespace gwcert
