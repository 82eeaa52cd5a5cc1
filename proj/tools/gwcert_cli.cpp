#include "gwcert/field_spec.hpp"
#include "gwcert/suites.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace gwcert;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCounterexample = 2;
constexpr int kExitSkip = 3;
constexpr int kExitUsage = 64;

struct RunConfig {
    std::string field_path;
    std::string w = "2";
    int n = 1;
    std::string gens;
    long long q = 0;
    int m = 1;
    long long cap_order = 50000;
    size_t cap_bfs = 2000000;
    std::uint64_t seed = 1;
    bool json = false;
    long long p = 2;
    int prime_index = 0;
    int radius = 2;
    bool dot = false;
    int samples = 200;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    MaximalOrder O;
    std::string field_name;
    OwRing W;
};

Context load(const RunConfig& cfg)
{
    Context c;
    if (cfg.field_path.empty()) {
        c.O = MaximalOrder(rational_field());
        c.field_name = "Q";
    } else {
        std::ifstream probe(cfg.field_path);
        if (!probe) throw UsageError("field spec not found: " + cfg.field_path);
        c.O = make_order(load_field_spec(cfg.field_path));
        c.field_name = c.O.field().poly_string();
    }
    c.W = OwRing(c.O, c.O.field().parse(cfg.w));
    return c;
}

GeneratingSet parse_gens(const GwGroup& G, const std::string& text)
{
    if (text.empty()) return G.standard_generators();
    std::vector<GwElement> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto colon = item.rfind(':');
        if (colon == std::string::npos) throw UsageError("generator must be x:z, got " + item);
        auto x = G.ring().field().parse(item.substr(0, colon));
        out.push_back(G.element(x, std::stoll(item.substr(colon + 1))));
    }
    return G.symmetric(out);
}

Json header(const RunConfig& cfg, const Context& c, const std::string& command)
{
    Json j;
    j["schema"] = 1;
    j["command"] = command;
    j["field"] = c.field_name;
    j["w"] = c.W.w().str();
    j["seed"] = cfg.seed;
    return j;
}

Json rationals(const std::vector<Rational>& v)
{
    Json a = Json::array();
    for (auto& r : v) a.push_back(to_string(r));
    return a;
}

void emit(const RunConfig& cfg, const Json& j, const std::string& text)
{
    if (cfg.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int field_info(const RunConfig& cfg)
{
    auto c = load(cfg);
    const auto& K = c.O.field();
    auto j = header(cfg, c, "field-info");
    j["degree"] = K.degree();
    j["signature"] = {K.real_embeddings(), K.complex_pairs()};
    Json basis = Json::array();
    for (auto& b : c.O.basis()) basis.push_back(b.str());
    j["integral_basis"] = basis;
    const auto& u = c.W.units();
    j["torsion_order"] = u.torsion_order;
    Json fu = Json::array();
    for (auto& e : u.fundamental_units) fu.push_back(e.str());
    j["fundamental_units"] = fu;
    std::ostringstream os;
    os << "field " << c.field_name << "  degree " << K.degree() << "  signature (" << K.real_embeddings() << ","
       << K.complex_pairs() << ")\n";
    os << "integral basis:";
    for (auto& b : c.O.basis()) os << " " << b.str();
    os << "\ntorsion order " << u.torsion_order << "\nfundamental units:";
    for (auto& e : u.fundamental_units) os << " " << e.str();
    os << "\n";
    emit(cfg, j, os.str());
    return kExitOk;
}

int mw_info(const RunConfig& cfg)
{
    auto c = load(cfg);
    const auto& W = c.W;
    auto j = header(cfg, c, "mw");
    Json primes = Json::array();
    std::ostringstream os;
    os << "w = " << W.w().str() << "  n_w = " << W.nw() << "\n";
    for (size_t i = 0; i < W.mw().size(); ++i) {
        const auto& P = W.mw()[i];
        Json e;
        e["prime"] = P.label();
        e["v_w"] = P.valuation(W.w());
        e["k"] = W.k_p(i);
        e["y"] = W.y_p(i).str();
        primes.push_back(e);
        os << P.label() << "  v(w) = " << P.valuation(W.w()) << "  k = " << W.k_p(i) << "  y = " << W.y_p(i).str()
           << "\n";
    }
    j["n_w"] = W.nw();
    j["M_w"] = primes;
    auto a = W.alpha_w(W.w());
    j["alpha_w"] = {{"free", rationals(a.free)}, {"mw", rationals(a.mw)}, {"l", a.l}, {"verified", a.verified}};
    os << "alpha_w(w): free [";
    for (auto& r : a.free) os << " " << to_string(r);
    os << " ] mw [";
    for (auto& r : a.mw) os << " " << to_string(r);
    os << " ]  verified " << (a.verified ? "yes" : "no") << "\n";
    emit(cfg, j, os.str());
    return kExitOk;
}

int tree_info(const RunConfig& cfg)
{
    auto c = load(cfg);
    auto primes = c.O.primes_above(cfg.p);
    if (cfg.prime_index < 0 || cfg.prime_index >= static_cast<int>(primes.size()))
        throw UsageError("prime index out of range, " + std::to_string(primes.size()) + " primes above " +
                         std::to_string(cfg.p));
    BTTree T(primes[static_cast<size_t>(cfg.prime_index)]);
    if (cfg.dot) {
        std::cout << T.dot(T.identity(), cfg.radius);
        return kExitOk;
    }
    auto j = header(cfg, c, "tree");
    j["prime"] = primes[static_cast<size_t>(cfg.prime_index)].label();
    Json rows = Json::array();
    std::ostringstream os;
    os << "prime " << j["prime"].get<std::string>() << "\n  n  busemann  d(L0,L(n))\n";
    for (int n = -cfg.radius; n <= cfg.radius; ++n) {
        auto L = T.standard(n);
        rows.push_back({{"n", n}, {"class", L.label()}, {"busemann", T.busemann(L)}, {"distance", T.distance(L, T.identity())}});
        os << "  " << n << "  " << T.busemann(L) << "  " << T.distance(L, T.identity()) << "\n";
    }
    j["standard_classes"] = rows;
    j["neighbors_of_identity"] = T.neighbors(T.identity()).size();
    emit(cfg, j, os.str());
    return kExitOk;
}

int quotient_info(const RunConfig& cfg)
{
    auto c = load(cfg);
    if (cfg.q <= 0) throw UsageError("--q is required");
    auto G = build_group(c.W, cfg.q, cfg.m, cfg.cap_order);
    auto subs = enumerate_subgroups(G.F);
    long long he = 0;
    for (auto& H : subs) he += is_hyperelementary(G.F, H).has_value();
    auto j = header(cfg, c, "quotient");
    j["q"] = cfg.q;
    j["m"] = cfg.m;
    j["t"] = G.t();
    j["ring_size"] = G.F.ring().size();
    j["group_order"] = G.F.order();
    Json comps = Json::array();
    for (auto& k : G.components) comps.push_back({{"prime", k.P.label()}, {"exponent", k.exponent}, {"t", k.t}, {"t1", k.t1}});
    j["components"] = comps;
    j["subgroups"] = subs.size();
    j["hyperelementary"] = he;
    std::ostringstream os;
    os << "F = O_w/" << cfg.q << "^" << cfg.m << " x| Z/" << G.t() << "  order " << G.F.order() << "\n";
    for (auto& k : G.components)
        os << "  " << k.P.label() << "^" << k.exponent << "  t = " << k.t << "  t1 = " << k.t1 << "\n";
    os << "subgroups " << subs.size() << "  hyper-elementary " << he << "\n";
    emit(cfg, j, os.str());
    return kExitOk;
}

std::string gens_string(const SemidirectGroup& F, const std::vector<long long>& gens)
{
    std::string s;
    for (auto g : gens) s += (s.empty() ? "" : " ") + F.str(g);
    return s.empty() ? "-" : s;
}

int classify(const RunConfig& cfg)
{
    auto c = load(cfg);
    if (cfg.q <= 0) throw UsageError("--q is required");
    auto j = header(cfg, c, "classify");
    j["q"] = cfg.q;
    j["m"] = cfg.m;
    Json groups = Json::array();
    std::ostringstream os;
    bool bad = false;
    for (auto& P : c.O.primes_above(cfg.q)) {
        auto G = build_prime_group(c.W, P, cfg.m * P.e, cfg.cap_order);
        Json g;
        g["prime"] = P.label();
        g["exponent"] = cfg.m * P.e;
        g["t"] = G.t();
        g["t1"] = G.components[0].t1;
        g["group_order"] = G.F.order();
        os << P.label() << "^" << cfg.m * P.e << "  |F| = " << G.F.order() << "  t = " << G.t()
           << "  t1 = " << G.components[0].t1 << "\n";
        os << "  order  generators  case  kernel  prime-to-q  conjugator\n";
        Json rows = Json::array();
        for (auto& H : enumerate_subgroups(G.F)) {
            if (!is_hyperelementary(G.F, H)) continue;
            auto v = classify_hyperelementary(G, H);
            bad |= !v.verified || v.primary == HypCase::NotClassifiable;
            rows.push_back({{"order", H.order()},
                            {"generators", gens_string(G.F, H.generators)},
                            {"case", hyp_case_name(v.primary)},
                            {"in_kernel", v.in_kernel},
                            {"in_prime_to_q", v.in_prime_to_q},
                            {"conjugator", v.conjugate ? Json(v.conjugator) : Json()},
                            {"verified", v.verified}});
            os << "  " << H.order() << "  " << gens_string(G.F, H.generators) << "  " << hyp_case_name(v.primary) << "  "
               << v.in_kernel << "  " << v.in_prime_to_q << "  " << (v.conjugate ? std::to_string(v.conjugator) : "-")
               << "\n";
        }
        g["verdicts"] = rows;
        groups.push_back(g);
    }
    j["groups"] = groups;
    emit(cfg, j, os.str());
    return bad ? kExitCounterexample : kExitOk;
}

CertificateConfig cert_config(const RunConfig& cfg)
{
    CertificateConfig cc;
    cc.cap_order = cfg.cap_order;
    cc.cap_bfs = cfg.cap_bfs;
    cc.seed = cfg.seed;
    return cc;
}

Json certificate_json(const Certificate& c, const std::string& field)
{
    Json j;
    j["field"] = field;
    j["w"] = c.w.str();
    j["n"] = c.n;
    Json S = Json::array();
    for (auto& s : c.S) S.push_back(s.str());
    j["S"] = S;
    j["m2"] = c.m2;
    j["q"] = c.q;
    Json sp = Json::array();
    for (auto& k : c.splitting) sp.push_back({{"prime", k.P.label()}, {"exponent", k.exponent}, {"t", k.t}, {"t1", k.t1}});
    j["splitting"] = sp;
    j["m"] = c.m;
    j["t"] = c.t;
    j["group_order"] = c.group_order;
    j["subgroups"] = c.subgroup_count;
    j["hyperelementary"] = c.hyperelementary_count;
    j["case1"] = c.case_count(1);
    j["case2"] = c.case_count(2);
    j["base_points"] = c.base_points;
    j["admissibility_rechecked"] = c.admissibility_rechecked;
    Json vs = Json::array();
    for (auto& v : c.verdicts) {
        Json e;
        e["generators"] = v.generators;
        e["order"] = v.order;
        e["index"] = v.index;
        e["case"] = v.which_case;
        if (v.which_case == 1) {
            e["conjugator"] = {{"x", v.conjugator.x}, {"y", v.conjugator.y}};
        } else {
            e["pairs"] = v.lipschitz.pairs;
            e["residue_pairs"] = v.lipschitz.residue_pairs;
            e["worst"] = to_string(v.lipschitz.worst);
        }
        e["verified"] = v.verified;
        if (v.timed_out) e["timed_out"] = true;
        if (!v.note.empty()) e["note"] = v.note;
        if (!v.lipschitz.counterexample.empty()) e["counterexample"] = v.lipschitz.counterexample;
        vs.push_back(e);
    }
    j["verdicts"] = vs;
    j["skipped_conditions"] = c.skipped_conditions;
    j["absent"] = {"N", "Lambda"};
    if (c.skipped) j["skip_reason"] = c.skip_reason;
    j["verified"] = c.verified();
    return j;
}

int exit_of(const Certificate& c)
{
    if (c.counterexample) return kExitCounterexample;
    if (c.skipped) return kExitSkip;
    return c.verified() ? kExitOk : kExitCounterexample;
}

std::string certificate_text(const Certificate& c)
{
    std::ostringstream os;
    os << "w = " << c.w.str() << "  n = " << c.n << "  |S^n| = " << c.Sn.size() << "  m2 = " << c.m2 << "\n";
    os << "q = " << c.q << "  m = " << c.m << "  t = " << c.t << "  |F| = " << c.group_order << "\n";
    if (c.skipped) {
        os << "skipped: " << c.skip_reason << "\n";
        return os.str();
    }
    os << "subgroups " << c.subgroup_count << "  hyper-elementary " << c.hyperelementary_count << "  case 1 "
       << c.case_count(1) << "  case 2 " << c.case_count(2) << "  base points " << c.base_points << "\n";
    for (auto& v : c.verdicts)
        if (!v.verified)
            os << "FAILED order " << v.order << " index " << v.index << " " << v.note << v.lipschitz.counterexample
               << "\n";
    os << "verified " << (c.verified() ? "yes" : "no") << "  (arithmetic hypotheses and case-2 estimate only)\n";
    return os.str();
}

int certificate(const RunConfig& cfg)
{
    auto c = load(cfg);
    GwGroup G(c.W);
    auto cert = build_and_verify(c.W, cfg.n, parse_gens(G, cfg.gens), cert_config(cfg));
    auto j = header(cfg, c, "certificate");
    j["certificate"] = certificate_json(cert, c.field_name);
    emit(cfg, j, certificate_text(cert));
    return exit_of(cert);
}

Json suite_json(const SuiteResult& r)
{
    return {{"name", r.name}, {"checks", r.checks}, {"failures", r.failures}, {"max_error", r.max_error},
            {"passed", r.passed()}};
}

int verify_all(const RunConfig& cfg)
{
    auto c = load(cfg);
    ModelSpace X(c.W);
    GwGroup G(c.W);
    auto S = parse_gens(G, cfg.gens);
    std::vector<PrimeIdeal> primes = c.W.mw();
    for (long long p : {2LL, 3LL, 5LL})
        if (c.O.has_splitting(p))
            for (auto& P : c.O.primes_above(p))
                if (std::find(primes.begin(), primes.end(), P) == primes.end()) primes.push_back(P);

    std::vector<SuiteResult> suites;
    suites.push_back(order_suite(c.W));
    suites.push_back(tree_suite(primes, cfg.samples, cfg.seed));
    suites.push_back(warp_suite(X, cfg.samples, cfg.seed));
    suites.push_back(sha_suite(X, cfg.samples, {1.0, 5.0}, cfg.seed));
    suites.push_back(word_suite(G, S, 3, cfg.samples, cfg.seed));
    suites.push_back(flow_suite(X, std::max(1, cfg.samples / 10), cfg.seed));
    auto cert = build_and_verify(c.W, cfg.n, S, cert_config(cfg));

    auto j = header(cfg, c, "verify-all");
    Json arr = Json::array();
    bool ok = true;
    std::ostringstream os;
    for (auto& r : suites) {
        arr.push_back(suite_json(r));
        ok &= r.passed();
        os << (r.passed() ? "PASS " : "FAIL ") << r.name << "  checks " << r.checks << "  failures " << r.failures
           << "  max error " << r.max_error << "\n";
    }
    j["suites"] = arr;
    j["certificate"] = certificate_json(cert, c.field_name);
    os << certificate_text(cert);
    emit(cfg, j, os.str());
    if (!ok) return kExitCounterexample;
    return exit_of(cert);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Arithmetic and geometric checks for G_w = Z[w,1/w] x| Z"};
    app.require_subcommand(1);
    RunConfig cfg;
    auto common = [&](CLI::App* s) {
        s->add_option("--field", cfg.field_path, "field spec (JSON); Q when omitted");
        s->add_option("--w", cfg.w, "w as a field element string");
        s->add_option("--seed", cfg.seed);
        s->add_option("--cap-order", cfg.cap_order)->check(CLI::PositiveNumber);
        s->add_option("--cap-bfs", cfg.cap_bfs)->check(CLI::PositiveNumber);
        s->add_flag("--json", cfg.json);
    };
    auto* fi = app.add_subcommand("field-info", "integral basis and units");
    auto* mw = app.add_subcommand("mw", "M_w, y_P and alpha_w(w)");
    auto* tr = app.add_subcommand("tree", "Bruhat-Tits tree at a prime");
    auto* qu = app.add_subcommand("quotient", "finite quotient F");
    auto* cl = app.add_subcommand("classify", "hyper-elementary verdicts");
    auto* ce = app.add_subcommand("certificate", "prime and exponent selection with full verification");
    auto* va = app.add_subcommand("verify-all", "property suites and the certificate");
    for (auto* s : {fi, mw, tr, qu, cl, ce, va}) common(s);
    tr->add_option("--p", cfg.p);
    tr->add_option("--prime-index", cfg.prime_index);
    tr->add_option("--radius", cfg.radius)->check(CLI::NonNegativeNumber);
    tr->add_flag("--dot", cfg.dot);
    for (auto* s : {qu, cl}) {
        s->add_option("--q", cfg.q)->required();
        s->add_option("--m", cfg.m)->check(CLI::PositiveNumber);
    }
    for (auto* s : {ce, va}) {
        s->add_option("--n", cfg.n)->check(CLI::PositiveNumber);
        s->add_option("--gens", cfg.gens, "generators x:z separated by ';'");
    }
    va->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*fi) return field_info(cfg);
        if (*mw) return mw_info(cfg);
        if (*tr) return tree_info(cfg);
        if (*qu) return quotient_info(cfg);
        if (*cl) return classify(cfg);
        if (*ce) return certificate(cfg);
        if (*va) return verify_all(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << error_name(e.kind()) << ": " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::GroupTooLarge:
        case ErrorKind::CapExceeded:
        case ErrorKind::BallTooLarge:
            return kExitSkip;
        case ErrorKind::CounterexampleFound:
        case ErrorKind::NoConjugatorFound:
            return kExitCounterexample;
        case ErrorKind::ParseError:
            return kExitUsage;
        default:
            return 1;
        }
    }
    return kExitUsage;
}
