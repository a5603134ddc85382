// mfhrr: command-line front end.
//
// Subcommands
//   residue     exact Grothendieck residue of a generalized fraction
//   chern       Chern character of a matrix factorization (JSON input)
//   chi         Euler characteristic chi(X, Y) via the homology engine
//   pairing     residue pairing <ch X, ch Y> via the forms + residue engines
//   hrr-verify  both sides of chi = (-1)^{n choose 2} <ch, ch>, as JSON
//   corpus      the built-in corpus, every case verified (JSON or CSV)
//   selftest    randomized property suites + the one-variable trace identity
//
// Exit codes: 0 ok, 1 parse errors, 2 non-zero-dimensional input,
// 3 identity failure, 4 odd number of variables, 5 other engine errors.

#include <atomic>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include <mfhrr/corpus.hpp>

using namespace mfhrr;
using nlohmann::json;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

MatrixFactorization load_mf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SyntaxError("cannot open " + path);
    json j;
    in >> j;
    return mf_from_json(j);
}

json hrr_to_json(const HrrResult& r) {
    json j;
    j["chi"] = r.chi;
    j["theta"] = r.theta;
    j["pairing"] = rat_to_string(r.pairing);
    j["sign"] = r.sign;
    j["chern_x"] = r.chern_x;
    j["chern_y"] = r.chern_y;
    j["verdict"] = r.verdict;
    return j;
}

// ---------------------------------------------------------------------------
// selftest: the randomized property suites, deterministic for a fixed seed

Poly random_poly(std::mt19937& rng, const std::vector<std::string>& ring,
                 int nterms = 3, int maxdeg = 2, int maxcoef = 3) {
    std::uniform_int_distribution<int> tcount(0, nterms);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<int> coef(-maxcoef, maxcoef);
    Poly p(ring);
    int k = tcount(rng);
    for (int t = 0; t < k; ++t) {
        Monomial m(ring.size());
        for (size_t i = 0; i < ring.size(); ++i) m.e[i] = deg(rng);
        p.add_term(m, Rational(coef(rng)));
    }
    return p;
}

Elt rand_elt(std::mt19937& rng, const Ambient& A, int parity) {
    PolyMatrix m(A.dim(), A.dim(), A.ring);
    for (size_t i = 0; i < A.dim(); ++i)
        for (size_t j = 0; j < A.dim(); ++j) {
            int blk = (int)((i >= A.p0) + (j >= A.p0)) % 2;
            if (blk == parity) m.at(i, j) = random_poly(rng, A.ring);
        }
    return {m, parity};
}

Chain rand_chain(std::mt19937& rng, const Ambient& A, size_t max_len,
                 size_t nwords = 2) {
    Chain c(A);
    for (size_t w = 0; w < nwords; ++w) {
        std::vector<Elt> letters;
        size_t len = rng() % (max_len + 1);
        for (size_t k = 0; k <= len; ++k) letters.push_back(rand_elt(rng, A, (int)(rng() % 2)));
        c = c + chain_word(A, Rational(1 + (int)(rng() % 3)), letters);
    }
    return c;
}

Chain rand_chain_homog(std::mt19937& rng, const Ambient& A, int parity,
                       size_t max_len) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::vector<Elt> letters;
        size_t len = rng() % (max_len + 1);
        for (size_t k = 0; k <= len; ++k) letters.push_back(rand_elt(rng, A, (int)(rng() % 2)));
        Chain c = chain_word(A, Rational(1), letters);
        if (!c.is_zero() && c.words[0].parity() == parity) return c;
    }
    return Chain(A);
}

struct SelftestState {
    unsigned seed;
    size_t len;
    int cases;
    int jmax;
    long checks = 0;
    bool ok = true;

    void require(bool cond, const std::string& suite) {
        ++checks;
        if (!cond && ok) {
            ok = false;
            std::cout << "FAIL " << suite << " (reproduce with --seed " << seed
                      << " --len " << len << " --cases " << cases << ")\n";
        }
    }
};

int run_selftest(SelftestState& st) {
    static const std::vector<std::string> XY = {"x", "y"};
    std::mt19937 rng(st.seed);
    size_t L = std::min<size_t>(st.len, 4);

    // b squared is zero over curved commutative, matrix, and opposite ambients
    std::vector<Ambient> ambients;
    ambients.push_back(ambient_poly(-parse_poly("x^3+y^3", XY)));
    {
        PolyMatrix A(1, 1, XY), B(1, 1, XY);
        A.at(0, 0) = parse_poly("x", XY);
        B.at(0, 0) = parse_poly("y", XY);
        ambients.push_back(ambient_end(mf_new(A, B, parse_poly("x*y", XY))));
        Ambient op = ambients.back();
        op.opposite = true;
        ambients.push_back(op);
    }
    for (auto& A : ambients)
        for (int t = 0; t < st.cases; ++t) {
            Chain c = rand_chain(rng, A, std::min<size_t>(L, 3));
            st.require(hochschild_b(hochschild_b(c)).is_zero(), "b-squared");
            if (!st.ok) return 3;
        }
    std::cout << "b-squared: ok\n";

    // hkr epsilon is a chain map into the twisted de Rham complex
    for (const char* fs : {"x*y", "x^3+y^3"}) {
        Poly f = parse_poly(fs, XY);
        Ambient Q = ambient_poly(-f);
        DiffForm mdf = de_rham(DiffForm::from_poly(-f));
        for (int t = 0; t < st.cases; ++t) {
            Chain c = rand_chain(rng, Q, 2);
            st.require(hkr_epsilon_chain(hochschild_b(c)) == wedge(mdf, hkr_epsilon_chain(c)),
                       "epsilon-chain-map");
            if (!st.ok) return 3;
        }
    }
    std::cout << "epsilon-chain-map: ok\n";

    // the Kunneth map is a chain map
    {
        std::vector<std::string> U = {"u"}, V = {"v"};
        Ambient QA = ambient_poly(-parse_poly("u^3", U));
        Ambient QB = ambient_poly(-parse_poly("v^2", V));
        for (int t = 0; t < st.cases; ++t) {
            int pa = (int)(rng() % 2);
            Chain a = rand_chain_homog(rng, QA, pa, 2);
            Chain b = rand_chain(rng, QB, 2, 1);
            if (a.is_zero() || b.is_zero()) continue;
            Rational ls = pa == 0 ? Rational(1) : Rational(-1);
            st.require(hochschild_b(kunneth_star(a, b)) ==
                           kunneth_star(hochschild_b(a), b) +
                               kunneth_star(a, hochschild_b(b)) * ls,
                       "kunneth-chain-map");
            if (!st.ok) return 3;
        }
    }
    std::cout << "kunneth-chain-map: ok\n";

    // phi and psi are chain maps
    {
        PolyMatrix A(1, 1, XY), B(1, 1, XY);
        A.at(0, 0) = parse_poly("x", XY);
        B.at(0, 0) = parse_poly("y", XY);
        auto X = mf_new(A, B, parse_poly("x*y", XY));
        Ambient E = ambient_end(X);
        for (int t = 0; t < st.cases; ++t) {
            Chain c = rand_chain(rng, E, std::min<size_t>(L, 3), 1);
            st.require(phi_op(hochschild_b(c)) == hochschild_b(phi_op(c)), "phi-chain-map");
            st.require(psi_mf(hochschild_b(c), X) == hochschild_b(psi_mf(c, X)),
                       "psi-chain-map");
            if (!st.ok) return 3;
        }
    }
    std::cout << "phi-psi-chain-maps: ok\n";

    // b0 = 1[h] * -  is central up to the Koszul sign
    {
        Ambient Q = ambient_poly(-parse_poly("x^2+y^2", XY));
        Chain oneh = chain_word(Q, Rational(1), {elt_identity(Q), elt_scalar(Q, Q.h)});
        for (int t = 0; t < st.cases; ++t) {
            int pc = (int)(rng() % 2);
            Chain c = rand_chain_homog(rng, Q, pc, 2);
            if (c.is_zero()) continue;
            Rational s = pc == 0 ? Rational(1) : Rational(-1);
            st.require(shuffle_star(oneh, c) == shuffle_star(c, oneh) * s, "b0-centrality");
            if (!st.ok) return 3;
        }
    }
    std::cout << "b0-centrality: ok\n";

    // 1[e*]^{*j} = j! 1[e*|...|e*] in the rank-(1,1) exterior model
    {
        std::vector<std::string> X1 = {"x"};
        auto K = koszul_mf({Poly::variable(X1, 0)}, {Poly(X1)});
        Ambient E = ambient_end(K);
        Elt estar{PolyMatrix(2, 2, X1), 1};
        estar.mat.at(0, 1) = Poly::constant(X1, Rational(1));
        Elt id = elt_identity(E);
        Chain one_estar = chain_word(E, Rational(1), {id, estar});
        Chain power = one_estar;
        for (int j = 2; j <= std::max(2, st.jmax); ++j) {
            power = shuffle_star(power, one_estar);
            std::vector<Elt> letters{id};
            for (int k = 0; k < j; ++k) letters.push_back(estar);
            st.require(power == chain_word(E, factorial((unsigned)j), letters),
                       "shuffle-powers");
            if (!st.ok) return 3;
        }
    }
    std::cout << "shuffle-powers: ok\n";

    // the one-variable trace identity
    Thm112Report rep = thm112_verify(st.jmax);
    for (auto& line : rep.lines) std::cout << "  " << line << "\n";
    st.require(rep.passed, "trace-identity");
    if (!st.ok) return 3;
    std::cout << "trace-identity: ok\n";

    std::cout << "selftest passed: " << st.checks << " checks (seed " << st.seed << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Riemann-Roch verification for matrix factorizations"};
    app.require_subcommand(1);

    // residue
    auto* c_res = app.add_subcommand("residue", "Grothendieck residue of a fraction");
    std::string res_vars, res_num = "1", res_dens;
    c_res->add_option("--vars", res_vars, "comma-separated variable names")->required();
    c_res->add_option("--num", res_num, "numerator polynomial");
    c_res->add_option("--dens", res_dens, "comma-separated denominators, one per variable")
        ->required();

    // chern / chi / pairing / hrr-verify
    auto* c_chern = app.add_subcommand("chern", "Chern character of an MF (JSON file)");
    std::string chern_path;
    c_chern->add_option("--mf", chern_path, "matrix factorization JSON")->required();

    std::string x_path, y_path;
    auto* c_chi = app.add_subcommand("chi", "Euler characteristic chi(X, Y)");
    c_chi->add_option("--x", x_path, "matrix factorization JSON")->required();
    c_chi->add_option("--y", y_path, "second MF (defaults to X)");

    auto* c_pair = app.add_subcommand("pairing", "residue pairing of Chern characters");
    c_pair->add_option("--x", x_path, "matrix factorization JSON")->required();
    c_pair->add_option("--y", y_path, "second MF (defaults to X)");

    auto* c_hrr = app.add_subcommand("hrr-verify", "verify chi = sign * <ch, ch>");
    c_hrr->add_option("--x", x_path, "matrix factorization JSON")->required();
    c_hrr->add_option("--y", y_path, "second MF (defaults to X)");

    // corpus
    auto* c_corpus = app.add_subcommand("corpus", "verify the built-in corpus");
    std::string filter, format = "json";
    c_corpus->add_option("--filter", filter, "substring filter on case names");
    c_corpus->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // selftest
    auto* c_self = app.add_subcommand("selftest", "randomized property suites");
    SelftestState st{42, 3, 10, 5};
    c_self->add_option("--seed", st.seed, "random seed");
    c_self->add_option("--len", st.len, "maximum word length");
    c_self->add_option("--cases", st.cases, "trials per suite");
    c_self->add_option("--jmax", st.jmax, "largest j for the trace identity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*c_res) {
            std::vector<std::string> ring = split_commas(res_vars);
            Poly num = parse_poly(res_num, ring);
            std::vector<Poly> dens;
            for (auto& d : split_commas(res_dens)) dens.push_back(parse_poly(d, ring));
            std::cout << rat_to_string(res_general(num, dens)) << "\n";
            return 0;
        }
        if (*c_chern) {
            std::cout << chern(load_mf(chern_path)).render() << "\n";
            return 0;
        }
        if (*c_chi || *c_pair || *c_hrr) {
            MatrixFactorization X = load_mf(x_path);
            MatrixFactorization Y = y_path.empty() ? X : load_mf(y_path);
            if (*c_chi) {
                std::cout << euler_chi(X, Y) << "\n";
                return 0;
            }
            if (*c_pair) {
                std::cout << rat_to_string(residue_pairing(X.f, chern(X), chern(Y))) << "\n";
                return 0;
            }
            HrrResult r = hrr_check(X, Y);
            std::cout << hrr_to_json(r).dump(2) << "\n";
            return r.verdict ? 0 : 3;
        }
        if (*c_corpus) {
            struct Job {
                std::string name;
                MatrixFactorization mf;
            };
            std::vector<Job> jobs;
            for (auto& e : builtin_corpus())
                for (auto& m : e.mfs) {
                    std::string name = e.name + "/" + m.name;
                    if (name.find(filter) != std::string::npos) jobs.push_back({name, m.mf});
                }
            std::sort(jobs.begin(), jobs.end(),
                      [](const Job& a, const Job& b) { return a.name < b.name; });

            size_t nthreads = std::thread::hardware_concurrency();
            if (const char* env = std::getenv("MFHRR_THREADS"))
                nthreads = std::max(1ul, (size_t)std::strtoul(env, nullptr, 10));
            nthreads = std::max<size_t>(1, std::min(nthreads, jobs.size() ? jobs.size() : 1));

            std::vector<HrrResult> results(jobs.size());
            std::vector<std::string> errors(jobs.size());
            std::atomic<size_t> next{0};
            auto worker = [&]() {
                for (size_t i; (i = next.fetch_add(1)) < jobs.size();) {
                    try {
                        results[i] = hrr_check(jobs[i].mf, jobs[i].mf);
                    } catch (const std::exception& ex) {
                        errors[i] = ex.what();
                    }
                }
            };
            std::vector<std::thread> pool;
            for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();

            size_t passed = 0;
            bool engine_error = false;
            for (size_t i = 0; i < jobs.size(); ++i) {
                if (!errors[i].empty()) engine_error = true;
                else if (results[i].verdict) ++passed;
            }
            if (format == "csv") {
                std::cout << "case,chi,theta,pairing,sign,verdict\n";
                for (size_t i = 0; i < jobs.size(); ++i) {
                    if (!errors[i].empty()) {
                        std::cout << jobs[i].name << ",,,,,error\n";
                        continue;
                    }
                    const HrrResult& r = results[i];
                    std::cout << jobs[i].name << "," << r.chi << "," << r.theta << ","
                              << rat_to_string(r.pairing) << "," << r.sign << ","
                              << (r.verdict ? "holds" : "fails") << "\n";
                }
            } else {
                json rep;
                rep["cases"] = json::array();
                for (size_t i = 0; i < jobs.size(); ++i) {
                    json jc;
                    jc["case"] = jobs[i].name;
                    if (!errors[i].empty()) jc["error"] = errors[i];
                    else {
                        jc = hrr_to_json(results[i]);
                        jc["case"] = jobs[i].name;
                    }
                    rep["cases"].push_back(jc);
                }
                rep["summary"] = {{"total", jobs.size()}, {"passed", passed}};
                std::cout << rep.dump(2) << "\n";
            }
            std::cerr << "corpus: " << passed << "/" << jobs.size() << " verdicts hold\n";
            if (engine_error) return 5;
            return passed == jobs.size() ? 0 : 3;
        }
        if (*c_self) return run_selftest(st);
    } catch (const SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const UnknownVariable& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const ArityMismatch& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const NotZeroDimensional& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotIsolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const OddDimension& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const MfhrrError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
    return 0;
}
